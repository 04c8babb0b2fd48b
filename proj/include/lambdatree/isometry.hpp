#pragma once

#include "lambdatree/group_action.hpp"
#include "lambdatree/tree_space.hpp"

#include <algorithm>
#include <atomic>
#include <optional>
#include <thread>

namespace lambdatree {

/// l(g) = max(0, d(x, g^2 x) - d(x, g x)).
inline LexValue translation_length(const GroupAction& G, const Word& g, const TreePoint& x)
{
    const TreeSpace& T = G.tree();
    TreePoint gx = G.act(g, x);
    TreePoint ggx = G.act(g, gx);
    LexValue l = T.distance(x, ggx) - T.distance(x, gx);
    return l.sign() > 0 ? l : LexValue::zero(T.rank());
}

inline LexValue translation_length(const GroupAction& G, const Word& g)
{
    return translation_length(G, g, G.base_point());
}

enum class IsometryType { elliptic, hyperbolic };

inline const char* type_name(IsometryType t) { return t == IsometryType::elliptic ? "elliptic" : "hyperbolic"; }

struct IsometryReport
{
    IsometryType type = IsometryType::elliptic;
    LexValue length;
    TreePoint axis_sample;  ///< a fixed point (elliptic) or the projection of x onto the axis
    TreePoint midpoint;     ///< midpoint of [x, g x], which lies on the axis or fixed set
};

/// Over Q^n inversions cannot occur, so l(g) = 0 means the midpoint of [x, g x] is fixed.
inline IsometryReport classify(const GroupAction& G, const Word& g, const TreePoint& x)
{
    const TreeSpace& T = G.tree();
    IsometryReport r;
    r.length = translation_length(G, g, x);
    TreePoint gx = G.act(g, x);
    r.midpoint = midpoint(T, x, gx);
    if (r.length.is_zero()) {
        r.type = IsometryType::elliptic;
        if (!T.distance(r.midpoint, G.act(g, r.midpoint)).is_zero())
            throw Error("midpoint of [x, gx] is not fixed by an elliptic element");
        r.axis_sample = r.midpoint;
    } else {
        r.type = IsometryType::hyperbolic;
        r.axis_sample = median(T, G.act(G.normalize(inverse(g)), x), x, gx);
    }
    return r;
}

/// A point lies on the axis of hyperbolic h iff h moves it by exactly l(h).
inline bool on_axis(const GroupAction& G, const Word& h, const LexValue& lh, const TreePoint& p)
{
    return G.tree().distance(p, G.act(h, p)) == lh;
}

enum class AxisVerdict { same, different, inconclusive };

inline const char* verdict_name(AxisVerdict v)
{
    return v == AxisVerdict::same ? "same" : (v == AxisVerdict::different ? "different" : "inconclusive");
}

/// Compares the axes of g and h on the axis points g^k p, h^k q for |k| <= samples.
inline AxisVerdict same_axis_test(const GroupAction& G, const Word& g, const Word& h, int samples,
                                  const TreePoint& x)
{
    LexValue lg = translation_length(G, g, x), lh = translation_length(G, h, x);
    if (lg.is_zero() || lh.is_zero()) throw Error("axis comparison needs hyperbolic elements");
    if (samples <= 0) return AxisVerdict::inconclusive;
    auto check = [&](const Word& a, const LexValue& la, const Word& b, const LexValue& lb) {
        TreePoint p = classify(G, a, x).axis_sample;
        for (int k = -samples; k <= samples; ++k) {
            TreePoint q = G.act(power(a, k), p);
            if (!on_axis(G, a, la, q)) throw Error("axis sample is not on the axis");
            if (!on_axis(G, b, lb, q)) return false;
        }
        return true;
    };
    if (!check(g, lg, h, lh) || !check(h, lh, g, lg)) return AxisVerdict::different;
    return AxisVerdict::same;
}

struct AxesIntersection
{
    std::optional<Hull> intersection;
    LexValue diameter;
    std::size_t magnitude = 0;
};

inline AxesIntersection axes_intersection(const TreeSpace& T, const LinearSubtree& A, const LinearSubtree& B)
{
    AxesIntersection r;
    r.intersection = line_intersection(T, A, B);
    r.diameter = LexValue::zero(T.rank());
    if (r.intersection && r.intersection->generators.size() == 2)
        r.diameter = T.distance(r.intersection->generators[0], r.intersection->generators[1]);
    r.magnitude = r.diameter.magnitude();
    return r;
}

/// When the axes overlap beyond l(g) + l(h), checks that [g, h] is elliptic.
/// Returns nullopt when the overlap is too short for the check to apply.
inline std::optional<bool> commutator_elliptic_check(const GroupAction& G, const Word& g, const Word& h,
                                                     const LinearSubtree& Ag, const LinearSubtree& Ah)
{
    LexValue lg = translation_length(G, g), lh = translation_length(G, h);
    try {
        auto x = axes_intersection(G.tree(), Ag, Ah);
        if (!x.intersection || !(lg + lh < x.diameter)) return std::nullopt;
    } catch (const UnboundedOverlap&) {
        // The overlap is longer than any presented far point, so certainly long enough.
    }
    Word comm = concat(concat(g, h), concat(inverse(g), inverse(h)));
    return translation_length(G, comm).is_zero();
}

struct FreeBallReport
{
    bool pass = true;
    std::optional<Word> failure;
    std::size_t words_checked = 0;
    std::size_t trivial_words = 0;
};

/// Runs `test` on every word of the ball in shortlex order. The first failing word wins,
/// whatever the number of worker threads.
template <class Test>
inline FreeBallReport scan_ball(const GroupAction& G, const std::vector<Word>& words, unsigned jobs, Test test)
{
    FreeBallReport r;
    std::atomic<std::size_t> first_fail{words.size()};
    std::atomic<std::size_t> trivial{0}, checked{0};
    jobs = std::max(1u, jobs);
    auto worker = [&](unsigned id) {
        for (std::size_t i = id; i < words.size(); i += jobs) {
            if (i > first_fail.load()) return;
            if (G.is_identity(words[i])) {
                ++trivial;
                continue;
            }
            ++checked;
            if (!test(words[i])) {
                std::size_t cur = first_fail.load();
                while (i < cur && !first_fail.compare_exchange_weak(cur, i)) {
                }
                return;
            }
        }
    };
    if (jobs == 1) {
        worker(0);
    } else {
        std::vector<std::thread> pool;
        for (unsigned j = 0; j < jobs; ++j) pool.emplace_back(worker, j);
        for (auto& t : pool) t.join();
    }
    if (first_fail.load() < words.size()) {
        r.pass = false;
        r.failure = words[first_fail.load()];
        // Counts up to the failure are what a sequential scan would report.
        std::size_t c = 0, t = 0;
        for (std::size_t i = 0; i <= first_fail.load(); ++i) (G.is_identity(words[i]) ? t : c)++;
        r.words_checked = c;
        r.trivial_words = t;
    } else {
        r.words_checked = checked.load();
        r.trivial_words = trivial.load();
    }
    return r;
}

/// Every nontrivial freely reduced word of length <= radius must be hyperbolic.
inline FreeBallReport verify_free_ball(const GroupAction& G, const std::vector<int>& gens, long radius,
                                       unsigned jobs = 1)
{
    auto words = word_ball(gens, radius);
    TreePoint x = G.base_point();
    return scan_ball(G, words, jobs, [&](const Word& w) { return translation_length(G, w, x).sign() > 0; });
}

}  // namespace lambdatree
