#pragma once

#include "lambdatree/amalgam.hpp"
#include "lambdatree/cayley_tree.hpp"
#include "lambdatree/finite_edge_tree.hpp"
#include "lambdatree/group_action.hpp"
#include "lambdatree/lambda_line.hpp"

#include <algorithm>
#include <optional>
#include <set>
#include <string>
#include <vector>

namespace lambdatree {

/// A vertex group acting on its tree, with the edge group C and its declared axis.
/// `others` are further declared lines taking part in the branching locus.
struct VertexActionData
{
    ActionPtr action;
    std::vector<int> edge_gens;
    LinePtr axis;
    std::vector<LinePtr> others;
};

// Stock actions.

inline std::shared_ptr<const CayleyGroupAction> free_cayley(Alphabet& names, std::size_t rank, std::size_t free_rank,
                                                            std::size_t level)
{
    if (rank == 0 || free_rank == 0) throw Error("free_cayley needs positive rank");
    if (level == 0 || level > rank) throw Error("edge level must be between 1 and the rank");
    auto tree = std::make_shared<CayleyTree>(rank, free_rank, level);
    std::vector<int> gens;
    for (std::size_t i = 0; i < free_rank; ++i) gens.push_back(names.add(std::string(1, static_cast<char>('a' + i))));
    return std::make_shared<CayleyGroupAction>(tree, gens);
}

inline std::shared_ptr<const LineGroupAction> lex_line_abelian(Alphabet& names, const std::vector<std::string>& gens,
                                                               const std::vector<LexValue>& lengths)
{
    if (lengths.empty() || gens.size() != lengths.size()) throw Error("one length per generator is required");
    std::size_t rank = lengths.front().rank();
    for (const auto& l : lengths) {
        if (l.rank() != rank) throw Error("generator lengths of different ranks");
        if (l.is_zero()) throw Error("zero generator length");
    }
    std::vector<int> ids;
    for (const auto& g : gens) ids.push_back(names.add(g));
    return std::make_shared<LineGroupAction>(std::make_shared<LambdaLine>(rank, rank), ids, lengths);
}

inline std::shared_ptr<const TrivialAction> finite_tree(std::size_t rank, std::size_t vertices,
                                                        std::vector<FiniteEdgeTree::Edge> edges,
                                                        std::vector<std::string> vertex_names = {})
{
    auto T = std::make_shared<FiniteEdgeTree>(rank, vertices, std::move(edges), std::move(vertex_names));
    return std::make_shared<TrivialAction>(T, std::vector<int>{}, VertexPt{0});
}

/// The line of a LineGroupAction seen as the base vertex tree of an amalgam.
inline LinePtr base_vertex_line(const std::shared_ptr<const AmalgamAction>& G, int side)
{
    auto L = std::dynamic_pointer_cast<const LineGroupAction>(G->core().side_ptr(side));
    if (!L) throw Error("base vertex tree is not a line");
    return std::make_shared<VertexLine>(G->amalgam_tree(), side, std::make_shared<LineChart>(L->line()));
}

/// Two abelian line actions glued along [0, overlap] of both lines: the free product
/// Z^m * Z^k. C is the first factor and its axis is the first vertex line.
inline VertexActionData abelian_free_product(std::shared_ptr<Alphabet> names, const std::vector<std::string>& c_gens,
                                             const std::vector<LexValue>& c_lengths,
                                             const std::vector<std::string>& x_gens,
                                             const std::vector<LexValue>& x_lengths, const LexValue& overlap)
{
    auto C = lex_line_abelian(*names, c_gens, c_lengths);
    auto X = lex_line_abelian(*names, x_gens, x_lengths);
    if (overlap.sign() <= 0) throw Error("overlap must be positive");
    TreePoint o = LinePt{LexValue::zero(overlap.rank())}, e = LinePt{overlap};
    auto phi = GluingMap::hulls(C->tree_ptr(), {o, e}, X->tree_ptr(), {o, e});
    auto A = make_amalgam(C, X, {}, phi, names);
    return {A, C->generators(), base_vertex_line(A, 0), {}};
}

inline LexValue axis_shift(const VertexActionData& V, int gen)
{
    TreePoint p = V.axis->at(LexValue::zero(V.action->tree().rank()));
    return V.axis->coordinate(V.action->act({{gen, 1}}, p)) - V.axis->coordinate(p);
}

/// Checks that C stabilizes the declared axis and translates it by a nonzero amount.
inline void validate_vertex_data(const VertexActionData& V)
{
    if (!V.axis) throw Error("vertex data needs a declared axis");
    if (&V.axis->tree() != &V.action->tree()) throw Error("axis is not a line of the vertex tree");
    const TreeSpace& T = V.action->tree();
    TreePoint p = V.axis->at(LexValue::zero(T.rank()));
    for (int c : V.edge_gens) {
        if (!V.action->owns(c)) throw Error("edge generator is not in the vertex group");
        TreePoint q = V.action->act({{c, 1}}, p);
        if (!same_point(T, V.axis->project(q), q)) throw Error("edge group does not preserve the declared axis");
        if (axis_shift(V, c).is_zero()) throw Error("edge generator fixes a point of its axis");
    }
}

/// Rank over Q of a list of rational row vectors.
inline std::size_t rational_rank(std::vector<std::vector<Rational>> rows)
{
    std::size_t r = 0;
    std::size_t cols = rows.empty() ? 0 : rows.front().size();
    for (std::size_t c = 0; c < cols && r < rows.size(); ++c) {
        std::size_t piv = r;
        while (piv < rows.size() && rows[piv][c] == 0) ++piv;
        if (piv == rows.size()) continue;
        std::swap(rows[piv], rows[r]);
        for (std::size_t i = 0; i < rows.size(); ++i) {
            if (i == r || rows[i][c] == 0) continue;
            Rational f = rows[i][c] / rows[r][c];
            for (std::size_t j = c; j < cols; ++j) rows[i][j] -= f * rows[r][j];
        }
        ++r;
    }
    return r;
}

/// Smallest q such that the elements of C translating by magnitude <= q form a
/// non-cyclic group, or nullopt if C itself is cyclic.
inline std::optional<std::size_t> noncyclic_level(const std::vector<LexValue>& shifts)
{
    if (shifts.empty()) return std::nullopt;
    std::size_t n = shifts.front().rank();
    std::vector<std::vector<Rational>> full;
    for (const auto& s : shifts) full.push_back(s.coords());
    std::size_t m = rational_rank(full);
    if (m < 2) return std::nullopt;
    for (std::size_t q = 1; q <= n; ++q) {
        // Kernel of the projection onto the coordinates above magnitude q, inside the lattice.
        std::vector<std::vector<Rational>> top;
        for (const auto& s : shifts) top.emplace_back(s.coords().begin(), s.coords().begin() + static_cast<std::ptrdiff_t>(n - q));
        std::size_t k = m - (n == q ? 0 : rational_rank(top));
        if (k >= 2) return q;
    }
    return std::nullopt;
}

/// Interval [lo, hi] of signed coordinate differences.
struct DifferenceInterval
{
    LexValue lo, hi;

    bool contains(const LexValue& x) const { return lo <= x && x <= hi; }
    LexValue width() const { return hi - lo; }
};

/// The branching locus on a declared axis: the pieces axis ∩ L for the other declared
/// lines and the translates a.axis, a ranging over coset representatives of C.
struct BranchingLocus
{
    struct Piece
    {
        Word conjugator;  ///< empty for a declared line
        int declared = -1;
        TreePoint lo, hi;
        LexValue lo_coord, hi_coord;
        LexValue diameter;
    };
    std::vector<Piece> pieces;
    std::vector<TreePoint> points;
    std::vector<DifferenceInterval> D;
    std::size_t conjugates = 0;
    std::optional<std::size_t> magnitude_bound;  ///< q - 1 when the non-cyclic hypothesis holds
    bool bound_holds = true;
    std::string bound_violation;

    bool in_D(const LexValue& x) const
    {
        return std::any_of(D.begin(), D.end(), [&](const DifferenceInterval& d) { return d.contains(x); });
    }
};

/// Intersection pieces of other lines with the axis. Since the locus is invariant under
/// the vertex group, pieces on the axis determine it up to translation.
inline BranchingLocus branching_locus(const VertexActionData& V, long conj_ball)
{
    if (!V.axis) throw Error("branching locus needs a declared axis");
    const TreeSpace& T = V.action->tree();
    BranchingLocus B;
    std::vector<std::pair<LinePtr, BranchingLocus::Piece>> lines;
    for (std::size_t i = 0; i < V.others.size(); ++i) {
        BranchingLocus::Piece p;
        p.declared = static_cast<int>(i);
        lines.push_back({V.others[i], p});
    }
    if (conj_ball > 0) {
        std::set<Word> seen;
        for (const auto& w : word_ball(V.action->generators(), conj_ball)) {
            Word rep = V.action->split_right(w, V.edge_gens).first;
            if (rep.empty() || !seen.insert(rep).second) continue;
            BranchingLocus::Piece p;
            p.conjugator = rep;
            lines.push_back({std::make_shared<TranslatedLine>(V.action, V.axis, rep), p});
        }
    }
    B.conjugates = lines.size() - V.others.size();
    for (auto& [L, piece] : lines) {
        std::optional<Hull> h;
        try {
            h = line_intersection(T, *V.axis, *L);
        } catch (const UnboundedOverlap&) {
            throw Error("axis intersection not representable: the axis meets " + L->describe() + " in an unbounded set");
        }
        if (!h) continue;
        piece.lo = h->generators.front();
        piece.hi = h->generators.back();
        piece.lo_coord = V.axis->coordinate(piece.lo);
        piece.hi_coord = V.axis->coordinate(piece.hi);
        if (piece.hi_coord < piece.lo_coord) {
            std::swap(piece.lo, piece.hi);
            std::swap(piece.lo_coord, piece.hi_coord);
        }
        piece.diameter = piece.hi_coord - piece.lo_coord;
        B.points.push_back(piece.lo);
        if (!piece.diameter.is_zero()) B.points.push_back(piece.hi);
        B.pieces.push_back(piece);
    }
    for (const auto& a : B.pieces)
        for (const auto& b : B.pieces) B.D.push_back({b.lo_coord - a.hi_coord, b.hi_coord - a.lo_coord});

    std::vector<LexValue> shifts;
    for (int c : V.edge_gens) shifts.push_back(axis_shift(V, c));
    if (auto q = noncyclic_level(shifts); q && B.conjugates > 0) {
        B.magnitude_bound = *q - 1;
        for (const auto& p : B.pieces)
            if (!p.conjugator.empty() && p.diameter.magnitude() > *B.magnitude_bound) {
                B.bound_holds = false;
                B.bound_violation = "piece of diameter " + p.diameter.str();
            }
        for (const auto& d : B.D)
            if (d.width().magnitude() > *B.magnitude_bound) {
                B.bound_holds = false;
                B.bound_violation = "difference interval of width " + d.width().str();
            }
    }
    return B;
}

/// j / (N + 1) at the given level, for j = 0, 1, 2, ...
inline LexValue generic_candidate(std::size_t rank, std::size_t level, long j, long N)
{
    return LexValue::unit(rank, level) * make_rational(j, N + 1);
}

inline constexpr long generic_search_cap = 4096;

struct AmalgamConstruction
{
    std::shared_ptr<const AmalgamAction> action;
    VertexActionData A, B;
    BranchingLocus locus_a, locus_b;
    std::vector<DifferenceInterval> prohibited;
    LexValue offset;
    bool offset_auto = false;
    bool offset_prohibited = false;
    int orientation = 1;
    std::vector<TreePoint> probes;  ///< branching points of both base vertices, as points of the dual tree
};

inline int matching_orientation(const VertexActionData& A, const VertexActionData& B)
{
    if (A.edge_gens != B.edge_gens) throw Error("the two factors declare different edge groups");
    int o = 0;
    for (int c : A.edge_gens) {
        LexValue a = axis_shift(A, c), b = axis_shift(B, c);
        int oc = a == b ? 1 : (a == -b ? -1 : 0);
        if (oc == 0 || (o != 0 && oc != o))
            throw Error("length mismatch along C: generator " + std::to_string(c) + " moves by " + a.str() + " and " + b.str());
        o = oc;
    }
    return o == 0 ? 1 : o;
}

inline std::vector<TreePoint> locus_probes(const BranchingLocus& L, const LinearSubtree& axis, int side)
{
    std::vector<TreePoint> out;
    for (const auto& p : L.pieces) {
        out.push_back(Box<DualPt>(DualPt{side, {}, p.lo}));
        if (!p.diameter.is_zero()) {
            out.push_back(Box<DualPt>(DualPt{side, {}, p.hi}));
            out.push_back(Box<DualPt>(DualPt{side, {}, axis.at(p.lo_coord + p.diameter * make_rational(1, 2))}));
        }
    }
    return out;
}

/// A *_C B glued along the C-axes by phi(s) = offset + o s in axis coordinates.
/// With no offset given, the smallest admissible j / (N + 1) at the top level of C is used.
inline AmalgamConstruction acylindrical_amalgam(const VertexActionData& A, const VertexActionData& B,
                                                std::optional<LexValue> offset, long conj_ball, long N,
                                                std::shared_ptr<const Alphabet> names = {})
{
    validate_vertex_data(A);
    validate_vertex_data(B);
    AmalgamConstruction r;
    r.A = A;
    r.B = B;
    r.orientation = matching_orientation(A, B);
    std::vector<LexValue> shifts;
    for (int c : A.edge_gens) shifts.push_back(axis_shift(A, c));
    if (!noncyclic_level(shifts)) throw Error("edge group must be non-cyclic");
    std::size_t rank = A.action->tree().rank();
    std::size_t top = 0;
    for (const auto& s : shifts) top = std::max(top, s.magnitude());

    r.locus_a = branching_locus(A, conj_ball);
    r.locus_b = branching_locus(B, conj_ball);
    Rational o(r.orientation);
    for (const auto& pa : r.locus_a.pieces)
        for (const auto& pb : r.locus_b.pieces) {
            LexValue lo = o > 0 ? pa.lo_coord : -pa.hi_coord, hi = o > 0 ? pa.hi_coord : -pa.lo_coord;
            r.prohibited.push_back({pb.lo_coord - hi, pb.hi_coord - lo});
        }
    auto prohibited = [&](const LexValue& t) {
        return std::any_of(r.prohibited.begin(), r.prohibited.end(), [&](const DifferenceInterval& d) { return d.contains(t); });
    };
    if (offset) {
        if (offset->rank() != rank) throw Error("offset rank does not match the vertex trees");
        r.offset = *offset;
    } else {
        r.offset_auto = true;
        long j = 0;
        while (j <= generic_search_cap && prohibited(generic_candidate(rank, top, j, N))) ++j;
        if (j > generic_search_cap) throw Error("prohibited-set exhaustion: no admissible offset within the search cap");
        r.offset = generic_candidate(rank, top, j, N);
    }
    r.offset_prohibited = prohibited(r.offset);
    auto phi = GluingMap::lines_by_coordinate(A.action->tree_ptr(), A.axis, B.action->tree_ptr(), B.axis,
                                              LexValue::zero(rank), r.offset, r.orientation);
    r.action = make_amalgam(A.action, B.action, A.edge_gens, phi, std::move(names));
    auto pa = locus_probes(r.locus_a, *A.axis, 0), pb = locus_probes(r.locus_b, *B.axis, 1);
    r.probes = pa;
    r.probes.insert(r.probes.end(), pb.begin(), pb.end());
    return r;
}

/// An element g of C (+) Z^k whose length equals a distance between two branching points.
struct Collision
{
    Word element;
    LexValue length;
    LexValue x, x2;  ///< axis coordinates with x2 - x = length
    TreePoint p, p2;
};

struct HnnConstruction
{
    std::shared_ptr<const AmalgamAction> action;
    std::shared_ptr<const LineGroupAction> abelian;
    VertexActionData A;
    BranchingLocus locus;
    std::vector<int> new_gens;
    std::vector<LexValue> lengths;
    bool lengths_auto = false;
    std::vector<Collision> collisions;
    std::vector<TreePoint> probes;
};

/// Exponent vectors with |e|_1 <= N over m generators.
inline std::vector<std::vector<long>> exponent_ball(std::size_t m, long N)
{
    std::vector<std::vector<long>> out{{}};
    for (std::size_t i = 0; i < m; ++i) {
        std::vector<std::vector<long>> next;
        for (const auto& v : out) {
            long used = 0;
            for (long e : v) used += std::labs(e);
            for (long e = -(N - used); e <= N - used; ++e) {
                auto w = v;
                w.push_back(e);
                next.push_back(std::move(w));
            }
        }
        out = std::move(next);
    }
    return out;
}

/// Elements of C (+) Z^k in the ball whose length lies in D, with the first few witnesses.
inline std::vector<Collision> length_collisions(const BranchingLocus& L, const LinearSubtree& axis,
                                                const std::vector<int>& gens, const std::vector<LexValue>& lengths,
                                                std::size_t c_count, long N, std::size_t max_witnesses)
{
    std::vector<Collision> out;
    std::size_t rank = lengths.front().rank();
    for (const auto& e : exponent_ball(gens.size(), N)) {
        bool outside_c = false;
        for (std::size_t i = c_count; i < e.size(); ++i) outside_c = outside_c || e[i] != 0;
        if (!outside_c) continue;
        LexValue t = LexValue::zero(rank);
        Word g;
        for (std::size_t i = 0; i < e.size(); ++i) {
            t += lengths[i] * Rational(e[i]);
            push_letter(g, {gens[i], e[i]});
        }
        for (const auto& a : L.pieces)
            for (const auto& b : L.pieces) {
                DifferenceInterval d{b.lo_coord - a.hi_coord, b.hi_coord - a.lo_coord};
                if (!d.contains(t)) continue;
                LexValue x = std::max(a.lo_coord, b.lo_coord - t);
                Collision c{g, t, x, x + t, axis.at(x), axis.at(x + t)};
                out.push_back(std::move(c));
                if (out.size() >= max_witnesses) return out;
                goto next_element;
            }
    next_element:;
    }
    return out;
}

/// Gamma = A *_C (C (+) Z^k): the new vertex tree is a line on which C moves as on its
/// axis and the k new generators get lengths avoiding D on the ball of radius N.
inline HnnConstruction hnn_abelianized(std::shared_ptr<Alphabet> names, const VertexActionData& A, int k,
                                       std::optional<std::vector<LexValue>> lengths, long conj_ball, long N)
{
    if (k < 1) throw Error("k must be at least 1: the abelian factor would be C itself");
    validate_vertex_data(A);
    HnnConstruction r;
    r.A = A;
    std::size_t rank = A.action->tree().rank();
    std::vector<LexValue> shifts;
    for (int c : A.edge_gens) shifts.push_back(axis_shift(A, c));
    if (!noncyclic_level(shifts)) throw Error("edge group must be non-cyclic");
    r.locus = branching_locus(A, conj_ball);

    for (int i = 0; i < k; ++i) {
        std::string base = "z" + std::to_string(i + 1);
        if (names->has(base)) throw Error("generator name " + base + " already in use");
        r.new_gens.push_back(names->add(base));
    }
    std::vector<int> gens = A.edge_gens;
    gens.insert(gens.end(), r.new_gens.begin(), r.new_gens.end());

    if (lengths) {
        if (lengths->size() != static_cast<std::size_t>(k)) throw Error("one length per new generator is required");
        r.lengths = *lengths;
    } else {
        r.lengths_auto = true;
        // Free levels: coordinates not spanned by the lengths of C.
        std::vector<std::size_t> free_levels;
        std::vector<std::vector<Rational>> rows;
        for (const auto& s : shifts) rows.push_back(s.coords());
        std::size_t base_rank = rational_rank(rows);
        for (std::size_t level = rank; level >= 1; --level) {
            auto trial = rows;
            trial.push_back(LexValue::unit(rank, level).coords());
            if (rational_rank(trial) > rational_rank(rows)) {
                free_levels.push_back(level);
                rows = trial;
            }
        }
        if (free_levels.size() < static_cast<std::size_t>(k) || base_rank + k > rank)
            throw Error("not enough independent directions: rank " + std::to_string(rank) + " cannot carry C + Z^" +
                        std::to_string(k) + " freely");
        std::vector<LexValue> chosen;
        for (int i = 0; i < k; ++i) {
            long j = 1;
            for (; j <= generic_search_cap; ++j) {
                auto trial = chosen;
                trial.push_back(generic_candidate(rank, free_levels[static_cast<std::size_t>(i)], j, N));
                std::vector<LexValue> all = shifts;
                all.insert(all.end(), trial.begin(), trial.end());
                std::vector<int> g(gens.begin(), gens.begin() + static_cast<std::ptrdiff_t>(shifts.size() + trial.size()));
                if (length_collisions(r.locus, *A.axis, g, all, shifts.size(), N, 1).empty()) {
                    chosen = trial;
                    break;
                }
            }
            if (j > generic_search_cap) throw Error("prohibited-set exhaustion: no admissible length within the search cap");
        }
        r.lengths = chosen;
    }
    std::vector<LexValue> all = shifts;
    all.insert(all.end(), r.lengths.begin(), r.lengths.end());
    r.collisions = length_collisions(r.locus, *A.axis, gens, all, shifts.size(), N, 8);

    auto line = std::make_shared<LambdaLine>(rank, rank);
    r.abelian = std::make_shared<LineGroupAction>(line, gens, all);
    auto chart = std::make_shared<LineChart>(line);
    auto phi = GluingMap::lines_by_coordinate(A.action->tree_ptr(), A.axis, line, chart, LexValue::zero(rank),
                                              LexValue::zero(rank), 1);
    r.action = make_amalgam(A.action, r.abelian, A.edge_gens, phi, names);
    r.probes = locus_probes(r.locus, *A.axis, 0);
    for (const auto& c : r.collisions) {
        r.probes.push_back(Box<DualPt>(DualPt{0, {}, c.p}));
        r.probes.push_back(Box<DualPt>(DualPt{0, {}, c.p2}));
    }
    return r;
}

}  // namespace lambdatree
