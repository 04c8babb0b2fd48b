#pragma once

#include "lambdatree/lex_value.hpp"
#include "lambdatree/word.hpp"

#include <algorithm>
#include <atomic>
#include <cctype>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <thread>
#include <vector>

namespace lambdatree {

/// Q with the p-adic valuation.
class PadicField
{
  public:
    using Scalar = Rational;

    explicit PadicField(long p) : p_(p)
    {
        if (p < 2) throw Error("p must be a prime");
        for (long d = 2; d * d <= p; ++d)
            if (p % d == 0) throw Error(std::to_string(p) + " is not prime");
    }

    long prime() const { return p_; }
    std::size_t value_rank() const { return 1; }
    Scalar zero() const { return 0; }
    Scalar one() const { return 1; }
    bool is_zero(const Scalar& x) const { return x == 0; }
    bool equal(const Scalar& a, const Scalar& b) const { return a == b; }

    std::optional<LexValue> try_valuation(const Scalar& x) const
    {
        if (x == 0) return std::nullopt;
        return LexValue(std::vector<Rational>{Rational(order(x.get_num()) - order(x.get_den()))});
    }

    Scalar parse(const std::string& text) const
    {
        return parse_rational(text);
    }

    std::string format(const Scalar& x) const { return x.get_str(); }
    std::string describe() const { return "p:" + std::to_string(p_); }

  private:
    long order(mpz_class n) const
    {
        n = abs(n);
        long k = 0;
        while (n % p_ == 0) {
            n /= p_;
            ++k;
        }
        return k;
    }

    long p_;
};

/// Laurent polynomial over Q in m ordered variables, exponents in Z^m.
class LaurentPoly
{
  public:
    using Exponent = std::vector<long>;

    LaurentPoly() = default;
    explicit LaurentPoly(std::size_t m) : m_(m) {}

    static LaurentPoly constant(std::size_t m, const Rational& c)
    {
        LaurentPoly p(m);
        if (c != 0) p.terms_[Exponent(m, 0)] = c;
        return p;
    }

    static LaurentPoly monomial(std::size_t m, Exponent e, const Rational& c)
    {
        LaurentPoly p(m);
        if (c != 0) p.terms_[std::move(e)] = c;
        return p;
    }

    std::size_t vars() const { return m_; }
    bool is_zero() const { return terms_.empty(); }
    const std::map<Exponent, Rational>& terms() const { return terms_; }

    /// The map is ordered lexicographically with the first variable most significant,
    /// so the least exponent is the first key.
    const Exponent& least_exponent() const
    {
        if (terms_.empty()) throw Error("zero polynomial has no least exponent");
        return terms_.begin()->first;
    }

    bool is_monomial() const { return terms_.size() == 1; }

    friend LaurentPoly operator+(const LaurentPoly& a, const LaurentPoly& b)
    {
        LaurentPoly r = a;
        r.m_ = std::max(a.m_, b.m_);
        for (const auto& [e, c] : b.terms_) r.add_term(e, c);
        return r;
    }

    friend LaurentPoly operator-(const LaurentPoly& a, const LaurentPoly& b) { return a + (-b); }

    LaurentPoly operator-() const
    {
        LaurentPoly r = *this;
        for (auto& [e, c] : r.terms_) c = -c;
        return r;
    }

    friend LaurentPoly operator*(const LaurentPoly& a, const LaurentPoly& b)
    {
        LaurentPoly r(std::max(a.m_, b.m_));
        for (const auto& [ea, ca] : a.terms_)
            for (const auto& [eb, cb] : b.terms_) {
                Exponent e(ea.size());
                for (std::size_t i = 0; i < e.size(); ++i) e[i] = ea[i] + eb[i];
                r.add_term(e, ca * cb);
            }
        return r;
    }

    friend bool operator==(const LaurentPoly& a, const LaurentPoly& b) { return a.terms_ == b.terms_; }

    /// Shift all exponents by -e and scale by 1/c: division by the monomial c x^e.
    LaurentPoly divide_monomial(const Exponent& e, const Rational& c) const
    {
        LaurentPoly r(m_);
        for (const auto& [f, d] : terms_) {
            Exponent g(f.size());
            for (std::size_t i = 0; i < g.size(); ++i) g[i] = f[i] - e[i];
            Rational q = d / c;
            r.terms_[g] = q;
        }
        return r;
    }

    std::string format(const std::vector<std::string>& names) const
    {
        if (terms_.empty()) return "0";
        std::string out;
        bool first = true;
        for (const auto& [e, c] : terms_) {
            Rational a = abs(c);
            out += first ? (c < 0 ? "-" : "") : (c < 0 ? " - " : " + ");
            first = false;
            std::string mono;
            for (std::size_t i = 0; i < e.size(); ++i) {
                if (e[i] == 0) continue;
                if (!mono.empty()) mono += "*";
                mono += names.at(i);
                if (e[i] != 1) mono += "^" + std::to_string(e[i]);
            }
            if (mono.empty())
                out += a.get_str();
            else if (a == 1)
                out += mono;
            else
                out += a.get_str() + "*" + mono;
        }
        return out;
    }

  private:
    void add_term(const Exponent& e, const Rational& c)
    {
        if (c == 0) return;
        auto [it, fresh] = terms_.emplace(e, c);
        if (!fresh) {
            it->second += c;
            if (it->second == 0) terms_.erase(it);
        }
    }

    std::size_t m_ = 0;
    std::map<Exponent, Rational> terms_;
};

/// Quotient of Laurent polynomials. A monomial denominator is always folded into the
/// numerator, so polynomial values stay polynomials.
struct LaurentFraction
{
    LaurentPoly num, den;
};

/// Q(x_1, ..., x_m) with the valuation "least exponent vector", x_1 most significant.
class LaurentField
{
  public:
    using Scalar = LaurentFraction;

    explicit LaurentField(std::vector<std::string> vars) : vars_(std::move(vars))
    {
        if (vars_.empty()) throw Error("a Laurent field needs at least one variable");
        std::set<std::string> seen;
        for (const auto& v : vars_) {
            if (v.empty() || !std::isalpha(static_cast<unsigned char>(v.front())))
                throw Error("variable names must start with a letter");
            if (!seen.insert(v).second) throw Error("duplicate variable '" + v + "'");
        }
    }

    const std::vector<std::string>& variables() const { return vars_; }
    std::size_t value_rank() const { return vars_.size(); }

    Scalar from_poly(LaurentPoly p) const { return normalize({std::move(p), LaurentPoly::constant(m(), 1)}); }
    Scalar constant(const Rational& c) const { return from_poly(LaurentPoly::constant(m(), c)); }
    Scalar zero() const { return constant(0); }
    Scalar one() const { return constant(1); }
    Scalar variable(std::size_t i, long exp = 1) const
    {
        LaurentPoly::Exponent e(m(), 0);
        e.at(i) = exp;
        return from_poly(LaurentPoly::monomial(m(), e, 1));
    }

    bool is_zero(const Scalar& x) const { return x.num.is_zero(); }
    bool equal(const Scalar& a, const Scalar& b) const { return a.num * b.den == b.num * a.den; }

    Scalar add(const Scalar& a, const Scalar& b) const
    {
        if (a.den == b.den) return normalize({a.num + b.num, a.den});
        return normalize({a.num * b.den + b.num * a.den, a.den * b.den});
    }
    Scalar neg(const Scalar& a) const { return {-a.num, a.den}; }
    Scalar sub(const Scalar& a, const Scalar& b) const { return add(a, neg(b)); }
    Scalar mul(const Scalar& a, const Scalar& b) const { return normalize({a.num * b.num, a.den * b.den}); }
    Scalar div(const Scalar& a, const Scalar& b) const
    {
        if (is_zero(b)) throw Error("division by zero");
        return normalize({a.num * b.den, a.den * b.num});
    }

    std::optional<LexValue> try_valuation(const Scalar& x) const
    {
        if (is_zero(x)) return std::nullopt;
        const auto& a = x.num.least_exponent();
        const auto& b = x.den.least_exponent();
        std::vector<Rational> v(m());
        for (std::size_t i = 0; i < m(); ++i) v[i] = Rational(a[i] - b[i]);
        return LexValue(std::move(v));
    }

    /// Grammar: term (('+' | '-') term)*, term = factor ('*' factor)*, factor = rational |
    /// var | var '^' integer. An optional top-level '/' divides two such polynomials.
    Scalar parse(const std::string& text) const
    {
        std::string s;
        for (char c : text)
            if (!std::isspace(static_cast<unsigned char>(c))) s += c;
        if (s.empty()) throw Error("empty Laurent expression");
        if (s.front() == '(') {
            auto mid = s.find(")/(");
            if (mid == std::string::npos || s.back() != ')')
                throw Error("quotients must be written (numerator)/(denominator)");
            LaurentPoly n = parse_poly(s.substr(1, mid - 1));
            LaurentPoly d = parse_poly(s.substr(mid + 3, s.size() - mid - 4));
            if (d.is_zero()) throw Error("zero denominator");
            return normalize({n, d});
        }
        return from_poly(parse_poly(s));
    }

    std::string format(const Scalar& x) const
    {
        if (x.den == LaurentPoly::constant(m(), 1)) return x.num.format(vars_);
        return "(" + x.num.format(vars_) + ")/(" + x.den.format(vars_) + ")";
    }

    std::string describe() const
    {
        std::string out = "laurent:";
        for (std::size_t i = 0; i < vars_.size(); ++i) out += (i ? "," : "") + vars_[i];
        return out;
    }

  private:
    std::size_t m() const { return vars_.size(); }

    Scalar normalize(Scalar x) const
    {
        if (x.den.is_zero()) throw Error("zero denominator");
        if (x.num.is_zero()) return {LaurentPoly(m()), LaurentPoly::constant(m(), 1)};
        // Fold the least term of the denominator out so it becomes 1 when it is a monomial.
        const auto& [e, c] = *x.den.terms().begin();
        auto e0 = e;
        auto c0 = c;
        x.num = x.num.divide_monomial(e0, c0);
        x.den = x.den.divide_monomial(e0, c0);
        return x;
    }

    LaurentPoly parse_poly(const std::string& s) const
    {
        if (s.empty()) throw Error("empty Laurent expression");
        LaurentPoly out(m());
        std::size_t pos = 0;
        while (pos < s.size()) {
            int sign = 1;
            if (s[pos] == '+' || s[pos] == '-') {
                sign = s[pos] == '-' ? -1 : 1;
                ++pos;
            } else if (pos != 0) {
                throw Error("expected '+' or '-' in '" + s + "'");
            }
            std::size_t end = pos;
            while (end < s.size() && !((s[end] == '+' || s[end] == '-') && end > pos && s[end - 1] != '^')) ++end;
            out = out + parse_term(s.substr(pos, end - pos)) * LaurentPoly::constant(m(), sign);
            pos = end;
        }
        return out;
    }

    LaurentPoly parse_term(const std::string& t) const
    {
        if (t.empty()) throw Error("empty term in Laurent expression");
        Rational coeff = 1;
        LaurentPoly::Exponent e(m(), 0);
        std::size_t pos = 0;
        while (pos <= t.size()) {
            std::size_t end = t.find('*', pos);
            std::string f = t.substr(pos, end == std::string::npos ? std::string::npos : end - pos);
            if (f.empty()) throw Error("empty factor in '" + t + "'");
            if (std::isdigit(static_cast<unsigned char>(f.front()))) {
                coeff *= parse_rational(f);
            } else {
                std::string name = f;
                long exp = 1;
                if (auto caret = f.find('^'); caret != std::string::npos) {
                    name = f.substr(0, caret);
                    std::string x = f.substr(caret + 1);
                    if (x.size() > 2 && x.front() == '(' && x.back() == ')') x = x.substr(1, x.size() - 2);
                    try {
                        std::size_t used = 0;
                        exp = std::stol(x, &used);
                        if (used != x.size()) throw Error("");
                    } catch (const std::exception&) {
                        throw Error("malformed exponent in '" + f + "'");
                    }
                }
                auto it = std::find(vars_.begin(), vars_.end(), name);
                if (it == vars_.end()) throw Error("unknown variable '" + name + "'");
                e[static_cast<std::size_t>(it - vars_.begin())] += exp;
            }
            if (end == std::string::npos) break;
            pos = end + 1;
        }
        return LaurentPoly::monomial(m(), e, coeff);
    }

    std::vector<std::string> vars_;
};

inline LaurentField composite_context(std::vector<std::string> vars) { return LaurentField(std::move(vars)); }

// Scalar operations for PadicField share the LaurentField spelling.
inline Rational field_add(const PadicField&, const Rational& a, const Rational& b) { return a + b; }
inline Rational field_sub(const PadicField&, const Rational& a, const Rational& b) { return a - b; }
inline Rational field_mul(const PadicField&, const Rational& a, const Rational& b) { return a * b; }
inline Rational field_neg(const PadicField&, const Rational& a) { return -a; }
inline LaurentFraction field_add(const LaurentField& F, const LaurentFraction& a, const LaurentFraction& b) { return F.add(a, b); }
inline LaurentFraction field_sub(const LaurentField& F, const LaurentFraction& a, const LaurentFraction& b) { return F.sub(a, b); }
inline LaurentFraction field_mul(const LaurentField& F, const LaurentFraction& a, const LaurentFraction& b) { return F.mul(a, b); }
inline LaurentFraction field_neg(const LaurentField& F, const LaurentFraction& a) { return F.neg(a); }

template <class F>
LexValue valuation(const F& field, const typename F::Scalar& x)
{
    auto v = field.try_valuation(x);
    if (!v) throw Error("valuation of zero is infinite");
    return *v;
}

template <class F>
struct Mat2
{
    using S = typename F::Scalar;
    S a, b, c, d;
};

template <class F>
Mat2<F> mat_mul(const F& K, const Mat2<F>& x, const Mat2<F>& y)
{
    return {field_add(K, field_mul(K, x.a, y.a), field_mul(K, x.b, y.c)),
            field_add(K, field_mul(K, x.a, y.b), field_mul(K, x.b, y.d)),
            field_add(K, field_mul(K, x.c, y.a), field_mul(K, x.d, y.c)),
            field_add(K, field_mul(K, x.c, y.b), field_mul(K, x.d, y.d))};
}

template <class F>
typename F::Scalar determinant(const F& K, const Mat2<F>& m)
{
    return field_sub(K, field_mul(K, m.a, m.d), field_mul(K, m.b, m.c));
}

template <class F>
void check_unimodular(const F& K, const Mat2<F>& m)
{
    if (!K.equal(determinant(K, m), K.one())) throw Error("matrix determinant is not 1");
}

/// Inverse of a determinant-1 matrix.
template <class F>
Mat2<F> mat_inverse(const F& K, const Mat2<F>& m)
{
    return {m.d, field_neg(K, m.b), field_neg(K, m.c), m.a};
}

template <class F>
Mat2<F> mat_identity(const F& K)
{
    return {K.one(), K.zero(), K.zero(), K.one()};
}

template <class F>
typename F::Scalar trace(const F& K, const Mat2<F>& m)
{
    return field_add(K, m.a, m.d);
}

/// max(-2 v(Tr m), 0); a zero trace has infinite valuation and gives 0.
template <class F>
LexValue bt_translation_length(const F& K, const Mat2<F>& m)
{
    auto v = K.try_valuation(trace(K, m));
    if (!v) return LexValue::zero(K.value_rank());
    LexValue l = *v * Rational(-2);
    return l.sign() > 0 ? l : LexValue::zero(K.value_rank());
}

template <class F>
Mat2<F> evaluate_word(const F& K, const std::vector<Mat2<F>>& gens, const std::vector<Mat2<F>>& inverses, const Word& w)
{
    Mat2<F> m = mat_identity(K);
    for (const auto& l : w) {
        const auto& g = l.exp > 0 ? gens.at(static_cast<std::size_t>(l.gen)) : inverses.at(static_cast<std::size_t>(l.gen));
        for (long i = 0; i < std::labs(l.exp); ++i) m = mat_mul(K, m, g);
    }
    return m;
}

struct CertificateReport
{
    bool pass = true;
    std::optional<Word> failure;
    std::optional<LexValue> failure_valuation;  ///< nullopt with a failure means a zero trace
    std::size_t words_checked = 0;
};

/// Every freely reduced word of length 1..R in the generators (ids 0..k-1) must have
/// v(Tr) < 0. The first failure in shortlex order is reported whatever `jobs` is.
template <class F>
CertificateReport freeness_certificate(const F& K, const std::vector<Mat2<F>>& gens, long R, unsigned jobs = 1)
{
    if (R < 1) throw Error("radius must be at least 1");
    for (const auto& g : gens) check_unimodular(K, g);
    CertificateReport r;
    if (gens.empty()) return r;
    std::vector<Mat2<F>> inv;
    for (const auto& g : gens) inv.push_back(mat_inverse(K, g));
    std::vector<int> ids;
    for (std::size_t i = 0; i < gens.size(); ++i) ids.push_back(static_cast<int>(i));
    auto words = word_ball(ids, R);
    std::atomic<std::size_t> first{words.size()};
    jobs = std::max(1u, jobs);
    auto worker = [&](unsigned id) {
        for (std::size_t i = id; i < words.size(); i += jobs) {
            if (i > first.load()) return;
            auto v = K.try_valuation(trace(K, evaluate_word(K, gens, inv, words[i])));
            if (!v || v->sign() >= 0) {
                std::size_t cur = first.load();
                while (i < cur && !first.compare_exchange_weak(cur, i)) {
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
    if (first.load() < words.size()) {
        r.pass = false;
        r.failure = words[first.load()];
        r.failure_valuation = K.try_valuation(trace(K, evaluate_word(K, gens, inv, *r.failure)));
        r.words_checked = first.load() + 1;
    } else {
        r.words_checked = words.size();
    }
    return r;
}

}  // namespace lambdatree
