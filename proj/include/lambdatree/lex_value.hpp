#pragma once

#include <gmpxx.h>

#include <compare>
#include <concepts>
#include <cstdint>
#include <limits>
#include <memory>
#include <numeric>
#include <type_traits>
#include <cstddef>
#include <initializer_list>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace lambdatree {

/// Raised for any violated precondition on library inputs.
class Error : public std::runtime_error
{
  public:
    using std::runtime_error::runtime_error;
};

/// Exact rational number. Values whose lowest-terms numerator and denominator fit in
/// a long are stored inline; anything larger lives in an mpq_class.
class Rational
{
  public:
    Rational() = default;

    template <std::integral T>
        requires(!std::same_as<T, bool>)
    Rational(T v)
    {
        if constexpr (std::is_signed_v<T> || sizeof(T) < sizeof(long)) {
            if (static_cast<long>(v) == std::numeric_limits<long>::min())
                big_ = std::make_unique<mpq_class>(std::to_string(v));
            else
                n_ = static_cast<long>(v);
        } else {
            if (v <= static_cast<T>(std::numeric_limits<long>::max()))
                n_ = static_cast<long>(v);
            else
                big_ = std::make_unique<mpq_class>(std::to_string(v));
        }
    }

    Rational(long num, long den)
    {
        if (den == 0) throw Error("zero denominator");
        *this = from_wide(num, den);
    }

    explicit Rational(const mpq_class& q)
    {
        mpq_class c(q);
        c.canonicalize();
        set_big(std::move(c));
    }

    Rational(const Rational& o) : n_(o.n_), d_(o.d_)
    {
        if (o.big_) big_ = std::make_unique<mpq_class>(*o.big_);
    }
    Rational(Rational&&) noexcept = default;
    Rational& operator=(const Rational& o)
    {
        if (this != &o) {
            n_ = o.n_;
            d_ = o.d_;
            big_ = o.big_ ? std::make_unique<mpq_class>(*o.big_) : nullptr;
        }
        return *this;
    }
    Rational& operator=(Rational&&) noexcept = default;

    bool is_small() const { return !big_; }

    mpq_class to_mpq() const
    {
        if (big_) return *big_;
        mpq_class q;
        mpz_set_si(mpq_numref(q.get_mpq_t()), n_);
        mpz_set_si(mpq_denref(q.get_mpq_t()), d_);
        return q;
    }

    mpz_class get_num() const { return big_ ? mpz_class(big_->get_num()) : mpz_class(n_); }
    mpz_class get_den() const { return big_ ? mpz_class(big_->get_den()) : mpz_class(d_); }

    /// Lowest-terms `p/q`, or `p` when the denominator is one.
    std::string get_str() const
    {
        if (big_) return big_->get_str();
        return d_ == 1 ? std::to_string(n_) : std::to_string(n_) + "/" + std::to_string(d_);
    }

    /// Values are always kept in lowest terms.
    void canonicalize() {}

    friend int sgn(const Rational& r)
    {
        if (r.big_) return mpq_sgn(r.big_->get_mpq_t());
        return (r.n_ > 0) - (r.n_ < 0);
    }

    friend Rational abs(const Rational& r) { return sgn(r) < 0 ? -r : r; }

    friend int cmp(const Rational& a, const Rational& b)
    {
        if (!a.big_ && !b.big_) {
            if (a.d_ == b.d_) return (a.n_ > b.n_) - (a.n_ < b.n_);
            __int128 l = static_cast<__int128>(a.n_) * b.d_, r = static_cast<__int128>(b.n_) * a.d_;
            return (l > r) - (l < r);
        }
        int c = ::cmp(a.to_mpq(), b.to_mpq());
        return (c > 0) - (c < 0);
    }

    Rational operator-() const
    {
        if (!big_ && n_ != std::numeric_limits<long>::min()) return raw(-n_, d_);
        return Rational(mpq_class(-to_mpq()));
    }

    friend Rational operator+(const Rational& a, const Rational& b)
    {
        if (!a.big_ && !b.big_) {
            if (a.d_ == 1 && b.d_ == 1) {
                long r;
                if (!__builtin_add_overflow(a.n_, b.n_, &r) && r != std::numeric_limits<long>::min()) return raw(r, 1);
            }
            return from_wide(static_cast<__int128>(a.n_) * b.d_ + static_cast<__int128>(b.n_) * a.d_,
                             static_cast<__int128>(a.d_) * b.d_);
        }
        return Rational(mpq_class(a.to_mpq() + b.to_mpq()));
    }

    friend Rational operator-(const Rational& a, const Rational& b)
    {
        if (!a.big_ && !b.big_) {
            if (a.d_ == 1 && b.d_ == 1) {
                long r;
                if (!__builtin_sub_overflow(a.n_, b.n_, &r) && r != std::numeric_limits<long>::min()) return raw(r, 1);
            }
            return from_wide(static_cast<__int128>(a.n_) * b.d_ - static_cast<__int128>(b.n_) * a.d_,
                             static_cast<__int128>(a.d_) * b.d_);
        }
        return Rational(mpq_class(a.to_mpq() - b.to_mpq()));
    }

    friend Rational operator*(const Rational& a, const Rational& b)
    {
        if (!a.big_ && !b.big_)
            return from_wide(static_cast<__int128>(a.n_) * b.n_, static_cast<__int128>(a.d_) * b.d_);
        return Rational(mpq_class(a.to_mpq() * b.to_mpq()));
    }

    friend Rational operator/(const Rational& a, const Rational& b)
    {
        if (sgn(b) == 0) throw Error("division by zero");
        if (!a.big_ && !b.big_)
            return from_wide(static_cast<__int128>(a.n_) * b.d_, static_cast<__int128>(a.d_) * b.n_);
        return Rational(mpq_class(a.to_mpq() / b.to_mpq()));
    }

    Rational& operator+=(const Rational& o) { return *this = *this + o; }
    Rational& operator-=(const Rational& o) { return *this = *this - o; }
    Rational& operator*=(const Rational& o) { return *this = *this * o; }
    Rational& operator/=(const Rational& o) { return *this = *this / o; }

    // Small and big representations never hold the same value.
    friend bool operator==(const Rational& a, const Rational& b)
    {
        if (!a.big_ && !b.big_) return a.n_ == b.n_ && a.d_ == b.d_;
        if (!a.big_ || !b.big_) return false;
        return *a.big_ == *b.big_;
    }

    friend std::strong_ordering operator<=>(const Rational& a, const Rational& b)
    {
        int c = cmp(a, b);
        return c < 0 ? std::strong_ordering::less : (c > 0 ? std::strong_ordering::greater : std::strong_ordering::equal);
    }

    friend std::ostream& operator<<(std::ostream& os, const Rational& r) { return os << r.get_str(); }

  private:
    static Rational raw(long n, long d)
    {
        Rational r;
        r.n_ = n;
        r.d_ = d;
        return r;
    }

    static unsigned __int128 gcd_wide(unsigned __int128 a, unsigned __int128 b)
    {
        constexpr unsigned __int128 lim = std::numeric_limits<std::uint64_t>::max();
        while (b != 0) {
            if (a <= lim && b <= lim) return std::gcd(static_cast<std::uint64_t>(a), static_cast<std::uint64_t>(b));
            a %= b;
            std::swap(a, b);
        }
        return a;
    }

    static mpz_class wide_to_mpz(__int128 v)
    {
        bool neg = v < 0;
        unsigned __int128 u = neg ? -static_cast<unsigned __int128>(v) : static_cast<unsigned __int128>(v);
        mpz_class z(static_cast<unsigned long>(u >> 64));
        z <<= 64;
        z += static_cast<unsigned long>(u & std::numeric_limits<std::uint64_t>::max());
        if (neg) z = -z;
        return z;
    }

    static Rational from_wide(__int128 n, __int128 d)
    {
        if (d < 0) {
            n = -n;
            d = -d;
        }
        if (n == 0) return raw(0, 1);
        unsigned __int128 un = n < 0 ? -static_cast<unsigned __int128>(n) : static_cast<unsigned __int128>(n);
        unsigned __int128 g = gcd_wide(un, static_cast<unsigned __int128>(d));
        if (g > 1) {
            n /= static_cast<__int128>(g);
            d /= static_cast<__int128>(g);
        }
        constexpr __int128 lo = std::numeric_limits<long>::min(), hi = std::numeric_limits<long>::max();
        if (n > lo && n <= hi && d <= hi) return raw(static_cast<long>(n), static_cast<long>(d));
        mpq_class q;
        q.get_num() = wide_to_mpz(n);
        q.get_den() = wide_to_mpz(d);
        Rational r;
        r.set_big(std::move(q));
        return r;
    }

    // Demotes to the inline form whenever the value fits, keeping the representation unique.
    void set_big(mpq_class q)
    {
        const mpz_class& num = q.get_num();
        const mpz_class& den = q.get_den();
        if (num.fits_slong_p() && den.fits_slong_p() && num != std::numeric_limits<long>::min()) {
            n_ = num.get_si();
            d_ = den.get_si();
            big_.reset();
        } else {
            big_ = std::make_unique<mpq_class>(std::move(q));
        }
    }

    long n_ = 0, d_ = 1;
    std::unique_ptr<mpq_class> big_;
};

inline Rational make_rational(long num, long den = 1)
{
    return Rational(num, den);
}

/// Lowest-terms `p/q`, or `p` when the denominator is one.
inline std::string format_rational(const Rational& r)
{
    return r.get_str();
}

inline Rational parse_rational(std::string_view text)
{
    std::string s(text);
    while (!s.empty() && (s.front() == ' ' || s.front() == '+')) s.erase(s.begin());
    while (!s.empty() && s.back() == ' ') s.pop_back();
    if (s.empty()) throw Error("empty rational literal");
    for (char c : s)
        if (!(c == '-' || c == '/' || (c >= '0' && c <= '9')))
            throw Error("malformed rational literal '" + std::string(text) + "'");
    mpq_class r;
    if (r.set_str(s, 10) != 0) throw Error("malformed rational literal '" + std::string(text) + "'");
    if (r.get_den() == 0) throw Error("zero denominator in '" + std::string(text) + "'");
    return Rational(r);
}

inline std::strong_ordering compare_rational(const Rational& a, const Rational& b)
{
    return a <=> b;
}

/// An element of Q^n ordered lexicographically, most significant coordinate first.
///
/// The magnitude of a value is the smallest p such that the value lies in the
/// convex subgroup Q^p formed by the p least significant coordinates.
class LexValue
{
  public:
    LexValue() = default;

    explicit LexValue(std::size_t rank) : coords_(rank) {}

    LexValue(std::initializer_list<Rational> coords) : coords_(coords) {}

    explicit LexValue(std::vector<Rational> coords) : coords_(std::move(coords))
    {
        for (auto& c : coords_) c.canonicalize();
    }

    static LexValue zero(std::size_t rank) { return LexValue(rank); }

    /// The value with a single 1 at the coordinate of the given magnitude level.
    static LexValue unit(std::size_t rank, std::size_t level)
    {
        if (level < 1 || level > rank) throw Error("unit level out of range");
        LexValue v(rank);
        v.coords_[rank - level] = 1;
        return v;
    }

    static LexValue from_ints(std::initializer_list<long> xs)
    {
        LexValue v(xs.size());
        std::size_t i = 0;
        for (long x : xs) v.coords_[i++] = x;
        return v;
    }

    std::size_t rank() const { return coords_.size(); }
    const std::vector<Rational>& coords() const { return coords_; }
    const Rational& operator[](std::size_t i) const { return coords_[i]; }

    bool is_zero() const
    {
        for (const auto& c : coords_)
            if (sgn(c) != 0) return false;
        return true;
    }

    int sign() const
    {
        for (const auto& c : coords_)
            if (int s = sgn(c); s != 0) return s;
        return 0;
    }

    std::size_t magnitude() const
    {
        for (std::size_t i = 0; i < coords_.size(); ++i)
            if (sgn(coords_[i]) != 0) return coords_.size() - i;
        return 0;
    }

    bool is_infinitesimal() const { return magnitude() + 1 <= rank(); }

    /// Image in the quotient by the convex subgroup of magnitude <= rank-k elements.
    LexValue project_kill(std::size_t k) const
    {
        if (k > rank()) throw Error("project_kill level out of range");
        return LexValue(std::vector<Rational>(coords_.begin(), coords_.begin() + static_cast<std::ptrdiff_t>(k)));
    }

    /// Inverse section of project_kill: pads with zero infinitesimal coordinates.
    LexValue lift(std::size_t rank) const
    {
        if (rank < this->rank()) throw Error("lift to a smaller rank");
        LexValue v(rank);
        for (std::size_t i = 0; i < coords_.size(); ++i) v.coords_[i] = coords_[i];
        return v;
    }

    LexValue operator-() const
    {
        LexValue v(*this);
        for (auto& c : v.coords_) c = -c;
        return v;
    }

    LexValue& operator+=(const LexValue& o)
    {
        check_rank(o);
        for (std::size_t i = 0; i < coords_.size(); ++i) coords_[i] += o.coords_[i];
        return *this;
    }

    LexValue& operator-=(const LexValue& o)
    {
        check_rank(o);
        for (std::size_t i = 0; i < coords_.size(); ++i) coords_[i] -= o.coords_[i];
        return *this;
    }

    LexValue& operator*=(const Rational& s)
    {
        for (auto& c : coords_) c *= s;
        return *this;
    }

    friend LexValue operator+(LexValue a, const LexValue& b) { return a += b; }
    friend LexValue operator-(LexValue a, const LexValue& b) { return a -= b; }
    friend LexValue operator*(LexValue a, const Rational& s) { return a *= s; }
    friend LexValue operator*(const Rational& s, LexValue a) { return a *= s; }
    friend LexValue operator*(long s, LexValue a) { return a *= Rational(s); }

    LexValue half() const
    {
        LexValue v(*this);
        for (auto& c : v.coords_) c /= 2;
        return v;
    }

    LexValue abs() const { return sign() < 0 ? -*this : *this; }

    friend std::strong_ordering operator<=>(const LexValue& a, const LexValue& b)
    {
        a.check_rank(b);
        for (std::size_t i = 0; i < a.coords_.size(); ++i)
            if (auto c = compare_rational(a.coords_[i], b.coords_[i]); c != 0) return c;
        return std::strong_ordering::equal;
    }

    friend bool operator==(const LexValue& a, const LexValue& b)
    {
        a.check_rank(b);
        for (std::size_t i = 0; i < a.coords_.size(); ++i)
            if (a.coords_[i] != b.coords_[i]) return false;
        return true;
    }

    std::string str() const
    {
        std::string out = "(";
        for (std::size_t i = 0; i < coords_.size(); ++i) {
            if (i) out += ',';
            out += format_rational(coords_[i]);
        }
        return out + ")";
    }

    static LexValue parse(std::string_view text)
    {
        std::string s(text);
        auto a = s.find('('), b = s.rfind(')');
        if (a == std::string::npos || b == std::string::npos || b < a)
            throw Error("malformed value '" + s + "': expected (a,b,...)");
        std::vector<Rational> coords;
        std::string body = s.substr(a + 1, b - a - 1);
        std::stringstream ss(body);
        std::string item;
        while (std::getline(ss, item, ',')) coords.push_back(parse_rational(item));
        if (coords.empty()) throw Error("value '" + s + "' has rank zero");
        return LexValue(std::move(coords));
    }

  private:
    void check_rank(const LexValue& o) const
    {
        if (o.rank() != rank())
            throw Error("rank mismatch: " + std::to_string(rank()) + " vs " + std::to_string(o.rank()));
    }

    std::vector<Rational> coords_;
};

inline std::ostream& operator<<(std::ostream& os, const LexValue& v)
{
    return os << v.str();
}

inline const LexValue& lex_min(const LexValue& a, const LexValue& b) { return b < a ? b : a; }
inline const LexValue& lex_max(const LexValue& a, const LexValue& b) { return a < b ? b : a; }

}  // namespace lambdatree
