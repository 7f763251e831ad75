#pragma once

#include <cstdint>
#include <numeric>
#include <ostream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace carter {

namespace detail {

inline std::int64_t checked_add(std::int64_t a, std::int64_t b) {
    std::int64_t r;
    if (__builtin_add_overflow(a, b, &r)) throw std::overflow_error("carter: integer overflow");
    return r;
}

inline std::int64_t checked_mul(std::int64_t a, std::int64_t b) {
    std::int64_t r;
    if (__builtin_mul_overflow(a, b, &r)) throw std::overflow_error("carter: integer overflow");
    return r;
}

}  // namespace detail

// Exact rational p/q with q > 0 and gcd(|p|, q) = 1.
class Rational {
public:
    constexpr Rational() = default;
    Rational(std::int64_t n) : num_(n), den_(1) {}  // NOLINT(implicit)
    Rational(std::int64_t n, std::int64_t d) : num_(n), den_(d) {
        if (d == 0) throw std::domain_error("carter: zero denominator");
        normalize();
    }

    std::int64_t num() const { return num_; }
    std::int64_t den() const { return den_; }
    bool is_zero() const { return num_ == 0; }
    bool is_integer() const { return den_ == 1; }
    int sign() const { return (num_ > 0) - (num_ < 0); }

    friend Rational operator+(const Rational& a, const Rational& b) {
        if (a.den_ == b.den_) return Rational(detail::checked_add(a.num_, b.num_), a.den_);
        const std::int64_t g = std::gcd(a.den_, b.den_);
        const std::int64_t l = detail::checked_mul(a.den_ / g, b.den_);
        return Rational(detail::checked_add(detail::checked_mul(a.num_, l / a.den_),
                                            detail::checked_mul(b.num_, l / b.den_)),
                        l);
    }
    friend Rational operator-(const Rational& a) {
        Rational r;
        r.num_ = detail::checked_mul(a.num_, -1);
        r.den_ = a.den_;
        return r;
    }
    friend Rational operator-(const Rational& a, const Rational& b) { return a + (-b); }
    friend Rational operator*(const Rational& a, const Rational& b) {
        const std::int64_t g1 = std::gcd(a.num_, b.den_);
        const std::int64_t g2 = std::gcd(b.num_, a.den_);
        const std::int64_t n = detail::checked_mul(g1 ? a.num_ / g1 : 0, g2 ? b.num_ / g2 : 0);
        const std::int64_t d = detail::checked_mul(a.den_ / (g2 ? g2 : 1), b.den_ / (g1 ? g1 : 1));
        return Rational(n, d);
    }
    friend Rational operator/(const Rational& a, const Rational& b) {
        if (b.num_ == 0) throw std::domain_error("carter: division by zero");
        return a * Rational(b.den_, b.num_);
    }
    Rational& operator+=(const Rational& o) { return *this = *this + o; }
    Rational& operator-=(const Rational& o) { return *this = *this - o; }
    Rational& operator*=(const Rational& o) { return *this = *this * o; }

    friend bool operator==(const Rational& a, const Rational& b) {
        return a.num_ == b.num_ && a.den_ == b.den_;
    }
    friend int compare(const Rational& a, const Rational& b) { return (a - b).sign(); }
    friend bool operator<(const Rational& a, const Rational& b) { return compare(a, b) < 0; }

    std::string str() const {
        return den_ == 1 ? std::to_string(num_) : std::to_string(num_) + "/" + std::to_string(den_);
    }

private:
    void normalize() {
        if (den_ < 0) {
            num_ = detail::checked_mul(num_, -1);
            den_ = detail::checked_mul(den_, -1);
        }
        const std::int64_t g = std::gcd(num_, den_);
        if (g > 1) {
            num_ /= g;
            den_ /= g;
        }
    }

    std::int64_t num_ = 0;
    std::int64_t den_ = 1;
};

// Element a + b*sqrt(5) of Q(sqrt 5). With b = 0 this is the rational variant.
class Scalar {
public:
    Scalar() = default;
    Scalar(std::int64_t a) : a_(a) {}  // NOLINT(implicit)
    Scalar(Rational a) : a_(a) {}      // NOLINT(implicit)
    Scalar(Rational a, Rational b) : a_(a), b_(b) {}

    static Scalar sqrt5() { return Scalar(Rational(0), Rational(1)); }
    // The golden ratio (1 + sqrt 5) / 2 and its inverse (sqrt 5 - 1) / 2.
    static Scalar phi() { return Scalar(Rational(1, 2), Rational(1, 2)); }
    static Scalar phi_inv() { return Scalar(Rational(-1, 2), Rational(1, 2)); }

    const Rational& rational_part() const { return a_; }
    const Rational& sqrt5_part() const { return b_; }
    bool is_rational() const { return b_.is_zero(); }
    bool is_zero() const { return a_.is_zero() && b_.is_zero(); }
    bool is_integer() const { return is_rational() && a_.is_integer(); }

    // Sign of a + b*sqrt5: when a and b disagree, compare a^2 with 5 b^2.
    int sign() const {
        const int sa = a_.sign(), sb = b_.sign();
        if (sb == 0) return sa;
        if (sa == 0 || sa == sb) return sb;
        const int c = compare(a_ * a_, Rational(5) * b_ * b_);
        return c > 0 ? sa : sb;
    }

    Scalar conjugate() const { return Scalar(a_, -b_); }
    // Field norm (a + b sqrt5)(a - b sqrt5).
    Rational norm() const { return a_ * a_ - Rational(5) * b_ * b_; }

    friend Scalar operator+(const Scalar& x, const Scalar& y) { return Scalar(x.a_ + y.a_, x.b_ + y.b_); }
    friend Scalar operator-(const Scalar& x) { return Scalar(-x.a_, -x.b_); }
    friend Scalar operator-(const Scalar& x, const Scalar& y) { return Scalar(x.a_ - y.a_, x.b_ - y.b_); }
    friend Scalar operator*(const Scalar& x, const Scalar& y) {
        if (x.is_rational() && y.is_rational()) return Scalar(x.a_ * y.a_);
        return Scalar(x.a_ * y.a_ + Rational(5) * x.b_ * y.b_, x.a_ * y.b_ + x.b_ * y.a_);
    }
    friend Scalar operator/(const Scalar& x, const Scalar& y) {
        if (y.is_zero()) throw std::domain_error("carter: division by zero");
        if (y.is_rational()) return Scalar(x.a_ / y.a_, x.b_ / y.a_);
        const Rational n = y.norm();
        const Scalar t = x * y.conjugate();
        return Scalar(t.a_ / n, t.b_ / n);
    }
    Scalar& operator+=(const Scalar& o) { return *this = *this + o; }
    Scalar& operator-=(const Scalar& o) { return *this = *this - o; }
    Scalar& operator*=(const Scalar& o) { return *this = *this * o; }

    friend bool operator==(const Scalar& x, const Scalar& y) { return x.a_ == y.a_ && x.b_ == y.b_; }
    friend int compare(const Scalar& x, const Scalar& y) { return (x - y).sign(); }
    friend bool operator<(const Scalar& x, const Scalar& y) { return compare(x, y) < 0; }
    friend bool operator>(const Scalar& x, const Scalar& y) { return compare(x, y) > 0; }

    // "p", "p/q", or "a+b*sqrt5" (a omitted when zero).
    std::string str() const {
        if (is_rational()) return a_.str();
        std::string s;
        if (!a_.is_zero()) s = a_.str() + (b_.sign() > 0 ? "+" : "");
        if (b_ == Rational(1)) s += "sqrt5";
        else if (b_ == Rational(-1)) s += "-sqrt5";
        else s += b_.str() + "*sqrt5";
        return s;
    }

    // Inverse of str(). Throws std::invalid_argument on malformed text.
    static Scalar parse(std::string_view text) {
        std::string t;
        for (char c : text)
            if (c != ' ') t.push_back(c);
        if (t.empty()) throw std::invalid_argument("carter: empty scalar");
        const auto pos = t.find("sqrt5");
        if (pos == std::string::npos) return Scalar(parse_rational(t));
        if (pos + 5 != t.size()) throw std::invalid_argument("carter: malformed scalar '" + t + "'");
        std::string head = t.substr(0, pos);
        if (!head.empty() && head.back() == '*') head.pop_back();
        // split head into rational part and coefficient at the last sign not at position 0
        std::size_t split = std::string::npos;
        for (std::size_t i = head.size(); i-- > 1;)
            if ((head[i] == '+' || head[i] == '-') && head[i - 1] != '/') {
                split = i;
                break;
            }
        Rational a(0);
        std::string coef = head;
        if (split != std::string::npos) {
            a = parse_rational(head.substr(0, split));
            coef = head.substr(split);
        }
        Rational b(1);
        if (coef.empty() || coef == "+") b = Rational(1);
        else if (coef == "-") b = Rational(-1);
        else b = parse_rational(coef[0] == '+' ? coef.substr(1) : coef);
        return Scalar(a, b);
    }

private:
    static Rational parse_rational(const std::string& s) {
        try {
            std::size_t used = 0;
            const auto slash = s.find('/');
            if (slash == std::string::npos) {
                const long long n = std::stoll(s, &used);
                if (used != s.size()) throw std::invalid_argument(s);
                return Rational(n);
            }
            const std::string ns = s.substr(0, slash), ds = s.substr(slash + 1);
            const long long n = std::stoll(ns, &used);
            if (used != ns.size()) throw std::invalid_argument(s);
            const long long d = std::stoll(ds, &used);
            if (used != ds.size() || d == 0) throw std::invalid_argument(s);
            return Rational(n, d);
        } catch (const std::logic_error&) {
            throw std::invalid_argument("carter: malformed scalar '" + s + "'");
        }
    }

    Rational a_;
    Rational b_;
};

inline std::ostream& operator<<(std::ostream& os, const Scalar& s) { return os << s.str(); }

using Vector = std::vector<Scalar>;

inline Scalar dot(const Vector& u, const Vector& v) {
    if (u.size() != v.size()) throw std::invalid_argument("carter: dimension mismatch");
    Scalar s;
    for (std::size_t i = 0; i < u.size(); ++i)
        if (!u[i].is_zero() && !v[i].is_zero()) s += u[i] * v[i];
    return s;
}

// Lexicographic comparison of coordinate vectors.
inline int lex_compare(const Vector& u, const Vector& v) {
    for (std::size_t i = 0; i < u.size() && i < v.size(); ++i) {
        const int c = compare(u[i], v[i]);
        if (c != 0) return c;
    }
    return (u.size() > v.size()) - (u.size() < v.size());
}

// Rank of a list of vectors by exact Gaussian elimination.
inline std::size_t rank_of(std::vector<Vector> rows) {
    std::size_t rank = 0;
    const std::size_t cols = rows.empty() ? 0 : rows[0].size();
    for (std::size_t c = 0; c < cols && rank < rows.size(); ++c) {
        std::size_t piv = rank;
        while (piv < rows.size() && rows[piv][c].is_zero()) ++piv;
        if (piv == rows.size()) continue;
        std::swap(rows[piv], rows[rank]);
        for (std::size_t r = rank + 1; r < rows.size(); ++r) {
            if (rows[r][c].is_zero()) continue;
            const Scalar f = rows[r][c] / rows[rank][c];
            for (std::size_t k = c; k < cols; ++k) rows[r][k] -= f * rows[rank][k];
        }
        ++rank;
    }
    return rank;
}

inline bool is_linearly_independent(const std::vector<Vector>& vs) {
    if (vs.empty()) return true;
    if (vs.size() > vs[0].size()) return false;
    return rank_of(vs) == vs.size();
}

// Incremental row-echelon basis; used by the subset searches to extend an
// independent set one vector at a time.
class EchelonBasis {
public:
    explicit EchelonBasis(std::size_t dim) : dim_(dim) {}

    // Returns true and adds v if v is independent of the current rows.
    bool try_add(const Vector& v) {
        Vector w = v;
        for (std::size_t r = 0; r < rows_.size(); ++r) {
            const std::size_t p = pivots_[r];
            if (w[p].is_zero()) continue;
            const Scalar f = w[p] / rows_[r][p];
            for (std::size_t k = p; k < dim_; ++k)
                if (!rows_[r][k].is_zero()) w[k] -= f * rows_[r][k];
        }
        for (std::size_t k = 0; k < dim_; ++k)
            if (!w[k].is_zero()) {
                rows_.push_back(std::move(w));
                pivots_.push_back(k);
                return true;
            }
        return false;
    }
    void pop() {
        rows_.pop_back();
        pivots_.pop_back();
    }
    std::size_t size() const { return rows_.size(); }

private:
    std::size_t dim_;
    std::vector<Vector> rows_;
    std::vector<std::size_t> pivots_;
};

}  // namespace carter
