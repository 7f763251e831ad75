#pragma once

#include <algorithm>
#include <cstdint>
#include <deque>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <tuple>
#include <unordered_set>
#include <utility>
#include <vector>

#include "carter/scalar.hpp"

namespace carter {

using RootIndex = std::uint16_t;

// Finite type label. `family` is one of A B C D E F G H I; `m` is only used by I2(m).
struct CartanType {
    char family = 'A';
    int rank = 1;
    int m = 0;

    std::string label() const {
        if (family == 'I') return "I2(" + std::to_string(m) + ")";
        return std::string(1, family) + std::to_string(rank);
    }
    bool crystallographic() const { return family != 'H' && family != 'I'; }
    bool simply_laced() const { return family == 'A' || family == 'D' || family == 'E'; }

    friend bool operator==(const CartanType& a, const CartanType& b) {
        return a.family == b.family && a.rank == b.rank && a.m == b.m;
    }
    friend bool operator<(const CartanType& a, const CartanType& b) {
        return std::tie(a.family, a.rank, a.m) < std::tie(b.family, b.rank, b.m);
    }

    // Validates and normalizes. I2(3), I2(4), I2(6) are the same groups as A2, B2, G2
    // and are returned under those names.
    static CartanType make(char family, int rank, int m = 0) {
        auto bad = [&](const std::string& why) {
            return std::invalid_argument("carter: invalid type " + std::string(1, family) + std::to_string(rank) +
                                         ": " + why);
        };
        switch (family) {
            case 'A':
                if (rank < 1) throw bad("A_n needs n >= 1");
                break;
            case 'B':
            case 'C':
                if (rank < 2) throw bad("B_n/C_n need n >= 2");
                break;
            case 'D':
                if (rank < 4) throw bad("D_n needs n >= 4");
                break;
            case 'E':
                if (rank < 6 || rank > 8) throw bad("E_n needs n in {6,7,8}");
                break;
            case 'F':
                if (rank != 4) throw bad("only F4");
                break;
            case 'G':
                if (rank != 2) throw bad("only G2");
                break;
            case 'H':
                if (rank != 3 && rank != 4) throw bad("only H3, H4");
                break;
            case 'I':
                if (rank != 2) throw bad("I2(m) has rank 2");
                if (m < 3) throw bad("I2(m) needs m >= 3");
                if (m == 3) return {'A', 2, 0};
                if (m == 4) return {'B', 2, 0};
                if (m == 6) return {'G', 2, 0};
                if (m != 5) throw bad("I2(m) coordinates for m = " + std::to_string(m) + " leave Q(sqrt5)");
                return {'I', 2, 5};
            default:
                throw bad("unknown family");
        }
        if (rank > 40) throw bad("rank too large");
        return {family, rank, 0};
    }
};

namespace detail {

struct VecHash {
    std::size_t operator()(const std::vector<RootIndex>& v) const noexcept {
        std::uint64_t h = 1469598103934665603ull;
        for (auto x : v) {
            h ^= x;
            h *= 1099511628211ull;
        }
        return static_cast<std::size_t>(h);
    }
};

struct LexLess {
    bool operator()(const Vector& a, const Vector& b) const { return lex_compare(a, b) < 0; }
};

inline Vector unit(std::size_t dim, std::size_t i, std::int64_t c = 1) {
    Vector v(dim);
    v[i] = Scalar(c);
    return v;
}

inline Vector add(const Vector& a, const Vector& b) {
    Vector r(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) r[i] = a[i] + b[i];
    return r;
}

inline Vector scale(const Scalar& s, const Vector& a) {
    Vector r(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) r[i] = s * a[i];
    return r;
}

inline bool positive(const Vector& v) {
    for (const auto& c : v) {
        const int s = c.sign();
        if (s != 0) return s > 0;
    }
    return false;
}

// +/- e_i +/- e_j for i < j.
inline void push_dn(std::vector<Vector>& out, std::size_t dim, std::size_t n) {
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j)
            for (int si : {1, -1})
                for (int sj : {1, -1}) {
                    Vector v(dim);
                    v[i] = Scalar(si);
                    v[j] = Scalar(sj);
                    out.push_back(v);
                }
}

inline std::vector<Vector> e8_roots() {
    std::vector<Vector> r;
    push_dn(r, 8, 8);
    for (int mask = 0; mask < 256; ++mask) {
        if (__builtin_popcount(static_cast<unsigned>(mask)) % 2) continue;
        Vector v(8);
        for (int i = 0; i < 8; ++i) v[i] = Scalar(Rational((mask >> i) & 1 ? -1 : 1, 2));
        r.push_back(v);
    }
    return r;
}

inline std::vector<Vector> h3_roots() {
    std::vector<Vector> r;
    for (std::size_t i = 0; i < 3; ++i)
        for (int s : {2, -2}) r.push_back(unit(3, i, s));
    const Scalar base[3] = {Scalar::phi(), Scalar(1), Scalar::phi_inv()};
    for (int shift = 0; shift < 3; ++shift)
        for (int mask = 0; mask < 8; ++mask) {
            Vector v(3);
            for (int k = 0; k < 3; ++k) v[(k + shift) % 3] = (mask >> k) & 1 ? -base[k] : base[k];
            r.push_back(v);
        }
    return r;
}

inline std::vector<Vector> h4_roots() {
    std::vector<Vector> r;
    for (std::size_t i = 0; i < 4; ++i)
        for (int s : {2, -2}) r.push_back(unit(4, i, s));
    for (int mask = 0; mask < 16; ++mask) {
        Vector v(4);
        for (int k = 0; k < 4; ++k) v[k] = Scalar((mask >> k) & 1 ? -1 : 1);
        r.push_back(v);
    }
    const Scalar base[4] = {Scalar::phi(), Scalar(1), Scalar::phi_inv(), Scalar(0)};
    std::vector<int> p = {0, 1, 2, 3};
    do {
        int inversions = 0;
        for (int a = 0; a < 4; ++a)
            for (int b = a + 1; b < 4; ++b) inversions += p[a] > p[b];
        if (inversions % 2) continue;
        for (int mask = 0; mask < 8; ++mask) {
            Vector v(4);
            for (int k = 0; k < 4; ++k) {
                Scalar c = base[k];
                if (k < 3 && ((mask >> k) & 1)) c = -c;
                v[p[k]] = c;
            }
            r.push_back(v);
        }
    } while (std::next_permutation(p.begin(), p.end()));
    return r;
}

inline std::vector<Vector> raw_roots(const CartanType& t) {
    const std::size_t n = static_cast<std::size_t>(t.rank);
    std::vector<Vector> r;
    switch (t.family) {
        case 'A':
            for (std::size_t i = 0; i <= n; ++i)
                for (std::size_t j = 0; j <= n; ++j)
                    if (i != j) {
                        Vector v(n + 1);
                        v[i] = Scalar(1);
                        v[j] = Scalar(-1);
                        r.push_back(v);
                    }
            break;
        case 'B':
        case 'C':
            push_dn(r, n, n);
            for (std::size_t i = 0; i < n; ++i)
                for (int s : {1, -1}) r.push_back(unit(n, i, t.family == 'B' ? s : 2 * s));
            break;
        case 'D':
            push_dn(r, n, n);
            break;
        case 'E': {
            // E7: x7 = x8 inside E8.  E6: x6 = x7 = x8 inside E8.
            for (auto& v : e8_roots()) {
                if (t.rank <= 7 && !(v[6] == v[7])) continue;
                if (t.rank == 6 && !(v[5] == v[6])) continue;
                r.push_back(v);
            }
            break;
        }
        case 'F':
            push_dn(r, 4, 4);
            for (std::size_t i = 0; i < 4; ++i)
                for (int s : {1, -1}) r.push_back(unit(4, i, s));
            for (int mask = 0; mask < 16; ++mask) {
                Vector v(4);
                for (int i = 0; i < 4; ++i) v[i] = Scalar(Rational((mask >> i) & 1 ? -1 : 1, 2));
                r.push_back(v);
            }
            break;
        case 'G':
            for (std::size_t i = 0; i < 3; ++i)
                for (std::size_t j = 0; j < 3; ++j) {
                    if (i == j) continue;
                    Vector v(3);
                    v[i] = Scalar(1);
                    v[j] = Scalar(-1);
                    r.push_back(v);
                }
            for (std::size_t i = 0; i < 3; ++i)
                for (int s : {1, -1}) {
                    Vector v(3, Scalar(-s));
                    v[i] = Scalar(2 * s);
                    r.push_back(v);
                }
            break;
        case 'H':
            r = t.rank == 3 ? h3_roots() : h4_roots();
            break;
        case 'I': {
            // The roots of H3 lying in the plane of a pair of roots whose reflections
            // generate a rotation of order 5.
            auto h = h3_roots();
            for (std::size_t i = 0; i < h.size() && r.empty(); ++i)
                for (std::size_t j = i + 1; j < h.size() && r.empty(); ++j) {
                    // (a|b)^2 = cos^2(pi/5) |a|^2 |b|^2 with cos(pi/5) = phi/2
                    const Scalar ab = dot(h[i], h[j]);
                    const Scalar rhs = Scalar::phi() * Scalar::phi() * dot(h[i], h[i]) * dot(h[j], h[j]) /
                                       Scalar(4);
                    if (!(ab * ab == rhs)) continue;
                    for (const auto& v : h)
                        if (rank_of({h[i], h[j], v}) == 2) r.push_back(v);
                }
            break;
        }
        default:
            throw std::invalid_argument("carter: unknown family");
    }
    return r;
}

// Solve G x = b for a symmetric positive definite G (exact Gauss-Jordan).
inline Vector solve(std::vector<Vector> g, Vector b) {
    const std::size_t n = g.size();
    for (std::size_t c = 0; c < n; ++c) {
        std::size_t piv = c;
        while (piv < n && g[piv][c].is_zero()) ++piv;
        if (piv == n) throw std::logic_error("carter: singular Gram matrix");
        std::swap(g[piv], g[c]);
        std::swap(b[piv], b[c]);
        const Scalar inv = Scalar(1) / g[c][c];
        for (std::size_t k = 0; k < n; ++k) g[c][k] *= inv;
        b[c] *= inv;
        for (std::size_t r = 0; r < n; ++r) {
            if (r == c || g[r][c].is_zero()) continue;
            const Scalar f = g[r][c];
            for (std::size_t k = 0; k < n; ++k) g[r][k] -= f * g[c][k];
            b[r] -= f * b[c];
        }
    }
    return b;
}

}  // namespace detail

inline Scalar cartan_pairing(const Vector& alpha, const Vector& beta) {
    const Scalar bb = dot(beta, beta);
    if (bb.is_zero()) throw std::invalid_argument("carter: zero root");
    return Scalar(2) * dot(alpha, beta) / bb;
}

// s_alpha(v) = v - 2 (alpha|v)/(alpha|alpha) alpha.
inline Vector reflect(const Vector& alpha, const Vector& v) {
    if (alpha.size() != v.size()) throw std::invalid_argument("carter: dimension mismatch");
    const Scalar c = cartan_pairing(v, alpha);
    if (c.is_zero()) return v;
    Vector r = v;
    for (std::size_t i = 0; i < v.size(); ++i)
        if (!alpha[i].is_zero()) r[i] -= c * alpha[i];
    return r;
}

class RootSystem {
public:
    explicit RootSystem(CartanType t) : type_(CartanType::make(t.family, t.rank, t.m)) { build(); }

    const CartanType& type() const { return type_; }
    std::string label() const { return type_.label(); }
    std::size_t rank() const { return static_cast<std::size_t>(type_.rank); }
    std::size_t dim() const { return roots_.empty() ? 0 : roots_[0].size(); }
    std::size_t size() const { return roots_.size(); }
    std::size_t num_positive() const { return roots_.size() / 2; }
    bool crystallographic() const { return type_.crystallographic(); }
    // Identifies the ambient system for WeylElement compatibility checks.
    std::uint64_t tag() const { return tag_; }

    const Vector& root(std::size_t i) const { return roots_.at(i); }
    const std::vector<Vector>& roots() const { return roots_; }
    const Scalar& norm2(std::size_t i) const { return norms_[i]; }
    bool is_positive(std::size_t i) const { return i < num_positive(); }
    RootIndex negative(std::size_t i) const {
        return static_cast<RootIndex>((i + num_positive()) % size());
    }
    RootIndex positive_index(std::size_t i) const { return static_cast<RootIndex>(i % num_positive()); }
    const std::vector<RootIndex>& simple_indices() const { return simple_; }
    // Coefficients of root i in the basis of simple roots.
    const Vector& simple_coords(std::size_t i) const { return simple_coords_[i]; }

    std::optional<RootIndex> index_of(const Vector& v) const {
        auto it = index_.find(v);
        if (it == index_.end()) return std::nullopt;
        return it->second;
    }

    // Image of root x under s_a.
    RootIndex reflect_index(std::size_t a, std::size_t x) const {
        return refl_[positive_index(a) * size() + x];
    }
    const RootIndex* reflection_row(std::size_t a) const { return &refl_[positive_index(a) * size()]; }

    // Order of s_a s_b.
    int pair_order(std::size_t a, std::size_t b) const {
        return order_[positive_index(a) * num_positive() + positive_index(b)];
    }

private:
    void build() {
        std::vector<Vector> raw = detail::raw_roots(type_);
        std::vector<Vector> pos;
        for (auto& v : raw)
            if (detail::positive(v)) pos.push_back(v);
        std::sort(pos.begin(), pos.end(), [](const Vector& a, const Vector& b) { return lex_compare(a, b) > 0; });
        pos.erase(std::unique(pos.begin(), pos.end()), pos.end());
        if (pos.size() * 2 != raw.size()) throw std::logic_error("carter: root list not symmetric");
        if (raw.size() >= 65535) throw std::invalid_argument("carter: root system too large");
        roots_ = pos;
        for (auto& v : pos) roots_.push_back(detail::scale(Scalar(-1), v));
        for (std::size_t i = 0; i < roots_.size(); ++i) {
            if (!index_.emplace(roots_[i], static_cast<RootIndex>(i)).second)
                throw std::logic_error("carter: duplicate root");
            norms_.push_back(dot(roots_[i], roots_[i]));
        }
        const std::size_t N = num_positive(), M = size();
        refl_.resize(N * M);
        for (std::size_t a = 0; a < N; ++a)
            for (std::size_t x = 0; x < M; ++x) {
                auto img = index_of(reflect(roots_[a], roots_[x]));
                if (!img) throw std::logic_error("carter: root set not closed under reflections");
                refl_[a * M + x] = *img;
            }
        for (std::size_t a = 0; a < N; ++a) {
            bool simple = true;
            for (std::size_t b = 0; b < N && simple; ++b)
                if (b != a && refl_[a * M + b] >= N) simple = false;
            if (simple) simple_.push_back(static_cast<RootIndex>(a));
        }
        if (simple_.size() != rank()) throw std::logic_error("carter: simple system has wrong size");
        order_.assign(N * N, 1);
        for (std::size_t a = 0; a < N; ++a)
            for (std::size_t b = 0; b < N; ++b) {
                if (a == b) continue;
                // s_a s_b is a rotation of span(a, b); its order is the orbit length of root a.
                std::size_t x = a;
                int k = 0;
                do {
                    x = refl_[a * M + refl_[b * M + x]];
                    ++k;
                } while (x != a && k <= 64);
                order_[a * N + b] = k;
            }
        // simple coordinates via the Gram matrix
        const std::size_t n = rank();
        std::vector<Vector> gram(n, Vector(n));
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j) gram[i][j] = dot(roots_[simple_[i]], roots_[simple_[j]]);
        simple_coords_.resize(M);
        for (std::size_t x = 0; x < M; ++x) {
            Vector b(n);
            for (std::size_t i = 0; i < n; ++i) b[i] = dot(roots_[simple_[i]], roots_[x]);
            Vector c = detail::solve(gram, b);
            Vector back(dim());
            int signs = 0;
            for (std::size_t i = 0; i < n; ++i) {
                back = detail::add(back, detail::scale(c[i], roots_[simple_[i]]));
                signs |= c[i].sign() > 0 ? 1 : c[i].sign() < 0 ? 2 : 0;
            }
            if (!(back == roots_[x])) throw std::logic_error("carter: root outside simple span");
            if (signs == 3) throw std::logic_error("carter: root with mixed simple coordinates");
            simple_coords_[x] = std::move(c);
        }
        // the reflection closure of the simple system must reproduce every root
        std::vector<char> seen(M, 0);
        std::deque<RootIndex> q;
        for (auto s : simple_) {
            seen[s] = 1;
            q.push_back(s);
        }
        std::size_t count = simple_.size();
        while (!q.empty()) {
            const RootIndex x = q.front();
            q.pop_front();
            for (auto s : simple_) {
                const RootIndex y = refl_[s * M + x];
                if (!seen[y]) {
                    seen[y] = 1;
                    ++count;
                    q.push_back(y);
                }
            }
        }
        if (count != M) throw std::logic_error("carter: simple closure does not reach every root");
        std::uint64_t h = 1469598103934665603ull;
        for (char c : label()) {
            h ^= static_cast<unsigned char>(c);
            h *= 1099511628211ull;
        }
        tag_ = h;
    }

    CartanType type_;
    std::vector<Vector> roots_;
    std::vector<Scalar> norms_;
    std::map<Vector, RootIndex, detail::LexLess> index_;
    std::vector<RootIndex> refl_;
    std::vector<int> order_;
    std::vector<RootIndex> simple_;
    std::vector<Vector> simple_coords_;
    std::uint64_t tag_ = 0;
};

using RootSystemPtr = std::shared_ptr<const RootSystem>;

inline RootSystemPtr build_root_system(char family, int rank, int m = 0) {
    return std::make_shared<const RootSystem>(CartanType::make(family, rank, m));
}
inline RootSystemPtr build_root_system(const CartanType& t) { return build_root_system(t.family, t.rank, t.m); }

// ---------------------------------------------------------------------------
// Weyl group elements as permutations of the root list.

class WeylElement {
public:
    WeylElement() = default;
    WeylElement(std::vector<RootIndex> perm, std::uint64_t tag) : perm_(std::move(perm)), tag_(tag) {}

    static WeylElement identity(const RootSystem& phi) {
        std::vector<RootIndex> p(phi.size());
        for (std::size_t i = 0; i < p.size(); ++i) p[i] = static_cast<RootIndex>(i);
        return {std::move(p), phi.tag()};
    }

    const std::vector<RootIndex>& perm() const { return perm_; }
    RootIndex operator()(std::size_t i) const { return perm_[i]; }
    std::size_t degree() const { return perm_.size(); }
    std::uint64_t tag() const { return tag_; }
    bool is_identity() const {
        for (std::size_t i = 0; i < perm_.size(); ++i)
            if (perm_[i] != i) return false;
        return true;
    }

    friend bool operator==(const WeylElement& a, const WeylElement& b) {
        return a.tag_ == b.tag_ && a.perm_ == b.perm_;
    }
    friend bool operator!=(const WeylElement& a, const WeylElement& b) { return !(a == b); }
    friend bool operator<(const WeylElement& a, const WeylElement& b) { return a.perm_ < b.perm_; }

private:
    std::vector<RootIndex> perm_;
    std::uint64_t tag_ = 0;
};

struct WeylElementHash {
    std::size_t operator()(const WeylElement& g) const noexcept { return detail::VecHash{}(g.perm()); }
};

inline WeylElement reflection_of(std::size_t root_index, const RootSystem& phi) {
    if (root_index >= phi.size()) throw std::out_of_range("carter: root index out of range");
    const RootIndex* row = phi.reflection_row(root_index);
    return {std::vector<RootIndex>(row, row + phi.size()), phi.tag()};
}

// First h, then g.
inline WeylElement compose(const WeylElement& g, const WeylElement& h) {
    if (g.tag() != h.tag() || g.degree() != h.degree())
        throw std::invalid_argument("carter: elements of different ambient systems");
    std::vector<RootIndex> p(h.degree());
    for (std::size_t i = 0; i < p.size(); ++i) p[i] = g(h(i));
    return {std::move(p), g.tag()};
}

inline WeylElement invert(const WeylElement& g) {
    std::vector<RootIndex> p(g.degree());
    for (std::size_t i = 0; i < p.size(); ++i) p[g(i)] = static_cast<RootIndex>(i);
    return {std::move(p), g.tag()};
}

inline std::size_t element_order(const WeylElement& g) {
    WeylElement x = g;
    std::size_t k = 1;
    while (!x.is_identity()) {
        x = compose(g, x);
        ++k;
    }
    return k;
}

struct Closure {
    std::size_t order = 0;
    std::vector<WeylElement> elements;  // sorted
};

// Breadth-first closure of <gens>; nullopt once more than `cap` elements are found.
inline std::optional<Closure> subgroup_closure(const RootSystem& phi, const std::vector<WeylElement>& gens,
                                               std::size_t cap) {
    for (const auto& g : gens)
        if (g.tag() != phi.tag()) throw std::invalid_argument("carter: generator from another ambient system");
    std::unordered_set<WeylElement, WeylElementHash> seen;
    std::deque<WeylElement> queue;
    const WeylElement id = WeylElement::identity(phi);
    seen.insert(id);
    queue.push_back(id);
    while (!queue.empty()) {
        WeylElement x = std::move(queue.front());
        queue.pop_front();
        for (const auto& g : gens) {
            WeylElement y = compose(g, x);
            if (seen.insert(y).second) {
                if (seen.size() > cap) return std::nullopt;
                queue.push_back(std::move(y));
            }
        }
    }
    Closure c;
    c.order = seen.size();
    c.elements.assign(seen.begin(), seen.end());
    std::sort(c.elements.begin(), c.elements.end());
    return c;
}

inline std::vector<WeylElement> simple_reflections(const RootSystem& phi) {
    std::vector<WeylElement> s;
    for (auto i : phi.simple_indices()) s.push_back(reflection_of(i, phi));
    return s;
}

namespace detail {

// |W| = |W v| * |W_J| for v in the closed chamber with stabilizer W_J = <s_j : j != k>.
inline std::uint64_t parabolic_order(const std::vector<Vector>& simple) {
    const std::size_t n = simple.size();
    if (n == 0) return 1;
    if (n == 1) return 2;
    std::vector<Vector> gram(n, Vector(n));
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) gram[i][j] = dot(simple[i], simple[j]);
    std::uint64_t best_orbit = 0;
    std::size_t best_k = 0;
    for (std::size_t k = 0; k < n; ++k) {
        Vector e(n);
        e[k] = Scalar(1);
        Vector c = solve(gram, e);
        Vector v(simple[0].size());
        for (std::size_t i = 0; i < n; ++i) v = add(v, scale(c[i], simple[i]));
        std::set<Vector, LexLess> orbit{v};
        std::deque<Vector> q{v};
        bool aborted = false;
        while (!q.empty() && !aborted) {
            Vector x = std::move(q.front());
            q.pop_front();
            for (const auto& s : simple) {
                Vector y = reflect(s, x);
                if (orbit.insert(y).second) {
                    if (best_orbit && orbit.size() >= best_orbit) {
                        aborted = true;
                        break;
                    }
                    q.push_back(std::move(y));
                }
            }
        }
        if (!aborted) {
            best_orbit = orbit.size();
            best_k = k;
        }
    }
    std::vector<Vector> rest;
    for (std::size_t i = 0; i < n; ++i)
        if (i != best_k) rest.push_back(simple[i]);
    return best_orbit * parabolic_order(rest);
}

}  // namespace detail

// |W| by the parabolic orbit recursion (no element storage).
inline std::uint64_t weyl_group_order(const RootSystem& phi) {
    std::vector<Vector> simple;
    for (auto i : phi.simple_indices()) simple.push_back(phi.root(i));
    return detail::parabolic_order(simple);
}

// Orbit of R under <s_a : a in R>, as sorted root indices.
inline std::vector<RootIndex> smallest_root_subsystem(const std::vector<RootIndex>& R, const RootSystem& phi) {
    if (R.empty()) throw std::invalid_argument("carter: empty root set");
    std::vector<char> seen(phi.size(), 0);
    std::vector<RootIndex> out;
    std::deque<RootIndex> q;
    for (auto r : R) {
        if (r >= phi.size()) throw std::out_of_range("carter: root index out of range");
        if (!seen[r]) {
            seen[r] = 1;
            q.push_back(r);
        }
    }
    while (!q.empty()) {
        const RootIndex x = q.front();
        q.pop_front();
        out.push_back(x);
        for (auto a : R) {
            const RootIndex y = phi.reflect_index(a, x);
            if (!seen[y]) {
                seen[y] = 1;
                q.push_back(y);
            }
        }
    }
    std::sort(out.begin(), out.end());
    return out;
}

// Identify a connected Coxeter graph given by its order matrix and root lengths.
inline CartanType identify_component(const std::vector<std::vector<int>>& m, const std::vector<Scalar>& norm) {
    const int r = static_cast<int>(m.size());
    auto fail = [] { return std::logic_error("carter: unrecognised Cartan matrix"); };
    if (r == 1) return {'A', 1, 0};
    std::vector<int> deg(r, 0);
    int edges = 0, c4 = 0, c5 = 0, c6 = 0, big = 0;
    for (int i = 0; i < r; ++i)
        for (int j = i + 1; j < r; ++j) {
            if (m[i][j] < 3) continue;
            ++deg[i];
            ++deg[j];
            ++edges;
            c4 += m[i][j] == 4;
            c5 += m[i][j] == 5;
            c6 += m[i][j] == 6;
            big += m[i][j] > 6;
        }
    if (edges != r - 1 || big) throw fail();
    const int branch = static_cast<int>(std::count_if(deg.begin(), deg.end(), [](int d) { return d >= 3; }));
    if (c4 + c5 + c6 > 1) throw fail();
    std::vector<int> leaves;
    for (int i = 0; i < r; ++i)
        if (deg[i] == 1) leaves.push_back(i);
    // walk along a path from a leaf, returns vertex sequence
    auto path_from = [&](int start) {
        std::vector<int> p{start};
        int prev = -1, cur = start;
        while (true) {
            int nxt = -1;
            for (int j = 0; j < r; ++j)
                if (j != cur && j != prev && m[cur][j] >= 3) nxt = j;
            if (nxt < 0) break;
            prev = cur;
            cur = nxt;
            p.push_back(cur);
        }
        return p;
    };
    if (c6) {
        if (r != 2) throw fail();
        return {'G', 2, 0};
    }
    if (c5) {
        if (branch) throw fail();
        if (r == 2) return {'I', 2, 5};
        auto p = path_from(leaves[0]);
        const bool at_end = m[p[0]][p[1]] == 5 || m[p[r - 2]][p[r - 1]] == 5;
        if (!at_end || r > 4) throw fail();
        return {'H', r, 0};
    }
    if (c4) {
        if (branch) throw fail();
        if (r == 2) return {'B', 2, 0};
        auto p = path_from(leaves[0]);
        if (m[p[r - 2]][p[r - 1]] == 4) std::reverse(p.begin(), p.end());
        if (m[p[0]][p[1]] == 4) {
            // p[0] is the end vertex of the double bond
            return {compare(norm[p[0]], norm[p[1]]) < 0 ? 'B' : 'C', r, 0};
        }
        if (r == 4 && m[p[1]][p[2]] == 4) return {'F', 4, 0};
        throw fail();
    }
    if (branch == 0) return {'A', r, 0};
    if (branch != 1) throw fail();
    int center = 0;
    for (int i = 0; i < r; ++i)
        if (deg[i] >= 3) center = i;
    if (deg[center] != 3) throw fail();
    std::vector<int> arms;
    for (int leaf : leaves) {
        int len = 0, prev = -1, cur = leaf;
        while (cur != center) {
            ++len;
            int nxt = -1;
            for (int j = 0; j < r; ++j)
                if (j != cur && j != prev && m[cur][j] >= 3) nxt = j;
            prev = cur;
            cur = nxt;
        }
        arms.push_back(len);
    }
    std::sort(arms.begin(), arms.end());
    if (arms[0] == 1 && arms[1] == 1) return {'D', r, 0};
    if (arms[0] == 1 && arms[1] == 2 && arms[2] >= 2 && arms[2] <= 4) return {'E', r, 0};
    throw fail();
}

// Irreducible components of a reflection-closed subsystem, sorted.
inline std::vector<CartanType> classify_subsystem_type(const std::vector<RootIndex>& sub, const RootSystem& phi) {
    std::vector<char> in(phi.size(), 0);
    for (auto x : sub) in[x] = 1;
    std::vector<RootIndex> pos;
    for (auto x : sub)
        if (phi.is_positive(x)) pos.push_back(x);
    std::vector<RootIndex> simple;
    for (auto a : pos) {
        bool ok = true;
        for (auto b : pos) {
            if (b == a) continue;
            const RootIndex y = phi.reflect_index(a, b);
            if (!in[y]) throw std::invalid_argument("carter: subsystem not closed under reflections");
            if (!phi.is_positive(y)) {
                ok = false;
                break;
            }
        }
        if (ok) simple.push_back(a);
    }
    const std::size_t k = simple.size();
    std::vector<int> comp(k, -1);
    int nc = 0;
    for (std::size_t s = 0; s < k; ++s) {
        if (comp[s] >= 0) continue;
        std::vector<std::size_t> stack{s};
        comp[s] = nc;
        while (!stack.empty()) {
            const std::size_t u = stack.back();
            stack.pop_back();
            for (std::size_t v = 0; v < k; ++v)
                if (comp[v] < 0 && phi.pair_order(simple[u], simple[v]) >= 3) {
                    comp[v] = nc;
                    stack.push_back(v);
                }
        }
        ++nc;
    }
    std::vector<CartanType> out;
    for (int c = 0; c < nc; ++c) {
        std::vector<RootIndex> vs;
        for (std::size_t s = 0; s < k; ++s)
            if (comp[s] == c) vs.push_back(simple[s]);
        std::vector<std::vector<int>> m(vs.size(), std::vector<int>(vs.size(), 1));
        std::vector<Scalar> norm;
        for (std::size_t i = 0; i < vs.size(); ++i) {
            norm.push_back(phi.norm2(vs[i]));
            for (std::size_t j = 0; j < vs.size(); ++j)
                if (i != j) m[i][j] = phi.pair_order(vs[i], vs[j]);
        }
        out.push_back(identify_component(m, norm));
    }
    std::sort(out.begin(), out.end());
    return out;
}

inline bool is_linearly_independent(const std::vector<RootIndex>& idx, const RootSystem& phi) {
    std::vector<Vector> vs;
    for (auto i : idx) vs.push_back(phi.root(i));
    return is_linearly_independent(vs);
}

}  // namespace carter
