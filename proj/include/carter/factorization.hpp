#pragma once

#include <algorithm>
#include <cstdint>
#include <functional>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "carter/root_system.hpp"

namespace carter {

// Ordered tuple of reflections, each named by its positive root.
struct ReflectionFactorization {
    RootSystemPtr ambient;
    std::vector<RootIndex> refs;

    ReflectionFactorization() = default;
    ReflectionFactorization(RootSystemPtr phi, std::vector<RootIndex> r) : ambient(std::move(phi)), refs(std::move(r)) {
        if (!ambient) throw std::invalid_argument("carter: factorization without ambient system");
        for (auto& x : refs) {
            if (x >= ambient->size()) throw std::out_of_range("carter: root index out of range");
            x = ambient->positive_index(x);
        }
    }

    std::size_t size() const { return refs.size(); }
    friend bool operator==(const ReflectionFactorization& a, const ReflectionFactorization& b) {
        return a.ambient->tag() == b.ambient->tag() && a.refs == b.refs;
    }
    friend bool operator<(const ReflectionFactorization& a, const ReflectionFactorization& b) { return a.refs < b.refs; }
};

inline WeylElement product(const ReflectionFactorization& f) {
    WeylElement w = WeylElement::identity(*f.ambient);
    for (auto r : f.refs) w = compose(w, reflection_of(r, *f.ambient));
    return w;
}

inline bool is_reduced(const ReflectionFactorization& f) { return is_linearly_independent(f.refs, *f.ambient); }

// Matrix of w on the simple-root basis: column j holds the coordinates of w(alpha_j).
inline std::vector<Vector> simple_matrix(const WeylElement& w, const RootSystem& phi) {
    const std::size_t n = phi.rank();
    std::vector<Vector> m(n, Vector(n));
    for (std::size_t j = 0; j < n; ++j) {
        const Vector& c = phi.simple_coords(w(phi.simple_indices()[j]));
        for (std::size_t i = 0; i < n; ++i) m[i][j] = c[i];
    }
    return m;
}

inline Scalar trace(const WeylElement& w, const RootSystem& phi) {
    Scalar t;
    for (std::size_t j = 0; j < phi.rank(); ++j) t += phi.simple_coords(w(phi.simple_indices()[j]))[j];
    return t;
}

// Minimal number of reflections with product w, by breadth-first search over the group.
inline std::size_t reflection_length_bfs(const WeylElement& w, const RootSystem& phi) {
    std::vector<WeylElement> refl;
    for (std::size_t a = 0; a < phi.num_positive(); ++a) refl.push_back(reflection_of(a, phi));
    std::unordered_set<WeylElement, WeylElementHash> seen;
    std::vector<WeylElement> layer{WeylElement::identity(phi)};
    seen.insert(layer[0]);
    for (std::size_t k = 0;; ++k) {
        for (const auto& x : layer)
            if (x == w) return k;
        std::vector<WeylElement> next;
        for (const auto& x : layer)
            for (const auto& t : refl) {
                WeylElement y = compose(x, t);
                if (seen.insert(y).second) next.push_back(std::move(y));
            }
        if (next.empty()) throw std::logic_error("carter: element not in the reflection group");
        layer = std::move(next);
    }
}

// Codimension of the fixed space for Weyl groups; breadth-first search otherwise.
inline std::size_t reflection_length(const WeylElement& w, const RootSystem& phi) {
    if (w.tag() != phi.tag()) throw std::invalid_argument("carter: element of another ambient system");
    if (!phi.crystallographic()) return reflection_length_bfs(w, phi);
    auto m = simple_matrix(w, phi);
    for (std::size_t i = 0; i < m.size(); ++i) m[i][i] -= Scalar(1);
    return rank_of(m);
}

inline bool is_quasi_coxeter(const ReflectionFactorization& f) {
    const RootSystem& phi = *f.ambient;
    if (f.size() != phi.rank()) throw std::invalid_argument("carter: quasi-Coxeter test needs rank-many reflections");
    if (!is_reduced(f)) throw std::invalid_argument("carter: quasi-Coxeter test needs a reduced factorization");
    return smallest_root_subsystem(f.refs, phi).size() == phi.size();
}

// Direct form of the definition: the reflections generate a group of order |W|.
inline std::optional<bool> is_quasi_coxeter_by_closure(const ReflectionFactorization& f, std::size_t cap) {
    std::vector<WeylElement> gens;
    for (auto r : f.refs) gens.push_back(reflection_of(r, *f.ambient));
    auto c = subgroup_closure(*f.ambient, gens, cap);
    if (!c) return std::nullopt;
    return c->order == weyl_group_order(*f.ambient);
}

enum class Direction { forward, inverse };

// sigma_i on positions i, i+1 (0-based).
//   forward: (a, b) -> (a b a, a)        inverse: (a, b) -> (b, b a b)
inline void hurwitz_move_inplace(std::vector<RootIndex>& t, std::size_t i, Direction dir, const RootSystem& phi) {
    if (i + 1 >= t.size()) throw std::out_of_range("carter: Hurwitz move position out of range");
    const RootIndex a = t[i], b = t[i + 1];
    if (dir == Direction::forward) {
        t[i] = phi.positive_index(phi.reflect_index(a, b));
        t[i + 1] = a;
    } else {
        t[i] = b;
        t[i + 1] = phi.positive_index(phi.reflect_index(b, a));
    }
}

inline ReflectionFactorization hurwitz_move(const ReflectionFactorization& f, std::size_t i, Direction dir) {
    ReflectionFactorization g = f;
    hurwitz_move_inplace(g.refs, i, dir, *f.ambient);
    return g;
}

inline ReflectionFactorization coxeter_factorization(const RootSystemPtr& phi) {
    return ReflectionFactorization(phi, phi->simple_indices());
}

namespace detail {

// Open-addressing set of nonzero 64-bit keys.
class FlatSet64 {
public:
    explicit FlatSet64(std::size_t expected = 1024) {
        std::size_t cap = 16;
        while (cap < expected * 2) cap <<= 1;
        slots_.assign(cap, 0);
    }
    bool insert(std::uint64_t key) {
        if ((size_ + 1) * 10 > slots_.size() * 7) grow();
        return place(slots_, key);
    }
    std::size_t size() const { return size_; }

private:
    static std::size_t mix(std::uint64_t x) {
        x ^= x >> 33;
        x *= 0xff51afd7ed558ccdull;
        x ^= x >> 33;
        x *= 0xc4ceb9fe1a85ec53ull;
        x ^= x >> 33;
        return static_cast<std::size_t>(x);
    }
    bool place(std::vector<std::uint64_t>& s, std::uint64_t key) {
        const std::size_t mask = s.size() - 1;
        for (std::size_t h = mix(key) & mask;; h = (h + 1) & mask) {
            if (s[h] == key) return false;
            if (s[h] == 0) {
                s[h] = key;
                ++size_;
                return true;
            }
        }
    }
    void grow() {
        std::vector<std::uint64_t> bigger(slots_.size() * 2, 0);
        size_ = 0;
        for (auto k : slots_)
            if (k) place(bigger, k);
        slots_.swap(bigger);
    }
    std::vector<std::uint64_t> slots_;
    std::size_t size_ = 0;
};

inline bool packable(std::size_t len, const RootSystem& phi) { return len <= 8 && phi.num_positive() < 255; }

inline std::uint64_t pack(const std::vector<RootIndex>& t) {
    std::uint64_t k = 0;
    for (std::size_t i = 0; i < t.size(); ++i) k |= static_cast<std::uint64_t>(t[i] + 1) << (8 * i);
    return k;
}

inline void unpack(std::uint64_t k, std::vector<RootIndex>& t) {
    for (std::size_t i = 0; i < t.size(); ++i) t[i] = static_cast<RootIndex>(((k >> (8 * i)) & 0xff) - 1);
}

}  // namespace detail

// Breadth-first traversal of the Hurwitz orbit of f. Calls visit(tuple) once per
// orbit point in discovery order; moves are tried as sigma_1, sigma_1^-1, sigma_2, ...
// Returns false if the orbit has more than cap points (traversal stops there).
inline bool for_each_in_hurwitz_orbit(const ReflectionFactorization& f, std::size_t cap,
                                      const std::function<void(const std::vector<RootIndex>&)>& visit) {
    const RootSystem& phi = *f.ambient;
    const std::size_t len = f.size();
    std::vector<RootIndex> cur = f.refs, next;
    if (detail::packable(len, phi)) {
        detail::FlatSet64 seen;
        std::vector<std::uint64_t> order{detail::pack(cur)};
        seen.insert(order[0]);
        for (std::size_t head = 0; head < order.size(); ++head) {
            detail::unpack(order[head], cur);
            visit(cur);
            for (std::size_t i = 0; i + 1 < len; ++i)
                for (Direction d : {Direction::forward, Direction::inverse}) {
                    next = cur;
                    hurwitz_move_inplace(next, i, d, phi);
                    const std::uint64_t k = detail::pack(next);
                    if (seen.insert(k)) {
                        if (seen.size() > cap) return false;
                        order.push_back(k);
                    }
                }
        }
        return true;
    }
    std::unordered_set<std::vector<RootIndex>, detail::VecHash> seen{cur};
    std::vector<std::vector<RootIndex>> order{cur};
    for (std::size_t head = 0; head < order.size(); ++head) {
        cur = order[head];
        visit(cur);
        for (std::size_t i = 0; i + 1 < len; ++i)
            for (Direction d : {Direction::forward, Direction::inverse}) {
                next = cur;
                hurwitz_move_inplace(next, i, d, phi);
                if (seen.insert(next).second) {
                    if (seen.size() > cap) return false;
                    order.push_back(next);
                }
            }
    }
    return true;
}

inline constexpr std::size_t default_orbit_cap = 1000000;

// The orbit as a sorted list, or nullopt on overflow.
inline std::optional<std::vector<ReflectionFactorization>> hurwitz_orbit(const ReflectionFactorization& f,
                                                                         std::size_t cap = default_orbit_cap) {
    if (!is_reduced(f)) throw std::invalid_argument("carter: Hurwitz orbit of a non-reduced factorization");
    std::vector<ReflectionFactorization> out;
    const bool ok = for_each_in_hurwitz_orbit(f, cap, [&](const std::vector<RootIndex>& t) {
        out.emplace_back(f.ambient, t);
    });
    if (!ok) return std::nullopt;
    std::sort(out.begin(), out.end());
    return out;
}

// ---------------------------------------------------------------------------
// Signed-permutation text form for classical types (display and fixtures).
//   B/C/D: e_i -> (i,-i), e_i - e_j -> (i,j)(-i,-j), e_i + e_j -> (i,-j)(-i,j)
//   A:     e_i - e_j -> (i,j)

inline std::string reflection_text(const RootSystem& phi, RootIndex r) {
    const Vector& v = phi.root(phi.positive_index(r));
    std::vector<std::size_t> nz;
    for (std::size_t k = 0; k < v.size(); ++k)
        if (!v[k].is_zero()) nz.push_back(k);
    const char fam = phi.type().family;
    if (fam != 'A' && fam != 'B' && fam != 'C' && fam != 'D')
        throw std::invalid_argument("carter: signed-permutation text needs a classical type");
    const std::string i = std::to_string(nz[0] + 1);
    if (nz.size() == 1) return "(" + i + ",-" + i + ")";
    const std::string j = std::to_string(nz[1] + 1);
    if (fam == 'A') return "(" + i + "," + j + ")";
    if (v[nz[1]].sign() < 0) return "(" + i + "," + j + ")(-" + i + ",-" + j + ")";
    return "(" + i + ",-" + j + ")(-" + i + "," + j + ")";
}

inline std::string factorization_text(const ReflectionFactorization& f) {
    std::string s = f.ambient->label() + ":";
    for (auto r : f.refs) s += " " + reflection_text(*f.ambient, r);
    return s;
}

// Inverse of factorization_text for a given ambient system.
inline ReflectionFactorization parse_factorization_text(const RootSystemPtr& phi, const std::string& text) {
    std::string body = text;
    if (auto colon = body.find(':'); colon != std::string::npos) body = body.substr(colon + 1);
    std::unordered_map<std::string, RootIndex> by_text;
    for (std::size_t a = 0; a < phi->num_positive(); ++a) by_text.emplace(reflection_text(*phi, a), a);
    std::vector<RootIndex> refs;
    std::istringstream in(body);
    std::string tok;
    while (in >> tok) {
        auto it = by_text.find(tok);
        if (it == by_text.end()) throw std::invalid_argument("carter: unknown reflection '" + tok + "'");
        refs.push_back(it->second);
    }
    return ReflectionFactorization(phi, refs);
}

}  // namespace carter
