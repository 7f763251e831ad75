#pragma once

#include <algorithm>
#include <numeric>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "carter/canonical.hpp"
#include "carter/factorization.hpp"
#include "carter/root_system.hpp"

namespace carter {

// Weighted graph on n vertices storing m_ij = order(t_i t_j); m_ii = 1, m_ij = 2 means no edge.
class CarterDiagram {
public:
    CarterDiagram() = default;
    explicit CarterDiagram(int n) : n_(n), m_(static_cast<std::size_t>(n) * n, 2) {
        if (n < 0) throw std::invalid_argument("carter: negative vertex count");
        for (int i = 0; i < n; ++i) at(i, i) = 1;
    }

    int n() const { return n_; }
    int order(int i, int j) const { return m_[idx(i, j)]; }
    bool edge(int i, int j) const { return i != j && order(i, j) >= 3; }
    void set_order(int i, int j, int m) {
        if (i == j) throw std::invalid_argument("carter: loop in diagram");
        if (m < 2 || m > 6) throw std::invalid_argument("carter: pair order must lie in 2..6");
        at(i, j) = m;
        at(j, i) = m;
    }
    void add_edge(int i, int j, int m = 3) { set_order(i, j, m); }

    const std::optional<std::vector<RootIndex>>& roots() const { return roots_; }
    void set_roots(std::vector<RootIndex> r) {
        if (static_cast<int>(r.size()) != n_) throw std::invalid_argument("carter: root count differs from n");
        roots_ = std::move(r);
    }
    void clear_roots() { roots_.reset(); }

    int degree(int v) const {
        int d = 0;
        for (int u = 0; u < n_; ++u) d += edge(u, v);
        return d;
    }
    std::vector<int> neighbors(int v) const {
        std::vector<int> out;
        for (int u = 0; u < n_; ++u)
            if (edge(u, v)) out.push_back(u);
        return out;
    }
    int edge_count() const {
        int e = 0;
        for (int i = 0; i < n_; ++i)
            for (int j = i + 1; j < n_; ++j) e += edge(i, j);
        return e;
    }

    // Same abstract weighted graph (roots ignored).
    bool same_matrix(const CarterDiagram& o) const { return n_ == o.n_ && m_ == o.m_; }

    // Induced subgraph on vs (in the given order), roots carried through.
    CarterDiagram induced(const std::vector<int>& vs) const {
        CarterDiagram d(static_cast<int>(vs.size()));
        for (std::size_t a = 0; a < vs.size(); ++a)
            for (std::size_t b = a + 1; b < vs.size(); ++b) d.at(a, b) = d.at(b, a) = order(vs[a], vs[b]);
        if (roots_) {
            std::vector<RootIndex> r;
            for (int v : vs) r.push_back((*roots_)[v]);
            d.roots_ = std::move(r);
        }
        return d;
    }

private:
    std::size_t idx(int i, int j) const {
        if (i < 0 || j < 0 || i >= n_ || j >= n_) throw std::out_of_range("carter: diagram vertex out of range");
        return static_cast<std::size_t>(i) * n_ + j;
    }
    int& at(std::size_t i, std::size_t j) { return m_[i * n_ + j]; }

    int n_ = 0;
    std::vector<int> m_;
    std::optional<std::vector<RootIndex>> roots_;
};

using DiagramCanonKey = std::string;

// Orders of s_a s_b read off the Cartan integers: product 0,1,2,3 -> m 2,3,4,6.
inline int order_from_cartan(const Vector& a, const Vector& b) {
    const Scalar p = cartan_pairing(a, b) * cartan_pairing(b, a);
    if (!p.is_integer()) throw std::logic_error("carter: non-integral Cartan product");
    switch (p.rational_part().num()) {
        case 0: return 2;
        case 1: return 3;
        case 2: return 4;
        case 3: return 6;
        default: throw std::logic_error("carter: Cartan product out of range");
    }
}

inline CarterDiagram diagram_of(const std::vector<RootIndex>& roots, const RootSystem& phi) {
    if (!is_linearly_independent(roots, phi)) throw std::invalid_argument("carter: diagram of dependent roots");
    const int n = static_cast<int>(roots.size());
    CarterDiagram d(n);
    std::vector<RootIndex> pos;
    for (auto r : roots) pos.push_back(phi.positive_index(r));
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j) {
            const int m = phi.pair_order(pos[i], pos[j]);
            if (phi.crystallographic() && order_from_cartan(phi.root(pos[i]), phi.root(pos[j])) != m)
                throw std::logic_error("carter: pair order disagrees with Cartan product");
            d.set_order(i, j, m);
        }
    d.set_roots(pos);
    return d;
}

inline CarterDiagram diagram_of(const ReflectionFactorization& f) { return diagram_of(f.refs, *f.ambient); }

inline CarterDiagram dynkin_diagram(const RootSystem& phi) { return diagram_of(phi.simple_indices(), phi); }

// Edge multiplicity for display: the Cartan product for Weyl groups, m - 2 otherwise.
inline int display_weight(int m, bool crystallographic) {
    if (m < 3) return 0;
    if (crystallographic) return m == 6 ? 3 : m - 2;
    return m - 2;
}

inline constexpr int max_canonical_vertices = 16;

inline ColoredMatrix as_colored_matrix(const CarterDiagram& d) {
    ColoredMatrix g(d.n());
    for (int i = 0; i < d.n(); ++i)
        for (int j = 0; j < d.n(); ++j) g.at(i, j) = d.order(i, j);
    return g;
}

inline CanonicalLabeling canonical_labeling(const CarterDiagram& d) {
    if (d.n() > max_canonical_vertices) throw std::invalid_argument("carter: diagram too large to canonicalize");
    return canonical_labeling(as_colored_matrix(d));
}

inline DiagramCanonKey canonical_form(const CarterDiagram& d) { return canonical_labeling(d).key; }

inline bool is_isomorphic(const CarterDiagram& a, const CarterDiagram& b) {
    return a.n() == b.n() && canonical_form(a) == canonical_form(b);
}

// The representative in canonical vertex order (roots permuted along).
inline CarterDiagram canonical_diagram(const CarterDiagram& d) { return d.induced(canonical_labeling(d).order); }

// Chordless cycles in normal form: smallest vertex first, smaller of its two cycle neighbours second.
inline std::vector<std::vector<int>> chordless_cycles(const CarterDiagram& d) {
    const int n = d.n();
    std::vector<std::vector<int>> out;
    std::vector<int> path;
    std::vector<char> on(n, 0);
    // extends path (whose first vertex is s) by neighbours of its last vertex
    auto extend = [&](auto&& self, int s) -> void {
        const int last = path.back();
        for (int v = s + 1; v < n; ++v) {
            if (on[v] || !d.edge(last, v)) continue;
            bool chord = false;
            for (std::size_t k = 1; k + 1 < path.size() && !chord; ++k) chord = d.edge(path[k], v);
            if (chord) continue;
            if (path.size() >= 2 && d.edge(s, v)) {
                if (path[1] < v) {
                    out.push_back(path);
                    out.back().push_back(v);
                }
                continue;
            }
            path.push_back(v);
            on[v] = 1;
            self(self, s);
            on[v] = 0;
            path.pop_back();
        }
    };
    for (int s = 0; s < n; ++s) {
        path = {s};
        on.assign(n, 0);
        on[s] = 1;
        extend(extend, s);
    }
    std::sort(out.begin(), out.end());
    return out;
}

// Every cycle subgraph has even length, i.e. the edge graph is bipartite.
inline bool all_cycles_even(const CarterDiagram& d) {
    std::vector<int> side(d.n(), -1);
    for (int s = 0; s < d.n(); ++s) {
        if (side[s] >= 0) continue;
        side[s] = 0;
        std::vector<int> stack{s};
        while (!stack.empty()) {
            const int u = stack.back();
            stack.pop_back();
            for (int v : d.neighbors(u)) {
                if (side[v] < 0) {
                    side[v] = 1 - side[u];
                    stack.push_back(v);
                } else if (side[v] == side[u]) {
                    return false;
                }
            }
        }
    }
    return true;
}

// Union-find with parity, used to solve the orientation constraints.
class ParityUnionFind {
public:
    explicit ParityUnionFind(std::size_t n) : parent_(n), parity_(n, 0) { std::iota(parent_.begin(), parent_.end(), 0); }

    std::pair<std::size_t, int> find(std::size_t x) {
        int p = 0;
        std::size_t r = x;
        while (parent_[r] != r) {
            p ^= parity_[r];
            r = parent_[r];
        }
        // path compression
        int acc = p;
        while (parent_[x] != x) {
            const std::size_t nx = parent_[x];
            const int px = parity_[x];
            parent_[x] = r;
            parity_[x] = acc;
            acc ^= px;
            x = nx;
        }
        return {r, p};
    }
    // Impose value(a) XOR value(b) = rel; false on contradiction.
    bool unite(std::size_t a, std::size_t b, int rel) {
        auto [ra, pa] = find(a);
        auto [rb, pb] = find(b);
        if (ra == rb) return (pa ^ pb) == rel;
        parent_[ra] = rb;
        parity_[ra] = pa ^ pb ^ rel;
        return true;
    }

private:
    std::vector<std::size_t> parent_;
    std::vector<int> parity_;
};

// An orientation making every chordless cycle a directed cycle exists iff the
// system "edge direction = cycle direction XOR traversal sense" is consistent.
inline bool is_cyclically_orientable(const CarterDiagram& d) {
    const int n = d.n();
    std::vector<int> edge_id(static_cast<std::size_t>(n) * n, -1);
    int ne = 0;
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j)
            if (d.edge(i, j)) edge_id[i * n + j] = edge_id[j * n + i] = ne++;
    const auto cycles = chordless_cycles(d);
    ParityUnionFind uf(ne + cycles.size());
    for (std::size_t c = 0; c < cycles.size(); ++c) {
        const auto& cyc = cycles[c];
        for (std::size_t k = 0; k < cyc.size(); ++k) {
            const int a = cyc[k], b = cyc[(k + 1) % cyc.size()];
            if (!uf.unite(static_cast<std::size_t>(edge_id[a * n + b]), ne + c, a < b ? 1 : 0)) return false;
        }
    }
    return true;
}

inline std::vector<std::vector<int>> component_vertices(const CarterDiagram& d) {
    std::vector<int> comp(d.n(), -1);
    std::vector<std::vector<int>> out;
    for (int s = 0; s < d.n(); ++s) {
        if (comp[s] >= 0) continue;
        out.emplace_back();
        std::vector<int> stack{s};
        comp[s] = static_cast<int>(out.size()) - 1;
        while (!stack.empty()) {
            const int u = stack.back();
            stack.pop_back();
            out.back().push_back(u);
            for (int v : d.neighbors(u))
                if (comp[v] < 0) {
                    comp[v] = comp[s];
                    stack.push_back(v);
                }
        }
        std::sort(out.back().begin(), out.back().end());
    }
    return out;
}

inline std::vector<CarterDiagram> connected_components(const CarterDiagram& d) {
    std::vector<CarterDiagram> out;
    for (const auto& vs : component_vertices(d)) out.push_back(d.induced(vs));
    return out;
}

inline bool is_connected(const CarterDiagram& d) { return d.n() <= 1 || component_vertices(d).size() == 1; }

inline std::vector<CartanType> diagram_type(const CarterDiagram& d, const RootSystem& phi) {
    if (!d.roots()) throw std::invalid_argument("carter: diagram type needs vertex roots");
    return classify_subsystem_type(smallest_root_subsystem(*d.roots(), phi), phi);
}

// Vertices all of whose edges have m = 4 and whose removal keeps the diagram connected.
inline std::vector<int> distinguished_vertices(const CarterDiagram& d) {
    std::vector<int> out;
    for (int v = 0; v < d.n(); ++v) {
        const auto nb = d.neighbors(v);
        if (nb.empty()) continue;
        bool all4 = true;
        for (int u : nb) all4 = all4 && d.order(u, v) == 4;
        if (!all4) continue;
        std::vector<int> rest;
        for (int u = 0; u < d.n(); ++u)
            if (u != v) rest.push_back(u);
        if (is_connected(d.induced(rest))) out.push_back(v);
    }
    return out;
}

// ---------------------------------------------------------------------------
// Predicted effect of one Hurwitz move on a diagram (vertex k of the result is
// the k-th entry of the moved tuple).

// Simply-laced rule. The moved pair is (a, b) = (t_i, t_{i+1}); the conjugated
// reflection sits at position i (forward) or i+1 (inverse).
inline CarterDiagram predict_hurwitz_simply_laced(const CarterDiagram& d, std::size_t i, Direction dir) {
    const int n = d.n();
    const int a = static_cast<int>(i), b = a + 1;
    if (b >= n) throw std::out_of_range("carter: Hurwitz move position out of range");
    CarterDiagram r(n);
    if (!d.edge(a, b)) {
        // commuting pair: the move is a swap
        std::vector<int> perm(n);
        std::iota(perm.begin(), perm.end(), 0);
        std::swap(perm[a], perm[b]);
        return d.induced(perm);
    }
    // forward: r_a = t_a t_b t_a, r_b = t_a.   inverse: r_a = t_b, r_b = t_b t_a t_b.
    const int conj = dir == Direction::forward ? a : b;
    const int kept = dir == Direction::forward ? b : a;
    const int kept_src = dir == Direction::forward ? a : b;
    for (int j = 0; j < n; ++j)
        for (int k = j + 1; k < n; ++k)
            if (j != a && j != b && k != a && k != b && d.edge(j, k)) r.set_order(j, k, 3);
    r.set_order(a, b, 3);
    for (int j = 0; j < n; ++j) {
        if (j == a || j == b) continue;
        if (d.edge(j, kept_src)) r.set_order(j, kept, 3);
        if (d.edge(j, a) != d.edge(j, b)) r.set_order(j, conj, 3);
    }
    return r;
}

// Type B rule when the short-root vertex takes part in the move, as t_i for a
// forward move or t_{i+1} for an inverse move.
inline CarterDiagram predict_hurwitz_distinguished(const CarterDiagram& d, std::size_t i, Direction dir) {
    const int n = d.n();
    const int a = static_cast<int>(i), b = a + 1;
    if (b >= n) throw std::out_of_range("carter: Hurwitz move position out of range");
    const int dist = dir == Direction::forward ? a : b;   // short vertex before the move
    const int other = dir == Direction::forward ? b : a;  // long partner
    const int dist_new = dir == Direction::forward ? b : a;
    const int conj_new = other == b ? a : b;
    CarterDiagram r(n);
    for (int j = 0; j < n; ++j)
        for (int k = j + 1; k < n; ++k)
            if (j != a && j != b && k != a && k != b) r.set_order(j, k, d.order(j, k));
    r.set_order(a, b, d.order(a, b));
    for (int j = 0; j < n; ++j) {
        if (j == a || j == b) continue;
        r.set_order(j, dist_new, d.order(j, dist));
        r.set_order(j, conj_new, d.order(j, other));
    }
    return r;
}

}  // namespace carter
