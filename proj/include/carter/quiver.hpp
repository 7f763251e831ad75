#pragma once

#include <algorithm>
#include <cstdlib>
#include <deque>
#include <map>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include "carter/canonical.hpp"
#include "carter/diagram.hpp"
#include "carter/families.hpp"
#include "carter/root_system.hpp"

namespace carter {

// Skew-symmetrizable exchange matrix b with symmetrizer d: d_i b_ij = -d_j b_ji.
class Quiver {
public:
    Quiver() = default;
    Quiver(int n, std::vector<int> b, std::vector<int> d) : n_(n), b_(std::move(b)), d_(std::move(d)) { validate(); }
    explicit Quiver(int n) : n_(n), b_(static_cast<std::size_t>(n) * n, 0), d_(n, 1) {}

    int n() const { return n_; }
    int b(int i, int j) const { return b_[idx(i, j)]; }
    int d(int i) const { return d_.at(i); }
    const std::vector<int>& symmetrizer() const { return d_; }
    const std::vector<int>& matrix() const { return b_; }
    // Sets b_ij = v and b_ji from skew-symmetrizability.
    void set_arrow(int i, int j, int v) {
        if ((v * d_[i]) % d_[j] != 0) throw std::invalid_argument("carter: entry incompatible with symmetrizer");
        b_[idx(i, j)] = v;
        b_[idx(j, i)] = -v * d_[i] / d_[j];
    }
    void set_symmetrizer(std::vector<int> d) {
        if (static_cast<int>(d.size()) != n_) throw std::invalid_argument("carter: symmetrizer size");
        d_ = std::move(d);
    }

    void validate() const {
        if (n_ < 0 || b_.size() != static_cast<std::size_t>(n_) * n_ || d_.size() != static_cast<std::size_t>(n_))
            throw std::invalid_argument("carter: quiver dimensions");
        for (int i = 0; i < n_; ++i) {
            if (d_[i] <= 0) throw std::invalid_argument("carter: symmetrizer must be positive");
            if (b(i, i) != 0) throw std::invalid_argument("carter: quiver with a loop");
            for (int j = 0; j < n_; ++j)
                if (d_[i] * b(i, j) != -d_[j] * b(j, i))
                    throw std::invalid_argument("carter: matrix is not skew-symmetrizable by d");
        }
    }

    friend bool operator==(const Quiver& x, const Quiver& y) { return x.n_ == y.n_ && x.b_ == y.b_ && x.d_ == y.d_; }

private:
    std::size_t idx(int i, int j) const {
        if (i < 0 || j < 0 || i >= n_ || j >= n_) throw std::out_of_range("carter: quiver vertex out of range");
        return static_cast<std::size_t>(i) * n_ + j;
    }
    int n_ = 0;
    std::vector<int> b_;
    std::vector<int> d_;
};

inline Quiver mutate(const Quiver& q, int k) {
    const int n = q.n();
    if (k < 0 || k >= n) throw std::out_of_range("carter: mutation vertex out of range");
    std::vector<int> b(static_cast<std::size_t>(n) * n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            if (i == k || j == k) {
                b[i * n + j] = -q.b(i, j);
            } else {
                const int bik = q.b(i, k), bkj = q.b(k, j);
                b[i * n + j] = q.b(i, j) + (std::abs(bik) * bkj + bik * std::abs(bkj)) / 2;
            }
        }
    return Quiver(n, std::move(b), q.symmetrizer());
}

// Orientation of the Dynkin diagram with arrows from lower to higher simple-root index.
inline Quiver dynkin_quiver(const RootSystem& phi) {
    const int n = static_cast<int>(phi.rank());
    const auto& s = phi.simple_indices();
    // d_i proportional to 1/|alpha_i|^2
    Scalar maxnorm = phi.norm2(s[0]);
    for (auto i : s)
        if (phi.norm2(i) > maxnorm) maxnorm = phi.norm2(i);
    std::vector<int> d(n);
    for (int i = 0; i < n; ++i) {
        const Scalar r = maxnorm / phi.norm2(s[i]);
        if (!r.is_integer()) throw std::invalid_argument("carter: no integral symmetrizer");
        d[i] = static_cast<int>(r.rational_part().num());
    }
    std::vector<int> b(static_cast<std::size_t>(n) * n, 0);
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j) {
            const Scalar aij = cartan_pairing(phi.root(s[i]), phi.root(s[j]));
            const Scalar aji = cartan_pairing(phi.root(s[j]), phi.root(s[i]));
            if (aij.is_zero()) continue;
            if (!aij.is_integer() || !aji.is_integer())
                throw std::invalid_argument("carter: non-crystallographic Cartan entry");
            b[i * n + j] = static_cast<int>(-aij.rational_part().num());
            b[j * n + i] = static_cast<int>(aji.rational_part().num());
        }
    return Quiver(n, std::move(b), std::move(d));
}

inline CanonicalLabeling canonical_labeling(const Quiver& q) {
    ColoredMatrix g(q.n());
    for (int i = 0; i < q.n(); ++i) {
        g.color[i] = q.d(i);
        for (int j = 0; j < q.n(); ++j) g.at(i, j) = q.b(i, j);
    }
    return canonical_labeling(g);
}

inline std::string canonical_form(const Quiver& q) { return canonical_labeling(q).key; }

inline Quiver relabel(const Quiver& q, const std::vector<int>& order) {
    const int n = q.n();
    std::vector<int> b(static_cast<std::size_t>(n) * n), d(n);
    for (int i = 0; i < n; ++i) {
        d[i] = q.d(order[i]);
        for (int j = 0; j < n; ++j) b[i * n + j] = q.b(order[i], order[j]);
    }
    return Quiver(n, std::move(b), std::move(d));
}

struct MutationClass {
    std::map<std::string, Quiver> members;  // canonical key -> canonical representative
    bool complete = true;
};

inline constexpr std::size_t default_mutation_cap = 1000000;

// Breadth-first closure under mutation, up to simultaneous relabeling of (b, d).
inline MutationClass mutation_class(const Quiver& q, std::size_t cap = default_mutation_cap) {
    MutationClass mc;
    std::deque<Quiver> queue;
    auto add = [&](const Quiver& x) {
        auto lab = canonical_labeling(x);
        if (mc.members.count(lab.key)) return;
        if (mc.members.size() >= cap) {
            mc.complete = false;
            return;
        }
        Quiver rep = relabel(x, lab.order);
        mc.members.emplace(lab.key, rep);
        queue.push_back(std::move(rep));
    };
    add(q);
    while (!queue.empty() && mc.complete) {
        Quiver x = std::move(queue.front());
        queue.pop_front();
        for (int k = 0; k < x.n(); ++k) add(mutate(x, k));
    }
    return mc;
}

// |b_ij b_ji| = 1, 2, 3 -> m = 3, 4, 6.
inline CarterDiagram underlying_graph(const Quiver& q) {
    CarterDiagram g(q.n());
    for (int i = 0; i < q.n(); ++i)
        for (int j = i + 1; j < q.n(); ++j) {
            if (q.b(i, j) == 0) continue;
            const int p = std::abs(q.b(i, j) * q.b(j, i));
            if (p > 3) throw std::invalid_argument("carter: quiver entry outside finite type");
            g.set_order(i, j, p == 1 ? 3 : p == 2 ? 4 : 6);
        }
    return g;
}

// ---------------------------------------------------------------------------
// Structural descriptions of the mutation classes of types A and D.

namespace detail {

inline Quiver sub_quiver(const Quiver& q, const std::vector<int>& vs) {
    const int k = static_cast<int>(vs.size());
    std::vector<int> b(static_cast<std::size_t>(k) * k), d(k);
    for (int i = 0; i < k; ++i) {
        d[i] = q.d(vs[i]);
        for (int j = 0; j < k; ++j) b[i * k + j] = q.b(vs[i], vs[j]);
    }
    return Quiver(k, std::move(b), std::move(d));
}

// The cycle c0 -> c1 -> ... -> c0 (or its reverse) is oriented.
inline bool oriented_cycle(const Quiver& q, const std::vector<int>& c) {
    int fwd = 0, bwd = 0;
    for (std::size_t k = 0; k < c.size(); ++k) {
        const int x = q.b(c[k], c[(k + 1) % c.size()]);
        fwd += x > 0;
        bwd += x < 0;
    }
    return fwd == static_cast<int>(c.size()) || bwd == static_cast<int>(c.size());
}

// Number of 3-cycles through v and the neighbours involved.
inline std::vector<std::pair<int, int>> triangles_at(const CarterDiagram& g, int v) {
    std::vector<std::pair<int, int>> t;
    const auto nb = g.neighbors(v);
    for (std::size_t a = 0; a < nb.size(); ++a)
        for (std::size_t b = a + 1; b < nb.size(); ++b)
            if (g.edge(nb[a], nb[b])) t.push_back({nb[a], nb[b]});
    return t;
}

}  // namespace detail

// Conditions (I)-(IV) describing the type A mutation class (connected, simply laced).
inline bool in_type_A_class(const Quiver& q) {
    if (q.n() == 0) return false;
    for (int i = 0; i < q.n(); ++i)
        for (int j = 0; j < q.n(); ++j)
            if (std::abs(q.b(i, j)) > 1 || q.d(i) != 1) return false;
    const CarterDiagram g = underlying_graph(q);
    if (!is_connected(g)) return false;
    for (const auto& c : chordless_cycles(g))
        if (c.size() != 3 || !detail::oriented_cycle(q, c)) return false;
    for (int v = 0; v < q.n(); ++v) {
        const int val = g.degree(v);
        if (val > 4) return false;
        const auto tri = detail::triangles_at(g, v);
        if (val == 4) {
            if (tri.size() != 2) return false;
            std::set<int> cover{tri[0].first, tri[0].second, tri[1].first, tri[1].second};
            if (cover.size() != 4) return false;
        }
        if (val == 3 && tri.size() != 1) return false;
    }
    return true;
}

// Valency at most 2, and in a 3-cycle when it equals 2.
inline bool is_connecting_vertex(const Quiver& q, int v) {
    const CarterDiagram g = underlying_graph(q);
    const int val = g.degree(v);
    if (val > 2) return false;
    return val < 2 || !detail::triangles_at(g, v).empty();
}

enum class VatneShape { none, D1, D2, D3, D4 };

namespace detail {

// Splits q minus `removed` (and minus the arrow between s1 and s2 when cut) into
// components; requires exactly two, containing s1 and s2, each in the type A class
// with s1 (s2) connecting.
inline bool two_attached_A_parts(const Quiver& q, const std::vector<int>& removed, int s1, int s2, bool cut) {
    std::vector<int> keep;
    for (int v = 0; v < q.n(); ++v)
        if (std::find(removed.begin(), removed.end(), v) == removed.end()) keep.push_back(v);
    Quiver rest = sub_quiver(q, keep);
    auto pos = [&](int v) { return static_cast<int>(std::find(keep.begin(), keep.end(), v) - keep.begin()); };
    const int p1 = pos(s1), p2 = pos(s2);
    if (cut) rest.set_arrow(p1, p2, 0);
    const auto comps = component_vertices(underlying_graph(rest));
    if (comps.size() != 2) return false;
    for (const auto& c : comps) {
        const bool has1 = std::find(c.begin(), c.end(), p1) != c.end();
        const bool has2 = std::find(c.begin(), c.end(), p2) != c.end();
        if (has1 == has2) return false;
        Quiver part = sub_quiver(rest, c);
        const int s = static_cast<int>(std::find(c.begin(), c.end(), has1 ? p1 : p2) - c.begin());
        if (!in_type_A_class(part) || !is_connecting_vertex(part, s)) return false;
    }
    return true;
}

}  // namespace detail

// Matches q against the four shapes of the type D mutation class.
inline VatneShape vatne_shape(const Quiver& q) {
    const int n = q.n();
    if (n < 4) return VatneShape::none;
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            if (std::abs(q.b(i, j)) > 1 || q.d(i) != 1) return VatneShape::none;
    const CarterDiagram g = underlying_graph(q);
    if (!is_connected(g)) return VatneShape::none;
    // (D1): two leaves a, b at v; the rest is of type A with v connecting
    for (int v = 0; v < n; ++v) {
        std::vector<int> leaves;
        for (int u : g.neighbors(v))
            if (g.degree(u) == 1) leaves.push_back(u);
        for (std::size_t x = 0; x < leaves.size(); ++x)
            for (std::size_t y = x + 1; y < leaves.size(); ++y) {
                std::vector<int> keep;
                for (int u = 0; u < n; ++u)
                    if (u != leaves[x] && u != leaves[y]) keep.push_back(u);
                Quiver rest = detail::sub_quiver(q, keep);
                const int pv = static_cast<int>(std::find(keep.begin(), keep.end(), v) - keep.begin());
                if (in_type_A_class(rest) && is_connecting_vertex(rest, pv)) return VatneShape::D1;
            }
    }
    // (D2), (D3): a, b with neighbourhood {v1, v2}
    for (int a = 0; a < n; ++a)
        for (int b = a + 1; b < n; ++b) {
            const auto na = g.neighbors(a), nbv = g.neighbors(b);
            if (na.size() != 2 || na != nbv) continue;
            for (int flip = 0; flip < 2; ++flip) {
                const int v1 = flip ? na[1] : na[0], v2 = flip ? na[0] : na[1];
                // v2 -> a -> v1 and v2 -> b -> v1
                if (!(q.b(v2, a) > 0 && q.b(a, v1) > 0 && q.b(v2, b) > 0 && q.b(b, v1) > 0)) continue;
                if (q.b(v1, v2) > 0 && detail::two_attached_A_parts(q, {a, b}, v1, v2, true)) return VatneShape::D2;
            }
            // v1 -> b -> v2 -> a -> v1: a and b point opposite ways around the square
            const int v1 = na[0], v2 = na[1];
            const bool square = (q.b(v1, b) > 0 && q.b(b, v2) > 0 && q.b(v2, a) > 0 && q.b(a, v1) > 0) ||
                                (q.b(v1, a) > 0 && q.b(a, v2) > 0 && q.b(v2, b) > 0 && q.b(b, v1) > 0);
            if (square && !g.edge(v1, v2) && detail::two_attached_A_parts(q, {a, b}, v1, v2, false))
                return VatneShape::D3;
        }
    // (D4): central oriented cycle with spikes
    for (const auto& c : chordless_cycles(g)) {
        if (!detail::oriented_cycle(q, c)) continue;
        const int k = static_cast<int>(c.size());
        std::vector<char> on(n, 0);
        for (int v : c) on[v] = 1;
        bool ok = true;
        std::vector<int> spikes;
        std::vector<char> spike(n, 0);
        for (int v : c) {
            for (int u : g.neighbors(v)) {
                if (on[u] || spike[u]) continue;
                // u must close an oriented triangle on a cycle arrow and touch the cycle only there
                std::vector<int> touch;
                for (int w : g.neighbors(u))
                    if (on[w]) touch.push_back(w);
                if (touch.size() != 2) {
                    ok = false;
                    break;
                }
                const int x = touch[0], y = touch[1];
                const int px = static_cast<int>(std::find(c.begin(), c.end(), x) - c.begin());
                const int py = static_cast<int>(std::find(c.begin(), c.end(), y) - c.begin());
                const bool consecutive = (px + 1) % k == py || (py + 1) % k == px;
                if (!consecutive || !detail::oriented_cycle(q, {x, y, u})) {
                    ok = false;
                    break;
                }
                spike[u] = 1;
                spikes.push_back(u);
            }
            if (!ok) break;
        }
        if (!ok) continue;
        // no two spikes on the same arrow
        std::set<std::pair<int, int>> arrows;
        for (int u : spikes) {
            std::vector<int> touch;
            for (int w : g.neighbors(u))
                if (on[w]) touch.push_back(w);
            if (!arrows.insert({touch[0], touch[1]}).second) ok = false;
        }
        if (!ok) continue;
        std::vector<int> keep;
        for (int v = 0; v < n; ++v)
            if (!on[v]) keep.push_back(v);
        if (keep.empty()) return VatneShape::D4;
        Quiver rest = detail::sub_quiver(q, keep);
        const auto comps = component_vertices(underlying_graph(rest));
        for (const auto& comp : comps) {
            int hits = 0, sp = -1;
            for (int p = 0; p < static_cast<int>(comp.size()); ++p)
                if (spike[keep[comp[p]]]) {
                    ++hits;
                    sp = p;
                }
            Quiver part = detail::sub_quiver(rest, comp);
            if (hits != 1 || !in_type_A_class(part) || !is_connecting_vertex(part, sp)) ok = false;
        }
        if (ok) return VatneShape::D4;
    }
    return VatneShape::none;
}

// ---------------------------------------------------------------------------
// Comparison of a mutation class with a Carter atlas.

struct Theorem1Report {
    CartanType type;
    bool pass = false;
    bool incomplete = false;
    std::size_t class_size = 0;
    std::size_t atlas_size = 0;
    std::vector<CarterDiagram> missing;                  // orientable atlas entries never realized
    std::vector<CarterDiagram> extra;                    // realized graphs outside the atlas
    std::vector<CarterDiagram> not_orientable_realized;  // realized but not cyclically orientable
};

inline Theorem1Report compare_with_atlas(const MutationClass& mc, const DiagramAtlas& atlas) {
    Theorem1Report r;
    r.type = atlas.type;
    r.class_size = mc.members.size();
    r.atlas_size = atlas.size();
    r.incomplete = !mc.complete || atlas.incomplete;
    std::set<DiagramCanonKey> realized;
    std::map<DiagramCanonKey, CarterDiagram> realized_graphs;
    for (const auto& [k, q] : mc.members) {
        CarterDiagram g = underlying_graph(q);
        realized_graphs.emplace(canonical_form(g), canonical_diagram(g));
    }
    for (const auto& [k, g] : realized_graphs) {
        auto it = atlas.entries.find(k);
        if (it == atlas.entries.end()) r.extra.push_back(g);
        else if (!it->second.cyclically_orientable) r.not_orientable_realized.push_back(g);
    }
    for (const auto& [k, e] : atlas.entries)
        if (e.cyclically_orientable && !realized_graphs.count(k)) r.missing.push_back(e.diagram);
    r.pass = !r.incomplete && r.missing.empty() && r.extra.empty() && r.not_orientable_realized.empty();
    return r;
}

// Atlas used for the comparison: the constructive generators for A, B, D and the
// subset oracle for the remaining Weyl types.
inline DiagramAtlas default_atlas(const RootSystemPtr& phi) {
    switch (phi->type().family) {
        case 'A': return gen_type_A(phi->type().rank, phi);
        case 'B': return gen_type_B(phi->type().rank, phi);
        case 'D': return gen_type_D(phi->type().rank, phi);
        default: return enumerate_by_subsets(phi, true);
    }
}

inline Theorem1Report check_theorem1(const RootSystemPtr& phi, const DiagramAtlas& atlas,
                                     std::size_t cap = default_mutation_cap) {
    if (!phi->crystallographic()) throw std::invalid_argument("carter: quiver comparison needs a Weyl group");
    return compare_with_atlas(mutation_class(dynkin_quiver(*phi), cap), atlas);
}

inline Theorem1Report check_theorem1(char family, int rank, std::size_t cap = default_mutation_cap) {
    auto phi = build_root_system(family, rank);
    return check_theorem1(phi, default_atlas(phi), cap);
}

}  // namespace carter
