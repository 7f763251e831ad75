#pragma once

#include <algorithm>
#include <cstdint>
#include <cstdlib>
#include <functional>
#include <map>
#include <mutex>
#include <random>
#include <set>
#include <stdexcept>
#include <string>
#include <thread>
#include <unordered_map>
#include <utility>
#include <vector>

#include "carter/diagram.hpp"
#include "carter/factorization.hpp"
#include "carter/root_system.hpp"

namespace carter {

struct AtlasEntry {
    CarterDiagram diagram;  // canonical vertex order; roots() is the witness when known
    bool admissible = false;
    bool cyclically_orientable = false;
    std::vector<CartanType> type;
};

struct DiagramAtlas {
    CartanType type;
    std::string method;
    std::map<DiagramCanonKey, AtlasEntry> entries;
    bool incomplete = false;   // a cap was hit
    bool lower_bound = false;  // completeness not certified

    std::size_t size() const { return entries.size(); }
    bool contains(const CarterDiagram& d) const { return entries.count(canonical_form(d)) > 0; }
    std::set<DiagramCanonKey> keys() const {
        std::set<DiagramCanonKey> k;
        for (const auto& [key, e] : entries) k.insert(key);
        return k;
    }
    std::size_t count_admissible() const {
        std::size_t c = 0;
        for (const auto& [k, e] : entries) c += e.admissible;
        return c;
    }
    std::size_t count_orientable() const {
        std::size_t c = 0;
        for (const auto& [k, e] : entries) c += e.cyclically_orientable;
        return c;
    }
};

inline AtlasEntry make_entry(const CarterDiagram& d) {
    AtlasEntry e;
    e.diagram = canonical_diagram(d);
    e.admissible = all_cycles_even(d);
    e.cyclically_orientable = is_cyclically_orientable(d);
    return e;
}

// Keeps the entry whose witness, as a sorted root set, is lexicographically smallest.
inline void atlas_insert(DiagramAtlas& atlas, const DiagramCanonKey& key, AtlasEntry e) {
    auto sorted_roots = [](const AtlasEntry& x) {
        std::vector<RootIndex> r = x.diagram.roots().value_or(std::vector<RootIndex>{});
        std::sort(r.begin(), r.end());
        return r;
    };
    auto it = atlas.entries.find(key);
    if (it == atlas.entries.end()) {
        atlas.entries.emplace(key, std::move(e));
    } else if (e.diagram.roots() && (!it->second.diagram.roots() || sorted_roots(e) < sorted_roots(it->second))) {
        it->second = std::move(e);
    }
}

// ---------------------------------------------------------------------------
// Block decompositions: edge-disjoint complete subgraphs with pairwise
// intersections of size <= 1 and every vertex in at most two of them.

struct BlockDecomposition {
    std::vector<std::vector<int>> blocks;

    int weight() const {
        int w = 0;
        for (const auto& b : blocks) w += static_cast<int>(b.size()) - 1;
        return w;
    }
};

// All decompositions of d whose weight sum(|block| - 1) equals target.
inline std::vector<BlockDecomposition> block_decompositions(const CarterDiagram& d, int target) {
    const int n = d.n();
    std::vector<std::vector<int>> cliques;
    for (std::uint32_t mask = 1; mask < (1u << n); ++mask) {
        if (__builtin_popcount(mask) < 2) continue;
        std::vector<int> vs;
        for (int v = 0; v < n; ++v)
            if (mask >> v & 1) vs.push_back(v);
        bool complete = true;
        for (std::size_t a = 0; a < vs.size() && complete; ++a)
            for (std::size_t b = a + 1; b < vs.size() && complete; ++b) complete = d.edge(vs[a], vs[b]);
        if (complete) cliques.push_back(vs);
    }
    std::vector<BlockDecomposition> out;
    std::vector<std::vector<char>> covered(n, std::vector<char>(n, 0));
    std::vector<int> member(n, 0);
    BlockDecomposition cur;
    auto rec = [&](auto&& self) -> void {
        int ei = -1, ej = -1;
        for (int i = 0; i < n && ei < 0; ++i)
            for (int j = i + 1; j < n; ++j)
                if (d.edge(i, j) && !covered[i][j]) {
                    ei = i;
                    ej = j;
                    break;
                }
        if (ei < 0) {
            if (cur.weight() == target) {
                // a lone vertex needs no block; otherwise every vertex must be covered
                bool every = true;
                for (int v = 0; v < n; ++v) every = every && (member[v] > 0 || n == 1);
                if (every) out.push_back(cur);
            }
            return;
        }
        for (const auto& c : cliques) {
            if (std::find(c.begin(), c.end(), ei) == c.end() || std::find(c.begin(), c.end(), ej) == c.end())
                continue;
            bool ok = true;
            for (std::size_t a = 0; a < c.size() && ok; ++a) {
                ok = member[c[a]] < 2;
                for (std::size_t b = a + 1; b < c.size() && ok; ++b) ok = !covered[c[a]][c[b]];
            }
            if (!ok) continue;
            for (std::size_t a = 0; a < c.size(); ++a) {
                ++member[c[a]];
                for (std::size_t b = a + 1; b < c.size(); ++b) covered[c[a]][c[b]] = covered[c[b]][c[a]] = 1;
            }
            cur.blocks.push_back(c);
            self(self);
            cur.blocks.pop_back();
            for (std::size_t a = 0; a < c.size(); ++a) {
                --member[c[a]];
                for (std::size_t b = a + 1; b < c.size(); ++b) covered[c[a]][c[b]] = covered[c[b]][c[a]] = 0;
            }
        }
    };
    rec(rec);
    return out;
}

// ---------------------------------------------------------------------------
// Kluitmann's construction of the diagrams A^{n,m}.

namespace detail {

struct CliqueHypergraph {
    int vertices = 0;
    std::vector<std::vector<int>> cliques;
    std::vector<int> member;      // number of cliques containing each vertex
    std::vector<int> clique_of;   // a clique containing the vertex (meaningful when member == 1)

    int excess() const {
        int s = 0;
        for (const auto& c : cliques) s += static_cast<int>(c.size()) - 1;
        return s - (vertices - 1);
    }
    CarterDiagram graph() const {
        CarterDiagram d(vertices);
        for (const auto& c : cliques)
            for (std::size_t a = 0; a < c.size(); ++a)
                for (std::size_t b = a + 1; b < c.size(); ++b) d.add_edge(c[a], c[b]);
        return d;
    }
    // Canonical key of the vertex-clique incidence structure.
    std::string key() const {
        const int total = vertices + static_cast<int>(cliques.size());
        ColoredMatrix g(total);
        for (int c = 0; c < static_cast<int>(cliques.size()); ++c) {
            g.color[vertices + c] = 1;
            for (int v : cliques[c]) g.at(v, vertices + c) = g.at(vertices + c, v) = 1;
        }
        return canonical_labeling(g).key;
    }
};

// All connected unions of complete graphs on mp vertices satisfying (i)-(iii)
// with sum(|block| - 1) = (mp - 1) + excess.
inline std::vector<CarterDiagram> kluitmann_base(int mp, int excess) {
    std::vector<CarterDiagram> out;
    if (mp == 1) {
        if (excess == 0) out.emplace_back(1);
        return out;
    }
    std::set<std::string> seen_states, seen_graphs;
    std::vector<CliqueHypergraph> frontier;
    for (int s = 2; s <= mp; ++s) {
        CliqueHypergraph h;
        h.vertices = s;
        h.cliques.push_back({});
        for (int v = 0; v < s; ++v) h.cliques[0].push_back(v);
        h.member.assign(s, 1);
        h.clique_of.assign(s, 0);
        if (seen_states.insert(h.key()).second) frontier.push_back(std::move(h));
    }
    while (!frontier.empty()) {
        std::vector<CliqueHypergraph> next;
        for (const auto& h : frontier) {
            if (h.vertices == mp && h.excess() == excess) {
                CarterDiagram g = h.graph();
                if (seen_graphs.insert(canonical_form(g)).second) out.push_back(g);
            }
            std::vector<int> eligible;
            for (int v = 0; v < h.vertices; ++v)
                if (h.member[v] == 1) eligible.push_back(v);
            const int room = mp - h.vertices, slack = excess - h.excess();
            // choose j shared vertices (distinct cliques), then s - j new vertices
            std::vector<int> chosen;
            auto pick = [&](auto&& self, std::size_t start) -> void {
                const int j = static_cast<int>(chosen.size());
                if (j >= 1 && j - 1 <= slack) {
                    for (int fresh = 0; fresh <= room; ++fresh) {
                        if (j + fresh < 2) continue;
                        CliqueHypergraph g = h;
                        std::vector<int> c = chosen;
                        for (int k = 0; k < fresh; ++k) {
                            c.push_back(g.vertices++);
                            g.member.push_back(0);
                            g.clique_of.push_back(0);
                        }
                        for (int v : c) {
                            ++g.member[v];
                            g.clique_of[v] = static_cast<int>(g.cliques.size());
                        }
                        g.cliques.push_back(c);
                        if (seen_states.insert(g.key()).second) next.push_back(std::move(g));
                    }
                }
                if (j - 1 >= slack) return;  // one more shared vertex would exceed the target
                for (std::size_t k = start; k < eligible.size(); ++k) {
                    const int v = eligible[k];
                    bool clash = false;
                    for (int u : chosen) clash = clash || h.clique_of[u] == h.clique_of[v];
                    if (clash) continue;
                    chosen.push_back(v);
                    self(self, k + 1);
                    chosen.pop_back();
                }
            };
            pick(pick, 0);
        }
        frontier = std::move(next);
    }
    return out;
}

}  // namespace detail

// The set A^{n,m} as canonical representatives sorted by key.
inline std::vector<CarterDiagram> gen_kluitmann(int n, int m) {
    if (n < 1 || m < n) throw std::invalid_argument("carter: gen_kluitmann needs m >= n >= 1");
    if (m > max_canonical_vertices) throw std::invalid_argument("carter: gen_kluitmann size too large");
    std::map<DiagramCanonKey, CarterDiagram> result;
    for (int mp = n; mp <= m; ++mp) {
        std::map<DiagramCanonKey, CarterDiagram> level;
        for (auto& g : detail::kluitmann_base(mp, mp - n)) level.emplace(canonical_form(g), g);
        for (int extra = mp; extra < m; ++extra) {
            std::map<DiagramCanonKey, CarterDiagram> grown;
            for (const auto& [k, g] : level)
                for (int v = 0; v < g.n(); ++v) {
                    CarterDiagram h(g.n() + 1);
                    for (int a = 0; a < g.n(); ++a)
                        for (int b = a + 1; b < g.n(); ++b) h.set_order(a, b, g.order(a, b));
                    for (int u : g.neighbors(v)) h.add_edge(u, g.n());
                    grown.emplace(canonical_form(h), h);
                }
            level = std::move(grown);
        }
        for (auto& [k, g] : level) result.emplace(k, canonical_diagram(g));
    }
    std::vector<CarterDiagram> out;
    for (auto& [k, g] : result) out.push_back(g);
    return out;
}

// ---------------------------------------------------------------------------
// Transposition realizations.

using Transposition = std::pair<int, int>;

// A tuple of transpositions with t_i t_j != t_j t_i exactly along the edges of d
// (equal transpositions allowed only for non-adjacent vertices when allow_repeat).
// Uses points 0..points-1, all of which must occur, and the transpositions must
// connect them. If leaf_vertex >= 0 that vertex gets (0, x) and point 0 occurs nowhere else.
inline std::optional<std::vector<Transposition>> realize_transpositions(const CarterDiagram& d, int points,
                                                                      bool allow_repeat, int leaf_vertex = -1) {
    const int n = d.n();
    if (n == 0) return std::vector<Transposition>{};
    if (!is_connected(d)) return std::nullopt;
    // BFS order from the start vertex
    const int start = leaf_vertex >= 0 ? leaf_vertex : 0;
    std::vector<int> order{start}, parent(n, -1);
    std::vector<char> seen(n, 0);
    seen[start] = 1;
    for (std::size_t h = 0; h < order.size(); ++h)
        for (int u : d.neighbors(order[h]))
            if (!seen[u]) {
                seen[u] = 1;
                parent[u] = order[h];
                order.push_back(u);
            }
    std::vector<Transposition> t(n, {-1, -1});
    std::vector<int> used_count(points, 0);
    int used_points = 0;
    auto shares = [](const Transposition& a, const Transposition& b) {
        return (a.first == b.first) + (a.first == b.second) + (a.second == b.first) + (a.second == b.second);
    };
    std::optional<std::vector<Transposition>> found;
    auto rec = [&](auto&& self, std::size_t k) -> void {
        if (found) return;
        if (k == order.size()) {
            if (used_points != points) return;
            // connectivity of the point graph
            std::vector<int> comp(points);
            for (int p = 0; p < points; ++p) comp[p] = p;
            std::function<int(int)> f = [&](int x) { return comp[x] == x ? x : comp[x] = f(comp[x]); };
            for (auto& [a, b] : t) comp[f(a)] = f(b);
            for (int p = 1; p < points; ++p)
                if (f(p) != f(0)) return;
            found = t;
            return;
        }
        const int v = order[k];
        std::vector<Transposition> cands;
        if (k == 0) {
            cands.push_back({0, 1});
        } else {
            const Transposition pu = t[parent[v]];
            const int next_new = used_points;  // points are introduced in increasing order
            for (int p : {pu.first, pu.second}) {
                const int other = p == pu.first ? pu.second : pu.first;
                for (int q = 0; q <= std::min(next_new, points - 1); ++q) {
                    if (q == p || q == other) continue;
                    if (leaf_vertex >= 0 && (q == 0 || p == 0)) continue;
                    cands.push_back({std::min(p, q), std::max(p, q)});
                }
            }
        }
        for (const auto& c : cands) {
            bool ok = true;
            for (std::size_t j = 0; j < k && ok; ++j) {
                const int u = order[j];
                const int s = shares(c, t[u]);
                if (d.edge(u, v)) ok = s == 1;
                else ok = s == 0 || (s == 2 && allow_repeat);
            }
            if (!ok) continue;
            t[v] = c;
            int added = 0;
            for (int p : {c.first, c.second})
                if (used_count[p]++ == 0) ++added;
            used_points += added;
            if (used_points <= points) self(self, k + 1);
            used_points -= added;
            for (int p : {c.first, c.second}) --used_count[p];
            t[v] = {-1, -1};
            if (found) return;
        }
    };
    rec(rec, 0);
    return found;
}

namespace detail {

inline RootIndex root_index_or_throw(const RootSystem& phi, const Vector& v) {
    auto idx = phi.index_of(v);
    if (!idx) throw std::logic_error("carter: constructed vector is not a root");
    return phi.positive_index(*idx);
}

inline Vector difference_root(std::size_t dim, int a, int b, int sign_b = -1) {
    Vector v(dim);
    v[a] = Scalar(1);
    v[b] = Scalar(sign_b);
    if (!detail::positive(v)) v = detail::scale(Scalar(-1), v);
    return v;
}

inline bool is_full_type(const std::vector<RootIndex>& roots, const RootSystem& phi) {
    return is_linearly_independent(roots, phi) && smallest_root_subsystem(roots, phi).size() == phi.size();
}

inline DiagramAtlas atlas_from_witnesses(const CartanType& t, const std::string& method,
                                         const std::vector<std::vector<RootIndex>>& witnesses,
                                         const RootSystem& phi) {
    DiagramAtlas atlas;
    atlas.type = t;
    atlas.method = method;
    for (const auto& w : witnesses) {
        CarterDiagram d = diagram_of(w, phi);
        AtlasEntry e = make_entry(d);
        e.type = diagram_type(e.diagram, phi);
        atlas_insert(atlas, canonical_form(d), std::move(e));
    }
    return atlas;
}

}  // namespace detail

// Type A_n: A^{n,n} realized by transposition trees on n+1 points.
inline DiagramAtlas gen_type_A(int n, const RootSystemPtr& phi = nullptr) {
    const RootSystemPtr sys = phi ? phi : build_root_system('A', n);
    std::vector<std::vector<RootIndex>> witnesses;
    for (const auto& d : gen_kluitmann(n, n)) {
        auto t = realize_transpositions(d, n + 1, false);
        if (!t) throw std::logic_error("carter: no transposition realization for a type A diagram");
        std::vector<RootIndex> w;
        for (auto [a, b] : *t) w.push_back(detail::root_index_or_throw(*sys, detail::difference_root(n + 1, a, b)));
        witnesses.push_back(w);
    }
    return detail::atlas_from_witnesses(sys->type(), "construct", witnesses, *sys);
}

// Type B_n: an A_n diagram with every edge at a non-cut vertex v set to m = 4.
inline DiagramAtlas gen_type_B(int n, const RootSystemPtr& phi = nullptr) {
    const RootSystemPtr sys = phi ? phi : build_root_system('B', n);
    std::vector<std::vector<RootIndex>> witnesses;
    for (const auto& d : gen_kluitmann(n, n)) {
        for (int v = 0; v < d.n(); ++v) {
            std::vector<int> rest;
            for (int u = 0; u < d.n(); ++u)
                if (u != v) rest.push_back(u);
            if (!is_connected(d.induced(rest))) continue;
            // point 0 becomes the short root direction: (0, x) -> e_x, (a, b) -> e_a - e_b
            auto t = realize_transpositions(d, n + 1, false, v);
            if (!t) throw std::logic_error("carter: no leaf realization for a type B diagram");
            std::vector<RootIndex> w;
            for (auto [a, b] : *t) {
                Vector r = a == 0 ? detail::unit(n, b - 1) : detail::difference_root(n, a - 1, b - 1);
                w.push_back(detail::root_index_or_throw(*sys, r));
            }
            witnesses.push_back(w);
        }
    }
    return detail::atlas_from_witnesses(sys->type(), "construct", witnesses, *sys);
}

// Type D_n: A^{n-1,n}, lifted from transpositions of n points to roots e_a -/+ e_b.
inline DiagramAtlas gen_type_D(int n, const RootSystemPtr& phi = nullptr) {
    const RootSystemPtr sys = phi ? phi : build_root_system('D', n);
    std::vector<std::vector<RootIndex>> witnesses;
    for (const auto& d : gen_kluitmann(n - 1, n)) {
        auto t = realize_transpositions(d, n, true);
        if (!t) throw std::logic_error("carter: no transposition realization for a type D diagram");
        bool done = false;
        for (std::uint32_t signs = 0; signs < (1u << n) && !done; ++signs) {
            std::vector<RootIndex> w;
            for (int k = 0; k < n; ++k) {
                const auto [a, b] = (*t)[k];
                w.push_back(detail::root_index_or_throw(*sys, detail::difference_root(n, a, b, (signs >> k & 1) ? 1 : -1)));
            }
            if (detail::is_full_type(w, *sys)) {
                witnesses.push_back(w);
                done = true;
            }
        }
        if (!done) throw std::logic_error("carter: no signed lift of a type D diagram");
    }
    return detail::atlas_from_witnesses(sys->type(), "construct", witnesses, *sys);
}

// ---------------------------------------------------------------------------
// Exhaustive subset oracle.

inline constexpr std::uint64_t default_subset_cap = 3838380;  // C(40, 6)

inline long double binomial(std::size_t n, std::size_t k) {
    if (k > n) return 0;
    long double r = 1;
    for (std::size_t i = 1; i <= k; ++i) r = r * static_cast<long double>(n - k + i) / static_cast<long double>(i);
    return r;
}

inline std::size_t env_threads() {
    if (const char* s = std::getenv("CARTER_THREADS")) {
        const long v = std::strtol(s, nullptr, 10);
        if (v >= 1 && v <= 256) return static_cast<std::size_t>(v);
    }
    return 1;
}

namespace detail {

// Fraction-free integer row echelon for crystallographic simple coordinates.
class IntEchelon {
public:
    explicit IntEchelon(std::size_t dim) : dim_(dim) {}
    bool try_add(const std::vector<std::int64_t>& v) {
        std::vector<std::int64_t> w = v;
        for (std::size_t r = 0; r < rows_.size(); ++r) {
            const std::size_t p = piv_[r];
            if (w[p] == 0) continue;
            const std::int64_t a = rows_[r][p], b = w[p];
            std::int64_t g = 0;
            for (std::size_t k = 0; k < dim_; ++k) {
                w[k] = detail::checked_add(detail::checked_mul(w[k], a), -detail::checked_mul(rows_[r][k], b));
                g = std::gcd(g, w[k]);
            }
            if (g > 1)
                for (auto& x : w) x /= g;
        }
        for (std::size_t k = 0; k < dim_; ++k)
            if (w[k] != 0) {
                rows_.push_back(std::move(w));
                piv_.push_back(k);
                return true;
            }
        return false;
    }
    void pop() {
        rows_.pop_back();
        piv_.pop_back();
    }

private:
    std::size_t dim_;
    std::vector<std::vector<std::int64_t>> rows_;
    std::vector<std::size_t> piv_;
};

// Full-type test on root indices using the reflection table only.
inline std::size_t subsystem_size(const std::vector<RootIndex>& R, const RootSystem& phi, std::vector<char>& seen,
                                  std::vector<RootIndex>& queue) {
    seen.assign(phi.size(), 0);
    queue.clear();
    for (auto r : R)
        if (!seen[r]) {
            seen[r] = 1;
            queue.push_back(r);
        }
    for (std::size_t h = 0; h < queue.size(); ++h)
        for (auto a : R) {
            const RootIndex y = phi.reflect_index(a, queue[h]);
            if (!seen[y]) {
                seen[y] = 1;
                queue.push_back(y);
            }
        }
    return queue.size();
}

// Memoizes canonical keys of labelled order matrices.
class KeyCache {
public:
    explicit KeyCache(std::size_t limit = 2000000) : limit_(limit) {}
    const DiagramCanonKey& key(const std::vector<RootIndex>& roots, const RootSystem& phi) {
        raw_.assign(roots.size() * roots.size(), 0);
        for (std::size_t i = 0; i < roots.size(); ++i)
            for (std::size_t j = 0; j < roots.size(); ++j)
                raw_[i * roots.size() + j] = static_cast<char>(i == j ? 1 : phi.pair_order(roots[i], roots[j]));
        auto it = cache_.find(raw_);
        if (it != cache_.end()) return it->second;
        CarterDiagram d(static_cast<int>(roots.size()));
        for (std::size_t i = 0; i < roots.size(); ++i)
            for (std::size_t j = i + 1; j < roots.size(); ++j)
                d.set_order(static_cast<int>(i), static_cast<int>(j), raw_[i * roots.size() + j]);
        if (cache_.size() >= limit_) cache_.clear();
        return cache_.emplace(raw_, canonical_form(d)).first->second;
    }

private:
    std::size_t limit_;
    std::string raw_;
    std::unordered_map<std::string, DiagramCanonKey> cache_;
};

}  // namespace detail

// Every rank-sized linearly independent set of positive roots (optionally only
// those generating Phi), collected by canonical diagram class.
inline DiagramAtlas enumerate_by_subsets(const RootSystemPtr& phi, bool require_full_type,
                                         std::uint64_t cap = default_subset_cap, std::size_t threads = 0) {
    const RootSystem& sys = *phi;
    const std::size_t N = sys.num_positive(), n = sys.rank();
    const long double total = binomial(N, n);
    if (total > static_cast<long double>(cap))
        throw std::length_error("carter: subset oracle refused: " + std::to_string(static_cast<unsigned long long>(total)) +
                                " subsets exceed the cap of " + std::to_string(cap));
    if (threads == 0) threads = env_threads();
    bool integral = true;
    for (std::size_t i = 0; i < N && integral; ++i)
        for (const auto& c : sys.simple_coords(i)) integral = integral && c.is_integer();
    std::vector<std::vector<std::int64_t>> icoords(N);
    if (integral)
        for (std::size_t i = 0; i < N; ++i)
            for (const auto& c : sys.simple_coords(i)) icoords[i].push_back(c.rational_part().num());

    struct Found {
        std::vector<RootIndex> witness;
    };
    auto worker = [&](std::size_t first_lo, std::size_t stride, std::map<DiagramCanonKey, Found>& out) {
        detail::KeyCache cache;
        detail::IntEchelon ib(n);
        EchelonBasis sb(n);
        std::vector<RootIndex> chosen;
        std::vector<char> seen;
        std::vector<RootIndex> queue;
        auto add = [&](std::size_t i) { return integral ? ib.try_add(icoords[i]) : sb.try_add(sys.simple_coords(i)); };
        auto pop = [&] { integral ? ib.pop() : sb.pop(); };
        auto rec = [&](auto&& self, std::size_t start) -> void {
            if (chosen.size() == n) {
                if (require_full_type && detail::subsystem_size(chosen, sys, seen, queue) != sys.size()) return;
                const DiagramCanonKey& key = cache.key(chosen, sys);
                if (!out.count(key)) out.emplace(key, Found{chosen});
                return;
            }
            for (std::size_t i = start; i + (n - chosen.size()) <= N; ++i) {
                if (chosen.empty() && (i < first_lo || (i - first_lo) % stride != 0)) continue;
                if (!add(i)) continue;
                chosen.push_back(static_cast<RootIndex>(i));
                self(self, i + 1);
                chosen.pop_back();
                pop();
            }
        };
        rec(rec, 0);
    };
    std::vector<std::map<DiagramCanonKey, Found>> parts(threads);
    if (threads == 1) {
        worker(0, 1, parts[0]);
    } else {
        std::vector<std::thread> pool;
        for (std::size_t t = 0; t < threads; ++t) pool.emplace_back(worker, t, threads, std::ref(parts[t]));
        for (auto& th : pool) th.join();
    }
    std::map<DiagramCanonKey, std::vector<RootIndex>> merged;
    for (auto& p : parts)
        for (auto& [k, f] : p) {
            auto it = merged.find(k);
            if (it == merged.end() || f.witness < it->second) merged[k] = f.witness;
        }
    DiagramAtlas atlas;
    atlas.type = sys.type();
    atlas.method = "oracle";
    for (auto& [k, w] : merged) {
        AtlasEntry e = make_entry(diagram_of(w, sys));
        e.type = diagram_type(e.diagram, sys);
        atlas.entries.emplace(k, std::move(e));
    }
    return atlas;
}

// Union of the diagram classes met along the Hurwitz orbits of the seeds.
inline DiagramAtlas enumerate_by_hurwitz(const std::vector<ReflectionFactorization>& seeds,
                                         std::size_t cap = default_orbit_cap) {
    if (seeds.empty()) throw std::invalid_argument("carter: no seeds");
    const RootSystem& sys = *seeds[0].ambient;
    DiagramAtlas atlas;
    atlas.type = sys.type();
    atlas.method = "hurwitz";
    detail::KeyCache cache(500000);
    std::map<DiagramCanonKey, std::vector<RootIndex>> found;
    for (const auto& s : seeds) {
        if (s.ambient->tag() != sys.tag()) throw std::invalid_argument("carter: seeds from different systems");
        if (s.size() != sys.rank() || !is_reduced(s) || !is_quasi_coxeter(s))
            throw std::invalid_argument("carter: seed is not a reduced quasi-Coxeter factorization");
        const bool complete = for_each_in_hurwitz_orbit(s, cap, [&](const std::vector<RootIndex>& t) {
            const DiagramCanonKey& key = cache.key(t, sys);
            if (!found.count(key)) found.emplace(key, t);
        });
        if (!complete) atlas.incomplete = true;
    }
    for (auto& [k, w] : found) {
        AtlasEntry e = make_entry(diagram_of(w, sys));
        e.type = diagram_type(e.diagram, sys);
        atlas.entries.emplace(k, std::move(e));
    }
    return atlas;
}

// ---------------------------------------------------------------------------
// Conjugacy-class seeds for quasi-Coxeter elements.

namespace detail {

// Conjugacy invariants: order, cycle type on roots, traces of w^k for k = 1..rank.
inline std::string conjugacy_invariant(const WeylElement& w, const RootSystem& phi) {
    std::string s = std::to_string(element_order(w)) + "|";
    std::vector<char> seen(w.degree(), 0);
    std::vector<std::size_t> cycles;
    for (std::size_t i = 0; i < w.degree(); ++i) {
        if (seen[i]) continue;
        std::size_t len = 0;
        for (std::size_t j = i; !seen[j]; j = w(j)) {
            seen[j] = 1;
            ++len;
        }
        cycles.push_back(len);
    }
    std::sort(cycles.begin(), cycles.end());
    for (auto c : cycles) s += std::to_string(c) + ",";
    WeylElement p = w;
    for (std::size_t k = 1; k <= phi.rank(); ++k) {
        s += "|" + trace(p, phi).str();
        p = compose(w, p);
    }
    return s;
}

}  // namespace detail

inline constexpr std::uint64_t exact_conjugacy_limit = 200000;

// Random search for one reduced quasi-Coxeter factorization per conjugacy class.
// Classes are separated exactly (by conjugation orbits) when |W| is small and by
// invariants otherwise; the result is then only a best effort.
inline std::vector<ReflectionFactorization> find_quasi_coxeter_class_seeds(const RootSystemPtr& phi,
                                                                           std::size_t budget,
                                                                           std::uint64_t seed = 1) {
    const RootSystem& sys = *phi;
    const std::size_t N = sys.num_positive(), n = sys.rank();
    const bool exact = weyl_group_order(sys) <= exact_conjugacy_limit;
    std::vector<WeylElement> simple = simple_reflections(sys);
    std::unordered_set<WeylElement, WeylElementHash> classified;  // exact mode: all elements of found classes
    std::set<std::string> invariants;
    std::vector<ReflectionFactorization> out;
    auto consider = [&](const std::vector<RootIndex>& roots) {
        ReflectionFactorization f(phi, roots);
        const WeylElement w = product(f);
        if (exact) {
            if (classified.count(w)) return;
            std::vector<WeylElement> cls{w};
            classified.insert(w);
            for (std::size_t h = 0; h < cls.size(); ++h)
                for (const auto& s : simple) {
                    WeylElement y = compose(s, compose(cls[h], s));
                    if (classified.insert(y).second) cls.push_back(std::move(y));
                }
        } else if (!invariants.insert(detail::conjugacy_invariant(w, sys)).second) {
            return;
        }
        out.push_back(std::move(f));
    };
    consider(sys.simple_indices());
    std::mt19937_64 rng(seed);
    std::vector<RootIndex> perm(N);
    for (std::size_t i = 0; i < N; ++i) perm[i] = static_cast<RootIndex>(i);
    std::vector<char> seen;
    std::vector<RootIndex> queue;
    for (std::size_t trial = 0; trial < budget; ++trial) {
        std::shuffle(perm.begin(), perm.end(), rng);
        EchelonBasis basis(sys.dim());
        std::vector<RootIndex> chosen;
        for (std::size_t k = 0; k < N && chosen.size() < n; ++k)
            if (basis.try_add(sys.root(perm[k]))) chosen.push_back(perm[k]);
        if (chosen.size() != n || detail::subsystem_size(chosen, sys, seen, queue) != sys.size()) continue;
        consider(chosen);
    }
    return out;
}

}  // namespace carter
