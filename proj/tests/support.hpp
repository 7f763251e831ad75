#pragma once

#include <initializer_list>
#include <set>
#include <stdexcept>
#include <vector>

#include "carter/carter.hpp"

namespace support {

using namespace carter;

inline Vector vec(std::initializer_list<int> xs) {
    Vector v;
    for (int x : xs) v.push_back(Scalar(x));
    return v;
}

inline RootIndex idx(const RootSystem& phi, std::initializer_list<int> xs) {
    auto i = phi.index_of(vec(xs));
    if (!i) throw std::logic_error("test: not a root");
    return *i;
}

inline CarterDiagram graph(int n, std::initializer_list<std::tuple<int, int, int>> edges) {
    CarterDiagram d(n);
    for (auto [a, b, m] : edges) d.set_order(a, b, m);
    return d;
}

inline CarterDiagram cycle_graph(int n, int m = 3) {
    CarterDiagram d(n);
    for (int i = 0; i < n; ++i) d.set_order(i, (i + 1) % n, m);
    return d;
}

inline CarterDiagram complete_graph(int n) {
    CarterDiagram d(n);
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j) d.set_order(i, j, 3);
    return d;
}

// The three non-admissible F4 diagrams (m = 4 marks the double edges).
inline std::vector<CarterDiagram> f4_nonadmissible() {
    return {
        graph(4, {{1, 3, 3}, {2, 3, 4}, {3, 0, 4}, {2, 0, 3}}),
        graph(4, {{0, 1, 4}, {0, 2, 3}, {2, 3, 4}, {3, 0, 4}, {1, 3, 3}}),
        graph(4, {{0, 1, 4}, {1, 2, 4}, {2, 3, 4}, {3, 0, 4}, {1, 3, 3}, {0, 2, 3}}),
    };
}

// Two triangles meeting a K4 in two cut vertices (type A8).
inline CarterDiagram a8_example() {
    return graph(8, {{0, 1, 3}, {0, 2, 3}, {1, 2, 3}, {2, 3, 3}, {2, 4, 3}, {2, 5, 3}, {3, 4, 3}, {3, 5, 3},
                     {4, 5, 3}, {5, 6, 3}, {5, 7, 3}, {6, 7, 3}});
}

// The same graph with vertex 3 made distinguished (type B8).
inline CarterDiagram b8_example() {
    CarterDiagram d = a8_example();
    for (int u : {2, 4, 5}) d.set_order(3, u, 4);
    return d;
}

// Group generated by permutations, by plain breadth-first search on vectors.
inline std::size_t brute_group_order(const std::vector<std::vector<RootIndex>>& gens, std::size_t degree) {
    std::vector<RootIndex> id(degree);
    for (std::size_t i = 0; i < degree; ++i) id[i] = static_cast<RootIndex>(i);
    std::set<std::vector<RootIndex>> seen{id};
    std::vector<std::vector<RootIndex>> frontier{id};
    while (!frontier.empty()) {
        std::vector<std::vector<RootIndex>> next;
        for (const auto& x : frontier)
            for (const auto& g : gens) {
                std::vector<RootIndex> y(degree);
                for (std::size_t i = 0; i < degree; ++i) y[i] = g[x[i]];
                if (seen.insert(y).second) next.push_back(std::move(y));
            }
        frontier.swap(next);
    }
    return seen.size();
}

// Order of the group generated by the reflections in roots, by brute force.
inline std::size_t brute_reflection_group_order(const RootSystem& phi, const std::vector<RootIndex>& roots) {
    std::vector<std::vector<RootIndex>> gens;
    for (auto r : roots) {
        std::vector<RootIndex> g(phi.size());
        for (std::size_t x = 0; x < phi.size(); ++x) {
            auto y = phi.index_of(reflect(phi.root(r), phi.root(x)));
            if (!y) throw std::logic_error("test: reflection leaves the root set");
            g[x] = *y;
        }
        gens.push_back(std::move(g));
    }
    return brute_group_order(gens, phi.size());
}

}  // namespace support
