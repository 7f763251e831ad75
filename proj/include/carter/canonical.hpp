#pragma once

#include <algorithm>
#include <cstdint>
#include <numeric>
#include <stdexcept>
#include <string>
#include <vector>

namespace carter {

// Vertex-colored square matrix of small integers (|entry| < 128, colors < 256).
struct ColoredMatrix {
    int n = 0;
    std::vector<int> color;
    std::vector<int> a;  // row-major n*n

    ColoredMatrix() = default;
    explicit ColoredMatrix(int size) : n(size), color(size, 0), a(static_cast<std::size_t>(size) * size, 0) {}
    int at(int i, int j) const { return a[static_cast<std::size_t>(i) * n + j]; }
    int& at(int i, int j) { return a[static_cast<std::size_t>(i) * n + j]; }
};

struct CanonicalLabeling {
    std::vector<int> order;  // order[k] = original vertex placed at position k
    std::string key;
};

namespace detail {

inline std::string relabeled_key(const ColoredMatrix& g, const std::vector<int>& order) {
    std::string k;
    k.reserve(1 + g.n + static_cast<std::size_t>(g.n) * g.n);
    k.push_back(static_cast<char>(g.n));
    for (int v : order) k.push_back(static_cast<char>(g.color[v]));
    for (int i : order)
        for (int j : order) k.push_back(static_cast<char>(g.at(i, j)));
    return k;
}

class Canonizer {
public:
    explicit Canonizer(const ColoredMatrix& g) : g_(g) {
        if (g.n > 120) throw std::invalid_argument("carter: canonical form limited to 120 vertices");
        for (auto c : g.color)
            if (c < 0 || c > 255) throw std::invalid_argument("carter: vertex color out of range");
        for (auto x : g.a)
            if (x < -127 || x > 127) throw std::invalid_argument("carter: matrix entry out of range");
    }

    CanonicalLabeling run() {
        std::vector<int> vs(g_.n);
        std::iota(vs.begin(), vs.end(), 0);
        std::sort(vs.begin(), vs.end(), [&](int x, int y) { return g_.color[x] < g_.color[y]; });
        std::vector<std::vector<int>> part;
        for (int v : vs) {
            if (part.empty() || g_.color[part.back().back()] != g_.color[v]) part.emplace_back();
            part.back().push_back(v);
        }
        search(std::move(part));
        return {best_order_, best_key_};
    }

private:
    void refine(std::vector<std::vector<int>>& part) const {
        std::vector<int> cell_of(g_.n);
        while (true) {
            for (std::size_t c = 0; c < part.size(); ++c)
                for (int v : part[c]) cell_of[v] = static_cast<int>(c);
            std::vector<std::vector<int>> next;
            bool changed = false;
            for (const auto& cell : part) {
                if (cell.size() == 1) {
                    next.push_back(cell);
                    continue;
                }
                std::vector<std::pair<std::vector<std::int64_t>, int>> sig;
                for (int v : cell) {
                    std::vector<std::int64_t> s;
                    s.reserve(g_.n);
                    for (int u = 0; u < g_.n; ++u) {
                        if (u == v) continue;
                        s.push_back((static_cast<std::int64_t>(cell_of[u]) << 16) | ((g_.at(v, u) + 128) << 8) |
                                    (g_.at(u, v) + 128));
                    }
                    std::sort(s.begin(), s.end());
                    sig.emplace_back(std::move(s), v);
                }
                std::sort(sig.begin(), sig.end());
                next.emplace_back();
                for (std::size_t k = 0; k < sig.size(); ++k) {
                    if (k > 0 && sig[k].first != sig[k - 1].first) {
                        next.emplace_back();
                        changed = true;
                    }
                    next.back().push_back(sig[k].second);
                }
            }
            part.swap(next);
            if (!changed) return;
        }
    }

    // Swapping u and v is an automorphism.
    bool twins(int u, int v) const {
        if (g_.color[u] != g_.color[v] || g_.at(u, v) != g_.at(v, u)) return false;
        for (int w = 0; w < g_.n; ++w) {
            if (w == u || w == v) continue;
            if (g_.at(u, w) != g_.at(v, w) || g_.at(w, u) != g_.at(w, v)) return false;
        }
        return true;
    }

    void search(std::vector<std::vector<int>> part) {
        refine(part);
        std::size_t target = part.size();
        for (std::size_t c = 0; c < part.size(); ++c)
            if (part[c].size() > 1) {
                target = c;
                break;
            }
        if (target == part.size()) {
            std::vector<int> order;
            for (const auto& cell : part) order.push_back(cell[0]);
            std::string key = relabeled_key(g_, order);
            if (best_order_.empty() || key < best_key_) {
                best_key_ = std::move(key);
                best_order_ = std::move(order);
            }
            return;
        }
        const std::vector<int> cell = part[target];
        std::vector<int> tried;
        for (int v : cell) {
            bool skip = false;
            for (int u : tried)
                if (twins(u, v)) {
                    skip = true;
                    break;
                }
            if (skip) continue;
            tried.push_back(v);
            std::vector<std::vector<int>> child;
            child.reserve(part.size() + 1);
            for (std::size_t c = 0; c < part.size(); ++c) {
                if (c != target) {
                    child.push_back(part[c]);
                    continue;
                }
                child.push_back({v});
                std::vector<int> rest;
                for (int x : cell)
                    if (x != v) rest.push_back(x);
                child.push_back(std::move(rest));
            }
            search(std::move(child));
        }
    }

    const ColoredMatrix& g_;
    std::vector<int> best_order_;
    std::string best_key_;
};

}  // namespace detail

// Canonical labeling by refinement and individualization; equal keys iff isomorphic.
inline CanonicalLabeling canonical_labeling(const ColoredMatrix& g) {
    if (g.n == 0) return {{}, std::string(1, '\0')};
    return detail::Canonizer(g).run();
}

}  // namespace carter
