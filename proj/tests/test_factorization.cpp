#include "catch_amalgamated.hpp"

#include <map>
#include <numeric>
#include <random>
#include <set>

#include "support.hpp"

using namespace carter;
using support::idx;

namespace {

using Dist = std::unordered_map<WeylElement, std::size_t, WeylElementHash>;

// Reflection length of every group element, by breadth-first search from the identity.
Dist length_table(const RootSystem& phi) {
    Dist d;
    std::vector<WeylElement> layer{WeylElement::identity(phi)};
    d.emplace(layer[0], 0);
    for (std::size_t k = 1; !layer.empty(); ++k) {
        std::vector<WeylElement> next;
        for (const auto& x : layer)
            for (std::size_t a = 0; a < phi.num_positive(); ++a) {
                WeylElement y = compose(x, reflection_of(a, phi));
                if (d.emplace(y, k).second) next.push_back(std::move(y));
            }
        layer.swap(next);
    }
    return d;
}

// Calls f(tuple, product) for every tuple of k reflections.
template <class F>
void for_each_tuple(const RootSystem& phi, std::size_t k, F&& f) {
    std::vector<RootIndex> t;
    std::vector<WeylElement> prefix{WeylElement::identity(phi)};
    auto rec = [&](auto&& self) -> void {
        if (t.size() == k) {
            f(t, prefix.back());
            return;
        }
        for (std::size_t a = 0; a < phi.num_positive(); ++a) {
            t.push_back(static_cast<RootIndex>(a));
            prefix.push_back(compose(prefix.back(), reflection_of(a, phi)));
            self(self);
            prefix.pop_back();
            t.pop_back();
        }
    };
    rec(rec);
}

// Conjugacy class of w, closing under conjugation by simple reflections.
std::set<WeylElement> conjugacy_class(const WeylElement& w, const RootSystem& phi) {
    const auto gens = simple_reflections(phi);
    std::set<WeylElement> seen{w};
    std::vector<WeylElement> todo{w};
    while (!todo.empty()) {
        WeylElement x = todo.back();
        todo.pop_back();
        for (const auto& s : gens) {
            WeylElement y = compose(s, compose(x, s));
            if (seen.insert(y).second) todo.push_back(y);
        }
    }
    return seen;
}

std::uint64_t factorial(int n) { return n <= 1 ? 1 : n * factorial(n - 1); }

std::uint64_t power(std::uint64_t b, int e) {
    std::uint64_t r = 1;
    while (e-- > 0) r *= b;
    return r;
}

ReflectionFactorization random_factorization(const RootSystemPtr& phi, std::size_t len, std::mt19937& rng) {
    std::uniform_int_distribution<std::size_t> pick(0, phi->num_positive() - 1);
    std::vector<RootIndex> r;
    for (std::size_t k = 0; k < len; ++k) r.push_back(static_cast<RootIndex>(pick(rng)));
    return ReflectionFactorization(phi, r);
}

std::vector<RootSystemPtr> small_systems() {
    std::vector<RootSystemPtr> v;
    for (auto [f, n] : std::vector<std::pair<char, int>>{
             {'A', 2}, {'A', 3}, {'A', 4}, {'B', 2}, {'B', 3}, {'B', 4}, {'C', 3}, {'D', 4}, {'F', 4}, {'G', 2}, {'H', 3}})
        v.push_back(build_root_system(f, n));
    v.push_back(build_root_system('I', 2, 5));
    return v;
}

}  // namespace

TEST_CASE("products of reflection tuples") {
    auto a2 = build_root_system('A', 2);
    CHECK(product(ReflectionFactorization(a2, {})).is_identity());
    CHECK(product(ReflectionFactorization(a2, {0, 0})).is_identity());
    const WeylElement c = product(coxeter_factorization(a2));
    CHECK(element_order(c) == 3);
    // Left-to-right composition, checked on coordinates.
    const auto& s = a2->simple_indices();
    const WeylElement manual = compose(reflection_of(s[0], *a2), reflection_of(s[1], *a2));
    CHECK(c == manual);
    const Vector image = a2->root(c(s[1]));
    CHECK(image == reflect(a2->root(s[0]), reflect(a2->root(s[1]), a2->root(s[1]))));
}

TEST_CASE("negative roots name the same reflection") {
    auto b3 = build_root_system('B', 3);
    for (std::size_t a = 0; a < b3->num_positive(); ++a) {
        ReflectionFactorization f(b3, {b3->negative(a)});
        CHECK(f.refs[0] == a);
        CHECK(reflection_of(a, *b3) == reflection_of(b3->negative(a), *b3));
    }
    CHECK_THROWS_AS(ReflectionFactorization(b3, {RootIndex(b3->size())}), std::out_of_range);
}

TEST_CASE("reducedness by linear independence") {
    auto a2 = build_root_system('A', 2);
    CHECK(is_reduced(ReflectionFactorization(a2, {0})));
    const RootIndex e12 = idx(*a2, {1, -1, 0}), e23 = idx(*a2, {0, 1, -1}), e13 = idx(*a2, {1, 0, -1});
    CHECK_FALSE(is_reduced(ReflectionFactorization(a2, {e12, e23, e13})));
    CHECK_FALSE(is_reduced(ReflectionFactorization(a2, {e12, e12})));

    auto d4 = build_root_system('D', 4);
    const ReflectionFactorization r1(d4, {idx(*d4, {1, -1, 0, 0}), idx(*d4, {1, 1, 0, 0}), idx(*d4, {0, 1, -1, 0}),
                                          idx(*d4, {-1, 0, 0, 1})});
    CHECK(is_reduced(r1));
}

TEST_CASE("reflection length examples") {
    auto d4 = build_root_system('D', 4);
    CHECK(reflection_length(WeylElement::identity(*d4), *d4) == 0);
    for (std::size_t a = 0; a < d4->num_positive(); ++a) CHECK(reflection_length(reflection_of(a, *d4), *d4) == 1);
    const WeylElement c = product(coxeter_factorization(d4));
    CHECK(reflection_length(c, *d4) == 4);
    CHECK(reflection_length_bfs(c, *d4) == 4);
    auto b3 = build_root_system('B', 3);
    CHECK_THROWS_AS(reflection_length(c, *b3), std::invalid_argument);
}

TEST_CASE("fixed-space codimension matches breadth-first length") {
    for (auto [f, n] : std::vector<std::pair<char, int>>{{'A', 3}, {'B', 3}, {'C', 3}, {'D', 4}, {'G', 2}}) {
        auto phi = build_root_system(f, n);
        const Dist dist = length_table(*phi);
        CHECK(dist.size() == weyl_group_order(*phi));
        for (const auto& [w, k] : dist) CHECK(reflection_length(w, *phi) == k);
    }
}

TEST_CASE("Carter's lemma holds exhaustively for tuples of length at most 4") {
    // Weyl cases plus the two non-crystallographic cases the criterion is extended to.
    for (auto phi : {build_root_system('A', 3), build_root_system('B', 3), build_root_system('I', 2, 5),
                     build_root_system('H', 3)}) {
        const Dist dist = length_table(*phi);
        std::size_t checked = 0, minimal = 0;
        for (std::size_t k = 1; k <= 4; ++k)
            for_each_tuple(*phi, k, [&](const std::vector<RootIndex>& t, const WeylElement& w) {
                const bool independent = is_linearly_independent(t, *phi);
                const bool shortest = dist.at(w) == k;
                CHECK(independent == shortest);
                if (independent) CHECK(k >= dist.at(w));
                minimal += shortest;
                ++checked;
            });
        INFO(phi->label());
        CHECK(checked > 0);
        CHECK(minimal > 0);
    }
}

TEST_CASE("quasi-Coxeter detection") {
    for (auto phi : small_systems()) CHECK(is_quasi_coxeter(coxeter_factorization(phi)));

    auto d4 = build_root_system('D', 4);
    const ReflectionFactorization r1(d4, {idx(*d4, {1, -1, 0, 0}), idx(*d4, {1, 1, 0, 0}), idx(*d4, {0, 1, -1, 0}),
                                          idx(*d4, {-1, 0, 0, 1})});
    CHECK(is_quasi_coxeter(r1));
    const ReflectionFactorization r2(d4, {idx(*d4, {1, 0, -1, 0}), idx(*d4, {0, 1, -1, 0}), idx(*d4, {0, 0, 1, -1})});
    CHECK_THROWS_AS(is_quasi_coxeter(r2), std::invalid_argument);
    const ReflectionFactorization dependent(d4, {idx(*d4, {1, -1, 0, 0}), idx(*d4, {0, 1, -1, 0}),
                                                 idx(*d4, {1, 0, -1, 0}), idx(*d4, {0, 0, 1, 1})});
    CHECK_THROWS_AS(is_quasi_coxeter(dependent), std::invalid_argument);

    // The D4 element from the 4-cycle is quasi-Coxeter but not conjugate to a Coxeter element.
    const auto cls = conjugacy_class(product(coxeter_factorization(d4)), *d4);
    CHECK_FALSE(cls.count(product(r1)));
}

TEST_CASE("subsystem criterion agrees with the generated group order") {
    std::mt19937 rng(11);
    for (auto [f, n] : std::vector<std::pair<char, int>>{{'B', 3}, {'D', 4}, {'F', 4}, {'A', 4}, {'H', 3}}) {
        auto phi = build_root_system(f, n);
        int tried = 0;
        for (int trial = 0; trial < 400 && tried < 60; ++trial) {
            auto fac = random_factorization(phi, phi->rank(), rng);
            if (!is_reduced(fac)) continue;
            ++tried;
            auto closure = is_quasi_coxeter_by_closure(fac, 100000);
            REQUIRE(closure);
            CHECK(is_quasi_coxeter(fac) == *closure);
            std::vector<WeylElement> gens;
            for (auto r : fac.refs) gens.push_back(reflection_of(r, *phi));
            const auto group = subgroup_closure(*phi, gens, 100000);
            std::size_t reflections = 0;
            for (const auto& g : group->elements) reflections += reflection_length(g, *phi) == 1;
            CHECK(smallest_root_subsystem(fac.refs, *phi).size() == 2 * reflections);
        }
        CHECK(tried >= 20);
    }
}

TEST_CASE("every quasi-Coxeter element of small A and B types is a Coxeter element") {
    std::vector<RootSystemPtr> systems;
    for (int n = 1; n <= 5; ++n) systems.push_back(build_root_system('A', n));
    for (int n = 2; n <= 3; ++n) systems.push_back(build_root_system('B', n));
    for (const auto& phi : systems) {
        const auto cls = conjugacy_class(product(coxeter_factorization(phi)), *phi);
        const std::size_t n = phi->rank(), N = phi->num_positive();
        std::size_t quasi = 0;
        std::vector<RootIndex> subset;
        auto rec = [&](auto&& self, std::size_t from) -> void {
            if (subset.size() == n) {
                if (!is_linearly_independent(subset, *phi)) return;
                std::vector<RootIndex> perm = subset;
                if (!is_quasi_coxeter(ReflectionFactorization(phi, perm))) return;
                // Every ordering for small ranks, the sorted ordering plus rotations at rank 5.
                if (n <= 4) {
                    do {
                        CHECK(cls.count(product(ReflectionFactorization(phi, perm))));
                        ++quasi;
                    } while (std::next_permutation(perm.begin(), perm.end()));
                } else {
                    for (std::size_t r = 0; r < n; ++r) {
                        std::rotate(perm.begin(), perm.begin() + 1, perm.end());
                        CHECK(cls.count(product(ReflectionFactorization(phi, perm))));
                        ++quasi;
                    }
                }
                return;
            }
            for (std::size_t a = from; a < N; ++a) {
                subset.push_back(static_cast<RootIndex>(a));
                self(self, a + 1);
                subset.pop_back();
            }
        };
        rec(rec, 0);
        INFO(phi->label());
        CHECK(quasi > 0);
    }
}

TEST_CASE("Hurwitz move examples") {
    auto a3 = build_root_system('A', 3);
    const RootIndex e12 = idx(*a3, {1, -1, 0, 0}), e34 = idx(*a3, {0, 0, 1, -1}), e23 = idx(*a3, {0, 1, -1, 0});
    const ReflectionFactorization commuting(a3, {e12, e34});
    CHECK(hurwitz_move(commuting, 0, Direction::forward).refs == std::vector<RootIndex>{e34, e12});
    CHECK(hurwitz_move(commuting, 0, Direction::inverse).refs == std::vector<RootIndex>{e34, e12});

    const ReflectionFactorization f(a3, {e12, e23, e34});
    for (std::size_t i = 0; i < 2; ++i) {
        CHECK(hurwitz_move(hurwitz_move(f, i, Direction::forward), i, Direction::inverse) == f);
        CHECK(hurwitz_move(hurwitz_move(f, i, Direction::inverse), i, Direction::forward) == f);
    }
    CHECK_THROWS_AS(hurwitz_move(f, 2, Direction::forward), std::out_of_range);

    auto b3 = build_root_system('B', 3);
    const auto g = parse_factorization_text(b3, "(1,-1) (1,2)(-1,-2) (1,3)(-1,-3)");
    const auto h = hurwitz_move(g, 0, Direction::forward);
    CHECK(factorization_text(h) == "B3: (1,-2)(-1,2) (1,-1) (1,3)(-1,-3)");
    CHECK(product(h) == product(g));
}

TEST_CASE("signed-permutation text round trips") {
    for (auto [f, n] : std::vector<std::pair<char, int>>{{'A', 3}, {'B', 3}, {'C', 3}, {'D', 4}}) {
        auto phi = build_root_system(f, n);
        std::vector<RootIndex> all(phi->num_positive());
        std::iota(all.begin(), all.end(), RootIndex(0));
        const ReflectionFactorization fac(phi, all);
        CHECK(parse_factorization_text(phi, factorization_text(fac)) == fac);
    }
    auto b3 = build_root_system('B', 3);
    CHECK(reflection_text(*b3, idx(*b3, {0, 1, 0})) == "(2,-2)");
    CHECK(reflection_text(*b3, idx(*b3, {1, 0, 1})) == "(1,-3)(-1,3)");
    CHECK_THROWS_AS(parse_factorization_text(b3, "(1,4)(-1,-4)"), std::invalid_argument);
    auto g2 = build_root_system('G', 2);
    CHECK_THROWS_AS(reflection_text(*g2, 0), std::invalid_argument);
}

TEST_CASE("Hurwitz moves preserve the product and reducedness") {
    std::mt19937 rng(3);
    for (const auto& phi : small_systems()) {
        const std::size_t len = std::min<std::size_t>(phi->rank(), 4);
        for (int trial = 0; trial < 60; ++trial) {
            auto f = random_factorization(phi, len, rng);
            const WeylElement w = product(f);
            const bool red = is_reduced(f);
            for (std::size_t i = 0; i + 1 < len; ++i)
                for (Direction d : {Direction::forward, Direction::inverse}) {
                    auto g = hurwitz_move(f, i, d);
                    CHECK(product(g) == w);
                    CHECK(is_reduced(g) == red);
                }
        }
    }
}

TEST_CASE("braid relations on tuples") {
    std::mt19937 rng(5);
    for (const auto& phi : small_systems()) {
        const std::size_t len = phi->rank() + 1;
        for (int trial = 0; trial < 40; ++trial) {
            auto f = random_factorization(phi, len, rng);
            for (Direction d : {Direction::forward, Direction::inverse})
                for (std::size_t i = 0; i + 2 < len; ++i) {
                    auto x = hurwitz_move(hurwitz_move(hurwitz_move(f, i, d), i + 1, d), i, d);
                    auto y = hurwitz_move(hurwitz_move(hurwitz_move(f, i + 1, d), i, d), i + 1, d);
                    CHECK(x == y);
                }
            for (std::size_t i = 0; i + 1 < len; ++i)
                for (std::size_t j = i + 2; j + 1 < len; ++j) {
                    auto x = hurwitz_move(hurwitz_move(f, i, Direction::forward), j, Direction::forward);
                    auto y = hurwitz_move(hurwitz_move(f, j, Direction::forward), i, Direction::forward);
                    CHECK(x == y);
                }
        }
    }
}

TEST_CASE("small Hurwitz orbits") {
    auto a2 = build_root_system('A', 2);
    CHECK(hurwitz_orbit(ReflectionFactorization(a2, {0}))->size() == 1);

    const RootIndex a = idx(*a2, {1, -1, 0}), b = idx(*a2, {0, 1, -1}), ab = idx(*a2, {1, 0, -1});
    auto orbit = hurwitz_orbit(ReflectionFactorization(a2, {a, b}));
    REQUIRE(orbit);
    std::set<std::vector<RootIndex>> got;
    for (const auto& f : *orbit) got.insert(f.refs);
    CHECK(got == std::set<std::vector<RootIndex>>{{a, b}, {b, ab}, {ab, a}});

    CHECK_THROWS_AS(hurwitz_orbit(ReflectionFactorization(a2, {a, a})), std::invalid_argument);
    auto a4 = build_root_system('A', 4);
    CHECK_FALSE(hurwitz_orbit(coxeter_factorization(a4), 10));
}

TEST_CASE("Hurwitz orbit of a Coxeter element is all of its reduced factorizations") {
    // Brute-force count of reduced factorizations, and the closed count n! h^n / |W|.
    struct Case {
        char f;
        int n;
        int m;
        int h;
    };
    for (auto c : std::vector<Case>{{'A', 3, 0, 4}, {'B', 3, 0, 6}, {'D', 4, 0, 6}, {'G', 2, 0, 6}, {'H', 3, 0, 10},
                                    {'I', 2, 5, 5}, {'A', 4, 0, 5}}) {
        auto phi = build_root_system(c.f, c.n, c.m);
        const auto cox = coxeter_factorization(phi);
        const WeylElement w = product(cox);
        std::set<std::vector<RootIndex>> brute;
        for_each_tuple(*phi, phi->rank(), [&](const std::vector<RootIndex>& t, const WeylElement& p) {
            if (p == w) brute.insert(t);
        });
        auto orbit = hurwitz_orbit(cox);
        REQUIRE(orbit);
        std::set<std::vector<RootIndex>> got;
        for (const auto& f : *orbit) got.insert(f.refs);
        INFO(phi->label());
        CHECK(got == brute);
        CHECK(got.size() == factorial(c.n) * power(c.h, c.n) / weyl_group_order(*phi));
    }
}

TEST_CASE("the A_n Coxeter orbit realizes the complete graph") {
    for (int n = 2; n <= 5; ++n) {
        auto phi = build_root_system('A', n);
        // Roots e_1 - e_{k+1} for k = n..1, in that order.
        std::vector<RootIndex> t;
        for (int k = n; k >= 1; --k) {
            Vector v(n + 1, Scalar(0));
            v[0] = Scalar(1);
            v[k] = Scalar(-1);
            t.push_back(*phi->index_of(v));
        }
        const ReflectionFactorization star(phi, t);
        CHECK(is_reduced(star));
        CHECK(is_isomorphic(diagram_of(star), support::complete_graph(n)));
        auto orbit = hurwitz_orbit(coxeter_factorization(phi));
        REQUIRE(orbit);
        CHECK(std::binary_search(orbit->begin(), orbit->end(), star));
    }
}

TEST_CASE("orbit traversal order is deterministic and starts at the seed") {
    auto b3 = build_root_system('B', 3);
    const auto cox = coxeter_factorization(b3);
    std::vector<std::vector<RootIndex>> first, second;
    for_each_in_hurwitz_orbit(cox, 1000, [&](const std::vector<RootIndex>& t) { first.push_back(t); });
    for_each_in_hurwitz_orbit(cox, 1000, [&](const std::vector<RootIndex>& t) { second.push_back(t); });
    CHECK(first == second);
    REQUIRE(!first.empty());
    CHECK(first[0] == cox.refs);
    CHECK(first[1] == hurwitz_move(cox, 0, Direction::forward).refs);
}

TEST_CASE("Coxeter factorizations") {
    auto a1 = build_root_system('A', 1);
    CHECK(coxeter_factorization(a1).size() == 1);
    auto d4 = build_root_system('D', 4);
    const auto cd = coxeter_factorization(d4);
    REQUIRE(cd.size() == 4);
    const CarterDiagram dd = diagram_of(cd);
    CHECK(is_isomorphic(dd, support::graph(4, {{0, 1, 3}, {0, 2, 3}, {0, 3, 3}})));
    CHECK(dd.edge_count() == 3);
    auto g2 = build_root_system('G', 2);
    CHECK(element_order(product(coxeter_factorization(g2))) == 6);
    auto h3 = build_root_system('H', 3);
    CHECK(element_order(product(coxeter_factorization(h3))) == 10);
}
