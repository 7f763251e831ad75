#include "catch_amalgamated.hpp"

#include <algorithm>
#include <set>

#include "support.hpp"

using namespace carter;
using support::cycle_graph;
using support::graph;
using support::idx;

namespace {

bool has_relator(const Presentation& p, const Word& w) {
    return std::find(p.relators.begin(), p.relators.end(), w) != p.relators.end();
}

std::vector<std::vector<int>> matrix_of(const CarterDiagram& d) {
    std::vector<std::vector<int>> m(d.n(), std::vector<int>(d.n(), 1));
    for (int i = 0; i < d.n(); ++i)
        for (int j = 0; j < d.n(); ++j)
            if (i != j) m[i][j] = d.order(i, j);
    return m;
}

// Group order from the simple reflections, independent of the product formulas.
std::size_t closure_order(const RootSystem& phi) {
    return subgroup_closure(phi, simple_reflections(phi), 1000000)->order;
}

// Roots realizing d vertex by vertex with matching pair orders, generating Phi.
std::optional<std::vector<RootIndex>> find_witness(const CarterDiagram& d, const RootSystem& phi) {
    std::vector<RootIndex> chosen;
    auto rec = [&](auto&& self) -> bool {
        const int v = static_cast<int>(chosen.size());
        if (v == d.n()) return smallest_root_subsystem(chosen, phi).size() == phi.size();
        for (std::size_t a = 0; a < phi.num_positive(); ++a) {
            bool ok = true;
            for (int u = 0; u < v && ok; ++u) ok = phi.pair_order(chosen[u], a) == d.order(u, v) && chosen[u] != a;
            if (!ok) continue;
            chosen.push_back(static_cast<RootIndex>(a));
            if (is_linearly_independent(chosen, phi) && self(self)) return true;
            chosen.pop_back();
        }
        return false;
    };
    if (!rec(rec)) return std::nullopt;
    return chosen;
}

DiagramAtlas atlas_for(char f, int n) {
    auto phi = build_root_system(f, n);
    switch (f) {
        case 'A': return gen_type_A(n, phi);
        case 'B': return gen_type_B(n, phi);
        case 'D': return gen_type_D(n, phi);
        default: return enumerate_by_subsets(phi, true);
    }
}

}  // namespace

TEST_CASE("coset enumeration on small presentations") {
    CHECK(todd_coxeter({1, {{0, 0}}}) == 2u);
    CHECK(todd_coxeter(coxeter_presentation({{1, 3}, {3, 1}})) == 6u);
    CHECK(todd_coxeter(coxeter_presentation({{1, 2}, {2, 1}})) == 4u);
    CHECK(todd_coxeter(coxeter_presentation({{1, 7}, {7, 1}})) == 14u);
    // relators that collapse the group
    CHECK(todd_coxeter({2, {{0, 0}, {1, 1}, {0, 1, 0, 1, 0, 1}, {0, 1}}}) == 2u);
    CHECK(todd_coxeter({2, {{0, 0}, {1, 1}, {0, 1, 0, 1, 0, 1}, {0}}}) == 1u);
    // the infinite dihedral group overflows instead of answering
    const auto inf = coset_table(coxeter_presentation({{1, 0}, {0, 1}}), 500);
    CHECK_FALSE(inf.complete());
    CHECK_FALSE(todd_coxeter(coxeter_presentation({{1, 0}, {0, 1}}), 500));

    const auto t = coset_table(coxeter_presentation({{1, 3}, {3, 1}}));
    REQUIRE(t.complete());
    for (const auto& row : t.rows)
        for (int x : row) CHECK((x >= 0 && x < int(t.order())));
    for (std::size_t c = 0; c < t.order(); ++c)
        for (const Word& r : coxeter_presentation({{1, 3}, {3, 1}}).relators) CHECK(t.trace(r, int(c)) == int(c));
}

TEST_CASE("dihedral diagrams give groups of order 2m") {
    for (int m = 2; m <= 6; ++m) {
        CarterDiagram d(2);
        d.set_order(0, 1, m);
        CHECK(todd_coxeter(presentation_of(d)) == std::size_t(2 * m));
    }
    for (int m : {3, 4, 5, 6}) {
        auto phi = build_root_system('I', 2, m);
        const auto r = verify_iso(dynkin_diagram(*phi), *phi);
        CHECK(r.verdict == IsoVerdict::iso);
        CHECK(r.order_found == std::size_t(2 * m));
    }
}

TEST_CASE("Coxeter presentations reproduce the group orders") {
    for (auto [f, n] : std::vector<std::pair<char, int>>{{'A', 1}, {'A', 3}, {'A', 5}, {'B', 3}, {'B', 5}, {'C', 4},
                                                         {'D', 4}, {'D', 5}, {'F', 4}, {'G', 2}, {'H', 3}, {'H', 4},
                                                         {'E', 6}}) {
        auto phi = build_root_system(f, n);
        const Presentation p = presentation_of(dynkin_diagram(*phi));
        CHECK(p.relators.size() == std::size_t(n + n * (n - 1) / 2));
        INFO(phi->label());
        const auto order = todd_coxeter(p);
        REQUIRE(order);
        CHECK(*order == weyl_group_order(*phi));
        if (weyl_group_order(*phi) <= 20000) CHECK(*order == closure_order(*phi));
        CHECK(todd_coxeter(coxeter_presentation(matrix_of(dynkin_diagram(*phi)))) == order);
    }
}

TEST_CASE("cycle relators have the documented shape") {
    const Presentation p = presentation_of(cycle_graph(4));
    CHECK(p.n_generators == 4);
    CHECK(p.relators.size() == 4 + 6 + 1);
    CHECK(has_relator(p, {0, 1, 2, 3, 2, 1, 0, 1, 2, 3, 2, 1}));
    CHECK(has_relator(p, {0, 0}));
    CHECK(has_relator(p, power({0, 2}, 2)));
    CHECK(has_relator(p, power({0, 1}, 3)));
    CHECK(cycle_relator({0, 1, 2}) == Word{0, 1, 2, 1, 0, 1, 2, 1});

    // two qualifying closing edges of the B3 triangle
    const Presentation b = presentation_of(graph(3, {{0, 1, 4}, {0, 2, 4}, {1, 2, 3}}));
    CHECK(b.relators.size() == 3 + 3 + 2);
    CHECK(has_relator(b, cycle_relator({1, 2, 0})));
    CHECK(has_relator(b, cycle_relator({0, 1, 2})));

    const Presentation h = presentation_of(cycle_graph(3, 5));
    CHECK(relation_family(cycle_graph(3, 5)) == RelationFamily::non_crystallographic);
    CHECK(h.relators.size() == 3 + 3 + 2);
    CHECK(has_relator(h, power({0, 1, 2, 1}, 3)));
    CHECK(has_relator(h, power({1, 0, 1, 2, 1, 2}, 2)));

    // one m = 5 closing edge among m = 3 edges
    const Presentation h1 = presentation_of(graph(3, {{0, 1, 3}, {1, 2, 3}, {2, 0, 5}}));
    CHECK(h1.relators.size() == 3 + 3 + 1);
    CHECK(has_relator(h1, cycle_relator({0, 1, 2})));

    CHECK_THROWS_AS(presentation_of(graph(3, {{0, 1, 5}, {1, 2, 4}})), std::invalid_argument);
    CHECK_THROWS_AS(presentation_of(graph(3, {{0, 1, 5}, {1, 2, 6}})), std::invalid_argument);
}

TEST_CASE("the D4 example presentation") {
    auto d4 = build_root_system('D', 4);
    const std::vector<RootIndex> r1{idx(*d4, {1, -1, 0, 0}), idx(*d4, {1, 1, 0, 0}), idx(*d4, {0, 1, -1, 0}),
                                    idx(*d4, {-1, 0, 0, 1})};
    const CarterDiagram g = diagram_of(r1, *d4);
    CHECK(todd_coxeter(presentation_of(g)) == closure_order(*d4));
    CHECK(closure_order(*d4) == 192);
    CHECK(relations_hold_in_group(g, *d4));
    CHECK(relations_hold_in_group(dynkin_diagram(*d4), *d4));
    const auto r = verify_iso(g, *d4);
    CHECK(r.verdict == IsoVerdict::iso);
    CHECK(r.order_expected == 192);

    // without the cycle relator the group is infinite
    Presentation p = presentation_of(g);
    p.relators.pop_back();
    CHECK_FALSE(todd_coxeter(p, 20000));
}

TEST_CASE("a corrupted relator is detected") {
    auto d4 = build_root_system('D', 4);
    const CarterDiagram g = diagram_of({idx(*d4, {1, -1, 0, 0}), idx(*d4, {1, 1, 0, 0}), idx(*d4, {0, 1, -1, 0}),
                                        idx(*d4, {-1, 0, 0, 1})},
                                       *d4);
    const auto gens = witness_reflections(g, *d4);
    Presentation p = presentation_of(g);
    CHECK(relations_hold(p, gens));
    Word& last = p.relators.back();
    last.erase(last.begin());
    CHECK_FALSE(relations_hold(p, gens));
    p = presentation_of(g);
    p.relators.push_back(power({0, 2}, 2));
    CHECK_FALSE(relations_hold(p, gens));
    CHECK_THROWS_AS(relations_hold(p, {gens[0]}), std::invalid_argument);
    CHECK_THROWS_AS(witness_reflections(cycle_graph(4), *d4), std::invalid_argument);
}

TEST_CASE("every desk-scale atlas diagram presents its Weyl group") {
    for (auto [f, n] : std::vector<std::pair<char, int>>{{'A', 2}, {'A', 3}, {'A', 4}, {'B', 2}, {'B', 3}, {'B', 4},
                                                         {'D', 4}, {'D', 5}, {'F', 4}, {'G', 2}}) {
        auto phi = build_root_system(f, n);
        const DiagramAtlas atlas = atlas_for(f, n);
        const std::size_t expected = closure_order(*phi);
        for (const auto& [key, e] : atlas.entries) {
            INFO(phi->label());
            CHECK(relations_hold_in_group(e.diagram, *phi));
            const auto r = verify_iso(e.diagram, *phi);
            CHECK(r.verdict == IsoVerdict::iso);
            CHECK(r.order_found == expected);
        }
    }
}

TEST_CASE("E6 sample diagrams present W(E6)") {
    auto e6 = build_root_system('E', 6);
    const DiagramAtlas atlas = enumerate_by_subsets(e6, true);
    std::size_t checked = 0;
    for (const auto& [key, e] : atlas.entries) {
        if (checked == 10) break;
        const auto r = verify_iso(e.diagram, *e6);
        CHECK(r.verdict == IsoVerdict::iso);
        CHECK(r.order_found == 51840u);
        ++checked;
    }
    CHECK(checked == 10);
}

TEST_CASE("H3: Coxeter-element diagrams versus the rest") {
    auto h3 = build_root_system('H', 3);
    CHECK(closure_order(*h3) == 120);
    std::set<DiagramCanonKey> coxeter;
    for_each_in_hurwitz_orbit(coxeter_factorization(h3), 100000, [&](const std::vector<RootIndex>& t) {
        coxeter.insert(canonical_form(diagram_of(t, *h3)));
    });
    const DiagramAtlas atlas = enumerate_by_subsets(h3, true);
    std::size_t excluded = 0, not_iso = 0;
    for (const auto& [key, e] : atlas.entries) {
        if (coxeter.count(key)) {
            const auto r = verify_iso(e.diagram, *h3);
            CHECK(r.verdict == IsoVerdict::iso);
            CHECK(r.order_found == 120u);
        } else {
            ++excluded;
            not_iso += verify_iso(e.diagram, *h3, 200000).verdict != IsoVerdict::iso;
        }
    }
    CHECK(coxeter.size() >= 2);
    CHECK(excluded >= 1);
    CHECK(not_iso >= 1);
}

TEST_CASE("all admissible traversals of a cycle give the same group") {
    CHECK(cycle_relation_equivalence(cycle_graph(4), {0, 1, 2, 3}) == true);
    CHECK(cycle_relation_equivalence(cycle_graph(3), {0, 1, 2}) == true);
    const CarterDiagram b3 = graph(3, {{0, 1, 4}, {0, 2, 4}, {1, 2, 3}});
    CHECK(cycle_relation_equivalence(b3, {0, 1, 2}) == true);
    CHECK_THROWS_AS(cycle_relation_equivalence(graph(3, {{0, 1, 3}, {1, 2, 6}, {2, 0, 3}}), {0, 1, 2}),
                    std::invalid_argument);
    CHECK_THROWS_AS(cycle_relation_equivalence(graph(3, {{0, 1, 5}, {1, 2, 4}, {2, 0, 3}}), {0, 1, 2}),
                    std::invalid_argument);

    // F4 4-cycles mixing m = 3 and m = 4
    const DiagramAtlas f4 = enumerate_by_subsets(build_root_system('F', 4), true);
    std::size_t mixed = 0;
    for (const auto& [k, e] : f4.entries)
        for (const auto& c : chordless_cycles(e.diagram)) {
            if (c.size() != 4 || detail::all_orders(e.diagram, c, 3)) continue;
            CHECK(cycle_relation_equivalence(e.diagram, c) == true);
            ++mixed;
        }
    CHECK(mixed >= 1);

    for (auto [f, n] : std::vector<std::pair<char, int>>{{'A', 4}, {'B', 3}, {'B', 4}, {'D', 4}, {'D', 5}})
        for (const auto& [k, e] : atlas_for(f, n).entries)
            for (const auto& c : chordless_cycles(e.diagram)) CHECK(cycle_relation_equivalence(e.diagram, c) == true);
}

TEST_CASE("presentation transport along a Hurwitz move") {
    auto a3 = build_root_system('A', 3);
    const CarterDiagram path = dynkin_diagram(*a3);
    const auto tr = hurwitz_presentation_transport(path, a3, 1, Direction::forward);
    CHECK(is_isomorphic(tr.target, cycle_graph(3)));
    CHECK(todd_coxeter(presentation_of(tr.source)) == 24u);
    CHECK(todd_coxeter(presentation_of(tr.target)) == 24u);

    // commuting pair: identity transport
    const CarterDiagram split = diagram_of({idx(*a3, {1, -1, 0, 0}), idx(*a3, {0, 0, 1, -1}),
                                            idx(*a3, {0, 1, -1, 0})},
                                           *a3);
    const auto id = hurwitz_presentation_transport(split, a3, 0, Direction::forward);
    CHECK(id.target.same_matrix(split));
    for (int j = 0; j < 3; ++j) CHECK(id.forward[j] == Word{j});
    CHECK_THROWS_AS(hurwitz_presentation_transport(path, a3, 2, Direction::forward), std::out_of_range);
    CHECK_THROWS_AS(hurwitz_presentation_transport(cycle_graph(3), a3, 0, Direction::forward), std::invalid_argument);
}

TEST_CASE("transport of the D6 example") {
    auto d6 = build_root_system('D', 6);
    const CarterDiagram left =
        graph(6, {{0, 1, 3}, {0, 2, 3}, {1, 2, 3}, {2, 3, 3}, {2, 4, 3}, {3, 5, 3}, {4, 5, 3}});
    // reference graph with vertices 4 and 5 named the other way round
    const CarterDiagram drawn = graph(6, {{4, 5, 3}, {4, 2, 3}, {5, 3, 3}, {2, 3, 3}, {2, 0, 3}, {2, 1, 3},
                                          {3, 0, 3}, {2, 5, 3}, {3, 1, 3}, {0, 1, 3}});
    const CarterDiagram right = drawn.induced({0, 1, 2, 3, 5, 4});
    CHECK(is_isomorphic(drawn, right));
    CHECK(right.edge(3, 4));
    CHECK(right.edge(2, 4));
    CHECK(right.edge(2, 5));
    CHECK(is_cyclically_orientable(left));
    CHECK_FALSE(is_cyclically_orientable(right));
    CHECK(predict_hurwitz_simply_laced(left, 2, Direction::forward).same_matrix(right));

    const auto roots = find_witness(left, *d6);
    REQUIRE(roots);
    CarterDiagram source = left;
    source.set_roots(*roots);
    CHECK(diagram_of(*roots, *d6).same_matrix(left));

    for (Direction dir : {Direction::forward, Direction::inverse}) {
        const auto tr = hurwitz_presentation_transport(source, d6, 2, dir);
        if (dir == Direction::forward) CHECK(tr.target.same_matrix(right));
        const std::size_t order = closure_order(*d6);
        CHECK(order == 23040);
        const auto src = coset_table(presentation_of(tr.source));
        const auto dst = coset_table(presentation_of(tr.target));
        REQUIRE(src.complete());
        REQUIRE(dst.complete());
        CHECK(src.order() == order);
        CHECK(dst.order() == order);
        CHECK(verify_iso(tr.target, *d6).verdict == IsoVerdict::iso);

        // psi(phi(t_j)) = t_j and phi(psi(r_j)) = r_j
        for (int j = 0; j < 6; ++j) {
            CHECK(reduce_involutive(substitute(tr.forward[j], tr.backward)) == Word{j});
            CHECK(reduce_involutive(substitute(tr.backward[j], tr.forward)) == Word{j});
        }
        // relators map to relations of the other side
        for (const Word& r : presentation_of(tr.source).relators) CHECK(dst.is_trivial(substitute(r, tr.forward)));
        for (const Word& r : presentation_of(tr.target).relators) CHECK(src.is_trivial(substitute(r, tr.backward)));
        // the substitution matches the reflections themselves
        const auto t = witness_reflections(tr.source, *d6);
        const auto rr = witness_reflections(tr.target, *d6);
        for (int j = 0; j < 6; ++j) {
            WeylElement w = WeylElement::identity(*d6);
            for (int x : tr.forward[j]) w = compose(w, rr[x]);
            CHECK(w == t[j]);
        }
    }
}

TEST_CASE("reduction and substitution helpers") {
    CHECK(reduce_involutive({0, 1, 1, 0, 2}) == Word{2});
    CHECK(reduce_involutive({}) == Word{});
    CHECK(substitute({0, 1}, {{1, 0, 1}, {0}}) == Word{1, 0, 1, 0});
    CHECK(power({0, 1}, 3) == Word{0, 1, 0, 1, 0, 1});
    CHECK(power({0}, 0).empty());
}
