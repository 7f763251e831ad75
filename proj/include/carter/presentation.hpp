#pragma once

#include <algorithm>
#include <cstdint>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include "carter/diagram.hpp"
#include "carter/factorization.hpp"
#include "carter/root_system.hpp"

namespace carter {

using Word = std::vector<int>;

// Generators are involutions; relators are flat generator-index words.
struct Presentation {
    int n_generators = 0;
    std::vector<Word> relators;
};

inline Word power(const Word& w, int k) {
    Word out;
    for (int i = 0; i < k; ++i) out.insert(out.end(), w.begin(), w.end());
    return out;
}

// (t_{i0} t_{i1} ... t_{i_{d-1}} ... t_{i1})^2 for the traversal i0, ..., i_{d-1}.
inline Word cycle_relator(const std::vector<int>& traversal) {
    Word w(traversal.begin(), traversal.end());
    for (std::size_t k = traversal.size() - 1; k-- > 1;) w.push_back(traversal[k]);
    return power(w, 2);
}

// Coxeter presentation of an arbitrary Coxeter matrix (m_ij >= 2, m_ij = 0 for infinity).
inline Presentation coxeter_presentation(const std::vector<std::vector<int>>& m) {
    Presentation p;
    p.n_generators = static_cast<int>(m.size());
    for (int i = 0; i < p.n_generators; ++i) p.relators.push_back({i, i});
    for (int i = 0; i < p.n_generators; ++i)
        for (int j = i + 1; j < p.n_generators; ++j)
            if (m[i][j] > 0) p.relators.push_back(power({i, j}, m[i][j]));
    return p;
}

enum class RelationFamily { crystallographic, non_crystallographic };

inline RelationFamily relation_family(const CarterDiagram& d) {
    bool five = false, cryst = false;
    for (int i = 0; i < d.n(); ++i)
        for (int j = i + 1; j < d.n(); ++j) {
            five |= d.order(i, j) == 5;
            cryst |= d.order(i, j) == 4 || d.order(i, j) == 6;
        }
    if (five && cryst) throw std::invalid_argument("carter: diagram mixes crystallographic and H weights");
    return five ? RelationFamily::non_crystallographic : RelationFamily::crystallographic;
}

namespace detail {

// Traversal of the cycle (as stored) starting at position `start`, forwards or backwards.
inline std::vector<int> traversal(const std::vector<int>& c, std::size_t start, bool backwards) {
    const std::size_t d = c.size();
    std::vector<int> t(d);
    for (std::size_t k = 0; k < d; ++k) t[k] = backwards ? c[(start + d - k) % d] : c[(start + k) % d];
    return t;
}

// Whether the traversal t may carry a single cycle relator of the given family.
inline bool traversal_qualifies(const CarterDiagram& d, const std::vector<int>& t, RelationFamily fam) {
    const std::size_t n = t.size();
    bool all3 = true;
    int others5 = 0;
    for (std::size_t k = 0; k < n; ++k) {
        const int m = d.order(t[k], t[(k + 1) % n]);
        all3 &= m == 3;
        if (k + 1 < n) others5 += m == 5;
    }
    if (all3) return true;
    const int closing = d.order(t[n - 1], t[0]);
    if (fam == RelationFamily::crystallographic) return closing == 4;
    return closing == 5 && others5 < static_cast<int>(n - 1);
}

inline bool all_orders(const CarterDiagram& d, const std::vector<int>& c, int m) {
    for (std::size_t k = 0; k < c.size(); ++k)
        if (d.order(c[k], c[(k + 1) % c.size()]) != m) return false;
    return true;
}

// Relators attached to one chordless cycle.
inline std::vector<Word> cycle_relators(const CarterDiagram& d, const std::vector<int>& c, RelationFamily fam) {
    std::vector<Word> out;
    if (all_orders(d, c, 3)) {
        out.push_back(cycle_relator(c));
        return out;
    }
    if (fam == RelationFamily::non_crystallographic && c.size() == 3 && all_orders(d, c, 5)) {
        const int i0 = c[0], i1 = c[1], i2 = c[2];
        out.push_back(power({i0, i1, i2, i1}, 3));
        out.push_back(power({i1, i0, i1, i2, i1, i2}, 2));
        return out;
    }
    std::set<Word> seen;
    for (std::size_t k = 0; k < c.size(); ++k) {
        // closing edge c_k - c_{k+1}: start at c_{k+1} and walk forwards
        auto t = traversal(c, (k + 1) % c.size(), false);
        if (!traversal_qualifies(d, t, fam)) continue;
        Word w = cycle_relator(t);
        if (seen.insert(w).second) out.push_back(std::move(w));
    }
    return out;
}

inline void validate_orders(const CarterDiagram& d, RelationFamily fam) {
    for (int i = 0; i < d.n(); ++i)
        for (int j = i + 1; j < d.n(); ++j) {
            const int m = d.order(i, j);
            const bool ok = fam == RelationFamily::crystallographic ? (m == 2 || m == 3 || m == 4 || m == 6)
                                                                     : (m == 2 || m == 3 || m == 5);
            if (!ok) throw std::invalid_argument("carter: pair order " + std::to_string(m) + " not allowed");
        }
}

inline Presentation presentation_skipping(const CarterDiagram& d, const std::vector<int>* skip) {
    const RelationFamily fam = relation_family(d);
    validate_orders(d, fam);
    Presentation p;
    p.n_generators = d.n();
    for (int i = 0; i < d.n(); ++i) p.relators.push_back({i, i});
    for (int i = 0; i < d.n(); ++i)
        for (int j = i + 1; j < d.n(); ++j) p.relators.push_back(power({i, j}, d.order(i, j)));
    for (const auto& c : chordless_cycles(d)) {
        if (skip && c == *skip) continue;
        for (auto& w : cycle_relators(d, c, fam)) p.relators.push_back(std::move(w));
    }
    return p;
}

}  // namespace detail

inline Presentation presentation_of(const CarterDiagram& d) { return detail::presentation_skipping(d, nullptr); }

// ---------------------------------------------------------------------------
// Coset enumeration over the trivial subgroup.

struct CosetTable {
    enum class Status { complete, overflowed };
    Status status = Status::overflowed;
    int n_generators = 0;
    std::vector<std::vector<int>> rows;  // rows[c][x] = c . t_x, coset 0 is the subgroup
    std::size_t max_cosets = 0;          // peak number of live cosets
    std::size_t defined = 0;             // cosets defined in total

    std::size_t order() const { return rows.size(); }
    bool complete() const { return status == Status::complete; }
    int trace(const Word& w, int from = 0) const {
        int c = from;
        for (int x : w) c = rows[c][x];
        return c;
    }
    bool is_trivial(const Word& w) const { return trace(w) == 0; }
};

inline constexpr std::size_t default_coset_cap = 2000000;

namespace detail {

// HLT definitions with Felsch-style deduction processing, unions by coset number.
class CosetEnumerator {
public:
    CosetEnumerator(const Presentation& p, std::size_t cap) : p_(p), g_(p.n_generators), cap_(cap) {
        if (g_ <= 0) throw std::invalid_argument("carter: presentation without generators");
        for (const auto& r : p_.relators)
            for (int x : r)
                if (x < 0 || x >= g_) throw std::invalid_argument("carter: relator letter out of range");
        for (const auto& r : p_.relators)
            if (!r.empty()) rels_.push_back(r);
        by_first_.resize(g_);
        for (std::size_t r = 0; r < rels_.size(); ++r)
            for (std::size_t o = 0; o < rels_[r].size(); ++o) by_first_[rels_[r][o]].push_back({r, o});
    }

    CosetTable run() {
        new_coset();
        for (int c = 0; c < static_cast<int>(parent_.size()) && !overflow_; ++c) {
            for (std::size_t r = 0; r < rels_.size() && alive(c) && !overflow_; ++r) {
                scan(c, rels_[r], 0, true);
                process_deductions();
            }
            for (int x = 0; x < g_ && alive(c) && !overflow_; ++x)
                if (get(c, x) < 0) {
                    if (!define(c, x)) break;
                    process_deductions();
                }
        }
        CosetTable t;
        t.n_generators = g_;
        t.max_cosets = peak_;
        t.defined = parent_.size();
        if (overflow_) return t;
        std::vector<int> number(parent_.size(), -1);
        int k = 0;
        for (std::size_t c = 0; c < parent_.size(); ++c)
            if (alive(static_cast<int>(c))) number[c] = k++;
        t.rows.assign(k, std::vector<int>(g_));
        for (std::size_t c = 0; c < parent_.size(); ++c) {
            if (number[c] < 0) continue;
            for (int x = 0; x < g_; ++x) t.rows[number[c]][x] = number[get(static_cast<int>(c), x)];
        }
        t.status = CosetTable::Status::complete;
        return t;
    }

private:
    int get(int c, int x) const { return table_[static_cast<std::size_t>(c) * g_ + x]; }
    void put(int c, int x, int d) { table_[static_cast<std::size_t>(c) * g_ + x] = d; }
    bool alive(int c) const { return parent_[c] == c; }
    int rep(int c) {
        int r = c;
        while (parent_[r] != r) r = parent_[r];
        while (parent_[c] != r) {
            const int nx = parent_[c];
            parent_[c] = r;
            c = nx;
        }
        return r;
    }

    int new_coset() {
        const int d = static_cast<int>(parent_.size());
        parent_.push_back(d);
        table_.resize(table_.size() + g_, -1);
        ++live_;
        peak_ = std::max(peak_, live_);
        return d;
    }

    void assign(int c, int x, int d) {
        put(c, x, d);
        put(d, x, c);
        deductions_.push_back({c, x});
    }

    bool define(int c, int x) {
        if (parent_.size() >= cap_) {
            overflow_ = true;
            return false;
        }
        assign(c, x, new_coset());
        return true;
    }

    // Scans the cyclic rotation of w starting at offset o from coset c.
    void scan(int c, const Word& w, std::size_t o, bool fill) {
        const std::size_t len = w.size();
        auto letter = [&](std::size_t k) { return w[(o + k) % len]; };
        int f = c, b = c;
        std::size_t i = 0, j = len;  // unscanned letters are [i, j)
        while (true) {
            while (i < j && get(f, letter(i)) >= 0) f = get(f, letter(i++));
            if (i == j) {
                if (f != b) coincidence(f, b);
                return;
            }
            while (j > i && get(b, letter(j - 1)) >= 0) b = get(b, letter(--j));
            if (i == j) {
                coincidence(f, b);
                return;
            }
            if (i + 1 == j) {
                assign(f, letter(i), b);
                return;
            }
            if (!fill) return;
            if (!define(f, letter(i))) return;
        }
    }

    void process_deductions() {
        while (!deductions_.empty() && !overflow_) {
            auto [c, x] = deductions_.back();
            deductions_.pop_back();
            if (!alive(c)) continue;
            const int d = get(c, x);
            for (const auto& [r, o] : by_first_[x]) {
                if (!alive(c)) break;
                scan(c, rels_[r], o, false);
                if (d >= 0 && alive(d)) scan(d, rels_[r], o, false);
            }
        }
    }

    void merge(int k, int l, std::vector<int>& queue) {
        k = rep(k);
        l = rep(l);
        if (k == l) return;
        if (l < k) std::swap(k, l);
        parent_[l] = k;
        --live_;
        queue.push_back(l);
    }

    void coincidence(int a, int b) {
        std::vector<int> queue;
        merge(a, b, queue);
        for (std::size_t q = 0; q < queue.size(); ++q) {
            const int e = queue[q];
            for (int x = 0; x < g_; ++x) {
                const int f = get(e, x);
                if (f < 0) continue;
                if (get(f, x) == e) put(f, x, -1);
                const int e1 = rep(e), f1 = rep(f);
                if (get(e1, x) >= 0) merge(f1, get(e1, x), queue);
                else if (get(f1, x) >= 0) merge(e1, get(f1, x), queue);
                else {
                    put(e1, x, f1);
                    put(f1, x, e1);
                    deductions_.push_back({e1, x});
                }
            }
        }
    }

    const Presentation& p_;
    int g_;
    std::size_t cap_;
    std::vector<Word> rels_;
    std::vector<std::vector<std::pair<std::size_t, std::size_t>>> by_first_;
    std::vector<int> table_;
    std::vector<int> parent_;
    std::vector<std::pair<int, int>> deductions_;
    std::size_t live_ = 0, peak_ = 0;
    bool overflow_ = false;
};

}  // namespace detail

inline CosetTable coset_table(const Presentation& p, std::size_t cap = default_coset_cap) {
    return detail::CosetEnumerator(p, cap).run();
}

// Group order, or nullopt when the cap is reached.
inline std::optional<std::size_t> todd_coxeter(const Presentation& p, std::size_t cap = default_coset_cap) {
    auto t = coset_table(p, cap);
    if (!t.complete()) return std::nullopt;
    return t.order();
}

// ---------------------------------------------------------------------------
// Verification against the reflection group.

inline bool relations_hold(const Presentation& p, const std::vector<WeylElement>& gens) {
    if (static_cast<int>(gens.size()) != p.n_generators) throw std::invalid_argument("carter: generator count mismatch");
    for (const auto& r : p.relators) {
        if (r.empty()) continue;
        WeylElement w = gens[r[0]];
        for (std::size_t k = 1; k < r.size(); ++k) w = compose(w, gens[r[k]]);
        if (!w.is_identity()) return false;
    }
    return true;
}

inline std::vector<WeylElement> witness_reflections(const CarterDiagram& d, const RootSystem& phi) {
    if (!d.roots()) throw std::invalid_argument("carter: diagram carries no witness roots");
    std::vector<WeylElement> g;
    for (auto r : *d.roots()) g.push_back(reflection_of(r, phi));
    return g;
}

// t_i -> s_{beta_i} respects every relator of the diagram presentation.
inline bool relations_hold_in_group(const CarterDiagram& d, const RootSystem& phi) {
    return relations_hold(presentation_of(d), witness_reflections(d, phi));
}

enum class IsoVerdict { iso, undecided, failed };

inline std::string verdict_name(IsoVerdict v) {
    switch (v) {
        case IsoVerdict::iso: return "iso";
        case IsoVerdict::undecided: return "undecided";
        default: return "failed";
    }
}

struct IsoReport {
    IsoVerdict verdict = IsoVerdict::failed;
    bool relations_hold = false;
    std::uint64_t order_expected = 0;
    std::optional<std::size_t> order_found;
};

// Surjection onto W plus equal finite orders.
inline IsoReport verify_iso(const CarterDiagram& d, const RootSystem& phi, std::size_t cap = default_coset_cap) {
    IsoReport r;
    r.order_expected = weyl_group_order(phi);
    const Presentation p = presentation_of(d);
    r.relations_hold = relations_hold(p, witness_reflections(d, phi));
    r.order_found = todd_coxeter(p, cap);
    if (!r.relations_hold) r.verdict = IsoVerdict::failed;
    else if (!r.order_found) r.verdict = IsoVerdict::undecided;
    else r.verdict = *r.order_found == r.order_expected ? IsoVerdict::iso : IsoVerdict::failed;
    return r;
}

// Every qualifying numbering/direction of the cycle, used alone, yields the same order.
inline std::optional<bool> cycle_relation_equivalence(const CarterDiagram& d, const std::vector<int>& cycle,
                                                      std::size_t cap = default_coset_cap) {
    const RelationFamily fam = relation_family(d);
    const Presentation base = detail::presentation_skipping(d, &cycle);
    std::optional<std::size_t> first;
    bool any = false;
    for (std::size_t s = 0; s < cycle.size(); ++s)
        for (int back = 0; back < 2; ++back) {
            auto t = detail::traversal(cycle, s, back);
            if (!detail::traversal_qualifies(d, t, fam)) continue;
            Presentation p = base;
            p.relators.push_back(cycle_relator(t));
            auto o = todd_coxeter(p, cap);
            if (!o) return std::nullopt;
            if (any && *o != *first) return false;
            first = o;
            any = true;
        }
    if (!any) throw std::invalid_argument("carter: cycle admits no single relator of this shape");
    return true;
}

// ---------------------------------------------------------------------------
// Presentations along a Hurwitz move.

struct PresentationTransport {
    CarterDiagram source;
    CarterDiagram target;              // diagram of the moved tuple (r_1, ..., r_m)
    std::vector<Word> forward;         // image of t_j as a word in the r's
    std::vector<Word> backward;        // image of r_j as a word in the t's
};

inline Word substitute(const Word& w, const std::vector<Word>& images) {
    Word out;
    for (int x : w) out.insert(out.end(), images.at(x).begin(), images.at(x).end());
    return out;
}

// Free reduction using involutive generators.
inline Word reduce_involutive(const Word& w) {
    Word out;
    for (int x : w) {
        if (!out.empty() && out.back() == x) out.pop_back();
        else out.push_back(x);
    }
    return out;
}

inline PresentationTransport hurwitz_presentation_transport(const CarterDiagram& d, const RootSystemPtr& phi,
                                                            std::size_t i, Direction dir) {
    if (!d.roots()) throw std::invalid_argument("carter: diagram carries no witness roots");
    const int n = d.n();
    if (static_cast<int>(i) + 1 >= n) throw std::out_of_range("carter: Hurwitz move position out of range");
    PresentationTransport tr;
    tr.source = d;
    tr.forward.resize(n);
    tr.backward.resize(n);
    for (int j = 0; j < n; ++j) tr.forward[j] = tr.backward[j] = {j};
    if (!d.edge(static_cast<int>(i), static_cast<int>(i) + 1)) {
        tr.target = d;
        return tr;
    }
    ReflectionFactorization f{phi, *d.roots()};
    tr.target = diagram_of(hurwitz_move(f, i, dir));
    const int a = static_cast<int>(i), b = a + 1;
    if (dir == Direction::forward) {
        // r_a = t_a t_b t_a, r_b = t_a
        tr.forward[a] = {b};
        tr.forward[b] = {b, a, b};
        tr.backward[a] = {a, b, a};
        tr.backward[b] = {a};
    } else {
        // r_a = t_b, r_b = t_b t_a t_b
        tr.forward[a] = {a, b, a};
        tr.forward[b] = {a};
        tr.backward[a] = {b};
        tr.backward[b] = {b, a, b};
    }
    return tr;
}

}  // namespace carter
