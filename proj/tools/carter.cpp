// carter: enumerate, compare and verify Carter diagrams from the command line.
//
// Exit codes: 0 success, 1 verification failure, 2 usage or parse error, 3 cap reached.

#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>

#include "CLI11.hpp"
#include "carter/carter.hpp"

using namespace carter;
using nlohmann::json;

namespace {

void report(const std::exception& e) {
    std::string msg = e.what();
    if (msg.rfind("carter: ", 0) == 0) msg = msg.substr(8);
    std::cerr << "carter: " << msg << "\n";
}

enum Exit { ok = 0, verification_failed = 1, usage = 2, overflow = 3 };

struct Overflow : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct TypeArgs {
    std::string family;
    int rank = 0;
    int m = 0;

    RootSystemPtr build() const {
        if (family.size() != 1) throw io::ParseError("family must be a single letter");
        try {
            return build_root_system(static_cast<char>(std::toupper(static_cast<unsigned char>(family[0]))), rank, m);
        } catch (const std::invalid_argument& e) {
            throw io::ParseError(e.what());
        }
    }
};

void add_type(CLI::App* cmd, TypeArgs& t) {
    cmd->add_option("family", t.family, "A, B, C, D, E, F, G, H or I")->required();
    cmd->add_option("rank", t.rank, "rank")->required()->check(CLI::PositiveNumber);
    cmd->add_option("--m", t.m, "dihedral order for I2(m)");
}

json read_json(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw io::ParseError("cannot open " + path);
    try {
        return json::parse(in);
    } catch (const json::parse_error& e) {
        throw io::ParseError(path + ": " + e.what());
    }
}

void write_out(const std::string& path, const std::string& text) {
    if (path.empty()) {
        std::cout << text;
        return;
    }
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write " + path);
    out << text;
}

bool needs_long_run(const RootSystem& phi) { return phi.type().family == 'E' && phi.rank() >= 7; }

// Published class counts used as external checkpoints for the seed search.
std::optional<std::size_t> published_count(const CartanType& t) {
    if (t.family == 'E' && t.rank == 7) return 233;
    if (t.family == 'E' && t.rank == 8) return 1242;
    return std::nullopt;
}

bool reproduced(const DiagramAtlas& a) {
    const auto target = published_count(a.type);
    return target && !a.incomplete && a.size() == *target;
}

void print_atlas_table(std::ostream& os, const DiagramAtlas& a) {
    os << "type " << a.type.label() << "  method " << a.method << "\n"
       << "  classes               " << a.size()
       << (reproduced(a) ? " (reproduced)" : a.lower_bound ? " (lower bound)" : "") << "\n"
       << "  admissible            " << a.count_admissible() << "\n"
       << "  cyclically orientable " << a.count_orientable() << "\n";
    if (a.incomplete) os << "  incomplete: a cap was reached\n";
}

// ---------------------------------------------------------------------------

int cmd_roots(const TypeArgs& t, bool as_json) {
    auto phi = t.build();
    const auto order = weyl_group_order(*phi);
    if (as_json) {
        json j = io::type_json(phi->type());
        j["order"] = order;
        json roots = json::array();
        for (std::size_t i = 0; i < phi->size(); ++i) roots.push_back(io::to_json(phi->root(i)));
        j["roots"] = roots;
        json simple = json::array();
        for (auto s : phi->simple_indices()) simple.push_back(io::to_json(phi->root(s)));
        j["simple_roots"] = simple;
        std::cout << j.dump(2) << "\n";
        return ok;
    }
    std::cout << "type " << phi->label() << "\n"
              << "  roots        " << phi->size() << "\n"
              << "  positive     " << phi->num_positive() << "\n"
              << "  group order  " << order << "\n"
              << "  simple roots\n";
    for (auto s : phi->simple_indices()) std::cout << "    " << io::to_json(phi->root(s)).dump() << "\n";
    return ok;
}

struct EnumerateArgs {
    std::string method = "oracle";
    std::string output;
    std::size_t orbit_cap = default_orbit_cap;
    std::size_t subset_cap = default_subset_cap;
    std::size_t budget = 20000;
    std::uint64_t seed = 1;
    bool long_running = false;
    bool any_rank = false;
};

DiagramAtlas run_enumeration(const RootSystemPtr& phi, const EnumerateArgs& a) {
    const char fam = phi->type().family;
    if (a.method == "construct") {
        switch (fam) {
            case 'A': return gen_type_A(phi->type().rank, phi);
            case 'B': return gen_type_B(phi->type().rank, phi);
            case 'D': return gen_type_D(phi->type().rank, phi);
            default: throw io::ParseError("construct is available for A, B and D only");
        }
    }
    if (a.method == "oracle") {
        try {
            return enumerate_by_subsets(phi, !a.any_rank, a.subset_cap);
        } catch (const std::length_error& e) {
            throw Overflow(e.what());
        }
    }
    if (a.method == "hurwitz") {
        auto seeds = find_quasi_coxeter_class_seeds(phi, a.budget, a.seed);
        DiagramAtlas atlas = enumerate_by_hurwitz(seeds, a.orbit_cap);
        atlas.lower_bound = !reproduced(atlas);  // seeds come from a random search
        return atlas;
    }
    throw io::ParseError("unknown method '" + a.method + "'");
}

int cmd_enumerate(const TypeArgs& t, const EnumerateArgs& a) {
    auto phi = t.build();
    if (needs_long_run(*phi) && !a.long_running) throw io::ParseError(phi->label() + " requires --long-running");
    DiagramAtlas atlas = run_enumeration(phi, a);
    write_out(a.output, io::to_json(atlas, phi.get()).dump(2) + "\n");
    if (!a.output.empty()) print_atlas_table(std::cout, atlas);
    return atlas.incomplete ? overflow : ok;
}

int cmd_check_theorem1(const TypeArgs& t, const std::string& atlas_path, std::size_t cap, const std::string& output) {
    auto phi = t.build();
    if (!phi->crystallographic()) throw io::ParseError("quiver comparison needs a crystallographic type");
    if (needs_long_run(*phi)) throw io::ParseError(phi->label() + " is outside the supported comparison range");
    DiagramAtlas atlas;
    if (atlas_path.empty()) {
        try {
            atlas = default_atlas(phi);
        } catch (const std::length_error& e) {
            throw Overflow(e.what());
        }
    } else {
        atlas = io::atlas_from_json(read_json(atlas_path), phi.get());
        if (!(atlas.type == phi->type())) throw io::ParseError("atlas type differs from the requested type");
    }
    const Theorem1Report r = check_theorem1(phi, atlas, cap);
    write_out(output, io::to_json(r).dump(2) + "\n");
    if (r.incomplete) return overflow;
    return r.pass ? ok : verification_failed;
}

int cmd_verify_presentations(const std::string& path, std::size_t cap, bool coxeter_only, const std::string& output) {
    const json doc = read_json(path);
    auto phi = build_root_system(io::type_from_json(doc));
    DiagramAtlas atlas = io::atlas_from_json(doc, phi.get());
    std::set<DiagramCanonKey> coxeter;
    if (coxeter_only) coxeter = enumerate_by_hurwitz({coxeter_factorization(phi)}, default_orbit_cap).keys();
    json out = json::array();
    int failed = 0, undecided = 0;
    for (const auto& [key, e] : atlas.entries) {
        if (coxeter_only && !coxeter.count(key)) continue;
        if (!e.diagram.roots()) throw io::ParseError("atlas diagram without witness roots");
        const IsoReport r = verify_iso(e.diagram, *phi, cap);
        failed += r.verdict == IsoVerdict::failed;
        undecided += r.verdict == IsoVerdict::undecided;
        out.push_back(io::verdict_json(e.diagram, r));
    }
    write_out(output, out.dump(2) + "\n");
    if (failed) return verification_failed;
    return undecided ? overflow : ok;
}

int cmd_hurwitz_orbit(const std::string& path, const std::string& text, const std::string& type_label,
                      std::size_t cap, const std::string& output) {
    ReflectionFactorization f;
    if (!text.empty()) {
        std::string label = type_label;
        if (label.empty()) {
            const auto colon = text.find(':');
            if (colon == std::string::npos) throw io::ParseError("--text needs --type or a 'B3:' prefix");
            label = text.substr(0, colon);
        }
        auto phi = build_root_system(io::parse_type(label));
        try {
            f = parse_factorization_text(phi, text);
        } catch (const std::invalid_argument& e) {
            throw io::ParseError(e.what());
        }
    } else {
        f = io::factorization_from_json(read_json(path));
    }
    if (!is_reduced(f)) throw io::ParseError("factorization is not reduced");
    std::size_t orbit = 0;
    DiagramAtlas atlas;
    atlas.type = f.ambient->type();
    atlas.method = "hurwitz";
    const bool complete = for_each_in_hurwitz_orbit(f, cap, [&](const std::vector<RootIndex>& t) {
        ++orbit;
        CarterDiagram d = diagram_of(t, *f.ambient);
        const auto key = canonical_form(d);
        atlas_insert(atlas, key, make_entry(d));
    });
    atlas.incomplete = !complete;
    json j = io::to_json(atlas, f.ambient.get());
    j["orbit_size"] = orbit;
    j["factorization"] = factorization_text(f);
    write_out(output, j.dump(2) + "\n");
    return complete ? ok : overflow;
}

int cmd_export(const std::string& path, const std::string& format, const std::string& output) {
    const json doc = read_json(path);
    std::string text;
    if (doc.contains("b")) {
        const Quiver q = io::quiver_from_json(doc);
        if (format == "dot") text = io::to_dot(q);
        else if (format == "json") text = io::to_json(q).dump(2) + "\n";
        else throw io::ParseError("quivers export as dot or json");
    } else if (doc.contains("diagrams")) {
        auto phi = build_root_system(io::type_from_json(doc));
        const DiagramAtlas a = io::atlas_from_json(doc, phi.get());
        for (const auto& [key, e] : a.entries) {
            if (format == "dot") text += io::to_dot(e.diagram, phi->crystallographic());
            else if (format == "text") text += io::presentation_text(presentation_of(e.diagram)) + "\n";
            else if (format == "json") text += io::to_json(e.diagram, phi.get()).dump() + "\n";
        }
        if (format != "dot" && format != "text" && format != "json") throw io::ParseError("unknown format");
    } else if (doc.contains("edges")) {
        RootSystemPtr phi;
        if (doc.contains("type")) phi = build_root_system(io::type_from_json(doc));
        const CarterDiagram d = io::diagram_from_json(doc, phi.get());
        if (format == "dot") text = io::to_dot(d, relation_family(d) == RelationFamily::crystallographic);
        else if (format == "text") text = io::presentation_text(presentation_of(d));
        else if (format == "json") text = io::to_json(d, phi.get()).dump(2) + "\n";
        else throw io::ParseError("unknown format");
    } else if (doc.contains("roots")) {
        const ReflectionFactorization f = io::factorization_from_json(doc);
        if (format == "text") text = factorization_text(f) + "\n";
        else if (format == "dot") text = io::to_dot(diagram_of(f), f.ambient->crystallographic());
        else if (format == "json") text = io::to_json(f).dump(2) + "\n";
        else throw io::ParseError("unknown format");
    } else {
        throw io::ParseError("unrecognized document");
    }
    write_out(output, text);
    return ok;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Carter diagrams of reflection factorizations"};
    app.require_subcommand(1);

    TypeArgs roots_t;
    bool roots_json = false;
    auto* roots = app.add_subcommand("roots", "root system summary");
    add_type(roots, roots_t);
    roots->add_flag("--json", roots_json, "print JSON with all root coordinates");

    TypeArgs enum_t;
    EnumerateArgs enum_a;
    auto* enumerate = app.add_subcommand("enumerate", "diagram atlas of a type");
    add_type(enumerate, enum_t);
    enumerate->add_option("--method", enum_a.method, "construct, oracle or hurwitz")
        ->check(CLI::IsMember({"construct", "oracle", "hurwitz"}));
    enumerate->add_option("-o,--output", enum_a.output, "atlas JSON file");
    enumerate->add_option("--orbit-cap", enum_a.orbit_cap)->check(CLI::PositiveNumber);
    enumerate->add_option("--subset-cap", enum_a.subset_cap)->check(CLI::PositiveNumber);
    enumerate->add_option("--budget", enum_a.budget, "random trials for class seeds")->check(CLI::PositiveNumber);
    enumerate->add_option("--seed", enum_a.seed, "seed for the class-seed search");
    enumerate->add_flag("--long-running", enum_a.long_running, "allow E7 and E8");
    enumerate->add_flag("--any-rank", enum_a.any_rank, "oracle: keep rank-n subsets of smaller full type");

    TypeArgs thm_t;
    std::string thm_atlas, thm_out;
    std::size_t thm_cap = default_mutation_cap;
    auto* thm = app.add_subcommand("check-theorem1", "compare the mutation class with the orientable diagrams");
    add_type(thm, thm_t);
    thm->add_option("--atlas", thm_atlas, "atlas JSON instead of computing one");
    thm->add_option("--mutation-cap", thm_cap)->check(CLI::PositiveNumber);
    thm->add_option("-o,--output", thm_out);

    std::string vp_path, vp_out;
    std::size_t vp_cap = default_coset_cap;
    bool vp_coxeter = false;
    auto* vp = app.add_subcommand("verify-presentations", "coset-enumerate every diagram presentation of an atlas");
    vp->add_option("atlas", vp_path)->required();
    vp->add_option("--coset-cap", vp_cap)->check(CLI::PositiveNumber);
    vp->add_flag("--coxeter-only", vp_coxeter, "restrict to diagrams of Coxeter-element factorizations");
    vp->add_option("-o,--output", vp_out);

    std::string ho_path, ho_text, ho_type, ho_out;
    std::size_t ho_cap = default_orbit_cap;
    auto* ho = app.add_subcommand("hurwitz-orbit", "Hurwitz orbit of a factorization and its diagrams");
    ho->add_option("factorization", ho_path, "factorization JSON");
    ho->add_option("--text", ho_text, "factorization in text form instead of a file");
    ho->add_option("--type", ho_type, "type label for --text");
    ho->add_option("--cap", ho_cap)->check(CLI::PositiveNumber);
    ho->add_option("-o,--output", ho_out);

    std::string ex_path, ex_format = "dot", ex_out;
    auto* ex = app.add_subcommand("export", "convert a JSON document");
    ex->add_option("input", ex_path)->required();
    ex->add_option("--format", ex_format)->check(CLI::IsMember({"json", "dot", "text"}));
    ex->add_option("-o,--output", ex_out);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? ok : usage;
    }

    try {
        if (*roots) return cmd_roots(roots_t, roots_json);
        if (*enumerate) return cmd_enumerate(enum_t, enum_a);
        if (*thm) return cmd_check_theorem1(thm_t, thm_atlas, thm_cap, thm_out);
        if (*vp) return cmd_verify_presentations(vp_path, vp_cap, vp_coxeter, vp_out);
        if (*ho) {
            if (ho_path.empty() == ho_text.empty()) throw io::ParseError("give a factorization file or --text");
            return cmd_hurwitz_orbit(ho_path, ho_text, ho_type, ho_cap, ho_out);
        }
        if (*ex) return cmd_export(ex_path, ex_format, ex_out);
    } catch (const io::ParseError& e) {
        report(e);
        return usage;
    } catch (const Overflow& e) {
        report(e);
        return overflow;
    } catch (const std::overflow_error& e) {
        report(e);
        return overflow;
    } catch (const std::exception& e) {
        report(e);
        return usage;
    }
    return usage;
}
