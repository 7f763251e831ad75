#pragma once

#include <cctype>
#include <iomanip>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "json.hpp"

#include "carter/diagram.hpp"
#include "carter/factorization.hpp"
#include "carter/families.hpp"
#include "carter/presentation.hpp"
#include "carter/quiver.hpp"
#include "carter/root_system.hpp"

namespace carter::io {

using nlohmann::json;

// Raised for malformed input documents.
struct ParseError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// "A4", "B3", "E6", "H3", "I2(5)"; also "A 4" style pairs via the overload.
inline CartanType parse_type(const std::string& label) {
    std::string s;
    for (char c : label)
        if (!std::isspace(static_cast<unsigned char>(c))) s.push_back(c);
    if (s.size() < 2) throw ParseError("bad type label '" + label + "'");
    const char fam = static_cast<char>(std::toupper(static_cast<unsigned char>(s[0])));
    try {
        if (fam == 'I') {
            const auto open = s.find('('), close = s.find(')');
            if (s.substr(1, open - 1) != "2" || open == std::string::npos || close != s.size() - 1)
                throw ParseError("bad dihedral label '" + label + "'");
            return CartanType::make('I', 2, std::stoi(s.substr(open + 1, close - open - 1)));
        }
        std::size_t used = 0;
        const int rank = std::stoi(s.substr(1), &used);
        if (used != s.size() - 1) throw ParseError("bad type label '" + label + "'");
        return CartanType::make(fam, rank);
    } catch (const std::logic_error& e) {
        throw ParseError(e.what());
    }
}

inline std::string hex(const std::string& bytes) {
    std::ostringstream os;
    for (unsigned char c : bytes) os << std::hex << std::setw(2) << std::setfill('0') << static_cast<int>(c);
    return os.str();
}

// ---------------------------------------------------------------------------
// Coordinates: integers as numbers, everything else as strings ("1/2", "1/2+1/2*sqrt5").

inline json to_json(const Scalar& s) {
    if (s.is_integer()) return s.rational_part().num();
    return s.str();
}

inline Scalar scalar_from_json(const json& j) {
    if (j.is_number_integer()) return Scalar(j.get<std::int64_t>());
    if (j.is_string()) {
        try {
            return Scalar::parse(j.get<std::string>());
        } catch (const std::exception& e) {
            throw ParseError(std::string("bad coordinate: ") + e.what());
        }
    }
    throw ParseError("coordinate must be an integer or a string");
}

inline json to_json(const Vector& v) {
    json a = json::array();
    for (const auto& x : v) a.push_back(to_json(x));
    return a;
}

inline RootIndex root_from_json(const json& j, const RootSystem& phi) {
    if (!j.is_array() || j.size() != phi.dim()) throw ParseError("root has the wrong dimension");
    Vector v;
    for (const auto& x : j) v.push_back(scalar_from_json(x));
    auto idx = phi.index_of(v);
    if (!idx) throw ParseError("vector is not a root of " + phi.label());
    return *idx;
}

inline json type_json(const CartanType& t) {
    json j;
    j["type"] = t.label();
    j["rank"] = t.rank;
    return j;
}

inline CartanType type_from_json(const json& j) {
    if (!j.contains("type") || !j["type"].is_string()) throw ParseError("missing \"type\"");
    CartanType t = parse_type(j["type"].get<std::string>());
    if (j.contains("rank") && j["rank"] != t.rank) throw ParseError("rank disagrees with type label");
    return t;
}

// ---------------------------------------------------------------------------
// Diagrams: {"n", "edges": [[i, j, m], ...], "roots": [[coords], ...]}

inline json to_json(const CarterDiagram& d, const RootSystem* phi = nullptr) {
    json j;
    j["n"] = d.n();
    json edges = json::array();
    for (int i = 0; i < d.n(); ++i)
        for (int k = i + 1; k < d.n(); ++k)
            if (d.edge(i, k)) edges.push_back({i, k, d.order(i, k)});
    j["edges"] = edges;
    if (phi && d.roots()) {
        json roots = json::array();
        for (auto r : *d.roots()) roots.push_back(to_json(phi->root(r)));
        j["roots"] = roots;
    }
    return j;
}

inline CarterDiagram diagram_from_json(const json& j, const RootSystem* phi = nullptr) {
    try {
        const int n = j.at("n").get<int>();
        if (n < 0 || n > 64) throw ParseError("diagram size out of range");
        CarterDiagram d(n);
        for (const auto& e : j.at("edges")) {
            if (!e.is_array() || e.size() != 3) throw ParseError("edge must be [i, j, m]");
            const int a = e[0].get<int>(), b = e[1].get<int>(), m = e[2].get<int>();
            if (a < 0 || b < 0 || a >= n || b >= n || a == b) throw ParseError("edge endpoint out of range");
            d.set_order(a, b, m);
        }
        if (j.contains("roots")) {
            if (!phi) throw ParseError("roots given without a root system");
            std::vector<RootIndex> r;
            for (const auto& v : j["roots"]) r.push_back(root_from_json(v, *phi));
            if (static_cast<int>(r.size()) != n) throw ParseError("root count differs from n");
            const CarterDiagram check = diagram_of(r, *phi);
            if (!check.same_matrix(d)) throw ParseError("edges disagree with the given roots");
            d.set_roots(std::move(r));
        }
        return d;
    } catch (const json::exception& e) {
        throw ParseError(std::string("malformed diagram: ") + e.what());
    } catch (const std::invalid_argument& e) {
        throw ParseError(std::string("invalid diagram: ") + e.what());
    }
}

// ---------------------------------------------------------------------------
// Atlases: {"type", "rank", "method", "incomplete", "lower_bound", "diagrams": [...]}

inline json to_json(const DiagramAtlas& a, const RootSystem* phi = nullptr) {
    json j = type_json(a.type);
    j["method"] = a.method;
    j["incomplete"] = a.incomplete;
    j["lower_bound"] = a.lower_bound;
    j["count"] = a.size();
    j["admissible"] = a.count_admissible();
    j["cyclically_orientable"] = a.count_orientable();
    json ds = json::array();
    for (const auto& [key, e] : a.entries) {
        json d = to_json(e.diagram, phi);
        d["key"] = hex(key);
        d["admissible"] = e.admissible;
        d["cyclically_orientable"] = e.cyclically_orientable;
        ds.push_back(d);
    }
    j["diagrams"] = ds;
    return j;
}

inline DiagramAtlas atlas_from_json(const json& j, const RootSystem* phi = nullptr) {
    try {
        DiagramAtlas a;
        a.type = type_from_json(j);
        a.method = j.value("method", std::string("file"));
        a.incomplete = j.value("incomplete", false);
        a.lower_bound = j.value("lower_bound", false);
        for (const auto& dj : j.at("diagrams")) {
            CarterDiagram d = diagram_from_json(dj, phi);
            AtlasEntry e = make_entry(d);
            if (dj.contains("admissible") && dj["admissible"] != e.admissible)
                throw ParseError("stored admissible flag is wrong");
            if (dj.contains("cyclically_orientable") && dj["cyclically_orientable"] != e.cyclically_orientable)
                throw ParseError("stored orientability flag is wrong");
            atlas_insert(a, canonical_form(d), std::move(e));
        }
        return a;
    } catch (const json::exception& e) {
        throw ParseError(std::string("malformed atlas: ") + e.what());
    }
}

// ---------------------------------------------------------------------------
// Factorizations: {"type", "rank", "roots": [[coords], ...]}

inline json to_json(const ReflectionFactorization& f) {
    json j = type_json(f.ambient->type());
    json roots = json::array();
    for (auto r : f.refs) roots.push_back(to_json(f.ambient->root(r)));
    j["roots"] = roots;
    return j;
}

inline ReflectionFactorization factorization_from_json(const json& j) {
    try {
        auto phi = build_root_system(type_from_json(j));
        std::vector<RootIndex> r;
        for (const auto& v : j.at("roots")) r.push_back(root_from_json(v, *phi));
        return ReflectionFactorization(phi, std::move(r));
    } catch (const json::exception& e) {
        throw ParseError(std::string("malformed factorization: ") + e.what());
    } catch (const std::invalid_argument& e) {
        throw ParseError(std::string("invalid factorization: ") + e.what());
    }
}

// ---------------------------------------------------------------------------
// Quivers: {"n", "b": [[int]], "d": [int]}

inline json to_json(const Quiver& q) {
    json j;
    j["n"] = q.n();
    json b = json::array();
    for (int i = 0; i < q.n(); ++i) {
        json row = json::array();
        for (int k = 0; k < q.n(); ++k) row.push_back(q.b(i, k));
        b.push_back(row);
    }
    j["b"] = b;
    j["d"] = q.symmetrizer();
    return j;
}

inline Quiver quiver_from_json(const json& j) {
    try {
        const int n = j.at("n").get<int>();
        if (n < 0 || n > 64) throw ParseError("quiver size out of range");
        std::vector<int> b;
        const auto& rows = j.at("b");
        if (!rows.is_array() || static_cast<int>(rows.size()) != n) throw ParseError("b must have n rows");
        for (const auto& row : rows) {
            if (!row.is_array() || static_cast<int>(row.size()) != n) throw ParseError("b must be square");
            for (const auto& x : row) b.push_back(x.get<int>());
        }
        std::vector<int> d = j.contains("d") ? j["d"].get<std::vector<int>>() : std::vector<int>(n, 1);
        return Quiver(n, std::move(b), std::move(d));
    } catch (const json::exception& e) {
        throw ParseError(std::string("malformed quiver: ") + e.what());
    } catch (const std::invalid_argument& e) {
        throw ParseError(std::string("invalid quiver: ") + e.what());
    }
}

// ---------------------------------------------------------------------------
// Reports.

inline json to_json(const Theorem1Report& r) {
    json j = type_json(r.type);
    j["pass"] = r.pass;
    j["incomplete"] = r.incomplete;
    j["class_size"] = r.class_size;
    j["atlas_size"] = r.atlas_size;
    auto list = [](const std::vector<CarterDiagram>& ds) {
        json a = json::array();
        for (const auto& d : ds) a.push_back(to_json(d));
        return a;
    };
    j["missing"] = list(r.missing);
    j["extra"] = list(r.extra);
    j["not_orientable_realized"] = list(r.not_orientable_realized);
    return j;
}

inline json verdict_json(const CarterDiagram& d, const IsoReport& r) {
    json j;
    j["diagram_key"] = hex(canonical_form(d));
    j["order_expected"] = r.order_expected;
    j["order_found"] = r.order_found ? json(*r.order_found) : json(nullptr);
    j["relations_hold"] = r.relations_hold;
    j["verdict"] = verdict_name(r.verdict);
    return j;
}

// ---------------------------------------------------------------------------
// Text forms.

// "gens n" followed by one relator per line, 1-based.
inline std::string presentation_text(const Presentation& p) {
    std::ostringstream os;
    os << "gens " << p.n_generators << "\n";
    for (const auto& r : p.relators) {
        for (std::size_t k = 0; k < r.size(); ++k) os << (k ? " " : "") << r[k] + 1;
        os << "\n";
    }
    return os.str();
}

inline Presentation parse_presentation_text(const std::string& text) {
    std::istringstream is(text);
    std::string line, head;
    Presentation p;
    if (!std::getline(is, line)) throw ParseError("empty presentation");
    std::istringstream hs(line);
    if (!(hs >> head >> p.n_generators) || head != "gens" || p.n_generators <= 0)
        throw ParseError("presentation must start with 'gens n'");
    while (std::getline(is, line)) {
        std::istringstream ls(line);
        Word w;
        long long x;
        while (ls >> x) {
            if (x < 1 || x > p.n_generators) throw ParseError("generator index out of range");
            w.push_back(static_cast<int>(x - 1));
        }
        if (!ls.eof()) throw ParseError("non-numeric token in relator");
        if (!w.empty()) p.relators.push_back(std::move(w));
    }
    return p;
}

// Undirected graph; each edge repeated display-weight times.
inline std::string to_dot(const CarterDiagram& d, bool crystallographic = true) {
    std::ostringstream os;
    os << "graph carter {\n  node [shape=circle];\n";
    for (int i = 0; i < d.n(); ++i) os << "  " << i << ";\n";
    for (int i = 0; i < d.n(); ++i)
        for (int k = i + 1; k < d.n(); ++k) {
            if (!d.edge(i, k)) continue;
            const int w = display_weight(d.order(i, k), crystallographic);
            for (int r = 0; r < w; ++r) os << "  " << i << " -- " << k << ";\n";
        }
    os << "}\n";
    return os.str();
}

inline std::string to_dot(const Quiver& q) {
    std::ostringstream os;
    os << "digraph quiver {\n  node [shape=circle];\n";
    for (int i = 0; i < q.n(); ++i) os << "  " << i << " [label=\"" << i << " (" << q.d(i) << ")\"];\n";
    for (int i = 0; i < q.n(); ++i)
        for (int k = 0; k < q.n(); ++k) {
            if (q.b(i, k) <= 0) continue;
            os << "  " << i << " -> " << k;
            if (q.b(i, k) != 1 || q.b(k, i) != -1) os << " [label=\"" << q.b(i, k) << "," << q.b(k, i) << "\"]";
            os << ";\n";
        }
    os << "}\n";
    return os.str();
}

}  // namespace carter::io
