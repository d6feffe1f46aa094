#pragma once

/// @file
///
/// Reading and writing lattice-spec documents. The format is JSON with four
/// top-level fields:
///
///   name      string
///   basis     9 reals, row-major rows of the lattice basis
///   vertices  list of { id, position[3], mass }
///   bonds     list of { from, to, shift[3 ints], matrix[9 row-major] }
///
/// Each undirected bond appears once with the matrix for the stated
/// orientation; the reverse edge is generated on parse. Unknown fields are
/// rejected.

#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "latvib/lattice.hpp"

namespace latvib {

namespace detail {

inline void reject_unknown_fields(const nlohmann::json& obj,
                                  std::initializer_list<const char*> allowed,
                                  const char* where) {
    for (const auto& [key, value] : obj.items()) {
        bool ok = false;
        for (const char* a : allowed)
            if (key == a) ok = true;
        if (!ok)
            throw SpecError(std::string("unknown field '") + key + "' in " + where);
    }
}

inline Vec3 parse_vec3(const nlohmann::json& j, const char* where) {
    if (!j.is_array() || j.size() != 3)
        throw SpecError(std::string(where) + " must be a list of 3 numbers");
    Vec3 v;
    for (int i = 0; i < 3; ++i) {
        if (!j[i].is_number())
            throw SpecError(std::string(where) + " must be numeric");
        v[i] = j[i].get<double>();
    }
    return v;
}

inline Mat3 parse_mat3(const nlohmann::json& j, const char* where) {
    if (!j.is_array() || j.size() != 9)
        throw SpecError(std::string(where) + " must be a row-major list of 9 numbers");
    Mat3 m;
    for (int i = 0; i < 9; ++i) {
        if (!j[i].is_number())
            throw SpecError(std::string(where) + " must be numeric");
        m.a[i] = j[i].get<double>();
    }
    return m;
}

}  // namespace detail

inline CrystalSpec parse_crystal(const std::string& text) {
    nlohmann::json doc;
    try {
        doc = nlohmann::json::parse(text);
    } catch (const nlohmann::json::exception& e) {
        throw SpecError(std::string("malformed document: ") + e.what());
    }
    if (!doc.is_object()) throw SpecError("malformed document: expected an object");
    detail::reject_unknown_fields(doc, {"name", "basis", "vertices", "bonds"},
                                  "document");
    for (const char* field : {"name", "basis", "vertices", "bonds"})
        if (!doc.contains(field))
            throw SpecError(std::string("missing field '") + field + "'");
    if (!doc["name"].is_string()) throw SpecError("'name' must be a string");

    const Mat3 b = detail::parse_mat3(doc["basis"], "'basis'");
    std::array<Vec3, 3> rows;
    for (int i = 0; i < 3; ++i) rows[i] = {b(i, 0), b(i, 1), b(i, 2)};

    if (!doc["vertices"].is_array()) throw SpecError("'vertices' must be a list");
    std::vector<VertexClass> verts;
    for (const auto& jv : doc["vertices"]) {
        if (!jv.is_object()) throw SpecError("vertex entries must be objects");
        detail::reject_unknown_fields(jv, {"id", "position", "mass"}, "vertex");
        for (const char* field : {"id", "position", "mass"})
            if (!jv.contains(field))
                throw SpecError(std::string("vertex missing '") + field + "'");
        if (!jv["id"].is_string()) throw SpecError("vertex 'id' must be a string");
        if (!jv["mass"].is_number()) throw SpecError("vertex 'mass' must be numeric");
        verts.push_back({jv["id"].get<std::string>(),
                         detail::parse_vec3(jv["position"], "vertex 'position'"),
                         jv["mass"].get<double>()});
    }

    if (!doc["bonds"].is_array()) throw SpecError("'bonds' must be a list");
    std::vector<BondDecl> bonds;
    for (const auto& jb : doc["bonds"]) {
        if (!jb.is_object()) throw SpecError("bond entries must be objects");
        detail::reject_unknown_fields(jb, {"from", "to", "shift", "matrix"}, "bond");
        for (const char* field : {"from", "to", "shift", "matrix"})
            if (!jb.contains(field))
                throw SpecError(std::string("bond missing '") + field + "'");
        if (!jb["from"].is_string() || !jb["to"].is_string())
            throw SpecError("bond endpoints must be vertex id strings");
        const auto& js = jb["shift"];
        if (!js.is_array() || js.size() != 3)
            throw SpecError("bond 'shift' must be a list of 3 integers");
        std::array<int, 3> shift;
        for (int i = 0; i < 3; ++i) {
            if (!js[i].is_number_integer())
                throw SpecError("bond 'shift' must be integer");
            shift[i] = js[i].get<int>();
        }
        bonds.push_back({jb["from"].get<std::string>(), jb["to"].get<std::string>(),
                         shift, detail::parse_mat3(jb["matrix"], "bond 'matrix'")});
    }

    return make_crystal(doc["name"].get<std::string>(), rows, std::move(verts),
                        bonds);
}

/// Serializes a crystal back to the document schema. Of each reversal pair
/// the canonical representative is emitted (edges are stored as declared
/// followed by reverse, so the even-index edges are the declared ones).
inline std::string serialize_crystal(const CrystalSpec& c) {
    nlohmann::json doc;
    doc["name"] = c.name;
    nlohmann::json basis = nlohmann::json::array();
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) basis.push_back(c.basis.vectors[i][j]);
    doc["basis"] = basis;
    doc["vertices"] = nlohmann::json::array();
    for (const auto& v : c.vertices) {
        nlohmann::json jv;
        jv["id"] = v.id;
        jv["position"] = {v.position[0], v.position[1], v.position[2]};
        jv["mass"] = v.mass;
        doc["vertices"].push_back(jv);
    }
    doc["bonds"] = nlohmann::json::array();
    for (size_t i = 0; i + 1 < c.edges.size(); i += 2) {
        const EdgeClass& e = c.edges[i];
        nlohmann::json jb;
        jb["from"] = c.vertices[e.origin].id;
        jb["to"] = c.vertices[e.terminus].id;
        jb["shift"] = {e.shift[0], e.shift[1], e.shift[2]};
        nlohmann::json m = nlohmann::json::array();
        for (int k = 0; k < 9; ++k) m.push_back(e.force.a[k]);
        jb["matrix"] = m;
        doc["bonds"].push_back(jb);
    }
    return doc.dump(2) + "\n";
}

inline CrystalSpec load_crystal(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw SpecError("cannot open lattice spec '" + path + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse_crystal(ss.str());
}

}  // namespace latvib
