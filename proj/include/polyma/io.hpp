#pragma once

#include <fstream>
#include <string>

#include <json.hpp>

#include "polyma/dim1.hpp"

namespace polyma {

using nlohmann::json;

// Rationals travel as "p/q" strings (plain integers allowed); vectors as
// arrays. Face ids in files refer to the canonical order and are remapped
// through the polyhedron geometry on load, so hand-written files may list
// faces in any order.

inline json rat_to_json(const Rat& q) {
    if (rat_den(q) == 1 && abs(rat_num(q)) < Int(1) << 53)
        return json(rat_num(q).convert_to<long long>());
    return json(rat_str(q));
}

inline Rat rat_from_json(const json& j) {
    if (j.is_number_integer()) return Rat(Int(j.get<long long>()));
    if (j.is_string()) return rat_parse(j.get<std::string>());
    fail(Err::IoError, "expected a rational");
}

inline json vec_to_json(const RatVector& v) {
    json a = json::array();
    for (const auto& x : v) a.push_back(rat_to_json(x));
    return a;
}
inline json vec_to_json(const IntVector& v) {
    json a = json::array();
    for (const auto& x : v) a.push_back(rat_to_json(Rat(x)));
    return a;
}

inline RatVector ratvec_from_json(const json& j) {
    RatVector v;
    for (const auto& x : j) v.push_back(rat_from_json(x));
    return v;
}
inline IntVector intvec_from_json(const json& j) {
    IntVector v;
    for (const auto& x : j) {
        Rat q = rat_from_json(x);
        if (rat_den(q) != 1) fail(Err::IoError, "expected an integer");
        v.push_back(rat_num(q));
    }
    return v;
}

// ---------------------------------------------------------------- complexes

inline json complex_to_json(const Complex& c, const std::map<FaceId, Rat>* weights = nullptr,
                            int weight_dim = -1, const std::string& name = "") {
    json j;
    if (!name.empty()) j["name"] = name;
    j["ambient_dim"] = c.ambient_dim();
    json pts = json::array();
    for (const auto& p : c.points()) pts.push_back(vec_to_json(p));
    j["points"] = pts;
    json rays = json::array();
    for (const auto& r : c.ray_pool()) rays.push_back(vec_to_json(r));
    j["rays"] = rays;
    json faces = json::array();
    for (const auto& f : c.faces()) {
        json jf;
        jf["id"] = f.id;
        jf["vertices"] = f.vertex_ids;
        jf["rays"] = f.ray_ids;
        faces.push_back(std::move(jf));
    }
    j["faces"] = faces;
    if (weights) {
        json w;
        w["dim"] = weight_dim < 0 ? c.dim() : weight_dim;
        json entries = json::array();
        for (const auto& [id, v] : *weights) {
            json e;
            e["face"] = id;
            e["value"] = rat_to_json(v);
            entries.push_back(std::move(e));
        }
        w["entries"] = entries;
        j["weights"] = w;
    }
    return j;
}

struct LoadedComplex {
    ComplexPtr complex;
    std::map<int, FaceId> id_map;  // file face id -> canonical face id
    std::optional<std::map<FaceId, Rat>> weights;
    int weight_dim = -1;
    std::string name;
};

inline LoadedComplex complex_from_json(const json& j) {
    LoadedComplex out;
    if (j.contains("name")) out.name = j["name"].get<std::string>();
    size_t ambient = j.at("ambient_dim").get<size_t>();
    std::vector<RatVector> points;
    for (const auto& p : j.at("points")) points.push_back(ratvec_from_json(p));
    std::vector<IntVector> rays;
    for (const auto& r : j.at("rays")) rays.push_back(intvec_from_json(r));
    std::map<int, Polyhedron> file_faces;
    std::vector<Polyhedron> polys;
    for (const auto& jf : j.at("faces")) {
        std::vector<RatVector> vs;
        for (int vid : jf.at("vertices").get<std::vector<int>>()) vs.push_back(points.at(vid));
        std::vector<IntVector> rs;
        for (int rid : jf.at("rays").get<std::vector<int>>()) rs.push_back(rays.at(rid));
        Polyhedron p = Polyhedron::from_generators(vs, rs, ambient);
        file_faces.emplace(jf.at("id").get<int>(), p);
        polys.push_back(std::move(p));
    }
    Complex c = Complex::from_faces(ambient, polys);
    for (const auto& [fid, p] : file_faces) {
        auto id = c.find_face(p);
        if (!id) fail(Err::IoError, "face closure produced an unlisted face id");
        out.id_map[fid] = *id;
    }
    out.complex = make_complex(std::move(c));
    if (j.contains("weights")) {
        out.weight_dim = j["weights"].at("dim").get<int>();
        std::map<FaceId, Rat> w;
        for (const auto& e : j["weights"].at("entries"))
            w[out.id_map.at(e.at("face").get<int>())] = rat_from_json(e.at("value"));
        out.weights = std::move(w);
    }
    return out;
}

// ---------------------------------------------------------------- functions

inline json pafunction_to_json(const PAFunction& f, const std::string& carrier_name) {
    json j;
    j["carrier"] = carrier_name;
    json forms = json::array();
    for (const auto& [id, form] : f.per_face) {
        json e;
        e["face"] = id;
        e["linear"] = vec_to_json(form.linear);
        e["const"] = rat_to_json(form.constant);
        forms.push_back(std::move(e));
    }
    j["forms"] = forms;
    return j;
}

inline PAFunction pafunction_from_json(const json& j, const LoadedComplex& carrier) {
    PAFunction f;
    f.carrier = carrier.complex;
    for (const auto& e : j.at("forms")) {
        AffineForm form(ratvec_from_json(e.at("linear")), rat_from_json(e.at("const")));
        f.per_face[carrier.id_map.at(e.at("face").get<int>())] = std::move(form);
    }
    if (f.per_face.size() != carrier.complex->n_faces())
        fail(Err::IoError, "function misses representatives for some faces");
    return f;
}

inline std::string carrier_name_of(const json& j) { return j.at("carrier").get<std::string>(); }

// ---------------------------------------------------------------- measures

inline json measure_to_json(const AtomicMeasure& m) {
    json j;
    json atoms = json::array();
    for (const auto& [x, mass] : m.atoms) {
        json a;
        a["point"] = vec_to_json(x);
        a["mass"] = rat_to_json(mass);
        atoms.push_back(std::move(a));
    }
    j["atoms"] = atoms;
    j["densities"] = json::array();
    return j;
}

inline json measure1d_to_json(const Measure1D& m) {
    json j = measure_to_json(m.atoms);
    json ds = json::array();
    for (const auto& [id, d] : m.densities) {
        json e;
        e["face"] = id;
        e["per_unit_length"] = rat_to_json(d);
        ds.push_back(std::move(e));
    }
    j["densities"] = ds;
    return j;
}

inline Measure1D measure1d_from_json(const json& j, const LoadedComplex& carrier) {
    Measure1D m;
    for (const auto& a : j.at("atoms"))
        m.atoms.add(ratvec_from_json(a.at("point")), rat_from_json(a.at("mass")));
    if (j.contains("densities"))
        for (const auto& e : j["densities"]) {
            FaceId id = carrier.id_map.at(e.at("face").get<int>());
            m.densities[id] = rat_from_json(e.at("per_unit_length"));
        }
    return m;
}

inline AtomicMeasure measure_from_json(const json& j) {
    AtomicMeasure m;
    for (const auto& a : j.at("atoms"))
        m.add(ratvec_from_json(a.at("point")), rat_from_json(a.at("mass")));
    return m;
}

// ---------------------------------------------------------------- piecewise quadratic

inline json pq_to_json(const PQFunction& f, const std::string& carrier_name) {
    json j;
    j["carrier"] = carrier_name;
    json edges = json::array();
    for (const auto& [id, e] : f.edges) {
        json je;
        je["face"] = id;
        je["value"] = rat_to_json(e.value);
        je["slope"] = rat_to_json(e.slope);
        je["quad"] = rat_to_json(e.quad);
        edges.push_back(std::move(je));
    }
    j["edges"] = edges;
    json rays = json::array();
    for (const auto& [id, r] : f.rays) {
        json je;
        je["face"] = id;
        je["value"] = rat_to_json(r.value);
        je["slope"] = rat_to_json(r.slope);
        rays.push_back(std::move(je));
    }
    j["rays"] = rays;
    return j;
}

inline PQFunction pq_from_json(const json& j, const LoadedComplex& carrier) {
    PQFunction f;
    f.carrier = carrier.complex;
    for (const auto& e : j.at("edges"))
        f.edges[carrier.id_map.at(e.at("face").get<int>())] = {rat_from_json(e.at("value")),
                                                               rat_from_json(e.at("slope")),
                                                               rat_from_json(e.at("quad"))};
    for (const auto& e : j.at("rays"))
        f.rays[carrier.id_map.at(e.at("face").get<int>())] = {rat_from_json(e.at("value")),
                                                              rat_from_json(e.at("slope"))};
    return f;
}

// ---------------------------------------------------------------- files

inline json read_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) fail(Err::IoError, "cannot open '" + path + "'");
    json j;
    try {
        in >> j;
    } catch (const json::exception& e) {
        fail(Err::IoError, "cannot parse '" + path + "': " + e.what());
    }
    return j;
}

inline void write_json_file(const std::string& path, const json& j) {
    std::ofstream out(path);
    if (!out) fail(Err::IoError, "cannot write '" + path + "'");
    out << j.dump(2) << "\n";
}

}  // namespace polyma
