#pragma once

#include <sstream>
#include <string>

#include "polyma/dim1.hpp"

namespace polyma {

inline std::string point_str(const RatVector& x) {
    std::ostringstream os;
    os << "(";
    for (size_t i = 0; i < x.size(); ++i) os << (i ? "," : "") << rat_str(x[i]);
    os << ")";
    return os.str();
}

inline std::string dir_str(const IntVector& x) {
    std::ostringstream os;
    os << "(";
    for (size_t i = 0; i < x.size(); ++i) os << (i ? "," : "") << x[i];
    os << ")";
    return os.str();
}

/// Sorted atom table plus the total mass.
inline std::string render_measure(const AtomicMeasure& m) {
    std::ostringstream os;
    for (const auto& [x, mass] : m.atoms) os << point_str(x) << ": " << rat_str(mass) << "\n";
    os << "total: " << rat_str(m.total()) << "\n";
    return os.str();
}

inline std::string render_measure1d(const Measure1D& m, const Complex& c) {
    std::ostringstream os;
    for (const auto& [x, mass] : m.atoms.atoms)
        os << "atom " << point_str(x) << ": " << rat_str(mass) << "\n";
    for (const auto& [id, d] : m.densities) {
        const Polyhedron& e = c.face(id).poly;
        os << "edge " << point_str(e.vertices()[0]) << "-" << point_str(e.vertices()[1])
           << ": density " << rat_str(d) << "\n";
    }
    os << "total: " << rat_str(m.total(c)) << "\n";
    return os.str();
}

/// Vertex-value table of a PA function, points sorted lexicographically.
inline std::string render_vertex_table(const PAFunction& f) {
    std::map<RatVector, Rat, LexLess> rows;
    for (FaceId vid : f.carrier->faces_of_dim(0)) {
        const RatVector& v = f.carrier->face(vid).poly.vertices()[0];
        rows[v] = f.form(vid).eval(v);
    }
    std::ostringstream os;
    for (const auto& [v, val] : rows) os << point_str(v) << ": " << rat_str(val) << "\n";
    return os.str();
}

/// Vertex values and per-edge quadratic coefficients of a PQ function.
/// Bounded edges are read from their lex-smaller endpoint.
inline std::string render_pq(const PQFunction& f) {
    const Complex& c = *f.carrier;
    std::map<RatVector, Rat, LexLess> rows;
    for (FaceId vid : c.faces_of_dim(0)) {
        const RatVector& v = c.face(vid).poly.vertices()[0];
        rows[v] = eval_pq(f, v);
    }
    std::ostringstream os;
    for (const auto& [v, val] : rows) os << point_str(v) << ": " << rat_str(val) << "\n";
    for (const auto& [id, e] : f.edges) {
        const Polyhedron& p = c.face(id).poly;
        os << "edge " << point_str(p.vertices()[0]) << "-" << point_str(p.vertices()[1])
           << ": value " << rat_str(e.value) << " slope " << rat_str(e.slope) << " quad "
           << rat_str(e.quad) << "\n";
    }
    for (const auto& [id, r] : f.rays) {
        const Polyhedron& p = c.face(id).poly;
        os << "ray " << point_str(p.vertices()[0]) << "+" << dir_str(p.rays()[0]) << ": value "
           << rat_str(r.value) << " slope " << rat_str(r.slope) << "\n";
    }
    return os.str();
}

/// CSV polyline samples of a one-dimensional function for external
/// plotting: coordinates, then the value.
inline std::string render_plot_csv(const PQFunction& f, int samples_per_edge = 8,
                                   int ray_extent = 3) {
    const Complex& c = *f.carrier;
    std::ostringstream os;
    for (size_t i = 0; i < c.ambient_dim(); ++i) os << "x" << i << ",";
    os << "value\n";
    auto emit = [&](const RatVector& x, const Rat& v) {
        for (const auto& xi : x) os << rat_str(xi) << ",";
        os << rat_str(v) << "\n";
    };
    for (const auto& [id, e] : f.edges) {
        const Polyhedron& p = c.face(id).poly;
        Rat l = lattice_length(p);
        for (int k = 0; k <= samples_per_edge; ++k) {
            Rat t = l * Rat(k, samples_per_edge);
            RatVector x = p.vertices()[0];
            IntVector d = primitive(vsub(p.vertices()[1], p.vertices()[0]));
            for (size_t i = 0; i < x.size(); ++i) x[i] += t * Rat(d[i]);
            emit(x, e.value + e.slope * t + e.quad * t * t);
        }
    }
    for (const auto& [id, r] : f.rays) {
        const Polyhedron& p = c.face(id).poly;
        for (int k = 0; k <= samples_per_edge; ++k) {
            Rat t = Rat(ray_extent) * Rat(k, samples_per_edge);
            RatVector x = p.vertices()[0];
            for (size_t i = 0; i < x.size(); ++i) x[i] += t * Rat(p.rays()[0][i]);
            emit(x, r.value + r.slope * t);
        }
    }
    return os.str();
}

inline std::string render_plot_csv(const PAFunction& f, int samples_per_edge = 8,
                                   int ray_extent = 3) {
    return render_plot_csv(pa_to_pq(f), samples_per_edge, ray_extent);
}

}  // namespace polyma
