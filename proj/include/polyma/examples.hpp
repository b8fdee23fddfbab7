#pragma once

#include <optional>
#include <string>

#include "polyma/dim1.hpp"

namespace polyma {

/// Solves for an ambient affine form from prescribed vertex values and ray
/// slopes (any particular solution; free coefficients set to zero).
inline AffineForm affine_from_data(size_t ambient,
                                   const std::vector<std::pair<RatVector, Rat>>& values,
                                   const std::vector<std::pair<IntVector, Rat>>& slopes) {
    RatMatrix rows(ambient + 1);
    RatVector rhs;
    for (const auto& [p, v] : values) {
        for (size_t j = 0; j < ambient; ++j) rows[j].push_back(p[j]);
        rows[ambient].push_back(Rat(1));
        rhs.push_back(v);
    }
    for (const auto& [r, s] : slopes) {
        for (size_t j = 0; j < ambient; ++j) rows[j].push_back(Rat(r[j]));
        rows[ambient].push_back(Rat(0));
        rhs.push_back(s);
    }
    auto sol = solve_left(rows, rhs);
    if (!sol) fail(Err::BadParameter, "inconsistent affine data");
    RatVector lin(sol->begin(), sol->begin() + ambient);
    return AffineForm(std::move(lin), (*sol)[ambient]);
}

/// Builds a piecewise affine function from per-vertex values and per-ray
/// slopes (slopes keyed by the primitive ray direction).
inline PAFunction pa_from_data(ComplexPtr carrier,
                               const std::map<RatVector, Rat, LexLess>& vertex_values,
                               const std::map<IntVector, Rat, LexLess>& ray_slopes) {
    PAFunction out;
    out.carrier = carrier;
    for (const auto& face : carrier->faces()) {
        std::vector<std::pair<RatVector, Rat>> values;
        std::vector<std::pair<IntVector, Rat>> slopes;
        for (const auto& v : face.poly.vertices()) {
            auto it = vertex_values.find(v);
            if (it == vertex_values.end()) fail(Err::BadParameter, "missing vertex value");
            values.push_back({v, it->second});
        }
        for (const auto& r : face.poly.rays()) {
            auto it = ray_slopes.find(r);
            if (it == ray_slopes.end()) fail(Err::BadParameter, "missing ray slope");
            slopes.push_back({r, it->second});
        }
        out.per_face[face.id] = affine_from_data(carrier->ambient_dim(), values, slopes);
    }
    return out;
}

/// A generated example: the balanced space plus the paper's data for it.
struct Workspace {
    std::string name;
    BalancedSpace space;
    std::optional<PAFunction> gamma;
    std::optional<PAFunction> u;       // bounded obstacle perturbation
    std::optional<Measure1D> mu;       // solver right-hand side
};

namespace detail {

inline RatVector pt2(const Rat& x, const Rat& y) { return {x, y}; }
inline IntVector dir2(int x, int y) { return {Int(x), Int(y)}; }

inline std::map<FaceId, Rat> unit_top_weights(const Complex& c) {
    std::map<FaceId, Rat> w;
    for (FaceId id : c.faces_of_dim(c.dim())) w[id] = 1;
    return w;
}

}  // namespace detail

/// The tropical line: rays (1,0), (0,1), (-1,-1) with unit weights, and
/// the strictly convex reference function of slope one along each ray.
inline Workspace example_tropical_line() {
    using namespace detail;
    RatVector o = pt2(0, 0);
    auto ray = [&](int a, int b) {
        return Polyhedron::from_generators({o}, {dir2(a, b)}, 2);
    };
    auto c = make_complex(Complex::from_faces(2, {ray(1, 0), ray(0, 1), ray(-1, -1)}));
    Workspace w;
    w.name = "tropical_line";
    w.space = make_balanced_space(c, unit_top_weights(*c));
    std::map<IntVector, Rat, LexLess> slopes{{dir2(1, 0), 1}, {dir2(0, 1), 1}, {dir2(-1, -1), 1}};
    w.gamma = pa_from_data(c, {{o, Rat(0)}}, slopes);
    return w;
}

/// The union of the coordinate axes with gamma = |x| + |y| and the
/// obstacle perturbation with parameter epsilon: u is epsilon on the
/// x-axis and epsilon - 2|y| (clamped at -epsilon) on the y-axis. The
/// carrier is refined at (0, +-epsilon).
inline Workspace example_axes_cross(const Rat& eps) {
    using namespace detail;
    if (eps <= 0) fail(Err::BadParameter, "epsilon must be positive");
    RatVector o = pt2(0, 0);
    auto seg = [&](RatVector a, RatVector b) {
        return Polyhedron::from_generators({std::move(a), std::move(b)}, {}, 2);
    };
    auto ray_from = [&](RatVector a, int dx, int dy) {
        return Polyhedron::from_generators({std::move(a)}, {dir2(dx, dy)}, 2);
    };
    auto c = make_complex(Complex::from_faces(
        2, {ray_from(o, 1, 0), ray_from(o, -1, 0), seg(o, pt2(0, eps)), seg(o, pt2(0, -eps)),
            ray_from(pt2(0, eps), 0, 1), ray_from(pt2(0, -eps), 0, -1)}));
    Workspace w;
    w.name = "axes_cross";
    w.space = make_balanced_space(c, unit_top_weights(*c));
    std::map<RatVector, Rat, LexLess> gv{{o, 0}, {pt2(0, eps), eps}, {pt2(0, -eps), eps}};
    std::map<IntVector, Rat, LexLess> gs{
        {dir2(1, 0), 1}, {dir2(-1, 0), 1}, {dir2(0, 1), 1}, {dir2(0, -1), 1}};
    w.gamma = pa_from_data(c, gv, gs);
    std::map<RatVector, Rat, LexLess> uv{{o, eps}, {pt2(0, eps), -eps}, {pt2(0, -eps), -eps}};
    std::map<IntVector, Rat, LexLess> us{
        {dir2(1, 0), 0}, {dir2(-1, 0), 0}, {dir2(0, 1), 0}, {dir2(0, -1), 0}};
    w.u = pa_from_data(c, uv, us);
    return w;
}

/// The tropicalized elliptic curve: the hexagon boundary with six
/// unbounded edges, the polarization gamma_eps, and the normalized
/// Lebesgue measure with mass (4 - eps)/3 per bounded edge.
inline Workspace example_hexagon(const Rat& eps) {
    using namespace detail;
    if (eps <= 0 || eps >= 2) fail(Err::BadParameter, "hexagon needs epsilon in (0, 2)");
    std::vector<RatVector> v{pt2(1, 0), pt2(1, 1), pt2(0, 1),
                             pt2(-1, 0), pt2(-1, -1), pt2(0, -1)};
    std::vector<Polyhedron> cells;
    for (size_t i = 0; i < 6; ++i)
        cells.push_back(Polyhedron::from_generators({v[i], v[(i + 1) % 6]}, {}, 2));
    for (size_t i = 0; i < 6; ++i) {
        IntVector d = primitive(v[i]);
        cells.push_back(Polyhedron::from_generators({v[i]}, {d}, 2));
    }
    auto c = make_complex(Complex::from_faces(2, cells));
    Workspace w;
    w.name = "hexagon";
    w.space = make_balanced_space(c, unit_top_weights(*c));
    std::map<RatVector, Rat, LexLess> gv;
    std::map<IntVector, Rat, LexLess> gs;
    for (size_t i = 0; i < 6; ++i) {
        bool corner = v[i][0] == v[i][1];  // (1,1) or (-1,-1)
        gv[v[i]] = corner ? Rat(2) - eps : Rat(1);
        gs[primitive(v[i])] = corner ? Rat(2) - eps : Rat(1);
    }
    w.gamma = pa_from_data(c, gv, gs);
    Measure1D mu;
    for (FaceId id : c->faces_of_dim(1))
        if (c->face(id).poly.is_bounded()) mu.densities[id] = (Rat(4) - eps) / 3;
    w.mu = mu;
    return w;
}

/// The complete plane with the four-quadrant structure and unit weights.
inline Workspace example_plane_complete() {
    using namespace detail;
    RatVector o = pt2(0, 0);
    auto quad = [&](int a, int b, int cx, int cy) {
        return Polyhedron::from_generators({o}, {dir2(a, b), dir2(cx, cy)}, 2);
    };
    auto c = make_complex(Complex::from_faces(
        2, {quad(1, 0, 0, 1), quad(0, 1, -1, 0), quad(-1, 0, 0, -1), quad(0, -1, 1, 0)}));
    Workspace w;
    w.name = "plane_complete";
    w.space = make_balanced_space(c, unit_top_weights(*c));
    // the toric cross-check function max(0, x, y)
    std::vector<AffineForm> forms{AffineForm({Rat(0), Rat(0)}, Rat(0)),
                                  AffineForm({Rat(1), Rat(0)}, Rat(0)),
                                  AffineForm({Rat(0), Rat(1)}, Rat(0))};
    w.gamma = pa_from_max(w.space, forms);
    return w;
}

namespace detail {

inline IntVector dir3(int x, int y, int z) { return {Int(x), Int(y), Int(z)}; }

}  // namespace detail

/// Bergman fan of the uniform matroid U_{3,4}: the 2-skeleton of the fan
/// of P^3 refined by the rays e_i + e_j, unit weights. gamma vanishes on
/// e_12 and e_34 and is one on every other ray; u = g - gamma for the
/// epsilon-dependent obstacle g on the refinement splitting each cone at
/// lattice distance epsilon.
inline Workspace example_bergman_u34(const Rat& eps) {
    using namespace detail;
    if (eps <= 0 || eps >= 1) fail(Err::BadParameter, "bergman_u34 needs epsilon in (0, 1)");
    std::map<std::string, IntVector> rays{
        {"e1", dir3(1, 0, 0)},  {"e2", dir3(0, 1, 0)},  {"e3", dir3(0, 0, 1)},
        {"e4", dir3(-1, -1, -1)}, {"e12", dir3(1, 1, 0)}, {"e13", dir3(1, 0, 1)},
        {"e14", dir3(0, -1, -1)}, {"e23", dir3(0, 1, 1)}, {"e24", dir3(-1, 0, -1)},
        {"e34", dir3(-1, -1, 0)}};
    auto gamma_of = [&](const std::string& r) { return (r == "e12" || r == "e34") ? Rat(0) : Rat(1); };
    std::vector<std::array<std::string, 2>> cones;
    for (const std::string& i : {"1", "2", "3", "4"})
        for (const std::string& j : {"1", "2", "3", "4"}) {
            if (i >= j) continue;
            cones.push_back({"e" + i, "e" + i + j});
            cones.push_back({"e" + i + j, "e" + j});
        }
    RatVector o(3, Rat(0));
    std::vector<Polyhedron> cells;
    for (const auto& [a, b] : cones)
        cells.push_back(Polyhedron::from_generators({o}, {rays[a], rays[b]}, 3));
    auto base = make_complex(Complex::from_faces(3, cells));
    Workspace w;
    w.name = "bergman_u34";
    w.space = make_balanced_space(base, unit_top_weights(*base));
    std::map<RatVector, Rat, LexLess> gv{{o, 0}};
    std::map<IntVector, Rat, LexLess> gs;
    for (const auto& [name, r] : rays) gs[r] = gamma_of(name);
    w.gamma = pa_from_data(base, gv, gs);

    // refined carrier: sigma_12 and sigma_34 split as in the obstacle
    // construction, every other cone split at lattice distance eps so the
    // pieces still meet in common faces
    auto at = [&](const IntVector& r) { return vscale(eps, to_rat(r)); };
    std::vector<Polyhedron> fine;
    auto add = [&](std::vector<RatVector> vs, std::vector<IntVector> rs) {
        fine.push_back(Polyhedron::from_generators(std::move(vs), std::move(rs), 3));
    };
    for (const auto& pair : {std::array<std::string, 3>{"e1", "e2", "e12"},
                             std::array<std::string, 3>{"e3", "e4", "e34"}}) {
        const IntVector &a = rays[pair[0]], &b = rays[pair[1]], &d = rays[pair[2]];
        add({o, at(b), at(d)}, {});            // triangle on the b side
        add({o, at(a), at(d)}, {});            // triangle on the a side
        add({at(b), at(d)}, {b});              // strip above
        add({at(a), at(d)}, {a});              // strip right
        add({at(d)}, {b, d});                  // wedge between diagonal and b
        add({at(d)}, {a, d});                  // wedge between diagonal and a
    }
    for (const auto& [a, b] : cones) {
        if ((a == "e1" && b == "e12") || (a == "e12" && b == "e2") ||
            (a == "e3" && b == "e34") || (a == "e34" && b == "e4"))
            continue;
        add({o, at(rays[a]), at(rays[b])}, {});
        add({at(rays[a]), at(rays[b])}, {rays[a], rays[b]});
    }
    auto refined = make_complex(Complex::from_faces(3, fine));
    std::map<RatVector, Rat, LexLess> obstacle_values{{o, eps}};
    for (const auto& [name, r] : rays)
        obstacle_values[at(r)] = (name == "e12" || name == "e34") ? Rat(0) : 2 * eps;
    std::map<IntVector, Rat, LexLess> obstacle_slopes;
    for (const auto& [name, r] : rays) obstacle_slopes[r] = gamma_of(name);
    PAFunction g = pa_from_data(refined, obstacle_values, obstacle_slopes);
    PAFunction gamma_fine = rebase(*w.gamma, refined);
    w.u = pa_combine(Rat(1), g, Rat(-1), gamma_fine);
    return w;
}

/// Dispatch by example name; epsilon is used where the example needs it.
inline Workspace example_generate(const std::string& name, const Rat& eps) {
    if (name == "tropical_line") return example_tropical_line();
    if (name == "axes_cross") return example_axes_cross(eps);
    if (name == "hexagon") return example_hexagon(eps);
    if (name == "plane_complete") return example_plane_complete();
    if (name == "bergman_u34") return example_bergman_u34(eps);
    fail(Err::BadParameter, "unknown example '" + name + "'");
}

}  // namespace polyma
