#pragma once

#include <map>
#include <vector>

#include "polyma/pafun.hpp"

namespace polyma {

/// Piecewise quadratic function on a one-dimensional complex. A bounded
/// edge is oriented from its lex-smaller vertex; phi(t) = value + slope t +
/// quad t^2 in the lattice coordinate t in [0, length]. Unbounded edges
/// carry the vertex value and a constant slope.
struct PQFunction {
    ComplexPtr carrier;
    struct Edge {
        Rat value, slope, quad;
    };
    struct Ray {
        Rat value, slope;
    };
    std::map<FaceId, Edge> edges;
    std::map<FaceId, Ray> rays;
};

struct Measure1D {
    AtomicMeasure atoms;
    std::map<FaceId, Rat> densities;  // mass per unit lattice length, bounded edges

    Rat total(const Complex& c) const {
        Rat s = atoms.total();
        for (const auto& [id, d] : densities) s += d * lattice_length(c.face(id).poly);
        return s;
    }
    friend bool operator==(const Measure1D& a, const Measure1D& b) {
        auto nonzero = [](const std::map<FaceId, Rat>& m) {
            std::map<FaceId, Rat> out;
            for (const auto& [k, v] : m)
                if (v != 0) out.emplace(k, v);
            return out;
        };
        return a.atoms == b.atoms && nonzero(a.densities) == nonzero(b.densities);
    }
};

namespace detail {

struct EdgeInfo {
    FaceId id;
    int tail_vertex;  // face id of the lex-smaller vertex
    int head_vertex;  // face id of the other vertex (bounded only)
    Rat length;       // lattice length (bounded only)
    IntVector direction;  // primitive, tail -> head (or along the ray)
    bool bounded;
};

/// Oriented edge table of a one-dimensional complex.
inline std::vector<EdgeInfo> edge_table(const Complex& c) {
    if (c.dim() != 1) fail(Err::DimensionNotOne, "one-dimensional complex required");
    std::vector<EdgeInfo> out;
    for (FaceId id : c.faces_of_dim(1)) {
        const Polyhedron& p = c.face(id).poly;
        EdgeInfo e;
        e.id = id;
        if (p.is_bounded()) {
            e.bounded = true;
            const RatVector& a = p.vertices()[0];  // lex-sorted
            const RatVector& b = p.vertices()[1];
            e.direction = primitive(vsub(b, a));
            e.length = lattice_length(p);
            e.tail_vertex = -1;
            e.head_vertex = -1;
            for (int sub : c.subfaces(id)) {
                if (c.face(sub).dim != 0) continue;
                if (c.face(sub).poly.vertices()[0] == a) e.tail_vertex = sub;
                if (c.face(sub).poly.vertices()[0] == b) e.head_vertex = sub;
            }
            if (e.tail_vertex < 0 || e.head_vertex < 0)
                fail(Err::DimensionNotOne, "edge endpoints are not faces");
        } else {
            if (p.rays().size() != 1)
                fail(Err::DimensionNotOne, "carrier has a line face; refine it first");
            e.bounded = false;
            e.direction = p.rays()[0];
            e.tail_vertex = -1;
            e.head_vertex = -1;
            for (int sub : c.subfaces(id))
                if (c.face(sub).dim == 0) e.tail_vertex = sub;
            if (e.tail_vertex < 0) fail(Err::DimensionNotOne, "ray without a vertex");
        }
        out.push_back(std::move(e));
    }
    return out;
}

}  // namespace detail

/// Restriction of a piecewise affine function to edge data.
inline PQFunction pa_to_pq(const PAFunction& f) {
    PQFunction out;
    out.carrier = f.carrier;
    for (const auto& e : detail::edge_table(*f.carrier)) {
        const AffineForm& g = f.form(e.id);
        const RatVector& tail = f.carrier->face(e.tail_vertex).poly.vertices()[0];
        if (e.bounded)
            out.edges[e.id] = {g.eval(tail), g.slope(e.direction), Rat(0)};
        else
            out.rays[e.id] = {g.eval(tail), g.slope(e.direction)};
    }
    return out;
}

inline Rat eval_pq(const PQFunction& f, const RatVector& x) {
    const Complex& c = *f.carrier;
    FaceId id = c.locate(x);
    if (c.face(id).dim == 0) {
        // take any incident edge
        for (const auto& [eid, e] : f.edges) {
            for (int sub : c.subfaces(eid))
                if (sub == id) {
                    const RatVector& tail =
                        c.face(eid).poly.vertices()[0];  // lex-smaller endpoint
                    if (c.face(id).poly.vertices()[0] == tail) return e.value;
                    Rat l = lattice_length(c.face(eid).poly);
                    return e.value + e.slope * l + e.quad * l * l;
                }
        }
        for (const auto& [eid, r] : f.rays)
            for (int sub : c.subfaces(eid))
                if (sub == id) return r.value;
        fail(Err::PointOutsideSupport, "isolated vertex");
    }
    const Polyhedron& p = c.face(id).poly;
    if (p.is_bounded()) {
        const auto& e = f.edges.at(id);
        RatVector d = vsub(x, p.vertices()[0]);
        IntVector prim = primitive(vsub(p.vertices()[1], p.vertices()[0]));
        Rat t = 0;
        for (size_t i = 0; i < d.size(); ++i)
            if (prim[i] != 0) {
                t = d[i] / Rat(prim[i]);
                break;
            }
        return e.value + e.slope * t + e.quad * t * t;
    }
    const auto& r = f.rays.at(id);
    RatVector d = vsub(x, p.vertices()[0]);
    Rat t = 0;
    for (size_t i = 0; i < d.size(); ++i)
        if (p.rays()[0][i] != 0) {
            t = d[i] / Rat(p.rays()[0][i]);
            break;
        }
    return r.value + r.slope * t;
}

/// Laplacian of a piecewise quadratic function: constant densities
/// [X](e) phi'' on bounded edges plus the weighted outgoing-slope sums at
/// the vertices.
inline Measure1D laplacian(const PQFunction& f, const BalancedSpace& s) {
    if (s.d != 1) fail(Err::DimensionNotOne, "laplacian is one-dimensional");
    if (!same_complex(f.carrier, s.complex)) fail(Err::CarrierMismatch, "laplacian carrier");
    const Complex& c = *s.complex;
    Measure1D out;
    std::map<FaceId, Rat> vertex_mass;
    for (const auto& e : detail::edge_table(c)) {
        Rat w = s.weight(e.id);
        if (e.bounded) {
            const auto& q = f.edges.at(e.id);
            if (q.quad != 0) out.densities[e.id] = w * 2 * q.quad;
            vertex_mass[e.tail_vertex] += w * q.slope;
            vertex_mass[e.head_vertex] += w * (-(q.slope + 2 * q.quad * e.length));
        } else {
            const auto& r = f.rays.at(e.id);
            vertex_mass[e.tail_vertex] += w * r.slope;
        }
    }
    for (const auto& [vid, m] : vertex_mass) out.atoms.add(c.face(vid).poly.vertices()[0], m);
    return out;
}

inline Measure1D laplacian(const PAFunction& f, const BalancedSpace& s) {
    PAFunction fr = same_complex(f.carrier, s.complex)
                        ? f
                        : rebase(f, s.complex);
    return laplacian(pa_to_pq(fr), s);
}

// ---------------------------------------------------------------- solver

struct Solve1Result {
    PQFunction phi;
    ConvexityResult pc_status;
};

namespace detail {

/// Local convexity of slope data at the vertices of a 1-complex: pairing
/// of outgoing slopes against every extreme nonnegative local cycle.
inline ConvexityResult slopes_convex(const Complex& c,
                                     const std::map<FaceId, std::map<FaceId, Rat>>& out_slope) {
    ConvexityResult res;
    for (FaceId vid : c.faces_of_dim(0)) {
        auto it = out_slope.find(vid);
        if (it == out_slope.end()) continue;
        std::vector<FaceId> edges;
        std::vector<IntVector> normals;
        for (const auto& [eid, sl] : it->second) {
            edges.push_back(eid);
            normals.push_back(normal_vector(c.face(eid).poly, c.face(vid).poly));
        }
        size_t m = edges.size();
        std::vector<RatVector> eqs;
        for (size_t coord = 0; coord < c.ambient_dim(); ++coord) {
            RatVector row(m);
            for (size_t i = 0; i < m; ++i) row[i] = Rat(normals[i][coord]);
            eqs.push_back(std::move(row));
        }
        std::vector<RatVector> ineqs;
        for (size_t i = 0; i < m; ++i) {
            RatVector row(m, Rat(0));
            row[i] = 1;
            ineqs.push_back(std::move(row));
        }
        auto cg = cone_generators(m, eqs, ineqs);
        for (const auto& r : cg.rays) {
            Rat p = 0;
            for (size_t i = 0; i < m; ++i) p += Rat(r[i]) * it->second.at(edges[i]);
            if (p < 0) {
                res.convex = false;
                ConvexityWitness w;
                w.face = vid;
                w.local_cycle.k = 1;
                for (size_t i = 0; i < m; ++i)
                    if (r[i] != 0) w.local_cycle.values[edges[i]] = Rat(r[i]);
                w.note = "outgoing slopes pair negatively with a local cycle";
                res.witness = std::move(w);
                return res;
            }
        }
    }
    return res;
}

}  // namespace detail

/// Solves the one-dimensional Monge–Ampère equation Delta(phi) = mu with
/// gamma's slopes at infinity and phi(basepoint) = 0, by an exact weighted
/// graph Laplacian solve. Convexity of the result is reported, not assumed.
inline Solve1Result solve_ma1(const BalancedSpace& s, const PAFunction& gamma_in,
                              const Measure1D& mu, const RatVector& basepoint) {
    if (s.d != 1) fail(Err::DimensionNotOne, "solve_ma1 is one-dimensional");
    const Complex& c = *s.complex;
    if (!c.connected()) fail(Err::Disconnected, "the carrier must be connected");
    PAFunction gamma = same_complex(gamma_in.carrier, s.complex)
                           ? gamma_in
                           : rebase(gamma_in, s.complex);
    if (!positive_at_infinity(gamma))
        fail(Err::NotPositiveAtInfinity, "gamma must be positive at infinity");
    // measure sanity
    for (const auto& [x, m] : mu.atoms.atoms) {
        if (m < 0) fail(Err::InvalidMeasure, "negative atom");
        if (c.face(c.locate(x)).dim != 0)
            fail(Err::InvalidMeasure, "atom off the vertex set; refine the carrier first");
    }
    for (const auto& [id, d] : mu.densities) {
        if (d < 0) fail(Err::InvalidMeasure, "negative density");
        if (c.face(id).dim != 1 || !c.face(id).poly.is_bounded())
            fail(Err::InvalidMeasure, "density off a bounded edge");
    }
    if (mu.total(c) != degree_pa(gamma, s))
        fail(Err::MassMismatch, "total mass must equal deg(gamma)");

    auto edges = detail::edge_table(c);
    auto vids = c.faces_of_dim(0);
    std::map<FaceId, size_t> vindex;
    for (size_t i = 0; i < vids.size(); ++i) vindex[vids[i]] = i;
    size_t n = vids.size();
    // L x = b, L the weighted graph Laplacian with weights [X](e)/l(e)
    RatMatrix lhs(n, RatVector(n, Rat(0)));
    RatVector rhs(n, Rat(0));
    for (FaceId vid : vids)
        rhs[vindex[vid]] = mu.atoms.mass(c.face(vid).poly.vertices()[0]);
    std::map<FaceId, Rat> quad;
    for (const auto& e : edges) {
        Rat w = s.weight(e.id);
        if (e.bounded) {
            Rat dens = 0;
            if (auto it = mu.densities.find(e.id); it != mu.densities.end()) dens = it->second;
            quad[e.id] = dens / (2 * w);
            size_t a = vindex[e.tail_vertex], b = vindex[e.head_vertex];
            Rat k = w / e.length;
            lhs[a][a] -= k;
            lhs[a][b] += k;
            lhs[b][b] -= k;
            lhs[b][a] += k;
            rhs[a] += dens * e.length / 2;
            rhs[b] += dens * e.length / 2;
        } else {
            rhs[vindex[e.tail_vertex]] -= s.weight(e.id) * gamma.form(e.id).slope(e.direction);
        }
    }
    // pin the first vertex and solve the rest exactly
    RatMatrix sys;
    for (size_t i = 0; i + 1 < n; ++i) {
        RatVector row;
        for (size_t j = 1; j < n; ++j) row.push_back(lhs[i][j]);
        row.push_back(rhs[i]);
        sys.push_back(std::move(row));
    }
    auto piv = rref(sys);
    RatVector x(n, Rat(0));
    for (size_t r = 0; r < piv.size(); ++r) {
        if (piv[r] == (int)(n - 1)) fail(Err::MassMismatch, "inconsistent vertex system");
        x[piv[r] + 1] = sys[r][n - 1];
    }
    // assemble
    Solve1Result out;
    out.phi.carrier = s.complex;
    std::map<FaceId, std::map<FaceId, Rat>> out_slope;
    for (const auto& e : edges) {
        if (e.bounded) {
            Rat q = quad[e.id];
            Rat va = x[vindex[e.tail_vertex]], vb = x[vindex[e.head_vertex]];
            Rat slope = (vb - va) / e.length - q * e.length;
            out.phi.edges[e.id] = {va, slope, q};
            out_slope[e.tail_vertex][e.id] = slope;
            out_slope[e.head_vertex][e.id] = -(slope + 2 * q * e.length);
        } else {
            Rat sl = gamma.form(e.id).slope(e.direction);
            out.phi.rays[e.id] = {x[vindex[e.tail_vertex]], sl};
            out_slope[e.tail_vertex][e.id] = sl;
        }
    }
    Rat shift = eval_pq(out.phi, basepoint);
    for (auto& [id, e] : out.phi.edges) e.value -= shift;
    for (auto& [id, r] : out.phi.rays) r.value -= shift;
    out.pc_status = detail::slopes_convex(c, out_slope);
    return out;
}

// ---------------------------------------------------------------- envelope

/// Largest gamma-growth polyhedrally convex function below gamma + u, for
/// bounded u, in dimension one. One LP over the vertex values: the
/// feasible family is closed under pointwise max, so the optimum realizes
/// the envelope at every vertex simultaneously.
inline PAFunction envelope1(const BalancedSpace& s, const PAFunction& gamma_in,
                            const PAFunction& u_in) {
    if (s.d != 1) fail(Err::DimensionNotOne, "envelope1 is one-dimensional");
    auto a = detail::align(s, {gamma_in, u_in});
    const Complex& c = *a.complex;
    const PAFunction& gamma = a.funcs[0];
    const PAFunction& u = a.funcs[1];
    if (!has_bounded_slopes(u))
        fail(Err::NotBoundedPerturbation, "u must have zero slopes at infinity");
    PAFunction obstacle = pa_combine(Rat(1), gamma, Rat(1), u);
    auto edges = detail::edge_table(c);
    auto vids = c.faces_of_dim(0);
    std::map<FaceId, size_t> vindex;
    for (size_t i = 0; i < vids.size(); ++i) vindex[vids[i]] = i;
    size_t n = vids.size();
    std::vector<LpConstraint> cs;
    for (FaceId vid : vids) {
        RatVector row(n, Rat(0));
        row[vindex[vid]] = -1;
        cs.push_back({AffineForm(std::move(row),
                                 obstacle.form(vid).eval(c.face(vid).poly.vertices()[0])),
                      Rel::Ge});
    }
    // vertex convexity against every extreme local nonnegative cycle
    for (FaceId vid : vids) {
        std::vector<FaceId> around = c.supfaces_of_dim(vid, 1);
        std::vector<IntVector> normals;
        for (FaceId eid : around)
            normals.push_back(normal_vector(c.face(eid).poly, c.face(vid).poly));
        size_t m = around.size();
        std::vector<RatVector> eqs;
        for (size_t coord = 0; coord < c.ambient_dim(); ++coord) {
            RatVector row(m);
            for (size_t i = 0; i < m; ++i) row[i] = Rat(normals[i][coord]);
            eqs.push_back(std::move(row));
        }
        std::vector<RatVector> pos;
        for (size_t i = 0; i < m; ++i) {
            RatVector row(m, Rat(0));
            row[i] = 1;
            pos.push_back(std::move(row));
        }
        for (const auto& cyc : detail::cone_generators(m, eqs, pos).rays) {
            RatVector row(n, Rat(0));
            Rat constant = 0;
            for (size_t i = 0; i < m; ++i) {
                if (cyc[i] == 0) continue;
                const Face& ef = c.face(around[i]);
                if (ef.poly.is_bounded()) {
                    Rat l = lattice_length(ef.poly);
                    FaceId other = -1;
                    for (int sub : c.subfaces(ef.id))
                        if (c.face(sub).dim == 0 && sub != vid) other = sub;
                    // slope (x_other - x_v)/l
                    row[vindex[other]] += Rat(cyc[i]) / l;
                    row[vindex[vid]] -= Rat(cyc[i]) / l;
                } else {
                    constant += Rat(cyc[i]) * gamma.form(ef.id).slope(ef.poly.rays()[0]);
                }
            }
            cs.push_back({AffineForm(std::move(row), constant), Rel::Ge});
        }
    }
    AffineForm objective(RatVector(n, Rat(1)), Rat(0));
    auto lp = lp_solve(objective, cs, LpSense::Max);
    if (lp.status == LpResult::Status::Infeasible)
        fail(Err::Infeasible, "no gamma-growth convex competitor exists");
    if (lp.status == LpResult::Status::Unbounded)
        fail(Err::Infeasible, "envelope LP unbounded; gamma is not convex at infinity");
    // assemble the PA function
    PAFunction out;
    out.carrier = a.complex;
    std::vector<Rat> val(n);
    for (size_t i = 0; i < n; ++i) val[i] = lp.point[i];
    for (FaceId vid : vids)
        out.per_face[vid] =
            AffineForm(RatVector(c.ambient_dim(), Rat(0)), val[vindex[vid]]);
    for (const auto& e : edges) {
        if (e.bounded) {
            const RatVector& tail = c.face(e.tail_vertex).poly.vertices()[0];
            Rat slope = (val[vindex[e.head_vertex]] - val[vindex[e.tail_vertex]]) / e.length;
            Rat dd = 0;
            RatVector dir = to_rat(e.direction);
            for (const auto& z : dir) dd += z * z;
            RatVector lin = vscale(slope / dd, dir);
            Rat cst = val[vindex[e.tail_vertex]] - dot(lin, tail);
            out.per_face[e.id] = AffineForm(std::move(lin), cst);
        } else {
            const RatVector& v = c.face(e.tail_vertex).poly.vertices()[0];
            const AffineForm& g = gamma.form(e.id);
            out.per_face[e.id] =
                AffineForm(g.linear, g.constant + val[vindex[e.tail_vertex]] - g.eval(v));
        }
    }
    return out;
}

// ---------------------------------------------------------------- smoothness

struct SmoothStatus {
    bool smooth = true;
    std::string reason;
};

/// A vertex is smooth when its primitive edge directions span a saturated
/// lattice of rank valence - 1 (locally a tropical line).
inline std::map<FaceId, SmoothStatus> is_poly_smooth(const BalancedSpace& s) {
    if (s.d != 1) fail(Err::DimensionNotOne, "is_poly_smooth is one-dimensional");
    const Complex& c = *s.complex;
    std::map<FaceId, SmoothStatus> out;
    for (FaceId vid : c.faces_of_dim(0)) {
        auto around = c.supfaces_of_dim(vid, 1);
        IntMatrix dirs;
        for (FaceId eid : around)
            dirs.push_back(normal_vector(c.face(eid).poly, c.face(vid).poly));
        SmoothStatus st;
        size_t val = around.size();
        auto h = hnf(dirs);
        if (h.size() != val - 1) {
            st.smooth = false;
            st.reason = "rank " + std::to_string(h.size()) + " != valence-1 = " +
                        std::to_string(val - 1);
        } else {
            for (const auto& d : snf(dirs))
                if (d != 1) {
                    st.smooth = false;
                    st.reason = "direction lattice is not saturated";
                    break;
                }
        }
        out[vid] = std::move(st);
    }
    return out;
}

// ---------------------------------------------------------------- orthogonality

struct OrthoResult {
    Rat integral;
    bool is_envelope_competitor = true;
};

/// Integral of (P - gamma - u) against MA_poly(P), with competitor-ship of
/// P validated first (PC, dominated by gamma + u, gamma-growth). Works in
/// any dimension.
inline OrthoResult ortho_check(const BalancedSpace& s, const PAFunction& gamma,
                               const PAFunction& u, const PAFunction& p) {
    auto a = detail::align(s, {gamma, u, p});
    const PAFunction& gr = a.funcs[0];
    const PAFunction& ur = a.funcs[1];
    const PAFunction& pr = a.funcs[2];
    if (!is_papc(pr, ConvexityMethod::DualCycles).convex)
        fail(Err::NotACompetitor, "P is not polyhedrally convex");
    if (!growth_check(pr, gr).bounded)
        fail(Err::NotACompetitor, "P does not have gamma growth");
    PAFunction obstacle = pa_combine(Rat(1), gr, Rat(1), ur);
    for (const auto& face : a.complex->faces()) {
        const AffineForm& lhs = pr.form(face.id);
        const AffineForm& rhs = obstacle.form(face.id);
        for (const auto& v : face.poly.vertices())
            if (lhs.eval(v) > rhs.eval(v))
                fail(Err::NotACompetitor, "P exceeds gamma + u");
        for (const auto& r : face.poly.rays())
            if (lhs.slope(r) > rhs.slope(r))
                fail(Err::NotACompetitor, "P exceeds gamma + u at infinity");
    }
    BalancedSpace sr{a.complex, a.d, [&] {
                         std::map<FaceId, Rat> w;
                         for (const auto& [id, v] : a.top.values) w[id] = v;
                         return w;
                     }()};
    AtomicMeasure mu = ma_poly(pr, sr);
    OrthoResult out;
    out.integral = 0;
    for (const auto& [x, m] : mu.atoms)
        out.integral += m * (eval(pr, x) - eval(obstacle, x));
    return out;
}

}  // namespace polyma
