#pragma once

#include <map>
#include <optional>
#include <vector>

#include "polyma/cycles.hpp"

namespace polyma {

/// Piecewise affine function: one ambient affine representative per face of
/// the carrier. Continuity ties representatives together on shared faces;
/// the linear part restricted to each face lattice is what all intersection
/// formulas consume.
struct PAFunction {
    ComplexPtr carrier;
    std::map<FaceId, AffineForm> per_face;

    const AffineForm& form(FaceId id) const {
        auto it = per_face.find(id);
        if (it == per_face.end()) fail(Err::CarrierMismatch, "face has no representative");
        return it->second;
    }
};

/// Finite atomic measure with rational (possibly signed) masses.
struct AtomicMeasure {
    std::map<RatVector, Rat, LexLess> atoms;

    void add(const RatVector& x, const Rat& m) {
        if (m == 0) return;
        auto [it, fresh] = atoms.emplace(x, m);
        if (!fresh) {
            it->second += m;
            if (it->second == 0) atoms.erase(it);
        }
    }
    Rat mass(const RatVector& x) const {
        auto it = atoms.find(x);
        return it == atoms.end() ? Rat(0) : it->second;
    }
    Rat total() const {
        Rat s = 0;
        for (const auto& [x, m] : atoms) s += m;
        return s;
    }
    friend bool operator==(const AtomicMeasure& a, const AtomicMeasure& b) {
        return a.atoms == b.atoms;
    }
};

// ---------------------------------------------------------------- validation

struct PaViolation {
    enum class Kind { Missing, Continuity, Integrality } kind;
    FaceId face_a = -1;
    FaceId face_b = -1;
};

struct PaReport {
    bool valid = true;
    std::vector<PaViolation> violations;
};

/// Checks continuity across incident faces and integrality of each linear
/// part on its face lattice.
inline PaReport validate_pa(const PAFunction& f) {
    PaReport rep;
    const Complex& c = *f.carrier;
    for (const auto& face : c.faces()) {
        auto it = f.per_face.find(face.id);
        if (it == f.per_face.end()) {
            rep.valid = false;
            rep.violations.push_back({PaViolation::Kind::Missing, face.id, -1});
            continue;
        }
        const AffineForm& g = it->second;
        for (const auto& row : face.poly.span_lattice().basis)
            if (rat_den(g.slope(row)) != 1) {
                rep.valid = false;
                rep.violations.push_back({PaViolation::Kind::Integrality, face.id, -1});
                break;
            }
    }
    for (const auto& face : c.faces())
        for (int sub : c.subfaces(face.id)) {
            auto fi = f.per_face.find(face.id);
            auto si = f.per_face.find(sub);
            if (fi == f.per_face.end() || si == f.per_face.end()) continue;
            const Polyhedron& tau = c.face(sub).poly;
            bool ok = true;
            for (const auto& v : tau.vertices())
                if (fi->second.eval(v) != si->second.eval(v)) ok = false;
            for (const auto& r : tau.rays())
                if (fi->second.slope(r) != si->second.slope(r)) ok = false;
            if (!ok) {
                rep.valid = false;
                rep.violations.push_back({PaViolation::Kind::Continuity, face.id, sub});
            }
        }
    return rep;
}

inline Rat eval(const PAFunction& f, const RatVector& x) {
    FaceId id = f.carrier->locate(x);
    return f.form(id).eval(x);
}

// ---------------------------------------------------------------- rebase, pointwise algebra

namespace detail {

/// Id of the minimal face of `coarse` containing p, if any.
inline std::optional<FaceId> containing_face(const Complex& coarse, const Polyhedron& p) {
    std::optional<FaceId> best;
    for (const auto& f : coarse.faces()) {
        if (!f.poly.contains_polyhedron(p)) continue;
        if (!best || f.dim < coarse.face(*best).dim) best = f.id;
    }
    return best;
}

inline PAFunction rebase_unchecked(const PAFunction& f, ComplexPtr fine) {
    PAFunction out;
    out.carrier = fine;
    for (const auto& face : fine->faces()) {
        auto src = containing_face(*f.carrier, face.poly);
        if (!src) fail(Err::NotARefinement, "fine face not contained in the carrier");
        out.per_face[face.id] = f.form(*src);
    }
    return out;
}

inline WeightK pullback_unchecked(const WeightK& w, const Complex& coarse, const Complex& fine) {
    WeightK out;
    out.k = w.k;
    for (FaceId fid : fine.faces_of_dim(w.k))
        for (FaceId cid : coarse.faces_of_dim(w.k))
            if (coarse.face(cid).poly.contains_polyhedron(fine.face(fid).poly)) {
                Rat v = w.value(cid);
                if (v != 0) out.values[fid] = v;
                break;
            }
    return out;
}

}  // namespace detail

/// Same function on a finer carrier.
inline PAFunction rebase(const PAFunction& f, ComplexPtr fine) {
    if (!same_complex(f.carrier, fine) && !is_refinement(*fine, *f.carrier))
        fail(Err::NotARefinement, "rebase requires a refinement of the carrier");
    return detail::rebase_unchecked(f, std::move(fine));
}

inline PAFunction pa_combine(const Rat& a, const PAFunction& f, const Rat& b, const PAFunction& g) {
    if (!same_complex(f.carrier, g.carrier)) fail(Err::CarrierMismatch, "pa_combine carriers");
    PAFunction out;
    out.carrier = f.carrier;
    for (const auto& [id, form] : f.per_face) {
        const AffineForm& h = g.form(id);
        RatVector lin = vadd(vscale(a, form.linear), vscale(b, h.linear));
        out.per_face[id] = AffineForm(std::move(lin), a * form.constant + b * h.constant);
    }
    return out;
}

inline PAFunction pa_offset(const PAFunction& f, const Rat& c) {
    PAFunction out = f;
    for (auto& [id, form] : out.per_face) form.constant += c;
    return out;
}

inline PAFunction pa_constant(ComplexPtr carrier, const Rat& c) {
    PAFunction out;
    out.carrier = carrier;
    for (const auto& face : carrier->faces())
        out.per_face[face.id] = AffineForm(RatVector(carrier->ambient_dim(), Rat(0)), c);
    return out;
}

// ---------------------------------------------------------------- carriers

namespace detail {

struct Aligned {
    ComplexPtr complex;
    std::vector<PAFunction> funcs;
    WeightK top;  // pulled-back fundamental cycle
    int d = 0;
};

inline Aligned align(const BalancedSpace& s, const std::vector<PAFunction>& fs) {
    Aligned out;
    out.d = s.d;
    ComplexPtr refined = s.complex;
    for (const auto& f : fs)
        if (!same_complex(refined, f.carrier))
            refined = make_complex(common_refinement(*refined, *f.carrier));
    out.complex = refined;
    for (const auto& f : fs)
        out.funcs.push_back(same_complex(f.carrier, refined) ? f
                                                             : rebase_unchecked(f, refined));
    WeightK top = fundamental_cycle(s);
    out.top = same_complex(s.complex, refined) ? top
                                               : pullback_unchecked(top, *s.complex, *refined);
    return out;
}

}  // namespace detail

// ---------------------------------------------------------------- localization

/// Conical localization phi_x on the star fan at x.
inline std::pair<StarFan, PAFunction> localize_pa(const PAFunction& f, const RatVector& x) {
    StarFan sf = star(*f.carrier, x);
    const AffineForm& base = f.form(sf.base_face);
    PAFunction out;
    out.carrier = sf.fan;
    for (const auto& face : sf.fan->faces()) {
        auto it = sf.origin.find(face.id);
        if (it == sf.origin.end()) fail(Err::PointOutsideSupport, "star cone without origin face");
        const AffineForm& g = f.form(it->second);
        out.per_face[face.id] = AffineForm(vsub(g.linear, base.linear), Rat(0));
    }
    return {std::move(sf), std::move(out)};
}

// ---------------------------------------------------------------- intersection product

/// Tropical intersection product: (phi . c)(tau) = sum_sigma c(sigma)
/// phi_sigma(n_{sigma/tau}) - phi_tau(sum_sigma c(sigma) n_{sigma/tau}).
/// Requires c balanced; the value is then independent of the normal
/// vector representatives.
inline CycleK intersect(const PAFunction& f, const CycleK& c, const Complex& carrier) {
    if (c.k < 1) fail(Err::DimensionMismatch, "intersection needs k >= 1");
    CycleK out;
    out.k = c.k - 1;
    for (FaceId tau_id : carrier.faces_of_dim(c.k - 1)) {
        const Polyhedron& tau = carrier.face(tau_id).poly;
        const AffineForm& ftau = f.form(tau_id);
        Rat acc = 0;
        RatVector nsum(carrier.ambient_dim(), Rat(0));
        bool any = false;
        for (FaceId sig : carrier.supfaces_of_dim(tau_id, c.k)) {
            Rat w = c.value(sig);
            if (w == 0) continue;
            IntVector n = normal_vector(carrier.face(sig).poly, tau);
            acc += w * f.form(sig).slope(n);
            nsum = vadd(nsum, vscale(w, to_rat(n)));
            any = true;
        }
        if (!any) continue;
        Rat val = acc - dot(ftau.linear, nsum);
        if (val != 0) out.values[tau_id] = val;
    }
    return out;
}

inline CycleK intersect(const PAFunction& f, const CycleK& c, const BalancedSpace& s) {
    if (!same_complex(f.carrier, s.complex))
        fail(Err::CarrierMismatch, "function and cycle live on different carriers");
    return intersect(f, c, *s.complex);
}

// ---------------------------------------------------------------- Monge–Ampère

namespace detail {

inline AtomicMeasure atoms_from_zero_weight(const Complex& c, const WeightK& w) {
    AtomicMeasure out;
    for (const auto& [id, v] : w.values) out.add(c.face(id).poly.vertices()[0], v);
    return out;
}

}  // namespace detail

/// Mixed polyhedral Monge–Ampère measure MA(f_1, ..., f_d) on a balanced
/// space: rebase onto a common refinement, fold the intersection product
/// right to left over [X], read off the vertex weights.
inline AtomicMeasure ma_poly(const std::vector<PAFunction>& fs, const BalancedSpace& s) {
    if ((int)fs.size() != s.d) fail(Err::WrongArity, "ma_poly needs d functions");
    auto a = detail::align(s, fs);
    WeightK c = a.top;
    for (size_t i = fs.size(); i-- > 0;) c = intersect(a.funcs[i], c, *a.complex);
    return detail::atoms_from_zero_weight(*a.complex, c);
}

inline AtomicMeasure ma_poly(const PAFunction& f, const BalancedSpace& s) {
    return ma_poly(std::vector<PAFunction>((size_t)s.d, f), s);
}

/// deg(phi) = total mass of MA(phi, ..., phi).
inline Rat degree_pa(const PAFunction& f, const BalancedSpace& s) {
    return ma_poly(f, s).total();
}

/// Zero slope along every unbounded direction of the carrier.
inline bool has_bounded_slopes(const PAFunction& f) {
    for (const auto& face : f.carrier->faces()) {
        const AffineForm& g = f.form(face.id);
        for (const auto& r : face.poly.rays())
            if (g.slope(r) != 0) return false;
    }
    return true;
}

/// Integral of f against MA(g, rest...): the pairing of f's vertex values
/// with the 0-cycle g . (rest-fold . [X]). Needs one of f, g bounded.
inline Rat ma_bilinear(const PAFunction& f, const PAFunction& g,
                       const std::vector<PAFunction>& rest, const BalancedSpace& s) {
    if ((int)rest.size() != s.d - 1) fail(Err::WrongArity, "ma_bilinear needs d-1 backgrounds");
    if (!has_bounded_slopes(f) && !has_bounded_slopes(g))
        fail(Err::UnboundedIntegrand, "neither factor is bounded");
    std::vector<PAFunction> all{f, g};
    all.insert(all.end(), rest.begin(), rest.end());
    auto a = detail::align(s, all);
    WeightK c = a.top;
    for (size_t i = all.size(); i-- > 2;) c = intersect(all[i], c, *a.complex);
    WeightK zero = intersect(a.funcs[1], c, *a.complex);
    Rat total = 0;
    for (const auto& [id, w] : zero.values)
        total += w * a.funcs[0].form(id).eval(a.complex->face(id).poly.vertices()[0]);
    return total;
}

// ---------------------------------------------------------------- growth

struct GrowthResult {
    bool bounded = false;
    Rat sup, inf;        // of f - gamma over the support, when bounded
    FaceId face = -1;    // offending unbounded face otherwise
};

/// f - gamma is bounded iff its slope vanishes along every unbounded
/// direction; then the extremes are attained at vertex points.
inline GrowthResult growth_check(const PAFunction& f, const PAFunction& gamma) {
    ComplexPtr refined = f.carrier;
    if (!same_complex(f.carrier, gamma.carrier))
        refined = make_complex(common_refinement(*f.carrier, *gamma.carrier));
    PAFunction fr = same_complex(f.carrier, refined) ? f : detail::rebase_unchecked(f, refined);
    PAFunction gr = same_complex(gamma.carrier, refined) ? gamma
                                                         : detail::rebase_unchecked(gamma, refined);
    GrowthResult out;
    for (const auto& face : refined->faces()) {
        const AffineForm& a = fr.form(face.id);
        const AffineForm& b = gr.form(face.id);
        for (const auto& r : face.poly.rays())
            if (a.slope(r) != b.slope(r)) {
                out.bounded = false;
                out.face = face.id;
                return out;
            }
    }
    out.bounded = true;
    bool first = true;
    for (const auto& face : refined->faces()) {
        const AffineForm& a = fr.form(face.id);
        const AffineForm& b = gr.form(face.id);
        for (const auto& v : face.poly.vertices()) {
            Rat d = a.eval(v) - b.eval(v);
            if (first || d > out.sup) out.sup = d;
            if (first || d < out.inf) out.inf = d;
            first = false;
        }
    }
    return out;
}

/// gamma is positive at infinity iff its slope is strictly positive along
/// every unbounded direction of the carrier.
inline bool positive_at_infinity(const PAFunction& gamma) {
    for (const auto& face : gamma.carrier->faces()) {
        const AffineForm& g = gamma.form(face.id);
        for (const auto& r : face.poly.rays())
            if (g.slope(r) <= 0) return false;
    }
    return true;
}

// ---------------------------------------------------------------- convexity

enum class ConvexityMethod { SupportLp, DualCycles };

struct ConvexityWitness {
    FaceId face = -1;
    WeightK local_cycle;  // weights on the faces above `face` (dual_cycles)
    std::string note;
};

struct ConvexityResult {
    bool convex = true;
    std::optional<ConvexityWitness> witness;
};

namespace detail {

/// Extreme rays of the local nonnegative-cycle cone at tau:
/// { c >= 0 : sum c_i n_i in span(N_tau) }, indexed like `sigmas`.
inline std::vector<IntVector> local_cycle_rays(const Complex& c, FaceId tau_id,
                                               const std::vector<FaceId>& sigmas,
                                               std::vector<IntVector>& normals) {
    const Polyhedron& tau = c.face(tau_id).poly;
    normals.clear();
    for (FaceId sid : sigmas) normals.push_back(normal_vector(c.face(sid).poly, tau));
    size_t m = sigmas.size();
    // complement forms vanishing on span(N_tau)
    RatMatrix span_rows;
    for (const auto& row : tau.span_lattice().basis) span_rows.push_back(to_rat(row));
    IntMatrix comp = nullspace(span_rows, c.ambient_dim());
    std::vector<RatVector> eqs;
    for (const auto& g : comp) {
        RatVector row(m);
        for (size_t i = 0; i < m; ++i) row[i] = Rat(dot(g, normals[i]));
        eqs.push_back(std::move(row));
    }
    std::vector<RatVector> ineqs;
    for (size_t i = 0; i < m; ++i) {
        RatVector row(m, Rat(0));
        row[i] = 1;
        ineqs.push_back(std::move(row));
    }
    auto cg = cone_generators(m, eqs, ineqs);
    return cg.rays;  // the cone is pointed: no lineality
}

inline Rat local_pairing(const PAFunction& f, const Complex& c, FaceId tau_id,
                         const std::vector<FaceId>& sigmas, const std::vector<IntVector>& normals,
                         const IntVector& cycle) {
    Rat acc = 0;
    RatVector nsum(c.ambient_dim(), Rat(0));
    for (size_t i = 0; i < sigmas.size(); ++i) {
        if (cycle[i] == 0) continue;
        acc += Rat(cycle[i]) * f.form(sigmas[i]).slope(normals[i]);
        nsum = vadd(nsum, vscale(Rat(cycle[i]), to_rat(normals[i])));
    }
    return acc - dot(f.form(tau_id).linear, nsum);
}

}  // namespace detail

/// Polyhedral convexity of a piecewise affine function.
///  - DualCycles: at every face tau, the pairing against each extreme
///    nonnegative local cycle must be >= 0.
///  - SupportLp: at every face sigma of a simplicial carrier, an ambient
///    affine minorant touching along sigma must exist (LP feasibility).
inline ConvexityResult is_papc(const PAFunction& f, ConvexityMethod method) {
    const Complex& c = *f.carrier;
    ConvexityResult out;
    if (method == ConvexityMethod::SupportLp) {
        if (!is_simplicial(c)) fail(Err::NotSimplicial, "support_lp needs a simplicial carrier");
        size_t n = c.ambient_dim();
        for (const auto& face : c.faces()) {
            std::vector<LpConstraint> cs;
            auto form_row = [&](const RatVector& v, const Rat& rhs, Rel rel) {
                RatVector lin = v;
                lin.push_back(Rat(1));  // the constant coefficient
                cs.push_back({AffineForm(std::move(lin), -rhs), rel});
            };
            auto slope_row = [&](const IntVector& r, const Rat& rhs, Rel rel) {
                RatVector lin = to_rat(r);
                lin.push_back(Rat(0));
                cs.push_back({AffineForm(std::move(lin), -rhs), rel});
            };
            const AffineForm& fs = f.form(face.id);
            for (const auto& v : face.poly.vertices()) form_row(v, fs.eval(v), Rel::Eq);
            for (const auto& r : face.poly.rays()) slope_row(r, fs.slope(r), Rel::Eq);
            std::vector<FaceId> ups{face.id};
            for (int s : c.supfaces(face.id)) ups.push_back(s);
            for (FaceId up : ups) {
                const AffineForm& g = f.form(up);
                for (const auto& v : c.face(up).poly.vertices()) form_row(v, g.eval(v), Rel::Le);
                for (const auto& r : c.face(up).poly.rays()) slope_row(r, g.slope(r), Rel::Le);
            }
            if (!lp_feasible(n + 1, cs)) {
                out.convex = false;
                out.witness = ConvexityWitness{face.id, {}, "no supporting affine minorant"};
                return out;
            }
        }
        return out;
    }
    for (const auto& face : c.faces()) {
        auto sigmas = c.supfaces_of_dim(face.id, face.dim + 1);
        if (sigmas.empty()) continue;
        std::vector<IntVector> normals;
        auto rays = detail::local_cycle_rays(c, face.id, sigmas, normals);
        for (const auto& r : rays) {
            Rat p = detail::local_pairing(f, c, face.id, sigmas, normals, r);
            if (p < 0) {
                out.convex = false;
                ConvexityWitness w;
                w.face = face.id;
                w.local_cycle.k = face.dim + 1;
                for (size_t i = 0; i < sigmas.size(); ++i)
                    if (r[i] != 0) w.local_cycle.values[sigmas[i]] = Rat(r[i]);
                w.note = "extreme nonnegative local cycle pairs negatively";
                out.witness = std::move(w);
                return out;
            }
        }
    }
    return out;
}

/// Strict convexity w.r.t. the carrier: every nonzero extreme local cycle
/// pairs strictly positively.
inline bool is_strictly_convex(const PAFunction& f) {
    const Complex& c = *f.carrier;
    for (const auto& face : c.faces()) {
        auto sigmas = c.supfaces_of_dim(face.id, face.dim + 1);
        if (sigmas.empty()) continue;
        std::vector<IntVector> normals;
        auto rays = detail::local_cycle_rays(c, face.id, sigmas, normals);
        for (const auto& r : rays)
            if (detail::local_pairing(f, c, face.id, sigmas, normals, r) <= 0) return false;
    }
    return true;
}

// ---------------------------------------------------------------- real Monge–Ampère

/// Linearity regions of max(forms): the full-dimensional domains
/// { f_i >= f_j for all j }.
inline std::vector<Polyhedron> max_regions(const std::vector<AffineForm>& forms, size_t dim) {
    std::vector<Polyhedron> regions;
    for (size_t i = 0; i < forms.size(); ++i) {
        HRep h;
        h.ambient = dim;
        for (size_t j = 0; j < forms.size(); ++j) {
            if (i == j) continue;
            h.ineqs.push_back(
                AffineForm(vsub(forms[i].linear, forms[j].linear),
                           forms[i].constant - forms[j].constant));
        }
        auto p = Polyhedron::from_hrep(h);
        if (p && p->dim() == dim) regions.push_back(std::move(*p));
    }
    return regions;
}

/// Real Monge–Ampère measure of max(forms) on the full space: an atom of
/// mass Vol(conv of active linear parts) wherever that volume is positive.
inline AtomicMeasure real_ma(const std::vector<AffineForm>& forms) {
    AtomicMeasure out;
    if (forms.empty()) return out;
    size_t n = forms[0].dim();
    Complex dom = Complex::from_faces(n, max_regions(forms, n));
    for (FaceId vid : dom.faces_of_dim(0)) {
        const RatVector& x = dom.face(vid).poly.vertices()[0];
        Rat top = forms[0].eval(x);
        for (const auto& f : forms) top = std::max(top, f.eval(x));
        std::vector<RatVector> active;
        for (const auto& f : forms)
            if (f.eval(x) == top) active.push_back(f.linear);
        out.add(x, lattice_volume(active));
    }
    return out;
}

struct CompareRealMa {
    bool equal = true;
    struct Row {
        RatVector point;
        Rat poly_mass;
        Rat real_mass_scaled;
    };
    std::vector<Row> rows;  // one per vertex in the open face; mismatches flagged by equal=false
};

/// Checks 1_{relint(sigma)} MA_poly(f) = [X](sigma) d! MA_R(f|sigma) on a
/// top-dimensional face, in lattice coordinates of N_sigma.
inline CompareRealMa compare_real_ma(const PAFunction& f, FaceId sigma_id,
                                     const BalancedSpace& s) {
    if (s.complex->face(sigma_id).dim != s.d)
        fail(Err::NotTopFace, "compare_real_ma needs a top-dimensional face");
    const Polyhedron& sigma = s.complex->face(sigma_id).poly;
    auto a = detail::align(s, {f});
    AtomicMeasure poly = ma_poly(std::vector<PAFunction>((size_t)s.d, a.funcs[0]),
                                 BalancedSpace{a.complex, s.d, [&] {
                                                   std::map<FaceId, Rat> w;
                                                   for (const auto& [id, v] : a.top.values)
                                                       w[id] = v;
                                                   return w;
                                               }()});
    // restriction of f to sigma in lattice coordinates
    const IntMatrix& basis = sigma.span_lattice().basis;
    const RatVector& x0 = sigma.base_point();
    std::vector<AffineForm> restricted;
    for (const auto& face : a.complex->faces()) {
        if (face.dim != s.d || !sigma.contains_polyhedron(face.poly)) continue;
        const AffineForm& g = a.funcs[0].form(face.id);
        RatVector lin(basis.size());
        for (size_t i = 0; i < basis.size(); ++i) lin[i] = g.slope(basis[i]);
        AffineForm rg(std::move(lin), g.eval(x0));
        bool seen = false;
        for (const auto& h : restricted) seen = seen || h == rg;
        if (!seen) restricted.push_back(std::move(rg));
    }
    Rat dfact = 1;
    for (int i = 2; i <= s.d; ++i) dfact *= Rat(i);
    CompareRealMa out;
    for (FaceId vid : a.complex->faces_of_dim(0)) {
        const RatVector& v = a.complex->face(vid).poly.vertices()[0];
        if (!sigma.contains_in_relint(v)) continue;
        // lattice coordinates of v - x0
        RatMatrix rows;
        for (const auto& b : basis) rows.push_back(to_rat(b));
        auto yv = solve_left(rows, vsub(v, x0));
        if (!yv) fail(Err::NotTopFace, "vertex outside the face span");
        Rat top = restricted[0].eval(*yv);
        for (const auto& h : restricted) top = std::max(top, h.eval(*yv));
        std::vector<RatVector> active;
        for (const auto& h : restricted)
            if (h.eval(*yv) == top) active.push_back(h.linear);
        Rat real_mass = lattice_volume(active);
        CompareRealMa::Row row{v, poly.mass(v), s.weight(sigma_id) * dfact * real_mass};
        if (row.poly_mass != row.real_mass_scaled) out.equal = false;
        out.rows.push_back(std::move(row));
    }
    return out;
}

// ---------------------------------------------------------------- energy

/// E(phi) = 1/(d+1) sum_j Int (phi - gamma) MA(phi^j, gamma^{d-j}).
inline Rat energy(const PAFunction& f, const PAFunction& gamma, const BalancedSpace& s) {
    auto g = growth_check(f, gamma);
    if (!g.bounded) fail(Err::UnboundedDifference, "energy needs f = gamma + O(1)");
    auto a = detail::align(s, {f, gamma});
    const PAFunction& fr = a.funcs[0];
    const PAFunction& gr = a.funcs[1];
    // gamma-chain: [X], gamma.[X], gamma^2.[X], ...
    std::vector<WeightK> chain{a.top};
    for (int i = 0; i < a.d; ++i) chain.push_back(intersect(gr, chain.back(), *a.complex));
    Rat total = 0;
    for (int j = 0; j <= a.d; ++j) {
        WeightK c = chain[a.d - j];
        for (int i = 0; i < j; ++i) c = intersect(fr, c, *a.complex);
        for (const auto& [id, w] : c.values) {
            const RatVector& v = a.complex->face(id).poly.vertices()[0];
            total += w * (fr.form(id).eval(v) - gr.form(id).eval(v));
        }
    }
    return total / Rat(a.d + 1);
}

struct EnergySampleRow {
    Rat t;
    Rat poly_derivative;  // exact derivative of the interpolated E(phi_t)
    Rat integral;         // Int (psi - phi) MA(phi_t, ..., phi_t)
};

struct EnergyCheckReport {
    bool derivative_ok = true;
    bool difference_ok = true;
    std::vector<EnergySampleRow> samples;
    Rat difference_lhs;  // E(phi) - E(psi)
    Rat difference_rhs;  // 1/(d+1) sum_j Int (phi - psi) MA(phi^j, psi^{d-j})
    std::vector<Rat> energy_poly;  // coefficients of E(phi_t), degree <= d+1
};

/// Exact check of the energy derivative and difference identities.
inline EnergyCheckReport energy_identities_check(const PAFunction& phi, const PAFunction& psi,
                                                 const PAFunction& gamma, const BalancedSpace& s,
                                                 const std::vector<Rat>& ts) {
    if (!growth_check(phi, gamma).bounded || !growth_check(psi, gamma).bounded)
        fail(Err::UnboundedDifference, "energy identities need gamma-bounded inputs");
    auto a = detail::align(s, {phi, psi, gamma});
    const PAFunction& fr = a.funcs[0];
    const PAFunction& pr = a.funcs[1];
    const PAFunction& gr = a.funcs[2];
    BalancedSpace sr{a.complex, a.d, [&] {
                         std::map<FaceId, Rat> w;
                         for (const auto& [id, v] : a.top.values) w[id] = v;
                         return w;
                     }()};
    auto phi_t = [&](const Rat& t) { return pa_combine(Rat(1) - t, fr, t, pr); };
    // interpolate E(phi_t) at d+2 nodes
    int deg = a.d + 1;
    std::vector<Rat> nodes;
    for (int i = 0; i <= deg; ++i) nodes.push_back(Rat(i, deg));
    RatMatrix vander;
    RatVector rhs;
    for (const Rat& t : nodes) {
        RatVector row(deg + 1);
        Rat pw = 1;
        for (int j = 0; j <= deg; ++j) {
            row[j] = pw;
            pw *= t;
        }
        vander.push_back(std::move(row));
        rhs.push_back(energy(phi_t(t), gr, sr));
    }
    // solve vander^T . coeffs ... rows are per-node equations
    RatMatrix cols(deg + 1, RatVector(deg + 1));
    for (int i = 0; i <= deg; ++i)
        for (int j = 0; j <= deg; ++j) cols[j][i] = vander[i][j];
    auto coeffs = solve_left(cols, rhs);
    EnergyCheckReport rep;
    rep.energy_poly = *coeffs;
    PAFunction diff = pa_combine(Rat(1), pr, Rat(-1), fr);  // psi - phi
    for (const Rat& t : ts) {
        Rat deriv = 0;
        Rat pw = 1;
        for (int j = 1; j <= deg; ++j) {
            deriv += Rat(j) * (*coeffs)[j] * pw;
            pw *= t;
        }
        AtomicMeasure mu = ma_poly(phi_t(t), sr);
        Rat integral = 0;
        for (const auto& [x, m] : mu.atoms) integral += m * eval(diff, x);
        rep.samples.push_back({t, deriv, integral});
        if (deriv != integral) rep.derivative_ok = false;
    }
    // difference formula
    rep.difference_lhs = energy(fr, gr, sr) - energy(pr, gr, sr);
    std::vector<WeightK> chain{a.top};
    for (int i = 0; i < a.d; ++i) chain.push_back(intersect(pr, chain.back(), *a.complex));
    Rat rhs2 = 0;
    PAFunction fm = pa_combine(Rat(1), fr, Rat(-1), pr);  // phi - psi
    for (int j = 0; j <= a.d; ++j) {
        WeightK c = chain[a.d - j];
        for (int i = 0; i < j; ++i) c = intersect(fr, c, *a.complex);
        for (const auto& [id, w] : c.values) {
            const RatVector& v = a.complex->face(id).poly.vertices()[0];
            rhs2 += w * fm.form(id).eval(v);
        }
    }
    rep.difference_rhs = rhs2 / Rat(a.d + 1);
    rep.difference_ok = rep.difference_lhs == rep.difference_rhs;
    return rep;
}

// ---------------------------------------------------------------- constructions

/// Refines the complex along the linearity regions of max(forms) and
/// restricts the max to it. The forms must have integral linear parts for
/// the result to be a lattice piecewise affine function.
inline PAFunction pa_from_max(const BalancedSpace& s, const std::vector<AffineForm>& forms) {
    auto regions = max_regions(forms, s.complex->ambient_dim());
    std::vector<Polyhedron> cells;
    for (FaceId id : s.complex->maximal_faces())
        for (const auto& r : regions) {
            auto inter = s.complex->face(id).poly.intersect(r);
            if (inter) cells.push_back(std::move(*inter));
        }
    ComplexPtr fine = make_complex(Complex::from_faces(s.complex->ambient_dim(), cells));
    PAFunction out;
    out.carrier = fine;
    for (const auto& face : fine->faces()) {
        for (size_t i = 0; i < forms.size(); ++i) {
            // forms[i] dominates every other form on the whole face
            bool active = true;
            for (size_t j = 0; j < forms.size() && active; ++j) {
                if (i == j) continue;
                for (const auto& v : face.poly.vertices())
                    if (forms[i].eval(v) < forms[j].eval(v)) active = false;
                for (const auto& r : face.poly.rays())
                    if (forms[i].slope(r) < forms[j].slope(r)) active = false;
            }
            if (!active) continue;
            out.per_face[face.id] = forms[i];
            break;
        }
        if (!out.per_face.count(face.id))
            fail(Err::CarrierMismatch, "no active form on a refined face");
    }
    return out;
}

/// Pointwise max of two piecewise affine functions (on the overlay of
/// their carriers, split along the crossing locus).
inline PAFunction pa_max(const PAFunction& f, const PAFunction& g) {
    ComplexPtr base = f.carrier;
    if (!same_complex(f.carrier, g.carrier))
        base = make_complex(common_refinement(*f.carrier, *g.carrier));
    PAFunction fb = same_complex(f.carrier, base) ? f : detail::rebase_unchecked(f, base);
    PAFunction gb = same_complex(g.carrier, base) ? g : detail::rebase_unchecked(g, base);
    std::vector<Polyhedron> cells;
    for (FaceId id : base->maximal_faces()) {
        const Polyhedron& p = base->face(id).poly;
        AffineForm d(vsub(fb.form(id).linear, gb.form(id).linear),
                     fb.form(id).constant - gb.form(id).constant);
        HRep hf = p.hrep();
        hf.ineqs.push_back(d);
        HRep hg = p.hrep();
        hg.ineqs.push_back(AffineForm(vscale(Rat(-1), d.linear), -d.constant));
        auto pf = Polyhedron::from_hrep(hf);
        auto pg = Polyhedron::from_hrep(hg);
        if (pf) cells.push_back(std::move(*pf));
        if (pg) cells.push_back(std::move(*pg));
    }
    ComplexPtr fine = make_complex(Complex::from_faces(base->ambient_dim(), cells));
    PAFunction fr = detail::rebase_unchecked(fb, fine);
    PAFunction gr = detail::rebase_unchecked(gb, fine);
    PAFunction out;
    out.carrier = fine;
    for (const auto& face : fine->faces()) {
        bool f_wins = true;
        for (const auto& v : face.poly.vertices())
            if (fr.form(face.id).eval(v) < gr.form(face.id).eval(v)) f_wins = false;
        if (f_wins)
            for (const auto& r : face.poly.rays())
                if (fr.form(face.id).slope(r) < gr.form(face.id).slope(r)) f_wins = false;
        out.per_face[face.id] = f_wins ? fr.form(face.id) : gr.form(face.id);
    }
    return out;
}

inline PAFunction pa_min(const PAFunction& f, const PAFunction& g) {
    PAFunction nf = pa_combine(Rat(-1), f, Rat(0), f);
    PAFunction ng = pa_combine(Rat(-1), g, Rat(0), g);
    PAFunction m = pa_max(nf, ng);
    return pa_combine(Rat(-1), m, Rat(0), m);
}

}  // namespace polyma
