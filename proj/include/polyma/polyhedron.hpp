#pragma once

#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "polyma/linalg.hpp"
#include "polyma/lp.hpp"

namespace polyma {

/// Irredundant constraint representation: { f = 0 } and { f >= 0 }.
struct HRep {
    size_t ambient = 0;
    std::vector<AffineForm> eqs;
    std::vector<AffineForm> ineqs;
};

struct ConeGenerators {
    IntMatrix lineality;  // canonical primitive basis of the lineality space
    IntMatrix rays;       // extreme rays mod lineality, canonical primitive
};

namespace detail {

/// Double description (Motzkin–Burger) for {y : eq.y = 0, ineq.y >= 0}.
/// Adjacency by the combinatorial tight-set test.
inline ConeGenerators cone_generators(size_t dim, const std::vector<RatVector>& eq_rows,
                                      const std::vector<RatVector>& ineq_rows) {
    IntMatrix lin(dim, IntVector(dim, Int(0)));
    for (size_t i = 0; i < dim; ++i) lin[i][i] = 1;
    IntMatrix rays;
    std::vector<std::vector<bool>> tight;  // per ray, over inequality indices
    size_t n_ineq = ineq_rows.size();

    auto dot_ri = [&](const RatVector& a, const IntVector& r) { return dot(a, r); };

    auto process = [&](const RatVector& a, bool is_eq, size_t ineq_index) {
        // lineality reduction
        size_t l0 = lin.size();
        for (size_t i = 0; i < lin.size(); ++i)
            if (dot_ri(a, lin[i]) != 0) {
                l0 = i;
                break;
            }
        if (l0 != lin.size()) {
            IntVector v0 = lin[l0];
            lin.erase(lin.begin() + l0);
            Rat d0 = dot_ri(a, v0);
            if (d0 < 0) {
                for (auto& x : v0) x = -x;
                d0 = -d0;
            }
            for (auto& l : lin) {
                Rat d = dot_ri(a, l);
                if (d == 0) continue;
                RatVector nl = vsub(vscale(d0, to_rat(l)), vscale(d, to_rat(v0)));
                l = primitive(nl);
            }
            for (size_t i = 0; i < rays.size(); ++i) {
                Rat d = dot_ri(a, rays[i]);
                if (!is_eq) tight[i][ineq_index] = true;  // projected onto {a=0}
                if (d == 0) continue;
                RatVector nr = vsub(vscale(d0, to_rat(rays[i])), vscale(d, to_rat(v0)));
                rays[i] = primitive(nr);
            }
            if (!is_eq) {
                std::vector<bool> t(n_ineq, false);
                for (size_t k = 0; k < ineq_index; ++k) t[k] = true;
                rays.push_back(v0);
                tight.push_back(std::move(t));
            }
            return;
        }
        // split rays by sign
        std::vector<size_t> pos, neg, zer;
        std::vector<Rat> val(rays.size());
        for (size_t i = 0; i < rays.size(); ++i) {
            val[i] = dot_ri(a, rays[i]);
            if (val[i] > 0)
                pos.push_back(i);
            else if (val[i] < 0)
                neg.push_back(i);
            else
                zer.push_back(i);
        }
        if (neg.empty()) {  // constraint redundant or tight only
            if (!is_eq) {
                for (size_t i : zer) tight[i][ineq_index] = true;
                return;
            }
            // equality: drop strictly positive rays after combinations (none with neg empty)
            if (pos.empty()) return;
        }
        auto adjacent = [&](size_t p, size_t m) {
            std::vector<bool> common(n_ineq, false);
            for (size_t k = 0; k < n_ineq; ++k) common[k] = tight[p][k] && tight[m][k];
            for (size_t r = 0; r < rays.size(); ++r) {
                if (r == p || r == m) continue;
                bool super = true;
                for (size_t k = 0; k < n_ineq && super; ++k)
                    if (common[k] && !tight[r][k]) super = false;
                if (super) return false;
            }
            return true;
        };
        IntMatrix new_rays;
        std::vector<std::vector<bool>> new_tight;
        for (size_t p : pos)
            for (size_t m : neg) {
                if (!adjacent(p, m)) continue;
                RatVector w =
                    vsub(vscale(val[p], to_rat(rays[m])), vscale(val[m], to_rat(rays[p])));
                if (is_zero(w)) continue;
                std::vector<bool> t(n_ineq, false);
                for (size_t k = 0; k < n_ineq; ++k) t[k] = tight[p][k] && tight[m][k];
                if (!is_eq) t[ineq_index] = true;
                new_rays.push_back(primitive(w));
                new_tight.push_back(std::move(t));
            }
        IntMatrix kept;
        std::vector<std::vector<bool>> kept_tight;
        for (size_t i = 0; i < rays.size(); ++i) {
            bool keep = is_eq ? (val[i] == 0) : (val[i] >= 0);
            if (!keep) continue;
            kept.push_back(rays[i]);
            auto t = tight[i];
            if (!is_eq && val[i] == 0) t[ineq_index] = true;
            kept_tight.push_back(std::move(t));
        }
        for (size_t i = 0; i < new_rays.size(); ++i) {
            kept.push_back(std::move(new_rays[i]));
            kept_tight.push_back(std::move(new_tight[i]));
        }
        rays = std::move(kept);
        tight = std::move(kept_tight);
    };

    for (const auto& a : eq_rows) process(a, true, 0);
    for (size_t k = 0; k < ineq_rows.size(); ++k) process(ineq_rows[k], false, k);

    // canonical form: RREF lineality, rays reduced mod lineality
    RatMatrix lq;
    for (const auto& l : lin) lq.push_back(to_rat(l));
    auto pivots = rref(lq);
    IntMatrix lin_out;
    for (const auto& row : lq)
        if (!is_zero(row)) lin_out.push_back(primitive(row));
    std::set<IntVector, LexLess> ray_set;
    for (const auto& r : rays) {
        RatVector v = to_rat(r);
        for (size_t i = 0; i < lin_out.size(); ++i) {
            Rat c = v[pivots[i]] / Rat(lin_out[i][pivots[i]]);
            if (c != 0) v = vsub(v, vscale(c, to_rat(lin_out[i])));
        }
        if (!is_zero(v)) ray_set.insert(primitive(v));
    }
    ConeGenerators out;
    out.lineality = std::move(lin_out);
    out.rays.assign(ray_set.begin(), ray_set.end());
    return out;
}

}  // namespace detail

struct VRep {
    std::vector<RatVector> vertices;
    std::vector<IntVector> rays;  // primitive; lines appear as opposite pairs
};

/// Exact V-to-H conversion; the result is irredundant.
inline HRep dual_description(const VRep& gen, size_t ambient) {
    if (gen.vertices.empty()) fail(Err::EmptyPolyhedron, "dual_description of an empty set");
    std::vector<RatVector> rows;
    for (const auto& v : gen.vertices) {
        RatVector row = v;
        row.push_back(Rat(1));
        rows.push_back(std::move(row));
    }
    for (const auto& r : gen.rays) {
        RatVector row = to_rat(r);
        row.push_back(Rat(0));
        rows.push_back(std::move(row));
    }
    auto cg = detail::cone_generators(ambient + 1, {}, rows);
    HRep h;
    h.ambient = ambient;
    for (const auto& l : cg.lineality) {
        RatVector lin(l.begin(), l.end() - 1);
        h.eqs.emplace_back(std::move(lin), Rat(l.back()));
    }
    for (const auto& r : cg.rays) {
        RatVector lin(r.begin(), r.end() - 1);
        if (is_zero(lin)) continue;  // 1 >= 0
        h.ineqs.emplace_back(std::move(lin), Rat(r.back()));
    }
    auto less = [](const AffineForm& a, const AffineForm& b) { return cmp(a, b) < 0; };
    std::sort(h.eqs.begin(), h.eqs.end(), less);
    std::sort(h.ineqs.begin(), h.ineqs.end(), less);
    return h;
}

/// Exact H-to-V conversion. Empty feasible set yields nullopt.
inline std::optional<VRep> h_to_v_opt(const HRep& h) {
    size_t n = h.ambient;
    std::vector<RatVector> eq_rows, ineq_rows;
    for (const auto& f : h.eqs) {
        RatVector row = f.linear;
        row.push_back(f.constant);
        eq_rows.push_back(std::move(row));
    }
    for (const auto& f : h.ineqs) {
        RatVector row = f.linear;
        row.push_back(f.constant);
        ineq_rows.push_back(std::move(row));
    }
    RatVector tpos(n + 1, Rat(0));
    tpos[n] = 1;
    ineq_rows.push_back(std::move(tpos));
    auto cg = detail::cone_generators(n + 1, eq_rows, ineq_rows);
    VRep out;
    std::set<IntVector, LexLess> ray_set;
    for (const auto& l : cg.lineality) {
        // lineality satisfies t >= 0 with equality
        IntVector d(l.begin(), l.end() - 1);
        ray_set.insert(primitive(d));
        for (auto& x : d) x = -x;
        ray_set.insert(primitive(d));
    }
    for (const auto& r : cg.rays) {
        if (r.back() == 0) {
            IntVector d(r.begin(), r.end() - 1);
            ray_set.insert(primitive(d));
        } else {
            RatVector v(n);
            for (size_t i = 0; i < n; ++i) v[i] = Rat(r[i]) / Rat(r[n]);
            out.vertices.push_back(std::move(v));
        }
    }
    if (out.vertices.empty()) return std::nullopt;
    out.rays.assign(ray_set.begin(), ray_set.end());
    std::sort(out.vertices.begin(), out.vertices.end(), LexLess());
    return out;
}

inline VRep h_to_v(const HRep& h) {
    auto v = h_to_v_opt(h);
    if (!v) fail(Err::EmptyPolyhedron, "h_to_v of an infeasible system");
    return *v;
}

/// Rational polyhedron in canonical generator + constraint form.
/// Immutable after construction.
class Polyhedron {
  public:
    static Polyhedron from_generators(std::vector<RatVector> vertices,
                                      std::vector<IntVector> rays, size_t ambient) {
        VRep g{std::move(vertices), std::move(rays)};
        HRep h = dual_description(g, ambient);
        VRep canon = h_to_v(h);
        return Polyhedron(std::move(canon), std::move(h));
    }

    static std::optional<Polyhedron> from_hrep(const HRep& h) {
        auto g = h_to_v_opt(h);
        if (!g) return std::nullopt;
        HRep canon = dual_description(*g, h.ambient);
        return Polyhedron(std::move(*g), std::move(canon));
    }

    size_t ambient() const { return hrep_.ambient; }
    const std::vector<RatVector>& vertices() const { return gen_.vertices; }
    const std::vector<IntVector>& rays() const { return gen_.rays; }
    const HRep& hrep() const { return hrep_; }
    size_t dim() const { return dim_; }
    bool is_bounded() const { return gen_.rays.empty(); }
    const RatVector& base_point() const { return gen_.vertices.front(); }

    /// N_sigma: the saturated lattice of integer direction vectors.
    const Lattice& span_lattice() const { return span_; }

    bool contains(const RatVector& x) const {
        for (const auto& f : hrep_.eqs)
            if (f.eval(x) != 0) return false;
        for (const auto& f : hrep_.ineqs)
            if (f.eval(x) < 0) return false;
        return true;
    }

    bool contains_in_relint(const RatVector& x) const {
        for (const auto& f : hrep_.eqs)
            if (f.eval(x) != 0) return false;
        for (const auto& f : hrep_.ineqs)
            if (f.eval(x) <= 0) return false;
        return true;
    }

    bool contains_direction(const IntVector& r) const {
        for (const auto& f : hrep_.eqs)
            if (f.slope(r) != 0) return false;
        for (const auto& f : hrep_.ineqs)
            if (f.slope(r) < 0) return false;
        return true;
    }

    bool contains_polyhedron(const Polyhedron& q) const {
        for (const auto& v : q.vertices())
            if (!contains(v)) return false;
        for (const auto& r : q.rays())
            if (!contains_direction(r)) return false;
        return true;
    }

    friend bool operator==(const Polyhedron& a, const Polyhedron& b) {
        return a.hrep_.ambient == b.hrep_.ambient && a.hrep_.eqs == b.hrep_.eqs &&
               a.hrep_.ineqs == b.hrep_.ineqs;
    }
    friend bool operator!=(const Polyhedron& a, const Polyhedron& b) { return !(a == b); }

    /// Total order used for deterministic face ids.
    friend int cmp(const Polyhedron& a, const Polyhedron& b) {
        if (a.dim_ != b.dim_) return a.dim_ < b.dim_ ? -1 : 1;
        auto cmp_forms = [](const std::vector<AffineForm>& x, const std::vector<AffineForm>& y) {
            for (size_t i = 0; i < x.size() && i < y.size(); ++i) {
                int c = cmp(x[i], y[i]);
                if (c != 0) return c;
            }
            if (x.size() != y.size()) return x.size() < y.size() ? -1 : 1;
            return 0;
        };
        int c = cmp_forms(a.hrep_.eqs, b.hrep_.eqs);
        if (c != 0) return c;
        return cmp_forms(a.hrep_.ineqs, b.hrep_.ineqs);
    }
    friend bool operator<(const Polyhedron& a, const Polyhedron& b) { return cmp(a, b) < 0; }

    /// Facets (codimension-one faces).
    std::vector<Polyhedron> facets() const {
        std::vector<Polyhedron> out;
        for (const auto& f : hrep_.ineqs) {
            std::vector<RatVector> vs;
            std::vector<IntVector> rs;
            for (const auto& v : gen_.vertices)
                if (f.eval(v) == 0) vs.push_back(v);
            for (const auto& r : gen_.rays)
                if (f.slope(r) == 0) rs.push_back(r);
            if (vs.empty()) continue;  // irredundant => should not happen
            out.push_back(from_generators(std::move(vs), std::move(rs), ambient()));
        }
        return out;
    }

    /// All faces including this polyhedron itself.
    std::vector<Polyhedron> all_faces() const {
        std::vector<Polyhedron> out{*this};
        std::set<std::string> seen{key()};
        size_t head = 0;
        while (head < out.size()) {
            auto fs = out[head].facets();
            ++head;
            for (auto& f : fs) {
                if (seen.insert(f.key()).second) out.push_back(std::move(f));
            }
        }
        return out;
    }

    bool is_face_of(const Polyhedron& p) const {
        if (!p.contains_polyhedron(*this)) return false;
        HRep h = p.hrep_;
        for (const auto& f : p.hrep_.ineqs) {
            bool tight = true;
            for (const auto& v : gen_.vertices)
                if (f.eval(v) != 0) {
                    tight = false;
                    break;
                }
            if (tight)
                for (const auto& r : gen_.rays)
                    if (f.slope(r) != 0) {
                        tight = false;
                        break;
                    }
            if (tight) h.eqs.push_back(f);
        }
        auto g = Polyhedron::from_hrep(h);
        return g && *g == *this;
    }

    std::optional<Polyhedron> intersect(const Polyhedron& q) const {
        HRep h = hrep_;
        h.eqs.insert(h.eqs.end(), q.hrep_.eqs.begin(), q.hrep_.eqs.end());
        h.ineqs.insert(h.ineqs.end(), q.hrep_.ineqs.begin(), q.hrep_.ineqs.end());
        return from_hrep(h);
    }

    Polyhedron recession() const {
        std::vector<RatVector> vs{RatVector(ambient(), Rat(0))};
        return from_generators(std::move(vs), gen_.rays, ambient());
    }

    std::string key() const {
        std::ostringstream os;
        os << dim_ << '#';
        for (const auto& f : hrep_.eqs) {
            os << 'e';
            for (const auto& x : f.linear) os << rat_str(x) << ',';
            os << rat_str(f.constant) << ';';
        }
        for (const auto& f : hrep_.ineqs) {
            os << 'i';
            for (const auto& x : f.linear) os << rat_str(x) << ',';
            os << rat_str(f.constant) << ';';
        }
        return os.str();
    }

    std::string to_string() const {
        std::ostringstream os;
        os << "{dim " << dim_ << "; V:";
        for (const auto& v : gen_.vertices) {
            os << " (";
            for (size_t i = 0; i < v.size(); ++i) os << (i ? "," : "") << rat_str(v[i]);
            os << ")";
        }
        os << "; R:";
        for (const auto& r : gen_.rays) {
            os << " (";
            for (size_t i = 0; i < r.size(); ++i) os << (i ? "," : "") << r[i].str();
            os << ")";
        }
        os << "}";
        return os.str();
    }

  private:
    Polyhedron(VRep gen, HRep hrep) : gen_(std::move(gen)), hrep_(std::move(hrep)) {
        RatMatrix dirs;
        const RatVector& v0 = gen_.vertices.front();
        for (size_t i = 1; i < gen_.vertices.size(); ++i) dirs.push_back(vsub(gen_.vertices[i], v0));
        for (const auto& r : gen_.rays) dirs.push_back(to_rat(r));
        IntMatrix int_dirs;
        for (const auto& d : dirs) int_dirs.push_back(clear_denominators(d));
        span_ = Lattice::from_spanning(int_dirs, hrep_.ambient, /*saturated=*/true);
        dim_ = span_.rank();
    }

    VRep gen_;
    HRep hrep_;
    size_t dim_ = 0;
    Lattice span_;
};

/// Normal vector n_{sigma/tau}: lattice vector in N_sigma generating
/// N_sigma/N_tau and pointing from tau into sigma. Deterministic: the
/// HNF-reduced canonical representative of the valid coset.
inline IntVector normal_vector(const Polyhedron& sigma, const Polyhedron& tau) {
    if (tau.dim() + 1 != sigma.dim() || !tau.is_face_of(sigma))
        fail(Err::NotAFacet, "tau is not a codimension-one face of sigma");
    const IntMatrix& bs = sigma.span_lattice().basis;
    const IntMatrix& bt = tau.span_lattice().basis;
    size_t k = bs.size();
    RatMatrix bs_q;
    for (const auto& row : bs) bs_q.push_back(to_rat(row));
    // coordinates of N_tau inside N_sigma
    IntMatrix coords;
    for (const auto& row : bt) {
        auto sol = solve_left(bs_q, to_rat(row));
        if (!sol) fail(Err::NotAFacet, "tau lattice outside sigma lattice");
        IntVector c(k);
        for (size_t i = 0; i < k; ++i) {
            if (rat_den((*sol)[i]) != 1) fail(Err::NotAFacet, "non-integral face lattice");
            c[i] = rat_num((*sol)[i]);
        }
        coords.push_back(std::move(c));
    }
    IntMatrix ker = integer_kernel(coords, k);
    if (ker.size() != 1) fail(Err::NotAFacet, "quotient is not rank one");
    IntVector y0 = unimodular_complement(ker[0]);
    IntVector n0(sigma.ambient(), Int(0));
    for (size_t i = 0; i < k; ++i)
        for (size_t c = 0; c < n0.size(); ++c) n0[c] += y0[i] * bs[i][c];
    // orient from tau into sigma using a facet form tight on tau
    for (const auto& f : sigma.hrep().ineqs) {
        bool tight = true;
        for (const auto& v : tau.vertices())
            if (f.eval(v) != 0) {
                tight = false;
                break;
            }
        if (tight)
            for (const auto& r : tau.rays())
                if (f.slope(r) != 0) {
                    tight = false;
                    break;
                }
        if (!tight) continue;
        Rat s = f.slope(n0);
        if (s == 0) continue;
        if (s < 0)
            for (auto& x : n0) x = -x;
        return tau.span_lattice().reduce(n0);
    }
    fail(Err::NotAFacet, "no supporting facet form found");
}

/// Length of a bounded rational edge in lattice units.
inline Rat lattice_length(const Polyhedron& edge) {
    if (edge.dim() != 1 || !edge.is_bounded() || edge.vertices().size() != 2)
        fail(Err::NotABoundedEdge, "lattice_length needs a bounded edge");
    RatVector d = vsub(edge.vertices()[1], edge.vertices()[0]);
    IntVector p = primitive(d);
    for (size_t i = 0; i < d.size(); ++i)
        if (p[i] != 0) {
            Rat l = d[i] / Rat(p[i]);
            return l < 0 ? -l : l;
        }
    fail(Err::NotABoundedEdge, "degenerate edge");
}

namespace detail {

/// Combinatorial triangulation of a bounded polytope; each cell is a list
/// of dim+1 affinely independent vertices.
inline void triangulate_polytope(const Polyhedron& p, std::vector<std::vector<RatVector>>& out,
                                 std::vector<RatVector> stem) {
    if (p.dim() == 0) {
        stem.push_back(p.vertices()[0]);
        out.push_back(std::move(stem));
        return;
    }
    const RatVector& apex = p.vertices().front();  // vertices are lex-sorted
    stem.push_back(apex);
    for (const auto& f : p.facets()) {
        if (f.contains(apex)) continue;
        triangulate_polytope(f, out, stem);
    }
}

}  // namespace detail

/// Volume of the convex hull of rational points, normalized so the unit
/// lattice cube has volume one. Returns zero when the hull is not
/// full-dimensional in its ambient space.
inline Rat lattice_volume(const std::vector<RatVector>& points) {
    if (points.empty()) return Rat(0);
    size_t d = points[0].size();
    Polyhedron hull = Polyhedron::from_generators(points, {}, d);
    if (hull.dim() < d) return Rat(0);
    std::vector<std::vector<RatVector>> cells;
    detail::triangulate_polytope(hull, cells, {});
    Rat vol = 0;
    Rat dfact = 1;
    for (size_t i = 2; i <= d; ++i) dfact *= Rat(i);
    for (const auto& cell : cells) {
        RatMatrix m;
        for (size_t i = 1; i < cell.size(); ++i) m.push_back(vsub(cell[i], cell[0]));
        Rat det = determinant(std::move(m));
        vol += (det < 0 ? -det : det);
    }
    return vol / dfact;
}

}  // namespace polyma
