#pragma once

#include <map>
#include <memory>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "polyma/polyhedron.hpp"

namespace polyma {

using FaceId = int;

struct Face {
    FaceId id = -1;
    std::vector<int> vertex_ids;
    std::vector<int> ray_ids;
    int dim = 0;
    Polyhedron poly;

    Face(FaceId i, Polyhedron p) : id(i), dim((int)p.dim()), poly(std::move(p)) {}
};

/// Finite rational polyhedral complex with an explicit, transitively
/// closed face lattice. Immutable after construction.
class Complex {
  public:
    Complex() = default;
    explicit Complex(size_t ambient) : ambient_(ambient) {}

    /// Builds the complex generated by the given polyhedra: closes under
    /// faces, deduplicates, and derives the incidence DAG. Face ids are
    /// deterministic (sorted by dimension, then constraint form).
    static Complex from_faces(size_t ambient, const std::vector<Polyhedron>& generators) {
        Complex c(ambient);
        std::map<std::string, Polyhedron> pool;
        for (const auto& g : generators)
            for (auto& f : g.all_faces()) pool.emplace(f.key(), std::move(f));
        std::vector<Polyhedron> sorted;
        sorted.reserve(pool.size());
        for (auto& [k, p] : pool) sorted.push_back(std::move(p));
        std::sort(sorted.begin(), sorted.end());
        std::map<RatVector, int, LexLess> point_ids;
        std::map<IntVector, int, LexLess> ray_ids;
        for (const auto& p : sorted) {
            for (const auto& v : p.vertices()) point_ids.emplace(v, 0);
            for (const auto& r : p.rays()) ray_ids.emplace(r, 0);
        }
        for (auto& [v, id] : point_ids) {
            id = (int)c.points_.size();
            c.points_.push_back(v);
        }
        for (auto& [r, id] : ray_ids) {
            id = (int)c.ray_pool_.size();
            c.ray_pool_.push_back(r);
        }
        for (auto& p : sorted) {
            Face f((FaceId)c.faces_.size(), std::move(p));
            for (const auto& v : f.poly.vertices()) f.vertex_ids.push_back(point_ids[v]);
            for (const auto& r : f.poly.rays()) f.ray_ids.push_back(ray_ids[r]);
            c.key_to_id_.emplace(f.poly.key(), f.id);
            c.faces_.push_back(std::move(f));
        }
        size_t n = c.faces_.size();
        c.subfaces_.assign(n, {});
        c.supfaces_.assign(n, {});
        for (size_t i = 0; i < n; ++i)
            for (size_t j = 0; j < n; ++j) {
                if (i == j || c.faces_[i].dim >= c.faces_[j].dim) continue;
                if (c.faces_[j].poly.contains_polyhedron(c.faces_[i].poly)) {
                    c.subfaces_[j].push_back((int)i);
                    c.supfaces_[i].push_back((int)j);
                }
            }
        return c;
    }

    size_t ambient_dim() const { return ambient_; }
    size_t n_faces() const { return faces_.size(); }
    const Face& face(FaceId id) const { return faces_[id]; }
    const std::vector<Face>& faces() const { return faces_; }
    const std::vector<RatVector>& points() const { return points_; }
    const std::vector<IntVector>& ray_pool() const { return ray_pool_; }

    int dim() const {
        int d = -1;
        for (const auto& f : faces_) d = std::max(d, f.dim);
        return d;
    }

    bool pure() const {
        int d = dim();
        for (FaceId id : maximal_faces())
            if (faces_[id].dim != d) return false;
        return true;
    }

    std::vector<FaceId> faces_of_dim(int k) const {
        std::vector<FaceId> out;
        for (const auto& f : faces_)
            if (f.dim == k) out.push_back(f.id);
        return out;
    }

    std::vector<FaceId> maximal_faces() const {
        std::vector<FaceId> out;
        for (const auto& f : faces_)
            if (supfaces_[f.id].empty()) out.push_back(f.id);
        return out;
    }

    /// Strict subfaces (transitively closed).
    const std::vector<int>& subfaces(FaceId id) const { return subfaces_[id]; }
    /// Strict superfaces (transitively closed).
    const std::vector<int>& supfaces(FaceId id) const { return supfaces_[id]; }

    bool is_subface(FaceId tau, FaceId sigma) const {
        if (tau == sigma) return true;
        for (int s : subfaces_[sigma])
            if (s == tau) return true;
        return false;
    }

    /// Superfaces of tau of dimension exactly k (including tau itself).
    std::vector<FaceId> supfaces_of_dim(FaceId tau, int k) const {
        std::vector<FaceId> out;
        if (faces_[tau].dim == k) out.push_back(tau);
        for (int s : supfaces_[tau])
            if (faces_[s].dim == k) out.push_back(s);
        return out;
    }

    std::optional<FaceId> find_face(const Polyhedron& p) const {
        auto it = key_to_id_.find(p.key());
        if (it == key_to_id_.end()) return std::nullopt;
        return it->second;
    }

    bool contains_point(const RatVector& x) const {
        for (const auto& f : faces_)
            if (f.poly.contains(x)) return true;
        return false;
    }

    /// The unique face whose relative interior contains x.
    FaceId locate(const RatVector& x) const {
        for (int k = 0; k <= dim(); ++k)
            for (const auto& f : faces_)
                if (f.dim == k && f.poly.contains_in_relint(x)) return f.id;
        fail(Err::PointOutsideSupport, "point lies outside the support");
    }

    /// Maximal faces connected via shared subfaces.
    bool connected() const {
        auto max = maximal_faces();
        if (max.empty()) return true;
        std::set<FaceId> seen{max[0]};
        std::vector<FaceId> todo{max[0]};
        while (!todo.empty()) {
            FaceId cur = todo.back();
            todo.pop_back();
            for (FaceId other : max) {
                if (seen.count(other)) continue;
                if (faces_[cur].poly.intersect(faces_[other].poly)) {
                    seen.insert(other);
                    todo.push_back(other);
                }
            }
        }
        return seen.size() == max.size();
    }

    bool same_as(const Complex& other) const {
        if (ambient_ != other.ambient_ || faces_.size() != other.faces_.size()) return false;
        for (size_t i = 0; i < faces_.size(); ++i)
            if (faces_[i].poly != other.faces_[i].poly) return false;
        return true;
    }

  private:
    size_t ambient_ = 0;
    std::vector<RatVector> points_;
    std::vector<IntVector> ray_pool_;
    std::vector<Face> faces_;
    std::vector<std::vector<int>> subfaces_;
    std::vector<std::vector<int>> supfaces_;
    std::map<std::string, int> key_to_id_;
};

using ComplexPtr = std::shared_ptr<const Complex>;

inline ComplexPtr make_complex(Complex&& c) { return std::make_shared<const Complex>(std::move(c)); }

inline bool same_complex(const ComplexPtr& a, const ComplexPtr& b) {
    return a == b || (a && b && a->same_as(*b));
}

// ---------------------------------------------------------------- validation

struct Violation {
    enum class Kind { MissingFace, BadIntersection } kind;
    FaceId face_a = -1;
    FaceId face_b = -1;
    std::string detail;
};

struct ValidationReport {
    bool valid = true;
    std::vector<Violation> violations;
};

/// Checks face closure and the proper-intersection condition.
inline ValidationReport validate_complex(const Complex& c) {
    ValidationReport rep;
    for (const auto& f : c.faces())
        for (const auto& facet : f.poly.facets())
            if (!c.find_face(facet)) {
                rep.valid = false;
                rep.violations.push_back({Violation::Kind::MissingFace, f.id, -1,
                                          "facet not listed: " + facet.to_string()});
            }
    for (size_t i = 0; i < c.n_faces(); ++i)
        for (size_t j = i + 1; j < c.n_faces(); ++j) {
            const auto& a = c.face((FaceId)i).poly;
            const auto& b = c.face((FaceId)j).poly;
            auto inter = a.intersect(b);
            if (!inter) continue;
            if (!c.find_face(*inter) || !inter->is_face_of(a) || !inter->is_face_of(b)) {
                rep.valid = false;
                rep.violations.push_back({Violation::Kind::BadIntersection, (FaceId)i, (FaceId)j,
                                          "intersection is not a common face: " +
                                              inter->to_string()});
            }
        }
    return rep;
}

// ---------------------------------------------------------------- coverage

/// Exact test that the union of the pieces contains sigma, by recursive
/// splitting along piece constraints.
inline bool covers(const Polyhedron& sigma, std::vector<Polyhedron> pieces) {
    // keep only pieces meeting sigma
    std::vector<Polyhedron> live;
    for (auto& p : pieces) {
        auto i = sigma.intersect(p);
        if (i) live.push_back(std::move(*i));  // clip to sigma
    }
    if (live.empty()) return false;
    const Polyhedron& p0 = live.front();
    if (p0.contains_polyhedron(sigma)) return true;
    // find a constraint of p0 violated somewhere on sigma
    for (const auto& f : p0.hrep().ineqs) {
        bool outside = false;  // sigma has points with f < 0
        for (const auto& v : sigma.vertices())
            if (f.eval(v) < 0) outside = true;
        for (const auto& r : sigma.rays())
            if (f.slope(r) < 0) outside = true;
        if (!outside) continue;
        bool inside = false;  // sigma has points with f > 0
        for (const auto& v : sigma.vertices())
            if (f.eval(v) > 0) inside = true;
        for (const auto& r : sigma.rays())
            if (f.slope(r) > 0) inside = true;
        if (!inside) {
            // p0 meets sigma in a thin slice only; it cannot help
            live.erase(live.begin());
            return covers(sigma, std::move(live));
        }
        HRep hplus = sigma.hrep();
        hplus.ineqs.push_back(f);
        HRep hminus = sigma.hrep();
        hminus.ineqs.push_back(AffineForm(vscale(Rat(-1), f.linear), -f.constant));
        auto splus = Polyhedron::from_hrep(hplus);
        auto sminus = Polyhedron::from_hrep(hminus);
        if (!splus || !sminus) continue;  // numeric edge: treat as non-splitting
        return covers(*splus, live) && covers(*sminus, std::move(live));
    }
    // every p0 inequality holds on sigma; equalities must cut
    for (const auto& f : p0.hrep().eqs) {
        bool low = false, high = false;
        for (const auto& v : sigma.vertices()) {
            Rat val = f.eval(v);
            low = low || val < 0;
            high = high || val > 0;
        }
        for (const auto& r : sigma.rays()) {
            Rat s = f.slope(r);
            low = low || s < 0;
            high = high || s > 0;
        }
        if (!low && !high) continue;
        if (low != high) {
            live.erase(live.begin());
            return covers(sigma, std::move(live));
        }
        HRep hplus = sigma.hrep();
        hplus.ineqs.push_back(f);
        HRep hminus = sigma.hrep();
        hminus.ineqs.push_back(AffineForm(vscale(Rat(-1), f.linear), -f.constant));
        auto splus = Polyhedron::from_hrep(hplus);
        auto sminus = Polyhedron::from_hrep(hminus);
        if (!splus || !sminus) continue;
        return covers(*splus, live) && covers(*sminus, std::move(live));
    }
    return false;  // p0 constraints all hold on sigma yet p0 lacks sigma: impossible
}

// ---------------------------------------------------------------- refinement

/// True iff supports are equal and every fine face lies inside a coarse face.
inline bool is_refinement(const Complex& fine, const Complex& coarse) {
    if (fine.ambient_dim() != coarse.ambient_dim()) return false;
    for (FaceId id : fine.maximal_faces()) {
        bool inside = false;
        for (const auto& big : coarse.faces())
            if (big.poly.contains_polyhedron(fine.face(id).poly)) {
                inside = true;
                break;
            }
        if (!inside) return false;
    }
    for (FaceId id : coarse.maximal_faces()) {
        std::vector<Polyhedron> pieces;
        for (FaceId fid : fine.maximal_faces()) pieces.push_back(fine.face(fid).poly);
        if (!covers(coarse.face(id).poly, std::move(pieces))) return false;
    }
    return true;
}

/// Overlay: all pairwise intersections, closed under faces.
inline Complex common_refinement(const Complex& a, const Complex& b) {
    if (a.ambient_dim() != b.ambient_dim())
        fail(Err::SupportsDiffer, "ambient dimensions differ");
    auto amax = a.maximal_faces();
    auto bmax = b.maximal_faces();
    // mutual support coverage
    for (FaceId id : amax) {
        std::vector<Polyhedron> pieces;
        for (FaceId o : bmax) pieces.push_back(b.face(o).poly);
        if (!covers(a.face(id).poly, std::move(pieces)))
            fail(Err::SupportsDiffer, "supports differ (a not covered by b)");
    }
    for (FaceId id : bmax) {
        std::vector<Polyhedron> pieces;
        for (FaceId o : amax) pieces.push_back(a.face(o).poly);
        if (!covers(b.face(id).poly, std::move(pieces)))
            fail(Err::SupportsDiffer, "supports differ (b not covered by a)");
    }
    std::vector<Polyhedron> cells;
    for (FaceId i : amax)
        for (FaceId j : bmax) {
            auto inter = a.face(i).poly.intersect(b.face(j).poly);
            if (inter) cells.push_back(std::move(*inter));
        }
    return Complex::from_faces(a.ambient_dim(), cells);
}

// ---------------------------------------------------------------- simpliciality

inline bool is_simplicial_face(const Polyhedron& p) {
    std::set<IntVector, LexLess> rayset(p.rays().begin(), p.rays().end());
    for (const auto& r : p.rays()) {
        IntVector neg = r;
        for (auto& x : neg) x = -x;
        if (rayset.count(neg)) return false;  // lineality
    }
    const auto& vs = p.vertices();
    RatMatrix dirs;
    for (size_t i = 1; i < vs.size(); ++i) dirs.push_back(vsub(vs[i], vs[0]));
    if (rat_rank(dirs) != vs.size() - 1) return false;
    RatMatrix rdirs;
    for (const auto& r : p.rays()) rdirs.push_back(to_rat(r));
    if (rat_rank(rdirs) != p.rays().size()) return false;
    return p.dim() == (vs.size() - 1) + p.rays().size();
}

inline bool is_simplicial(const Complex& c) {
    for (const auto& f : c.faces())
        if (!is_simplicial_face(f.poly)) return false;
    return true;
}

namespace detail {

/// Placing (beneath-beyond) triangulation of a pointed cone spanned by the
/// given generators, inserted in the given order. Cells are index sets of
/// size rank(gens); restricted to any face of the cone it agrees with the
/// placing triangulation of that face under the induced order.
inline std::vector<std::vector<int>> placing_triangulation(const std::vector<RatVector>& gens) {
    std::vector<std::vector<int>> cells;
    RatMatrix hull;
    std::vector<int> hull_idx;
    for (size_t gi = 0; gi < gens.size(); ++gi) {
        const RatVector& g = gens[gi];
        size_t old_rank = rat_rank(hull);
        RatMatrix with = hull;
        with.push_back(g);
        size_t new_rank = rat_rank(with);
        if (cells.empty()) {
            cells.push_back({(int)gi});
        } else if (new_rank > old_rank) {
            for (auto& c : cells) c.push_back((int)gi);
        } else {
            // boundary facets of the current subdivision
            std::map<std::vector<int>, std::vector<std::pair<int, int>>> facet_owner;
            for (size_t ci = 0; ci < cells.size(); ++ci)
                for (size_t drop = 0; drop < cells[ci].size(); ++drop) {
                    std::vector<int> f = cells[ci];
                    f.erase(f.begin() + drop);
                    facet_owner[f].push_back({(int)ci, cells[ci][drop]});
                }
            std::vector<std::vector<int>> fresh;
            for (const auto& [f, owners] : facet_owner) {
                if (owners.size() != 1) continue;  // interior wall
                // supporting covector: vanishes on f, positive on the dropped generator
                RatMatrix frows;
                for (int idx : f) frows.push_back(gens[idx]);
                IntMatrix null = nullspace(frows, g.size());
                const RatVector& dropped = gens[owners[0].second];
                RatVector h;
                for (const auto& cand : null) {
                    Rat d = dot(to_rat(cand), dropped);
                    if (d != 0) {
                        h = to_rat(cand);
                        if (d < 0) h = vscale(Rat(-1), h);
                        break;
                    }
                }
                if (h.empty()) continue;
                if (dot(h, g) < 0) {  // visible
                    std::vector<int> cell = f;
                    cell.push_back((int)gi);
                    std::sort(cell.begin(), cell.end());
                    fresh.push_back(std::move(cell));
                }
            }
            for (auto& c : fresh) cells.push_back(std::move(c));
        }
        hull.push_back(g);
        hull_idx.push_back((int)gi);
    }
    return cells;
}

/// Cuts every face of the complex with the hyperplane x_coord = level.
inline Complex cut_by_hyperplane(const Complex& c, size_t coord, const Rat& level) {
    std::vector<Polyhedron> cells;
    RatVector lin(c.ambient_dim(), Rat(0));
    lin[coord] = 1;
    AffineForm above(lin, -level);
    AffineForm below(vscale(Rat(-1), lin), level);
    for (FaceId id : c.maximal_faces()) {
        const Polyhedron& p = c.face(id).poly;
        for (const AffineForm& f : {above, below}) {
            HRep h = p.hrep();
            h.ineqs.push_back(f);
            auto piece = Polyhedron::from_hrep(h);
            if (piece) cells.push_back(std::move(*piece));
        }
    }
    return Complex::from_faces(c.ambient_dim(), cells);
}

inline std::optional<std::pair<FaceId, IntVector>> find_lineality(const Complex& c) {
    for (const auto& f : c.faces()) {
        std::set<IntVector, LexLess> rayset(f.poly.rays().begin(), f.poly.rays().end());
        for (const auto& r : f.poly.rays()) {
            IntVector neg = r;
            for (auto& x : neg) x = -x;
            if (rayset.count(neg)) return std::make_pair(f.id, r);
        }
    }
    return std::nullopt;
}

}  // namespace detail

/// Simplicial refinement by a placing triangulation with a global generator
/// order (vertices before rays, each lexicographic), so triangulations of
/// shared faces agree. Faces with lineality are first split by coordinate
/// hyperplanes.
inline Complex simplicial_refinement(const Complex& c) {
    Complex work = c;
    while (auto lin = detail::find_lineality(work)) {
        const auto& [fid, dir] = *lin;
        size_t coord = 0;
        while (dir[coord] == 0) ++coord;
        Rat level = work.face(fid).poly.base_point()[coord];
        work = detail::cut_by_hyperplane(work, coord, level);
    }
    // homogenized generators, globally ordered
    std::vector<Polyhedron> cells;
    for (FaceId id : work.maximal_faces()) {
        const Polyhedron& p = work.face(id).poly;
        struct Gen {
            bool is_ray;
            RatVector homog;
        };
        std::vector<Gen> gens;
        for (const auto& v : p.vertices()) {
            RatVector h = v;
            h.push_back(Rat(1));
            gens.push_back({false, std::move(h)});
        }
        for (const auto& r : p.rays()) {
            RatVector h = to_rat(r);
            h.push_back(Rat(0));
            gens.push_back({true, std::move(h)});
        }
        std::sort(gens.begin(), gens.end(), [](const Gen& a, const Gen& b) {
            if (a.is_ray != b.is_ray) return !a.is_ray;
            return lex_cmp(a.homog, b.homog) < 0;
        });
        std::vector<RatVector> hvecs;
        for (const auto& g : gens) hvecs.push_back(g.homog);
        for (const auto& cell : detail::placing_triangulation(hvecs)) {
            std::vector<RatVector> vs;
            std::vector<IntVector> rs;
            for (int idx : cell) {
                if (gens[idx].is_ray) {
                    IntVector r(p.ambient());
                    for (size_t i = 0; i < p.ambient(); ++i) r[i] = rat_num(gens[idx].homog[i]);
                    rs.push_back(primitive(r));
                } else {
                    vs.push_back(RatVector(gens[idx].homog.begin(), gens[idx].homog.end() - 1));
                }
            }
            cells.push_back(Polyhedron::from_generators(vs, rs, p.ambient()));
        }
    }
    return Complex::from_faces(c.ambient_dim(), cells);
}

// ---------------------------------------------------------------- skeleton, retraction

/// Subcomplex of bounded faces.
inline Complex skeleton(const Complex& c) {
    std::vector<Polyhedron> bounded;
    for (const auto& f : c.faces())
        if (f.poly.is_bounded()) bounded.push_back(f.poly);
    return Complex::from_faces(c.ambient_dim(), bounded);
}

/// Canonical retraction of a simplicial complex onto its skeleton:
/// drops the ray part of the unique simplicial coordinates.
inline RatVector retract(const Complex& c, const RatVector& x) {
    if (!is_simplicial(c)) fail(Err::NotSimplicial, "retract needs a simplicial complex");
    FaceId id = c.locate(x);
    const Polyhedron& p = c.face(id).poly;
    const auto& vs = p.vertices();
    const auto& rs = p.rays();
    // x = sum theta_i v_i + sum lambda_j r_j, sum theta = 1
    RatMatrix rows;
    for (const auto& v : vs) {
        RatVector row = v;
        row.push_back(Rat(1));
        rows.push_back(std::move(row));
    }
    for (const auto& r : rs) {
        RatVector row = to_rat(r);
        row.push_back(Rat(0));
        rows.push_back(std::move(row));
    }
    RatVector rhs = x;
    rhs.push_back(Rat(1));
    auto sol = solve_left(rows, rhs);
    if (!sol) fail(Err::PointOutsideSupport, "no simplicial coordinates");
    RatVector out(c.ambient_dim(), Rat(0));
    for (size_t i = 0; i < vs.size(); ++i) out = vadd(out, vscale((*sol)[i], vs[i]));
    return out;
}

// ---------------------------------------------------------------- recession fan

struct RecessionFan {
    std::vector<Polyhedron> cones;
    bool is_fan = true;
};

inline RecessionFan recession_fan(const Complex& c) {
    RecessionFan out;
    std::set<std::string> seen;
    for (const auto& f : c.faces()) {
        Polyhedron rec = f.poly.recession();
        if (seen.insert(rec.key()).second) out.cones.push_back(std::move(rec));
    }
    for (const auto& cone : out.cones)
        for (const auto& facet : cone.facets())
            if (!seen.count(facet.key())) out.is_fan = false;
    for (size_t i = 0; i < out.cones.size() && out.is_fan; ++i)
        for (size_t j = i + 1; j < out.cones.size() && out.is_fan; ++j) {
            auto inter = out.cones[i].intersect(out.cones[j]);
            if (!inter) continue;  // cannot happen: cones share the origin
            if (!inter->is_face_of(out.cones[i]) || !inter->is_face_of(out.cones[j]))
                out.is_fan = false;
        }
    return out;
}

// ---------------------------------------------------------------- balanced spaces, stars

/// Pure-dimensional complex with a strictly positive top weight. The
/// balancing condition is verified by cycles::check_balanced (see
/// make_balanced_space in cycles.hpp).
struct BalancedSpace {
    ComplexPtr complex;
    int d = 0;
    std::map<FaceId, Rat> weights;  // on faces of dimension d

    Rat weight(FaceId id) const {
        auto it = weights.find(id);
        return it == weights.end() ? Rat(0) : it->second;
    }
};

/// Star of a complex at a point: the fan of local cones C_{sigma/tau},
/// tau the carrier of x. Cones are based at the origin.
struct StarFan {
    RatVector base_point;
    FaceId base_face = -1;              // in the parent complex
    ComplexPtr fan;                     // the local cones as a complex
    std::map<FaceId, FaceId> origin;    // fan face id -> parent face id
    std::map<FaceId, Rat> weights;      // inherited top weights (may be empty)
};

inline Polyhedron local_cone(const Complex& c, FaceId sigma, FaceId tau, const RatVector& x) {
    const Polyhedron& s = c.face(sigma).poly;
    const Polyhedron& t = c.face(tau).poly;
    std::vector<IntVector> rays;
    for (const auto& v : s.vertices()) {
        RatVector d = vsub(v, x);
        if (!is_zero(d)) rays.push_back(primitive(d));
    }
    for (const auto& r : s.rays()) rays.push_back(r);
    for (const auto& v : t.vertices()) {
        RatVector d = vsub(x, v);
        if (!is_zero(d)) rays.push_back(primitive(d));
    }
    for (const auto& r : t.rays()) {
        IntVector neg = r;
        for (auto& z : neg) z = -z;
        rays.push_back(neg);
    }
    std::vector<RatVector> vs{RatVector(c.ambient_dim(), Rat(0))};
    return Polyhedron::from_generators(vs, rays, c.ambient_dim());
}

inline StarFan star(const Complex& c, const RatVector& x) {
    StarFan out;
    out.base_point = x;
    FaceId tau = c.locate(x);
    out.base_face = tau;
    std::vector<FaceId> ups{tau};
    for (int s : c.supfaces(tau)) ups.push_back(s);
    std::vector<Polyhedron> cones;
    std::map<std::string, FaceId> source;
    for (FaceId sigma : ups) {
        Polyhedron cone = local_cone(c, sigma, tau, x);
        source[cone.key()] = sigma;
        cones.push_back(std::move(cone));
    }
    Complex fan = Complex::from_faces(c.ambient_dim(), cones);
    for (const auto& f : fan.faces()) {
        auto it = source.find(f.poly.key());
        if (it != source.end()) out.origin[f.id] = it->second;
    }
    out.fan = make_complex(std::move(fan));
    return out;
}

inline StarFan star(const BalancedSpace& s, const RatVector& x) {
    StarFan out = star(*s.complex, x);
    for (const auto& [fan_id, src] : out.origin) {
        if (out.fan->face(fan_id).dim == s.d) out.weights[fan_id] = s.weight(src);
    }
    return out;
}

inline BalancedSpace star_space(const BalancedSpace& s, const RatVector& x) {
    StarFan sf = star(s, x);
    BalancedSpace out;
    out.complex = sf.fan;
    out.d = s.d;
    out.weights = sf.weights;
    return out;
}

}  // namespace polyma
