#pragma once

#include <cstdint>

#include "polyma/examples.hpp"

namespace polyma {

/// Deterministic generator for randomized suites (xorshift64*).
struct Rng {
    uint64_t state;
    explicit Rng(uint64_t seed) : state(seed ? seed : 0x9e3779b97f4a7c15ull) {}

    uint64_t next() {
        state ^= state >> 12;
        state ^= state << 25;
        state ^= state >> 27;
        return state * 0x2545f4914f6cdd1dull;
    }
    int uniform(int n) { return (int)(next() % (uint64_t)n); }          // [0, n)
    int range(int lo, int hi) { return lo + uniform(hi - lo + 1); }     // [lo, hi]
    Rat rat(int lo, int hi, int max_den = 3) {
        int den = range(1, max_den);
        return Rat(range(lo * den, hi * den), den);
    }
};

// ---------------------------------------------------------------- transforms

/// Inverse of a unimodular integer matrix (rows convention).
inline IntMatrix unimodular_inverse(const IntMatrix& a) {
    size_t n = a.size();
    RatMatrix aug(n, RatVector(2 * n, Rat(0)));
    for (size_t i = 0; i < n; ++i) {
        for (size_t j = 0; j < n; ++j) aug[i][j] = Rat(a[i][j]);
        aug[i][n + i] = 1;
    }
    rref(aug);
    IntMatrix inv(n, IntVector(n));
    for (size_t i = 0; i < n; ++i)
        for (size_t j = 0; j < n; ++j) {
            if (rat_den(aug[i][n + j]) != 1) fail(Err::BadParameter, "matrix is not unimodular");
            inv[i][j] = rat_num(aug[i][n + j]);
        }
    return inv;
}

inline IntMatrix random_unimodular(Rng& rng, size_t n, int steps = 4) {
    IntMatrix a(n, IntVector(n, Int(0)));
    for (size_t i = 0; i < n; ++i) a[i][i] = 1;
    for (int s = 0; s < steps; ++s) {
        size_t i = (size_t)rng.uniform((int)n);
        size_t j = (size_t)rng.uniform((int)n);
        if (i == j) {
            for (auto& x : a[i]) x = -x;  // sign flip keeps |det| = 1
            continue;
        }
        Int k(rng.range(-2, 2));
        for (size_t c = 0; c < n; ++c) a[i][c] += k * a[j][c];
    }
    return a;
}

/// Image complex under x -> x A + t with A unimodular.
inline Complex transform_complex(const Complex& c, const IntMatrix& a, const RatVector& t) {
    auto map_pt = [&](const RatVector& x) {
        RatVector y = t;
        for (size_t i = 0; i < x.size(); ++i)
            for (size_t j = 0; j < y.size(); ++j) y[j] += x[i] * Rat(a[i][j]);
        return y;
    };
    std::vector<Polyhedron> cells;
    for (FaceId id : c.maximal_faces()) {
        const Polyhedron& p = c.face(id).poly;
        std::vector<RatVector> vs;
        for (const auto& v : p.vertices()) vs.push_back(map_pt(v));
        std::vector<IntVector> rs;
        for (const auto& r : p.rays()) {
            RatVector y(r.size(), Rat(0));
            for (size_t i = 0; i < r.size(); ++i)
                for (size_t j = 0; j < y.size(); ++j) y[j] += Rat(r[i]) * Rat(a[i][j]);
            rs.push_back(primitive(y));
        }
        cells.push_back(Polyhedron::from_generators(vs, rs, c.ambient_dim()));
    }
    return Complex::from_faces(c.ambient_dim(), cells);
}

inline BalancedSpace transform_space(const BalancedSpace& s, const IntMatrix& a,
                                     const RatVector& t) {
    ComplexPtr image = make_complex(transform_complex(*s.complex, a, t));
    std::map<FaceId, Rat> w;
    auto map_pt = [&](const RatVector& x) {
        RatVector y = t;
        for (size_t i = 0; i < x.size(); ++i)
            for (size_t j = 0; j < y.size(); ++j) y[j] += x[i] * Rat(a[i][j]);
        return y;
    };
    for (FaceId id : s.complex->faces_of_dim(s.d)) {
        const Polyhedron& p = s.complex->face(id).poly;
        std::vector<RatVector> vs;
        for (const auto& v : p.vertices()) vs.push_back(map_pt(v));
        std::vector<IntVector> rs;
        for (const auto& r : p.rays()) {
            RatVector y(r.size(), Rat(0));
            for (size_t i = 0; i < r.size(); ++i)
                for (size_t j = 0; j < y.size(); ++j) y[j] += Rat(r[i]) * Rat(a[i][j]);
            rs.push_back(primitive(y));
        }
        Polyhedron q = Polyhedron::from_generators(vs, rs, s.complex->ambient_dim());
        w[*image->find_face(q)] = s.weight(id);
    }
    return BalancedSpace{image, s.d, std::move(w)};
}

/// Pullback of a function along the inverse transform: the image function
/// g(y) = f((y - t) A^{-1}).
inline PAFunction transform_pa(const PAFunction& f, ComplexPtr image_carrier, const IntMatrix& a,
                               const RatVector& t) {
    IntMatrix inv = unimodular_inverse(a);
    auto map_back = [&](const RatVector& y) {
        RatVector x(y.size(), Rat(0));
        for (size_t i = 0; i < y.size(); ++i)
            for (size_t j = 0; j < x.size(); ++j) x[j] += (y[i] - t[i]) * Rat(inv[i][j]);
        return x;
    };
    PAFunction out;
    out.carrier = image_carrier;
    for (const auto& face : image_carrier->faces()) {
        // new linear part: lin'_j = sum_i inv[j][i] lin_i ; constant via a base point
        const RatVector& y0 = face.poly.base_point();
        RatVector x0 = map_back(y0);
        const AffineForm& g = f.form(f.carrier->locate(x0));
        RatVector lin(y0.size(), Rat(0));
        for (size_t j = 0; j < lin.size(); ++j)
            for (size_t i = 0; i < lin.size(); ++i) lin[j] += Rat(inv[j][i]) * g.linear[i];
        Rat cst = g.eval(x0) - dot(lin, y0);
        out.per_face[face.id] = AffineForm(std::move(lin), cst);
    }
    return out;
}

// ---------------------------------------------------------------- random spaces

/// Random connected balanced graph in the plane: a sheared, translated,
/// optionally subdivided tropical line, axes cross, or hexagon.
inline BalancedSpace random_space_1d(Rng& rng, bool smooth_only = false) {
    int pick = rng.uniform(smooth_only ? 2 : 3);
    Workspace w = pick == 0   ? example_tropical_line()
                  : pick == 1 ? example_hexagon(Rat(rng.range(1, 3), 2))
                              : example_axes_cross(Rat(rng.range(1, 2)));
    BalancedSpace s = w.space;
    // subdivide some unbounded edge by cutting with a hyperplane
    if (rng.uniform(2)) {
        size_t coord = (size_t)rng.uniform(2);
        Rat level(rng.range(2, 4));
        ComplexPtr cut =
            make_complex(detail::cut_by_hyperplane(*s.complex, coord, level));
        WeightK top = fundamental_cycle(s);
        WeightK fine = detail::pullback_unchecked(top, *s.complex, *cut);
        std::map<FaceId, Rat> fw;
        for (const auto& [id, v] : fine.values) fw[id] = v;
        s = BalancedSpace{cut, 1, std::move(fw)};
    }
    IntMatrix a = random_unimodular(rng, 2);
    RatVector t{rng.rat(-2, 2), rng.rat(-2, 2)};
    return transform_space(s, a, t);
}

/// Random complete two-dimensional fan (unit weights), sheared and
/// translated; optionally cut by a hyperplane to create bounded faces.
inline BalancedSpace random_space_2d(Rng& rng) {
    RatVector o{Rat(0), Rat(0)};
    auto cone2 = [&](int ax, int ay, int bx, int by) {
        return Polyhedron::from_generators({o}, {{Int(ax), Int(ay)}, {Int(bx), Int(by)}}, 2);
    };
    std::vector<Polyhedron> cells;
    if (rng.uniform(2)) {
        cells = {cone2(1, 0, 0, 1), cone2(0, 1, -1, -1), cone2(-1, -1, 1, 0)};
    } else {
        cells = {cone2(1, 0, 0, 1), cone2(0, 1, -1, 0), cone2(-1, 0, 0, -1), cone2(0, -1, 1, 0)};
    }
    ComplexPtr c = make_complex(Complex::from_faces(2, cells));
    std::map<FaceId, Rat> w;
    for (FaceId id : c->faces_of_dim(2)) w[id] = 1;
    BalancedSpace s{c, 2, std::move(w)};
    if (rng.uniform(2)) {
        size_t coord = (size_t)rng.uniform(2);
        ComplexPtr cut = make_complex(
            detail::cut_by_hyperplane(*s.complex, coord, Rat(rng.range(-1, 1))));
        WeightK fine = detail::pullback_unchecked(fundamental_cycle(s), *s.complex, *cut);
        std::map<FaceId, Rat> fw;
        for (const auto& [id, v] : fine.values) fw[id] = v;
        s = BalancedSpace{cut, 2, std::move(fw)};
    }
    IntMatrix a = random_unimodular(rng, 2);
    RatVector t{rng.rat(-1, 1), rng.rat(-1, 1)};
    return transform_space(s, a, t);
}

// ---------------------------------------------------------------- random functions

inline AffineForm random_form(Rng& rng, size_t dim, int slope_range = 2) {
    RatVector lin(dim);
    for (auto& x : lin) x = Rat(rng.range(-slope_range, slope_range));
    return AffineForm(std::move(lin), rng.rat(-2, 2));
}

/// Random polyhedrally convex PA function: a max of integral affine forms
/// restricted to the space.
inline PAFunction random_papc(Rng& rng, const BalancedSpace& s, int n_forms = 3) {
    std::vector<AffineForm> forms;
    for (int i = 0; i < n_forms; ++i) forms.push_back(random_form(rng, s.complex->ambient_dim()));
    return pa_from_max(s, forms);
}

/// Random PA function (difference of two maxes; generally not convex).
inline PAFunction random_pa(Rng& rng, const BalancedSpace& s) {
    PAFunction f = random_papc(rng, s, rng.range(2, 3));
    PAFunction g = random_papc(rng, s, rng.range(2, 3));
    ComplexPtr common = make_complex(common_refinement(*f.carrier, *g.carrier));
    return pa_combine(Rat(1), detail::rebase_unchecked(f, common), Rat(-1),
                      detail::rebase_unchecked(g, common));
}

/// Random bounded PA function: a random PA clamped between two constants.
inline PAFunction random_bounded_pa(Rng& rng, const BalancedSpace& s) {
    PAFunction f = random_pa(rng, s);
    Rat lo = rng.rat(-2, -1), hi = rng.rat(1, 2);
    PAFunction clamped = pa_max(f, pa_constant(f.carrier, lo));
    return pa_min(clamped, pa_constant(clamped.carrier, hi));
}

/// Random k-cycle: iterated intersection products of random PA functions
/// with the fundamental cycle (balanced by construction).
inline std::pair<CycleK, ComplexPtr> random_cycle(Rng& rng, const BalancedSpace& s, int k) {
    std::vector<PAFunction> fs;
    for (int i = k; i < s.d; ++i) fs.push_back(random_pa(rng, s));
    auto a = detail::align(s, fs);
    WeightK c = a.top;
    for (size_t i = fs.size(); i-- > 0;) c = intersect(a.funcs[i], c, *a.complex);
    return {std::move(c), a.complex};
}

/// Random admissible right-hand side for the dimension-one solver:
/// nonnegative atoms at vertices and densities on bounded edges, scaled to
/// total mass deg(gamma).
inline Measure1D random_measure_1d(Rng& rng, const BalancedSpace& s, const Rat& target_mass) {
    const Complex& c = *s.complex;
    Measure1D mu;
    Rat total = 0;
    for (FaceId vid : c.faces_of_dim(0)) {
        Rat m(rng.range(0, 3));
        if (m != 0) {
            mu.atoms.add(c.face(vid).poly.vertices()[0], m);
            total += m;
        }
    }
    for (FaceId eid : c.faces_of_dim(1)) {
        if (!c.face(eid).poly.is_bounded()) continue;
        Rat d(rng.range(0, 2));
        if (d != 0) {
            mu.densities[eid] = d;
            total += d * lattice_length(c.face(eid).poly);
        }
    }
    if (total == 0) {
        FaceId vid = c.faces_of_dim(0)[0];
        mu.atoms.add(c.face(vid).poly.vertices()[0], target_mass);
        return mu;
    }
    Rat scale = target_mass / total;
    AtomicMeasure scaled;
    for (const auto& [x, m] : mu.atoms.atoms) scaled.add(x, m * scale);
    mu.atoms = std::move(scaled);
    for (auto& [id, d] : mu.densities) d *= scale;
    return mu;
}

}  // namespace polyma
