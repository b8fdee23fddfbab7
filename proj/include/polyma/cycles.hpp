#pragma once

#include <map>

#include "polyma/complex.hpp"

namespace polyma {

/// Sparse k-weight on a named complex; absent faces carry weight zero.
/// A weight satisfying the balancing condition at every (k-1)-face is a
/// k-cycle.
struct WeightK {
    int k = 0;
    std::map<FaceId, Rat> values;

    Rat value(FaceId id) const {
        auto it = values.find(id);
        return it == values.end() ? Rat(0) : it->second;
    }

    friend bool operator==(const WeightK& a, const WeightK& b) {
        auto nonzero = [](const WeightK& w) {
            std::map<FaceId, Rat> m;
            for (const auto& [id, v] : w.values)
                if (v != 0) m.emplace(id, v);
            return m;
        };
        return a.k == b.k && nonzero(a) == nonzero(b);
    }
};

using CycleK = WeightK;

struct BalanceDefect {
    FaceId tau = -1;
    IntVector defect;  // canonical class representative mod N_tau, nonzero
};

struct BalanceReport {
    bool balanced = true;
    std::vector<BalanceDefect> defects;
};

/// Balancing test: at every (k-1)-face tau the weighted sum of normal
/// vectors of adjacent k-faces must lie in the span of N_tau. The
/// membership does not depend on the representatives chosen.
inline BalanceReport check_balanced(const Complex& c, const WeightK& w) {
    for (const auto& [id, v] : w.values)
        if (c.face(id).dim != w.k)
            fail(Err::DimensionMismatch, "weight carried by a face of the wrong dimension");
    BalanceReport rep;
    if (w.k == 0) return rep;
    for (FaceId tau_id : c.faces_of_dim(w.k - 1)) {
        const Polyhedron& tau = c.face(tau_id).poly;
        RatVector sum(c.ambient_dim(), Rat(0));
        bool any = false;
        for (FaceId sig_id : c.supfaces_of_dim(tau_id, w.k)) {
            Rat cv = w.value(sig_id);
            if (cv == 0) continue;
            IntVector n = normal_vector(c.face(sig_id).poly, tau);
            sum = vadd(sum, vscale(cv, to_rat(n)));
            any = true;
        }
        if (!any) continue;
        if (!tau.span_lattice().span_contains(sum)) {
            rep.balanced = false;
            IntVector defect = tau.span_lattice().reduce(primitive(sum));
            rep.defects.push_back({tau_id, std::move(defect)});
        }
    }
    return rep;
}

/// Pullback of a weight along a refinement: a fine k-face inherits the
/// weight of the k-face of the coarse complex containing it, else zero.
inline WeightK pullback(const WeightK& w, const Complex& coarse, const Complex& fine) {
    if (!is_refinement(fine, coarse)) fail(Err::NotARefinement, "pullback needs a refinement");
    WeightK out;
    out.k = w.k;
    for (FaceId fid : fine.faces_of_dim(w.k)) {
        for (FaceId cid : coarse.faces_of_dim(w.k)) {
            if (coarse.face(cid).poly.contains_polyhedron(fine.face(fid).poly)) {
                Rat v = w.value(cid);
                if (v != 0) out.values[fid] = v;
                break;
            }
        }
    }
    return out;
}

/// Degree of a 0-cycle: the sum of its vertex weights.
inline Rat degree0(const WeightK& c) {
    if (c.k != 0) fail(Err::DimensionMismatch, "degree0 needs a 0-cycle");
    Rat s = 0;
    for (const auto& [id, v] : c.values) s += v;
    return s;
}

/// Localization of a weight at x: the cone C_{sigma/tau} of the star
/// inherits the weight of sigma.
inline std::pair<StarFan, WeightK> localize_weight(const BalancedSpace& s, const WeightK& w,
                                                   const RatVector& x) {
    StarFan sf = star(*s.complex, x);
    WeightK out;
    out.k = w.k;
    for (const auto& [fan_id, src] : sf.origin) {
        if (sf.fan->face(fan_id).dim != w.k) continue;
        Rat v = w.value(src);
        if (v != 0) out.values[fan_id] = v;
    }
    return {std::move(sf), std::move(out)};
}

/// Checked constructor for balanced spaces: pure d-dimensional complex,
/// strictly positive top weight, balanced at every (d-1)-face.
inline BalancedSpace make_balanced_space(ComplexPtr complex, std::map<FaceId, Rat> weights) {
    if (!complex->pure()) fail(Err::DimensionMismatch, "complex is not pure dimensional");
    BalancedSpace s;
    s.complex = std::move(complex);
    s.d = s.complex->dim();
    s.weights = std::move(weights);
    WeightK top;
    top.k = s.d;
    for (FaceId id : s.complex->faces_of_dim(s.d)) {
        auto it = s.weights.find(id);
        if (it == s.weights.end() || it->second <= 0)
            fail(Err::DimensionMismatch, "top weight must be strictly positive");
        top.values[id] = it->second;
    }
    auto rep = check_balanced(*s.complex, top);
    if (!rep.balanced) fail(Err::DimensionMismatch, "top weight violates the balancing condition");
    return s;
}

/// The fundamental cycle [X] as a WeightK.
inline WeightK fundamental_cycle(const BalancedSpace& s) {
    WeightK w;
    w.k = s.d;
    for (FaceId id : s.complex->faces_of_dim(s.d)) w.values[id] = s.weight(id);
    return w;
}

}  // namespace polyma
