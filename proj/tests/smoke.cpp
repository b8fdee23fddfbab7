#include "polyma/cycles.hpp"
#include <iostream>

using namespace polyma;

int main() {
    // hnf examples from first principles
    IntMatrix h = hnf(IntMatrix{{1, 1}, {1, -1}});
    std::cout << "hnf rank " << h.size() << ": " << h[0][0] << h[0][1] << " " << h[1][0] << h[1][1]
              << "\n";
    auto divisors = snf(IntMatrix{{1, 0}, {-1, 0}, {0, 1}, {0, -1}});
    std::cout << "snf:";
    for (auto& d : divisors) std::cout << " " << d;
    std::cout << "\n";
    std::cout << "primitive(1/2,1/3): ";
    for (auto& x : primitive(RatVector{Rat(1, 2), Rat(1, 3)})) std::cout << x << " ";
    std::cout << "\n";
    // lp: max x st x<=3, x>=0
    auto r = lp_solve(AffineForm({Rat(1)}, Rat(0)),
                      {{AffineForm({Rat(1)}, Rat(-3)), Rel::Le}, {AffineForm({Rat(1)}, Rat(0)), Rel::Ge}},
                      LpSense::Max);
    std::cout << "lp: " << (int)r.status << " val " << rat_str(r.value) << "\n";
    // square
    Polyhedron sq = Polyhedron::from_generators(
        {{Rat(0), Rat(0)}, {Rat(1), Rat(0)}, {Rat(0), Rat(1)}, {Rat(1), Rat(1)}}, {}, 2);
    std::cout << "square: dim " << sq.dim() << " ineqs " << sq.hrep().ineqs.size() << "\n";
    // cone((1,0),(1,1))
    Polyhedron cone = Polyhedron::from_generators({{Rat(0), Rat(0)}}, {{Int(1), Int(0)}, {Int(1), Int(1)}}, 2);
    std::cout << "cone: " << cone.to_string() << " ineqs " << cone.hrep().ineqs.size() << "\n";
    for (auto& f : cone.hrep().ineqs)
        std::cout << "  ineq " << rat_str(f.linear[0]) << "," << rat_str(f.linear[1]) << " + "
                  << rat_str(f.constant) << "\n";
    // h_to_v of {x=0} in R^2
    HRep hh;
    hh.ambient = 2;
    hh.eqs.push_back(AffineForm({Rat(1), Rat(0)}, Rat(0)));
    auto vr = h_to_v(hh);
    std::cout << "line: verts " << vr.vertices.size() << " rays " << vr.rays.size() << "\n";
    // tropical line complex
    RatVector o{Rat(0), Rat(0)};
    auto ray = [&](int a, int b) {
        return Polyhedron::from_generators({o}, {{Int(a), Int(b)}}, 2);
    };
    Complex trop = Complex::from_faces(2, {ray(1, 0), ray(0, 1), ray(-1, -1)});
    std::cout << "tropical line faces: " << trop.n_faces() << " valid "
              << validate_complex(trop).valid << "\n";
    WeightK w;
    w.k = 1;
    for (FaceId id : trop.faces_of_dim(1)) w.values[id] = 1;
    std::cout << "balanced: " << check_balanced(trop, w).balanced << "\n";
    w.values.begin()->second = 2;
    std::cout << "unbalanced: " << !check_balanced(trop, w).balanced << "\n";
    // volume
    std::cout << "vol simplex: "
              << rat_str(lattice_volume({{Rat(0), Rat(0)}, {Rat(1), Rat(0)}, {Rat(0), Rat(1)}}))
              << " vol 2-0-1: "
              << rat_str(lattice_volume({{Rat(0), Rat(0)}, {Rat(2), Rat(0)}, {Rat(0), Rat(1)}}))
              << "\n";
    // normal vector: sigma=cone((1,0),(1,1)) refined piece, tau = ray (1,1)
    Polyhedron tau = ray(1, 1);
    IntVector nv = normal_vector(cone, tau);
    std::cout << "normal: " << nv[0] << "," << nv[1] << "\n";
    // simplicial refinement of the square
    Complex sqc = Complex::from_faces(2, {sq});
    Complex tri = simplicial_refinement(sqc);
    std::cout << "square tri: " << tri.faces_of_dim(2).size() << " triangles, simplicial "
              << is_simplicial(tri) << ", refines " << is_refinement(tri, sqc) << "\n";
    return 0;
}
