#pragma once

#include <algorithm>
#include <optional>
#include <vector>

#include "polyma/error.hpp"
#include "polyma/rational.hpp"

namespace polyma {

using RatVector = std::vector<Rat>;
using IntVector = std::vector<Int>;
using RatMatrix = std::vector<RatVector>;
using IntMatrix = std::vector<IntVector>;

// ---------------------------------------------------------------- vectors

inline RatVector to_rat(const IntVector& v) {
    RatVector r(v.size());
    for (size_t i = 0; i < v.size(); ++i) r[i] = Rat(v[i]);
    return r;
}

inline bool is_zero(const RatVector& v) {
    return std::all_of(v.begin(), v.end(), [](const Rat& x) { return x == 0; });
}
inline bool is_zero(const IntVector& v) {
    return std::all_of(v.begin(), v.end(), [](const Int& x) { return x == 0; });
}

inline RatVector vadd(const RatVector& a, const RatVector& b) {
    RatVector r(a.size());
    for (size_t i = 0; i < a.size(); ++i) r[i] = a[i] + b[i];
    return r;
}
inline RatVector vsub(const RatVector& a, const RatVector& b) {
    RatVector r(a.size());
    for (size_t i = 0; i < a.size(); ++i) r[i] = a[i] - b[i];
    return r;
}
inline RatVector vscale(const Rat& c, const RatVector& a) {
    RatVector r(a.size());
    for (size_t i = 0; i < a.size(); ++i) r[i] = c * a[i];
    return r;
}
inline Rat dot(const RatVector& a, const RatVector& b) {
    Rat s = 0;
    for (size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
    return s;
}
inline Rat dot(const RatVector& a, const IntVector& b) {
    Rat s = 0;
    for (size_t i = 0; i < a.size(); ++i) s += a[i] * Rat(b[i]);
    return s;
}
inline Int dot(const IntVector& a, const IntVector& b) {
    Int s = 0;
    for (size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
    return s;
}

inline int lex_cmp(const RatVector& a, const RatVector& b) {
    for (size_t i = 0; i < a.size() && i < b.size(); ++i) {
        if (a[i] < b[i]) return -1;
        if (a[i] > b[i]) return 1;
    }
    if (a.size() != b.size()) return a.size() < b.size() ? -1 : 1;
    return 0;
}
inline int lex_cmp(const IntVector& a, const IntVector& b) {
    for (size_t i = 0; i < a.size() && i < b.size(); ++i) {
        if (a[i] < b[i]) return -1;
        if (a[i] > b[i]) return 1;
    }
    if (a.size() != b.size()) return a.size() < b.size() ? -1 : 1;
    return 0;
}

struct LexLess {
    bool operator()(const RatVector& a, const RatVector& b) const { return lex_cmp(a, b) < 0; }
    bool operator()(const IntVector& a, const IntVector& b) const { return lex_cmp(a, b) < 0; }
};

/// Unique positive multiple of a nonzero rational vector with coprime
/// integer coordinates.
inline IntVector primitive(const RatVector& v) {
    if (is_zero(v)) fail(Err::ZeroVector, "primitive of the zero vector");
    Int l = 1;
    for (const Rat& x : v) l = int_lcm(l, rat_den(x));
    IntVector w(v.size());
    Int g = 0;
    for (size_t i = 0; i < v.size(); ++i) {
        w[i] = rat_num(v[i]) * (l / rat_den(v[i]));
        g = int_gcd(g, w[i]);
    }
    for (Int& x : w) x /= g;
    return w;
}
inline IntVector primitive(const IntVector& v) { return primitive(to_rat(v)); }

/// Scales a rational vector to integer entries (clears denominators only).
inline IntVector clear_denominators(const RatVector& v) {
    Int l = 1;
    for (const Rat& x : v) l = int_lcm(l, rat_den(x));
    IntVector w(v.size());
    for (size_t i = 0; i < v.size(); ++i) w[i] = rat_num(v[i]) * (l / rat_den(v[i]));
    return w;
}

// ---------------------------------------------------------------- affine forms

/// f(x) = linear . x + constant
struct AffineForm {
    RatVector linear;
    Rat constant;

    AffineForm() = default;
    AffineForm(RatVector l, Rat c) : linear(std::move(l)), constant(std::move(c)) {}

    size_t dim() const { return linear.size(); }
    Rat eval(const RatVector& x) const { return dot(linear, x) + constant; }
    Rat slope(const IntVector& direction) const { return dot(linear, direction); }

    friend bool operator==(const AffineForm& a, const AffineForm& b) {
        return a.linear == b.linear && a.constant == b.constant;
    }
};

inline int cmp(const AffineForm& a, const AffineForm& b) {
    int c = lex_cmp(a.linear, b.linear);
    if (c != 0) return c;
    if (a.constant < b.constant) return -1;
    return a.constant > b.constant ? 1 : 0;
}

/// Scales a form so (linear, constant) is a primitive integer vector;
/// keeps the sign (valid for inequalities f >= 0).
inline AffineForm normalize_form(const AffineForm& f) {
    RatVector all = f.linear;
    all.push_back(f.constant);
    if (is_zero(all)) return AffineForm(RatVector(f.dim(), Rat(0)), Rat(0));
    IntVector p = primitive(all);
    RatVector lin(f.dim());
    for (size_t i = 0; i < f.dim(); ++i) lin[i] = Rat(p[i]);
    return AffineForm(std::move(lin), Rat(p[f.dim()]));
}

// ---------------------------------------------------------------- rational elimination

/// Reduced row echelon form, in place. Returns pivot column per row.
inline std::vector<int> rref(RatMatrix& m) {
    std::vector<int> pivots;
    if (m.empty()) return pivots;
    size_t cols = m[0].size();
    size_t r = 0;
    for (size_t c = 0; c < cols && r < m.size(); ++c) {
        size_t sel = r;
        while (sel < m.size() && m[sel][c] == 0) ++sel;
        if (sel == m.size()) continue;
        std::swap(m[r], m[sel]);
        Rat piv = m[r][c];
        for (size_t j = c; j < cols; ++j) m[r][j] /= piv;
        for (size_t i = 0; i < m.size(); ++i) {
            if (i == r || m[i][c] == 0) continue;
            Rat f = m[i][c];
            for (size_t j = c; j < cols; ++j) m[i][j] -= f * m[r][j];
        }
        pivots.push_back((int)c);
        ++r;
    }
    m.resize(r);
    return pivots;
}

inline size_t rat_rank(RatMatrix m) { return rref(m).size(); }

inline size_t int_rank(const IntMatrix& m) {
    RatMatrix q;
    q.reserve(m.size());
    for (const auto& row : m) q.push_back(to_rat(row));
    return rat_rank(std::move(q));
}

/// Canonical primitive-integer basis of the row space (RREF rows rescaled).
inline IntMatrix span_basis(const RatMatrix& rows) {
    RatMatrix m = rows;
    rref(m);
    IntMatrix out;
    for (const auto& row : m)
        if (!is_zero(row)) out.push_back(primitive(row));
    return out;
}

/// Solves x . A = b for a row vector x (A given by rows). Returns one solution.
inline std::optional<RatVector> solve_left(const RatMatrix& rows, const RatVector& b) {
    // transpose to A^T y = b with y the unknown coefficients on rows
    size_t m = rows.size();
    if (m == 0) return is_zero(b) ? std::optional<RatVector>(RatVector{}) : std::nullopt;
    size_t n = rows[0].size();
    RatMatrix aug(n, RatVector(m + 1, Rat(0)));
    for (size_t j = 0; j < n; ++j) {
        for (size_t i = 0; i < m; ++i) aug[j][i] = rows[i][j];
        aug[j][m] = b[j];
    }
    auto pivots = rref(aug);
    RatVector x(m, Rat(0));
    for (size_t r = 0; r < pivots.size(); ++r) {
        if (pivots[r] == (int)m) return std::nullopt;  // inconsistent
        x[pivots[r]] = aug[r][m];
    }
    return x;
}

/// Rational nullspace of {x : rows . x = 0}; canonical primitive basis.
inline IntMatrix nullspace(const RatMatrix& rows, size_t dim) {
    RatMatrix m = rows;
    auto pivots = rref(m);
    std::vector<bool> is_pivot(dim, false);
    for (int p : pivots) is_pivot[p] = true;
    IntMatrix out;
    for (size_t c = 0; c < dim; ++c) {
        if (is_pivot[c]) continue;
        RatVector v(dim, Rat(0));
        v[c] = 1;
        for (size_t r = 0; r < pivots.size(); ++r) v[pivots[r]] = -m[r][c];
        out.push_back(primitive(v));
    }
    return out;
}

inline Rat determinant(RatMatrix m) {
    size_t n = m.size();
    Rat det = 1;
    for (size_t c = 0; c < n; ++c) {
        size_t sel = c;
        while (sel < n && m[sel][c] == 0) ++sel;
        if (sel == n) return Rat(0);
        if (sel != c) {
            std::swap(m[c], m[sel]);
            det = -det;
        }
        det *= m[c][c];
        for (size_t i = c + 1; i < n; ++i) {
            if (m[i][c] == 0) continue;
            Rat f = m[i][c] / m[c][c];
            for (size_t j = c; j < n; ++j) m[i][j] -= f * m[c][j];
        }
    }
    return det;
}

// ---------------------------------------------------------------- integer normal forms

/// Row-style Hermite normal form. Returns the nonzero rows; if `transform`
/// is given, it receives a unimodular U with U * input = [H; 0].
inline IntMatrix hnf(IntMatrix m, IntMatrix* transform = nullptr) {
    size_t rows = m.size();
    size_t cols = rows == 0 ? 0 : m[0].size();
    IntMatrix u;
    if (transform) {
        u.assign(rows, IntVector(rows, Int(0)));
        for (size_t i = 0; i < rows; ++i) u[i][i] = 1;
    }
    auto row_sub = [&](size_t i, size_t j, const Int& q) {
        for (size_t c = 0; c < cols; ++c) m[i][c] -= q * m[j][c];
        if (transform)
            for (size_t c = 0; c < rows; ++c) u[i][c] -= q * u[j][c];
    };
    auto row_swap = [&](size_t i, size_t j) {
        std::swap(m[i], m[j]);
        if (transform) std::swap(u[i], u[j]);
    };
    auto row_neg = [&](size_t i) {
        for (auto& x : m[i]) x = -x;
        if (transform)
            for (auto& x : u[i]) x = -x;
    };

    size_t r = 0;
    for (size_t c = 0; c < cols && r < rows; ++c) {
        // euclidean reduction in column c over rows >= r
        while (true) {
            size_t best = rows;
            for (size_t i = r; i < rows; ++i) {
                if (m[i][c] == 0) continue;
                if (best == rows || abs(m[i][c]) < abs(m[best][c])) best = i;
            }
            if (best == rows) break;
            row_swap(r, best);
            bool done = true;
            for (size_t i = r + 1; i < rows; ++i) {
                if (m[i][c] == 0) continue;
                Int q = floor_div(m[i][c], m[r][c]);
                row_sub(i, r, q);
                if (m[i][c] != 0) done = false;
            }
            if (done) break;
        }
        if (r < rows && m[r][c] != 0) {
            if (m[r][c] < 0) row_neg(r);
            for (size_t i = 0; i < r; ++i) {
                Int q = floor_div(m[i][c], m[r][c]);
                if (q != 0) row_sub(i, r, q);
            }
            ++r;
        }
    }
    if (transform) *transform = u;
    m.resize(r);
    return m;
}

/// Elementary divisors (Smith normal form diagonal), positive, in
/// divisibility order; zero entries dropped.
inline std::vector<Int> snf(IntMatrix m) {
    std::vector<Int> divisors;
    size_t rows = m.size();
    size_t cols = rows == 0 ? 0 : m[0].size();
    size_t t = 0;
    while (t < rows && t < cols) {
        // find a nonzero pivot in the submatrix
        size_t pi = rows, pj = cols;
        for (size_t i = t; i < rows; ++i)
            for (size_t j = t; j < cols; ++j)
                if (m[i][j] != 0 && (pi == rows || abs(m[i][j]) < abs(m[pi][pj]))) {
                    pi = i;
                    pj = j;
                }
        if (pi == rows) break;
        std::swap(m[t], m[pi]);
        for (size_t i = 0; i < rows; ++i) std::swap(m[i][t], m[i][pj]);
        bool clean = false;
        while (!clean) {
            clean = true;
            for (size_t i = t + 1; i < rows; ++i) {
                if (m[i][t] == 0) continue;
                Int q = floor_div(m[i][t], m[t][t]);
                for (size_t j = t; j < cols; ++j) m[i][j] -= q * m[t][j];
                if (m[i][t] != 0) {
                    std::swap(m[t], m[i]);
                    clean = false;
                }
            }
            for (size_t j = t + 1; j < cols; ++j) {
                if (m[t][j] == 0) continue;
                Int q = floor_div(m[t][j], m[t][t]);
                for (size_t i = t; i < rows; ++i) m[i][j] -= q * m[i][t];
                if (m[t][j] != 0) {
                    for (size_t i = t; i < rows; ++i) std::swap(m[i][t], m[i][j]);
                    clean = false;
                }
            }
        }
        ++t;
    }
    for (size_t i = 0; i < t; ++i) divisors.push_back(abs(m[i][i]));
    // fix the divisibility chain d1 | d2 | ...
    for (size_t i = 0; i + 1 < divisors.size(); ++i)
        for (size_t j = i + 1; j < divisors.size(); ++j)
            if (divisors[j] % divisors[i] != 0) {
                Int g = int_gcd(divisors[i], divisors[j]);
                Int l = divisors[i] / g * divisors[j];
                divisors[i] = g;
                divisors[j] = l;
            }
    std::sort(divisors.begin(), divisors.end());
    return divisors;
}

/// Basis of {x integer : x . v = 0 for every row v}; always saturated.
inline IntMatrix integer_kernel(const IntMatrix& rows, size_t dim) {
    if (rows.empty()) {
        IntMatrix id(dim, IntVector(dim, Int(0)));
        for (size_t i = 0; i < dim; ++i) id[i][i] = 1;
        return id;
    }
    // transpose: x . rows^T = 0  <=>  left kernel of rows^T
    IntMatrix mt(dim, IntVector(rows.size(), Int(0)));
    for (size_t i = 0; i < rows.size(); ++i)
        for (size_t j = 0; j < dim; ++j) mt[j][i] = rows[i][j];
    IntMatrix u;
    IntMatrix h = hnf(std::move(mt), &u);
    IntMatrix out(u.begin() + h.size(), u.end());
    return hnf(std::move(out));
}

/// Saturation of the span: basis (HNF rows) of span_Q(rows) ∩ Z^dim.
inline IntMatrix saturate(const IntMatrix& rows, size_t dim) {
    return integer_kernel(integer_kernel(rows, dim), dim);
}

// ---------------------------------------------------------------- lattices

/// Sublattice of Z^n stored by its canonical HNF basis. Two lattices are
/// equal iff their bases coincide.
struct Lattice {
    size_t ambient_dim = 0;
    IntMatrix basis;  // HNF rows, linearly independent

    static Lattice from_spanning(const IntMatrix& rows, size_t dim, bool saturated) {
        Lattice l;
        l.ambient_dim = dim;
        l.basis = saturated ? saturate(rows, dim) : hnf(rows);
        return l;
    }

    size_t rank() const { return basis.size(); }

    friend bool operator==(const Lattice& a, const Lattice& b) {
        return a.ambient_dim == b.ambient_dim && a.basis == b.basis;
    }

    /// Integer membership, via back-substitution against the HNF pivots.
    bool contains(const IntVector& x) const {
        IntVector v = x;
        for (const auto& row : basis) {
            size_t p = 0;
            while (p < row.size() && row[p] == 0) ++p;
            if (p == row.size()) continue;
            if (v[p] % row[p] != 0) return false;
            Int q = v[p] / row[p];
            for (size_t c = 0; c < v.size(); ++c) v[c] -= q * row[c];
        }
        return is_zero(v);
    }

    /// Membership of a rational vector in the spanned subspace.
    bool span_contains(const RatVector& x) const {
        RatVector v = x;
        for (const auto& row : basis) {
            size_t p = 0;
            while (p < row.size() && row[p] == 0) ++p;
            if (p == row.size()) continue;
            Rat q = v[p] / Rat(row[p]);
            for (size_t c = 0; c < v.size(); ++c) v[c] -= q * Rat(row[c]);
        }
        return is_zero(v);
    }

    /// Canonical coset representative: reduces x so its coordinate at each
    /// HNF pivot column lies in [0, pivot).
    IntVector reduce(const IntVector& x) const {
        IntVector v = x;
        for (const auto& row : basis) {
            size_t p = 0;
            while (p < row.size() && row[p] == 0) ++p;
            if (p == row.size()) continue;
            Int q = floor_div(v[p], row[p]);
            for (size_t c = 0; c < v.size(); ++c) v[c] -= q * row[c];
        }
        return v;
    }
};

/// Solves g . w = 1 for integer w, given a primitive vector g.
inline IntVector unimodular_complement(const IntVector& g) {
    // iterative extended euclid across coordinates
    IntVector w(g.size(), Int(0));
    Int acc = 0;  // gcd of prefix, with acc = sum w_i g_i
    for (size_t i = 0; i < g.size(); ++i) {
        if (g[i] == 0) continue;
        if (acc == 0) {
            // w_i * g_i = |g_i| -> start the chain
            w.assign(g.size(), Int(0));
            w[i] = g[i] > 0 ? 1 : -1;
            acc = abs(g[i]);
            continue;
        }
        // extended gcd of (acc, g[i])
        Int a = acc, b = g[i], x0 = 1, x1 = 0, y0 = 0, y1 = 1;
        while (b != 0) {
            Int q = a / b;
            Int r = a - q * b;
            a = b;
            b = r;
            Int nx = x0 - q * x1;
            x0 = x1;
            x1 = nx;
            Int ny = y0 - q * y1;
            y0 = y1;
            y1 = ny;
        }
        // a = x0*acc + y0*g[i]
        if (a < 0) {
            a = -a;
            x0 = -x0;
            y0 = -y0;
        }
        for (auto& c : w) c *= x0;
        w[i] += y0;
        acc = a;
        if (acc == 1) break;
    }
    if (acc != 1) fail(Err::ZeroVector, "vector is not primitive");
    return w;
}

}  // namespace polyma
