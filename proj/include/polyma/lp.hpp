#pragma once

#include <vector>

#include "polyma/linalg.hpp"

namespace polyma {

enum class Rel { Le, Eq, Ge };  // f(x) <= 0, f(x) = 0, f(x) >= 0

struct LpConstraint {
    AffineForm form;
    Rel rel = Rel::Ge;
};

enum class LpSense { Max, Min };

struct LpResult {
    enum class Status { Optimal, Infeasible, Unbounded } status;
    Rat value;        // objective value at the optimum
    RatVector point;  // an optimal point

    bool optimal() const { return status == Status::Optimal; }
};

namespace detail {

/// Dense two-phase tableau simplex over exact rationals, Bland's rule.
/// Solves max c.y s.t. A y = b, y >= 0 with b >= 0 rowwise.
class Simplex {
  public:
    Simplex(RatMatrix a, RatVector b, RatVector c)
        : a_(std::move(a)), b_(std::move(b)), c_(std::move(c)), m_(a_.size()),
          n_(m_ ? a_[0].size() : c_.size()) {}

    LpResult::Status run(RatVector& solution, Rat& value) {
        basis_.assign(m_, -1);
        // phase 1: artificial variables, minimize their sum
        size_t total = n_ + m_;
        for (size_t i = 0; i < m_; ++i) {
            a_[i].resize(total, Rat(0));
            a_[i][n_ + i] = 1;
            basis_[i] = (int)(n_ + i);
        }
        RatVector phase1(total, Rat(0));
        for (size_t i = 0; i < m_; ++i) phase1[n_ + i] = -1;
        reduced_setup(phase1, total);
        pivot_loop(total);
        if (obj_ != 0) return LpResult::Status::Infeasible;
        // drive remaining artificial variables out of the basis
        for (size_t i = 0; i < m_; ++i) {
            if (basis_[i] < (int)n_) continue;
            size_t j = 0;
            for (; j < n_; ++j)
                if (a_[i][j] != 0) break;
            if (j < n_) pivot(i, j);
            // a zero row is a redundant constraint; leave the artificial
            // basic at value zero, it never re-enters (column dropped below)
        }
        // phase 2
        RatVector c2 = c_;
        c2.resize(total, Rat(0));  // artificial columns priced out
        reduced_setup(c2, n_);
        auto st = pivot_loop(n_);
        if (st == LpResult::Status::Unbounded) return st;
        solution.assign(n_, Rat(0));
        for (size_t i = 0; i < m_; ++i)
            if (basis_[i] >= 0 && basis_[i] < (int)n_) solution[basis_[i]] = b_[i];
        value = obj_;
        return LpResult::Status::Optimal;
    }

  private:
    void reduced_setup(const RatVector& c, size_t ncols) {
        cost_ = c;
        cost_.resize(n_ + m_, Rat(0));
        red_.assign(n_ + m_, Rat(0));
        obj_ = 0;
        for (size_t j = 0; j < n_ + m_; ++j) red_[j] = cost_[j];
        for (size_t i = 0; i < m_; ++i) {
            if (cost_[basis_[i]] == 0) continue;
            Rat f = cost_[basis_[i]];
            for (size_t j = 0; j < n_ + m_; ++j) red_[j] -= f * a_[i][j];
            obj_ += f * b_[i];
        }
        (void)ncols;
    }

    LpResult::Status pivot_loop(size_t ncols) {
        while (true) {
            size_t enter = ncols;
            for (size_t j = 0; j < ncols; ++j)
                if (red_[j] > 0) {
                    enter = j;
                    break;  // Bland: smallest index
                }
            if (enter == ncols) return LpResult::Status::Optimal;
            size_t leave = m_;
            Rat best;
            for (size_t i = 0; i < m_; ++i) {
                if (a_[i][enter] <= 0) continue;
                Rat ratio = b_[i] / a_[i][enter];
                if (leave == m_ || ratio < best ||
                    (ratio == best && basis_[i] < basis_[leave])) {
                    leave = i;
                    best = ratio;
                }
            }
            if (leave == m_) return LpResult::Status::Unbounded;
            pivot(leave, enter);
        }
    }

    void pivot(size_t row, size_t col) {
        Rat p = a_[row][col];
        for (auto& x : a_[row]) x /= p;
        b_[row] /= p;
        for (size_t i = 0; i < m_; ++i) {
            if (i == row || a_[i][col] == 0) continue;
            Rat f = a_[i][col];
            for (size_t j = 0; j < a_[i].size(); ++j) a_[i][j] -= f * a_[row][j];
            b_[i] -= f * b_[row];
        }
        if (red_[col] != 0) {
            Rat f = red_[col];
            for (size_t j = 0; j < red_.size(); ++j) red_[j] -= f * a_[row][j];
            obj_ += f * b_[row];
        }
        basis_[row] = (int)col;
    }

    RatMatrix a_;
    RatVector b_, c_, cost_, red_;
    Rat obj_;
    size_t m_, n_;
    std::vector<int> basis_;
};

}  // namespace detail

/// Exact rational LP. Constraints read "form(x) rel 0"; free variables are
/// split internally. Deterministic by Bland's rule.
inline LpResult lp_solve(const AffineForm& objective, const std::vector<LpConstraint>& constraints,
                         LpSense sense) {
    size_t n = objective.dim();
    for (const auto& c : constraints)
        if (c.form.dim() != n) fail(Err::DimensionMismatch, "lp constraint dimension");

    // x -> u - v with u, v >= 0; rows A y = b, b >= 0
    RatMatrix a;
    RatVector b;
    for (const auto& c : constraints) {
        // form(x) >= 0  ->  -lin.x <= const  ->  lin.x + s = ... keep as equality with slack
        RatVector row(2 * n + 1, Rat(0));  // last column reserved per-row for slack sign
        for (size_t i = 0; i < n; ++i) {
            row[i] = c.form.linear[i];
            row[n + i] = -c.form.linear[i];
        }
        Rat rhs = -c.form.constant;
        switch (c.rel) {
            case Rel::Ge: row[2 * n] = -1; break;  // lin.x - s = -const
            case Rel::Le: row[2 * n] = 1; break;   // lin.x + s = -const
            case Rel::Eq: row[2 * n] = 0; break;
        }
        a.push_back(std::move(row));
        b.push_back(rhs);
    }
    // expand per-row slack column into its own variable
    size_t rows = a.size();
    size_t cols = 2 * n + rows;
    RatMatrix am(rows, RatVector(cols, Rat(0)));
    for (size_t i = 0; i < rows; ++i) {
        for (size_t j = 0; j < 2 * n; ++j) am[i][j] = a[i][j];
        am[i][2 * n + i] = a[i][2 * n];
        if (b[i] < 0) {
            for (auto& x : am[i]) x = -x;
            b[i] = -b[i];
        }
    }
    RatVector c(cols, Rat(0));
    Rat sign = sense == LpSense::Max ? 1 : -1;
    for (size_t i = 0; i < n; ++i) {
        c[i] = sign * objective.linear[i];
        c[n + i] = -sign * objective.linear[i];
    }

    detail::Simplex s(std::move(am), std::move(b), std::move(c));
    RatVector y;
    Rat val;
    auto st = s.run(y, val);
    LpResult out;
    out.status = st == LpResult::Status::Optimal ? LpResult::Status::Optimal : st;
    if (st == LpResult::Status::Optimal) {
        out.point.assign(n, Rat(0));
        for (size_t i = 0; i < n; ++i) out.point[i] = y[i] - y[n + i];
        out.value = sign * val + objective.constant;
    }
    return out;
}

inline bool lp_feasible(size_t dim, const std::vector<LpConstraint>& constraints) {
    AffineForm zero(RatVector(dim, Rat(0)), Rat(0));
    return lp_solve(zero, constraints, LpSense::Max).status != LpResult::Status::Infeasible;
}

}  // namespace polyma
