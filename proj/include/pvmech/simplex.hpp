#pragma once

// Small dense two-phase primal simplex for problems with a few hundred rows:
//   minimize c.x  subject to  A_le x <= b_le,  A_eq x = b_eq,  x >= 0.

#include <cmath>
#include <cstddef>
#include <limits>
#include <vector>

#include "pvmech/error.hpp"

namespace pvmech {

struct LpResult {
  enum class Status { optimal, infeasible, unbounded, pivot_limit };
  Status status = Status::infeasible;
  double value = 0;
  std::vector<double> x;
};

class LinearProgram {
 public:
  explicit LinearProgram(std::size_t variables) : n_(variables), objective_(variables, 0.0) {}

  std::size_t variable_count() const { return n_; }
  std::size_t constraint_count() const { return rows_.size(); }

  void set_objective(std::vector<double> c) {
    if (c.size() != n_) throw InvalidArgument("objective length differs from variable count");
    objective_ = std::move(c);
  }
  void add_le(std::vector<double> a, double b) { add(std::move(a), b, Sense::le); }
  void add_eq(std::vector<double> a, double b) { add(std::move(a), b, Sense::eq); }

  LpResult solve(double tol = 1e-9, std::size_t max_pivots = 200'000) const {
    // Column layout: structural | one slack per inequality | artificials.
    const std::size_t r = rows_.size();
    std::size_t slacks = 0, artificials = 0;
    for (const auto& row : rows_) {
      if (row.sense == Sense::le) ++slacks;
      if (row.sense == Sense::eq || row.b < 0) ++artificials;
    }
    const std::size_t cols = n_ + slacks + artificials;
    const std::size_t rhs = cols;
    Tableau t(r + 1, cols + 1);
    std::vector<std::size_t> basis(r);
    std::size_t next_slack = n_, next_art = n_ + slacks;
    for (std::size_t i = 0; i < r; ++i) {
      const auto& row = rows_[i];
      const double sign = row.b < 0 ? -1.0 : 1.0;
      for (std::size_t j = 0; j < n_; ++j) t(i, j) = sign * row.a[j];
      t(i, rhs) = sign * row.b;
      if (row.sense == Sense::le) {
        t(i, next_slack) = sign;
        if (sign > 0) basis[i] = next_slack;
        ++next_slack;
      }
      if (row.sense == Sense::eq || row.b < 0) {
        t(i, next_art) = 1.0;
        basis[i] = next_art++;
      }
    }
    const std::size_t obj = r;
    std::vector<bool> banned(cols, false);

    // Phase 1: minimize the sum of artificials.
    if (artificials > 0) {
      for (std::size_t j = n_ + slacks; j < cols; ++j) t(obj, j) = 1.0;
      for (std::size_t i = 0; i < r; ++i)
        if (basis[i] >= n_ + slacks)
          for (std::size_t j = 0; j <= cols; ++j) t(obj, j) -= t(i, j);
      const auto status = optimize(t, basis, banned, tol, max_pivots);
      if (status != LpResult::Status::optimal) return {status, 0, {}};
      if (-t(obj, rhs) > tol * 10 * (1 + static_cast<double>(r))) return {LpResult::Status::infeasible, 0, {}};
      for (std::size_t j = n_ + slacks; j < cols; ++j) banned[j] = true;
      // Drive zero-level artificials out of the basis where possible.
      for (std::size_t i = 0; i < r; ++i) {
        if (basis[i] < n_ + slacks) continue;
        for (std::size_t j = 0; j < n_ + slacks; ++j) {
          if (std::abs(t(i, j)) > tol) {
            pivot(t, basis, i, j);
            break;
          }
        }
      }
    }

    // Phase 2.
    for (std::size_t j = 0; j <= cols; ++j) t(obj, j) = 0.0;
    for (std::size_t j = 0; j < n_; ++j) t(obj, j) = objective_[j];
    for (std::size_t i = 0; i < r; ++i) {
      const double cb = basis[i] < n_ ? objective_[basis[i]] : 0.0;
      if (cb != 0.0)
        for (std::size_t j = 0; j <= cols; ++j) t(obj, j) -= cb * t(i, j);
    }
    const auto status = optimize(t, basis, banned, tol, max_pivots);
    if (status != LpResult::Status::optimal) return {status, 0, {}};
    LpResult result;
    result.status = status;
    result.x.assign(n_, 0.0);
    for (std::size_t i = 0; i < r; ++i)
      if (basis[i] < n_) result.x[basis[i]] = t(i, rhs);
    result.value = 0;
    for (std::size_t j = 0; j < n_; ++j) result.value += objective_[j] * result.x[j];
    return result;
  }

 private:
  enum class Sense { le, eq };
  struct Row {
    std::vector<double> a;
    double b;
    Sense sense;
  };

  struct Tableau {
    Tableau(std::size_t rows, std::size_t cols) : width(cols), cells(rows * cols, 0.0) {}
    double& operator()(std::size_t i, std::size_t j) { return cells[i * width + j]; }
    std::size_t width;
    std::vector<double> cells;
  };

  void add(std::vector<double> a, double b, Sense sense) {
    if (a.size() != n_) throw InvalidArgument("constraint length differs from variable count");
    rows_.push_back({std::move(a), b, sense});
  }

  static void pivot(Tableau& t, std::vector<std::size_t>& basis, std::size_t row, std::size_t col) {
    const std::size_t w = t.width;
    double* pr = &t.cells[row * w];
    const double inv = 1.0 / pr[col];
    for (std::size_t j = 0; j < w; ++j) pr[j] *= inv;
    pr[col] = 1.0;
    const std::size_t height = t.cells.size() / w;
    for (std::size_t i = 0; i < height; ++i) {
      if (i == row) continue;
      double* pi = &t.cells[i * w];
      const double f = pi[col];
      if (f == 0.0) continue;
      for (std::size_t j = 0; j < w; ++j) pi[j] -= f * pr[j];
      pi[col] = 0.0;
    }
    basis[row] = col;
  }

  // Dantzig pricing, switching to Bland's rule after a run of degenerate pivots.
  static LpResult::Status optimize(Tableau& t, std::vector<std::size_t>& basis, const std::vector<bool>& banned,
                                   double tol, std::size_t max_pivots) {
    const std::size_t r = basis.size();
    const std::size_t cols = t.width - 1;
    std::size_t degenerate = 0;
    bool bland = false;
    for (std::size_t it = 0; it < max_pivots; ++it) {
      std::size_t enter = cols;
      double best = -tol;
      for (std::size_t j = 0; j < cols; ++j) {
        if (banned[j]) continue;
        const double d = t(r, j);
        if (d < best) {
          enter = j;
          if (bland) break;
          best = d;
        }
      }
      if (enter == cols) return LpResult::Status::optimal;
      std::size_t leave = r;
      double ratio = std::numeric_limits<double>::infinity();
      for (std::size_t i = 0; i < r; ++i) {
        const double a = t(i, enter);
        if (a <= tol) continue;
        const double q = t(i, cols) / a;
        if (q < ratio - tol || (q <= ratio + tol && leave < r && basis[i] < basis[leave])) {
          ratio = q;
          leave = i;
        }
      }
      if (leave == r) return LpResult::Status::unbounded;
      if (ratio <= tol) {
        if (++degenerate > 50) bland = true;
      } else {
        degenerate = 0;
      }
      pivot(t, basis, leave, enter);
    }
    return LpResult::Status::pivot_limit;
  }

  std::size_t n_;
  std::vector<double> objective_;
  std::vector<Row> rows_;
};

}  // namespace pvmech
