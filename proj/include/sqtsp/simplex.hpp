#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "sqtsp/errors.hpp"

namespace sqtsp {

enum class LpStatus { Optimal, Infeasible };

/// Exact bounded dual simplex on a dense tableau.
///
///   minimize    c^T x
///   subject to  a_i^T x >= r_i      for every row i
///               0 <= x_j <= u_j     (u_j may be absent = unbounded)
///
/// The cost vector must be nonnegative, so the all-slack basis with every
/// structural variable at its lower bound is dual feasible from the start.
/// Rows may be appended after a solve; the next solve warm-starts from the
/// current basis. Pivot selection follows Bland's rule (smallest-index
/// infeasible basic variable leaves; smallest index among ratio ties enters),
/// which makes the result a deterministic function of the row sequence.
template <class T>
class DualSimplex {
 public:
  using Term = std::pair<int, T>;

  DualSimplex(std::vector<T> cost, std::vector<std::optional<T>> upper)
      : num_struct_(static_cast<int>(cost.size())), cost_(std::move(cost)), upper_(std::move(upper)) {
    if (upper_.size() != cost_.size()) throw InputError("simplex: cost/bound size mismatch");
    for (const auto& c : cost_)
      if (c < 0) throw InputError("simplex: cost vector must be nonnegative");
    for (const auto& u : upper_)
      if (u && *u < 0) throw InputError("simplex: negative upper bound");
    at_upper_.assign(num_struct_, 0);
    basic_row_.assign(num_struct_, -1);
    reduced_ = cost_;
  }

  int num_rows() const noexcept { return static_cast<int>(rows_.size()); }
  int num_structural() const noexcept { return num_struct_; }
  std::size_t pivots() const noexcept { return pivots_; }

  /// Appends a >= row; returns its index.
  int add_row(std::span<const Term> terms, const T& rhs) {
    const int cols = num_cols();
    std::vector<T> dense(num_struct_, T(0));
    for (const auto& [j, a] : terms) {
      if (j < 0 || j >= num_struct_) throw InputError("simplex: column index out of range");
      dense[j] += a;
    }
    // New tableau row expresses the new slack through the current nonbasics.
    std::vector<T> row(cols + 1, T(0));
    T value = -rhs;
    for (int j = 0; j < num_struct_; ++j) {
      if (dense[j] == 0) continue;
      value += dense[j] * value_of(j);
      if (basic_row_[j] < 0) row[j] -= dense[j];
    }
    for (std::size_t i = 0; i < rows_.size(); ++i) {
      int b = basis_[i];
      if (b >= num_struct_ || dense[b] == 0) continue;
      const T& coef = dense[b];
      const auto& src = rows_[i];
      for (int j = 0; j < cols; ++j)
        if (src[j] != 0) row[j] += coef * src[j];
    }
    for (int j = 0; j < num_struct_; ++j)
      if (basic_row_[j] >= 0) row[j] = 0;
    row[cols] = 1;
    for (auto& r : rows_) r.emplace_back(0);
    rows_.push_back(std::move(row));
    basis_.push_back(cols);
    beta_.push_back(value);
    at_upper_.push_back(0);
    reduced_.emplace_back(0);
    basic_row_.push_back(static_cast<int>(rows_.size()) - 1);
    return static_cast<int>(rows_.size()) - 1;
  }

  LpStatus solve(std::size_t max_pivots = 2'000'000) {
    while (true) {
      int leave = -1;
      bool below = false;
      for (std::size_t i = 0; i < rows_.size(); ++i) {
        int b = basis_[i];
        bool lo = beta_[i] < 0;
        bool hi = !lo && upper_of(b) && *upper_of(b) < beta_[i];
        if ((lo || hi) && (leave < 0 || b < basis_[leave])) {
          leave = static_cast<int>(i);
          below = lo;
        }
      }
      if (leave < 0) return LpStatus::Optimal;
      if (pivots_ >= max_pivots) throw InvariantViolation("simplex.pivot_cap", std::to_string(max_pivots) + " pivots");

      const auto& prow = rows_[leave];
      int enter = -1;
      T best_ratio;
      for (int j = 0; j < num_cols(); ++j) {
        if (basic_row_[j] >= 0 || prow[j] == 0) continue;
        bool up = at_upper_[j] != 0;
        bool positive = prow[j] > 0;
        // below lower: the basic value must rise; it moves by -T_rj * dx_j.
        bool eligible = below ? (positive == up) : (positive != up);
        if (!eligible) continue;
        T ratio = reduced_[j] / prow[j];
        if (ratio < 0) ratio = -ratio;
        if (enter < 0 || ratio < best_ratio) {
          enter = j;
          best_ratio = std::move(ratio);
        }
      }
      if (enter < 0) return LpStatus::Infeasible;
      T target = below ? T(0) : *upper_of(basis_[leave]);
      pivot(leave, enter, target);
    }
  }

  T value_of(int j) const {
    if (basic_row_[j] >= 0) return beta_[basic_row_[j]];
    return at_upper_[j] ? *upper_of(j) : T(0);
  }

  std::vector<T> primal() const {
    std::vector<T> x(num_struct_);
    for (int j = 0; j < num_struct_; ++j) x[j] = value_of(j);
    return x;
  }

  T objective() const {
    T z(0);
    for (int j = 0; j < num_struct_; ++j)
      if (cost_[j] != 0) z += cost_[j] * value_of(j);
    return z;
  }

 private:
  int num_cols() const noexcept { return num_struct_ + static_cast<int>(rows_.size()); }

  const std::optional<T>& upper_of(int j) const {
    static const std::optional<T> none;
    return j < num_struct_ ? upper_[j] : none;
  }

  void pivot(int r, int q, const T& target) {
    ++pivots_;
    auto& prow = rows_[r];
    const T piv = prow[q];
    const T theta = (beta_[r] - target) / piv;
    const int leaving = basis_[r];
    const T entering_value = value_of(q) + theta;

    std::vector<int> nz;
    for (int j = 0; j < num_cols(); ++j)
      if (prow[j] != 0) {
        prow[j] /= piv;
        nz.push_back(j);
      }
    for (std::size_t i = 0; i < rows_.size(); ++i) {
      if (static_cast<int>(i) == r) continue;
      auto& row = rows_[i];
      if (row[q] == 0) continue;
      const T f = row[q];
      beta_[i] -= f * theta;
      for (int j : nz) row[j] -= f * prow[j];
    }
    if (reduced_[q] != 0) {
      const T f = reduced_[q];
      for (int j : nz) reduced_[j] -= f * prow[j];
    }
    beta_[r] = entering_value;
    basis_[r] = q;
    basic_row_[q] = r;
    at_upper_[q] = 0;
    basic_row_[leaving] = -1;
    at_upper_[leaving] = (target != 0) ? 1 : 0;
  }

  int num_struct_;
  std::vector<T> cost_;
  std::vector<std::optional<T>> upper_;
  std::vector<std::vector<T>> rows_;
  std::vector<int> basis_;
  std::vector<T> beta_;
  std::vector<T> reduced_;
  std::vector<char> at_upper_;
  std::vector<int> basic_row_;
  std::size_t pivots_ = 0;
};

}  // namespace sqtsp
