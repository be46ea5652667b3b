#pragma once

#include <Eigen/Dense>
#include <string>
#include <vector>

namespace pricing::lp {

enum class Sense { Le, Eq, Ge };
enum class Status { Optimal, Infeasible, Unbounded, IterationLimit };

inline const char* status_name(Status s) {
  switch (s) {
    case Status::Optimal: return "optimal";
    case Status::Infeasible: return "infeasible";
    case Status::Unbounded: return "unbounded";
    case Status::IterationLimit: return "iteration_limit";
  }
  return "?";
}

template <typename Scalar>
struct ScalarPolicy {
  static Scalar pivot_tol() { return Scalar(1e-11); }
  static Scalar feas_tol() { return Scalar(1e-9); }
  static constexpr bool bland_always = false;
};

// Exact arithmetic: compare against zero and run Bland's rule from the first
// pivot, which guarantees termination with no tolerance machinery.
template <typename Scalar>
struct ExactScalarPolicy {
  static Scalar pivot_tol() { return Scalar(0); }
  static Scalar feas_tol() { return Scalar(0); }
  static constexpr bool bland_always = true;
};

template <typename Scalar>
struct SimplexResult {
  Status status = Status::IterationLimit;
  Eigen::Matrix<Scalar, Eigen::Dynamic, 1> x;      // structural variables
  Scalar objective = Scalar(0);
  Eigen::Matrix<Scalar, Eigen::Dynamic, 1> duals;  // one multiplier per row
  std::vector<int> basis;                          // final basic column per row
  int iterations = 0;
  std::string note;
};

// Dense two-phase tableau simplex for
//     maximize c'x  s.t.  A x (<=,=,>=) b,  x >= 0.
// Dantzig pricing, switching permanently to Bland's rule if the objective
// stalls (anti-cycling); exact policies run Bland throughout.
template <typename Scalar, typename Policy = ScalarPolicy<Scalar>>
class SimplexSolver {
 public:
  using Mat = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
  using Vec = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;
  using DenseMat = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;

  SimplexResult<Scalar> solve(const DenseMat& A, const std::vector<Sense>& senses, const Vec& b,
                              const Vec& c, int max_iterations = 0) {
    const int m = static_cast<int>(A.rows());
    const int n = static_cast<int>(A.cols());
    SimplexResult<Scalar> result;

    // Normalize rhs >= 0.
    DenseMat Aw = A;
    Vec bw = b;
    std::vector<Sense> sw = senses;
    std::vector<bool> flipped(m, false);
    for (int i = 0; i < m; ++i) {
      if (bw[i] < Scalar(0)) {
        Aw.row(i) = -Aw.row(i);
        bw[i] = -bw[i];
        flipped[i] = true;
        if (sw[i] == Sense::Le) sw[i] = Sense::Ge;
        else if (sw[i] == Sense::Ge) sw[i] = Sense::Le;
      }
    }

    // Column layout: structural | slack/surplus | artificial.
    int n_slack = 0, n_art = 0;
    for (Sense s : sw) {
      if (s != Sense::Eq) ++n_slack;
      if (s != Sense::Le) ++n_art;
    }
    const int ncols = n + n_slack + n_art;
    art_begin_ = n + n_slack;

    tab_.setZero(m + 1, ncols + 1);
    tab_.topLeftCorner(m, n) = Aw;
    tab_.col(ncols).head(m) = bw;
    basis_.assign(m, -1);
    aux_col_.assign(m, -1);   // slack/surplus column of each row (-1 for Eq)
    art_col_.assign(m, -1);   // artificial column of each row (-1 for Le)

    int slack_at = n, art_at = art_begin_;
    for (int i = 0; i < m; ++i) {
      switch (sw[i]) {
        case Sense::Le:
          tab_(i, slack_at) = Scalar(1);
          aux_col_[i] = slack_at;
          basis_[i] = slack_at++;
          break;
        case Sense::Ge:
          tab_(i, slack_at) = Scalar(-1);
          aux_col_[i] = slack_at++;
          tab_(i, art_at) = Scalar(1);
          art_col_[i] = art_at;
          basis_[i] = art_at++;
          break;
        case Sense::Eq:
          tab_(i, art_at) = Scalar(1);
          art_col_[i] = art_at;
          basis_[i] = art_at++;
          break;
      }
    }

    if (max_iterations <= 0) max_iterations = 200 * (m + ncols) + 1000;

    // Phase 1: maximize -sum(artificials).
    Vec c1 = Vec::Zero(ncols);
    for (int j = art_begin_; j < ncols; ++j) c1[j] = Scalar(-1);
    price_out(c1);
    Status st = iterate(max_iterations, result.iterations, ncols);
    if (st == Status::IterationLimit) {
      result.status = st;
      result.note = "phase 1 hit the iteration cap";
      return result;
    }
    // The rhs cell of the objective row holds -objective, and the phase-1
    // objective is -sum(artificials), so the cell itself is the leftover mass.
    Scalar infeasibility = tab_(m, ncols);
    if (infeasibility > Policy::feas_tol()) {
      result.status = Status::Infeasible;
      result.note = "phase 1 left artificial mass " + to_string_helper(infeasibility);
      return result;
    }
    drive_out_artificials();

    // Phase 2 with the real objective; artificial columns are retired.
    Vec c2 = Vec::Zero(ncols);
    c2.head(n) = c;
    price_out(c2);
    st = iterate(max_iterations, result.iterations, art_begin_);
    if (st != Status::Optimal) {
      result.status = st;
      if (st == Status::IterationLimit) result.note = "phase 2 hit the iteration cap";
      return result;
    }

    result.status = Status::Optimal;
    result.x = Vec::Zero(n);
    for (int i = 0; i < m; ++i)
      if (basis_[i] < n) result.x[basis_[i]] = tab_(i, ncols);
    result.objective = c.dot(result.x);
    result.basis = basis_;

    // Duals from the reduced costs under each row's own slack or artificial
    // column: +1 slack gives -y_i, -1 surplus gives +y_i, artificial +1
    // gives -y_i. These live in the rhs-normalized coordinates.
    Vec y_norm = Vec::Zero(m);
    for (int i = 0; i < m; ++i) {
      if (sw[i] == Sense::Le) y_norm[i] = -tab_(m, aux_col_[i]);
      else if (sw[i] == Sense::Ge) y_norm[i] = tab_(m, aux_col_[i]);
      else y_norm[i] = -tab_(m, art_col_[i]);
    }

    // Floating point only: re-solve the final basis against the original
    // data (plus one refinement step) so accumulated pivot error does not
    // leak into the reported vertex.
    if constexpr (std::is_floating_point_v<Scalar>) refactor(Aw, sw, bw, c, result, y_norm);

    result.duals = Vec::Zero(m);
    for (int i = 0; i < m; ++i) result.duals[i] = flipped[i] ? -y_norm[i] : y_norm[i];
    return result;
  }

 private:
  static std::string to_string_helper(const Scalar& v) {
    if constexpr (std::is_floating_point_v<Scalar>) return std::to_string(v);
    else return "(exact)";
  }

  // Rebuilds the basis matrix from the untouched standard-form data, solves
  // for the basic values and duals with one step of iterative refinement,
  // and adopts the result when it does not degrade feasibility.
  void refactor(const DenseMat& Aw, const std::vector<Sense>& sw, const Vec& bw, const Vec& c,
                SimplexResult<Scalar>& result, Vec& y_norm) {
    const int m = static_cast<int>(Aw.rows());
    const int n = static_cast<int>(Aw.cols());
    DenseMat B = DenseMat::Zero(m, m);
    Vec cB = Vec::Zero(m);
    std::vector<int> aux_row(static_cast<int>(tab_.cols()) - 1, -1);
    for (int i = 0; i < m; ++i) {
      if (aux_col_[i] >= 0) aux_row[aux_col_[i]] = i;
      if (art_col_[i] >= 0) aux_row[art_col_[i]] = i;
    }
    for (int r = 0; r < m; ++r) {
      int j = basis_[r];
      if (j < n) {
        B.col(r) = Aw.col(j);
        cB[r] = c[j];
      } else {
        int row = aux_row[j];
        if (row < 0) return;
        Scalar sign = (j < art_begin_ && sw[row] == Sense::Ge) ? Scalar(-1) : Scalar(1);
        B(row, r) = sign;
      }
    }
    Eigen::PartialPivLU<DenseMat> lu(B);
    Vec xB = lu.solve(bw);
    xB += lu.solve(bw - B * xB);
    Eigen::PartialPivLU<DenseMat> lut(DenseMat(B.transpose()));
    Vec y = lut.solve(cB);
    y += lut.solve(cB - B.transpose() * y);

    Vec x = Vec::Zero(n);
    bool negative = false;
    for (int r = 0; r < m; ++r) {
      if (xB[r] < -Policy::feas_tol()) negative = true;
      if (basis_[r] < n) x[basis_[r]] = xB[r];
    }
    if (negative || !x.allFinite() || !y.allFinite()) return;
    result.x = x;
    result.objective = c.dot(x);
    y_norm = y;
  }

  // Express the objective over the current basis: row m starts as c and the
  // basic rows (already canonical) are priced out.
  void price_out(const Vec& c) {
    const int m = static_cast<int>(tab_.rows()) - 1;
    const int ncols = static_cast<int>(tab_.cols()) - 1;
    tab_.row(m).setZero();
    tab_.row(m).head(ncols) = c.transpose();
    for (int i = 0; i < m; ++i) {
      Scalar cb = c[basis_[i]];
      if (cb != Scalar(0)) tab_.row(m) -= cb * tab_.row(i);
    }
  }

  // Pivots until no reduced cost among columns [0, col_limit) is positive.
  Status iterate(int max_iterations, int& iterations, int col_limit) {
    const int m = static_cast<int>(tab_.rows()) - 1;
    const int ncols = static_cast<int>(tab_.cols()) - 1;
    const Scalar tol = Policy::pivot_tol();
    bool bland = Policy::bland_always;
    int stall = 0;
    Scalar last_rhs = tab_(m, ncols);
    const int stall_limit = 3 * (m + ncols) + 50;

    while (true) {
      if (iterations++ >= max_iterations) return Status::IterationLimit;

      int enter = -1;
      if (bland) {
        for (int j = 0; j < col_limit; ++j)
          if (tab_(m, j) > tol) { enter = j; break; }
      } else {
        Scalar best = tol;
        for (int j = 0; j < col_limit; ++j)
          if (tab_(m, j) > best) { best = tab_(m, j); enter = j; }
      }
      if (enter < 0) return Status::Optimal;

      // Ratio test; ties resolved toward the smallest basic index.
      int leave = -1;
      Scalar best_ratio = Scalar(0);
      for (int i = 0; i < m; ++i) {
        Scalar a = tab_(i, enter);
        if (a > tol) {
          Scalar ratio = tab_(i, ncols) / a;
          if (leave < 0 || ratio < best_ratio ||
              (ratio == best_ratio && basis_[i] < basis_[leave])) {
            leave = i;
            best_ratio = ratio;
          }
        }
      }
      if (leave < 0) return Status::Unbounded;

      pivot(leave, enter);

      if (!Policy::bland_always && !bland) {
        // Maximization drives the stored rhs cell (-objective) down; no
        // strict decrease means a degenerate step.
        Scalar rhs = tab_(m, ncols);
        if (rhs >= last_rhs - Scalar(1e-13)) {
          if (++stall > stall_limit) bland = true;
        } else {
          stall = 0;
        }
        last_rhs = rhs;
      }
    }
  }

  void pivot(int r, int s) {
    Vec col = tab_.col(s);
    tab_.row(r) /= col[r];
    col[r] = Scalar(0);
    tab_.noalias() -= col * tab_.row(r);
    tab_.col(s).setZero();
    tab_(r, s) = Scalar(1);
    basis_[r] = s;
  }

  // Pivot any artificial still basic after phase 1 onto a real column; an
  // all-zero row is redundant and stays parked on its zero artificial, which
  // phase 2 never re-enters.
  void drive_out_artificials() {
    const int m = static_cast<int>(tab_.rows()) - 1;
    const Scalar tol = Policy::pivot_tol();
    for (int i = 0; i < m; ++i) {
      if (basis_[i] < art_begin_) continue;
      for (int j = 0; j < art_begin_; ++j) {
        Scalar a = tab_(i, j);
        if (a > tol || a < -tol) {
          pivot(i, j);
          break;
        }
      }
    }
  }

  Mat tab_;
  std::vector<int> basis_;
  std::vector<int> aux_col_, art_col_;
  int art_begin_ = 0;
};

}  // namespace pricing::lp
