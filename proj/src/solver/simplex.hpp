#pragma once
// Bounded-variable primal simplex on a scaled copy of a MilpModel.
// Columns 0..n-1 are structural, n..n+m-1 are row slacks (A x + s = b).

#include <Eigen/SparseLU>
#include <chrono>
#include <cstdint>
#include <vector>

#include "spacelog/model.hpp"

namespace spacelog::detail {

enum class VarStatus : std::uint8_t { kBasic, kLower, kUpper, kFree, kFixed };

enum class LpResult { kOptimal, kInfeasible, kUnbounded, kIterationLimit, kTimeLimit, kNumerical };

using Clock = std::chrono::steady_clock;

struct SimplexOptions {
  double pivot_tol = 1e-9;
  double feas_tol = 1e-7;
  double opt_tol = 1e-9;
  int bland_after = 1000;
  int refactor_every = 64;
  long max_iterations = 0;  // 0: automatic
};

struct Basis {
  std::vector<VarStatus> status;
  std::vector<int> head;
};

class Simplex {
 public:
  explicit Simplex(const MilpModel& model, SimplexOptions options = {});

  int n() const { return n_; }
  int m() const { return m_; }

  /// Structural bounds in model units.
  void set_bounds(int j, double lower, double upper);
  double lower(int j) const { return lo_[static_cast<std::size_t>(j)] * cscale_[static_cast<std::size_t>(j)]; }
  double upper(int j) const { return hi_[static_cast<std::size_t>(j)] * cscale_[static_cast<std::size_t>(j)]; }

  LpResult solve(Clock::time_point deadline);

  double objective() const;
  std::vector<double> primal() const;
  std::vector<double> duals() const;
  std::vector<double> reduced_costs() const;
  long iterations() const { return iterations_; }

  Basis basis() const { return {status_, head_}; }
  void set_basis(const Basis& b);
  void reset_basis();

 private:
  void scale_model(const MilpModel& model);
  void place_nonbasic(int j);
  bool refactor();
  bool repair_basis();
  void compute_basic_values();
  void ftran(Eigen::VectorXd& v) const;
  void btran(Eigen::VectorXd& v) const;
  void load_column(int j, Eigen::VectorXd& out) const;
  double column_dot(int j, const Eigen::VectorXd& y) const;
  bool basic_infeasible(int i) const;
  int choose_entering(const Eigen::VectorXd& y, bool phase1, bool bland, double& d_out) const;
  double cost_of(int j) const { return j < n_ ? cost_[static_cast<std::size_t>(j)] : 0.0; }

  int n_ = 0;
  int m_ = 0;
  SimplexOptions opt_;
  SparseMatrix a_;  // scaled structural part
  std::vector<double> cost_;
  std::vector<double> rhs_;
  std::vector<double> lo_, hi_;  // n + m, scaled
  std::vector<double> rscale_, cscale_;

  std::vector<VarStatus> status_;
  std::vector<int> head_;     // basis position -> variable
  std::vector<int> pos_;      // variable -> basis position or -1
  std::vector<double> x_;     // n + m

  struct Eta {
    int r;
    double pivot;
    std::vector<std::pair<int, double>> others;
  };
  mutable Eigen::SparseLU<Eigen::SparseMatrix<double>, Eigen::COLAMDOrdering<int>> lu_;
  std::vector<Eta> etas_;
  long iterations_ = 0;
  bool factored_ = false;
};

}  // namespace spacelog::detail
