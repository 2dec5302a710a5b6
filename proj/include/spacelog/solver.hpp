#pragma once
// Solving contract, bundled reference solver, feasibility checker and the
// external-solver bridge.

#include <filesystem>
#include <limits>
#include <memory>
#include <string>
#include <vector>

#include "spacelog/model.hpp"

namespace spacelog {

enum class SolveStatus { kOptimal, kInfeasible, kUnbounded, kLimit };

const char* status_name(SolveStatus s);
SolveStatus status_from_name(const std::string& s);  // throws Error(kParseError)

struct SolveLimits {
  double max_seconds = 600.0;
  long max_nodes = 1'000'000;
  double abs_gap = 1e-6;
  double rel_gap = 1e-6;
};

struct Solution {
  SolveStatus status = SolveStatus::kLimit;
  bool has_values = false;  // optimal, or limit with an incumbent
  double objective = std::numeric_limits<double>::quiet_NaN();
  double bound = -std::numeric_limits<double>::infinity();  // proven lower bound
  std::vector<double> values;
  std::vector<double> duals;          // LP only: one per row
  std::vector<double> reduced_costs;  // LP only: one per column
  long nodes = 0;
  long iterations = 0;
  double seconds = 0.0;
};

/// Pure LP (integrality ignored) by the bounded primal simplex.
Solution solve_lp(const MilpModel& model, const SolveLimits& limits = {});

/// LP-based best-first branch and bound on most-fractional columns.
Solution solve_reference(const MilpModel& model, const SolveLimits& limits = {});

/// b'y + sum of reduced-cost bound terms for an LP solution with duals.
double dual_objective(const MilpModel& model, const Solution& lp);

struct FeasibilityReport {
  double max_row_violation = 0.0;
  int worst_row = -1;
  double max_integrality_violation = 0.0;
  int worst_integer_column = -1;
  double max_bound_violation = 0.0;
  int worst_bound_column = -1;
  double tolerance = 1e-6;
  bool pass = true;
};

/// Recomputes every row from the model's own coefficients. Throws
/// Error(kDimensionMismatch) when the value vector has the wrong length.
/// Violations are measured relative to max(1, |rhs|) for rows and
/// max(1, |bound|) for bounds.
FeasibilityReport check_solution(const MilpModel& model, const std::vector<double>& values,
                                 double tol = 1e-6);

class SolverAdapter {
 public:
  virtual ~SolverAdapter() = default;
  virtual std::string name() const = 0;
  virtual bool supports_integer() const = 0;
  virtual bool deterministic() const = 0;
  virtual bool concurrent_safe() const = 0;
  virtual Solution solve(const MilpModel& model, const SolveLimits& limits) = 0;
};

class ReferenceSolver final : public SolverAdapter {
 public:
  std::string name() const override { return "reference"; }
  bool supports_integer() const override { return true; }
  bool deterministic() const override { return true; }
  bool concurrent_safe() const override { return true; }
  Solution solve(const MilpModel& model, const SolveLimits& limits) override {
    return solve_reference(model, limits);
  }
};

/// Runs `<executable> <model.mps>` and reads the text protocol
/// (STATUS / OBJ / VAR lines) from its standard output.
class ExternalSolver final : public SolverAdapter {
 public:
  explicit ExternalSolver(std::string executable) : exe_(std::move(executable)) {}
  std::string name() const override { return "external:" + exe_; }
  bool supports_integer() const override { return true; }
  bool deterministic() const override { return true; }
  bool concurrent_safe() const override { return false; }
  Solution solve(const MilpModel& model, const SolveLimits& limits) override;

 private:
  std::string exe_;
};

/// Parses the external protocol against the model's column names.
Solution parse_external_output(const MilpModel& model, const std::string& output);

/// SPACELOG_EXT_SOLVER, or empty.
std::string external_solver_from_env();

}  // namespace spacelog
