#include "spacelog/solver.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <queue>
#include <sstream>
#include <unordered_map>

#include <unistd.h>

#include "simplex.hpp"
#include "spacelog/error.hpp"
#include "spacelog/mps.hpp"

namespace spacelog {

using detail::Basis;
using detail::Clock;
using detail::LpResult;
using detail::Simplex;

const char* status_name(SolveStatus s) {
  switch (s) {
    case SolveStatus::kOptimal: return "optimal";
    case SolveStatus::kInfeasible: return "infeasible";
    case SolveStatus::kUnbounded: return "unbounded";
    case SolveStatus::kLimit: return "limit";
  }
  return "limit";
}

SolveStatus status_from_name(const std::string& s) {
  if (s == "optimal") return SolveStatus::kOptimal;
  if (s == "infeasible") return SolveStatus::kInfeasible;
  if (s == "unbounded") return SolveStatus::kUnbounded;
  if (s == "limit") return SolveStatus::kLimit;
  throw Error(Errc::kParseError, "unknown solve status '" + s + "'");
}

namespace {

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

Clock::time_point deadline_for(const SolveLimits& limits, Clock::time_point t0) {
  const double s = std::min(limits.max_seconds, 1e7);
  return t0 + std::chrono::duration_cast<Clock::duration>(std::chrono::duration<double>(s));
}

double objective_of(const MilpModel& model, const std::vector<double>& x) {
  double s = model.objective_offset;
  for (std::size_t j = 0; j < x.size(); ++j) s += model.objective[j] * x[j];
  return s;
}

// Solves from the current basis; on numerical trouble retries once from the
// slack basis before giving up.
LpResult robust_solve(Simplex& lp, Clock::time_point deadline) {
  LpResult r = lp.solve(deadline);
  if (r == LpResult::kNumerical || r == LpResult::kIterationLimit) {
    lp.reset_basis();
    r = lp.solve(deadline);
  }
  return r;
}

}  // namespace

Solution solve_lp(const MilpModel& model, const SolveLimits& limits) {
  model.check_shape();
  const auto t0 = Clock::now();
  Simplex lp(model);
  Solution sol;
  const LpResult r = robust_solve(lp, deadline_for(limits, t0));
  sol.iterations = lp.iterations();
  switch (r) {
    case LpResult::kOptimal:
      sol.status = SolveStatus::kOptimal;
      sol.has_values = true;
      sol.values = lp.primal();
      sol.duals = lp.duals();
      sol.reduced_costs = lp.reduced_costs();
      sol.objective = objective_of(model, sol.values);
      sol.bound = sol.objective;
      break;
    case LpResult::kInfeasible: sol.status = SolveStatus::kInfeasible; break;
    case LpResult::kUnbounded: sol.status = SolveStatus::kUnbounded; break;
    case LpResult::kTimeLimit: sol.status = SolveStatus::kLimit; break;
    case LpResult::kIterationLimit:
    case LpResult::kNumerical:
      throw Error(Errc::kNumericalFailure, "simplex failed on model " + model.name);
  }
  sol.seconds = seconds_since(t0);
  return sol;
}

namespace {

struct BoundChange {
  int col;
  double lo, hi;
};

struct Node {
  double bound;
  long id;
  std::vector<BoundChange> changes;  // cumulative along the path
  std::shared_ptr<const Basis> basis;
};

struct NodeOrder {
  bool operator()(const Node& a, const Node& b) const {
    if (a.bound != b.bound) return a.bound > b.bound;
    return a.id > b.id;
  }
};

constexpr double kIntTol = 1e-6;

class BranchAndBound {
 public:
  BranchAndBound(const MilpModel& model, const SolveLimits& limits)
      : model_(model), limits_(limits), lp_(model), t0_(Clock::now()), deadline_(deadline_for(limits, t0_)) {
    const int n = model.cols();
    base_lo_.resize(static_cast<std::size_t>(n));
    base_hi_.resize(static_cast<std::size_t>(n));
    for (int j = 0; j < n; ++j) {
      const auto u = static_cast<std::size_t>(j);
      double lo = model.lower[u], hi = model.upper[u];
      if (model.is_integer[u]) {
        lo = std::ceil(lo - kIntTol);
        hi = std::floor(hi + kIntTol);
        ints_.push_back(j);
      }
      base_lo_[u] = lo;
      base_hi_[u] = hi;
    }
  }

  Solution run() {
    Solution sol;
    for (int j : ints_) {
      const auto u = static_cast<std::size_t>(j);
      if (base_lo_[u] > base_hi_[u]) {
        sol.status = SolveStatus::kInfeasible;
        sol.seconds = seconds_since(t0_);
        return sol;
      }
      lp_.set_bounds(j, base_lo_[u], base_hi_[u]);
    }

    std::priority_queue<Node, std::vector<Node>, NodeOrder> open;
    open.push(Node{-kInf, next_id_++, {}, nullptr});
    bool limit_hit = false;
    bool root = true;
    long processed = 0;

    while (!open.empty()) {
      const double best_open = open.top().bound;
      if (has_incumbent_ && !gap_open(best_open)) break;
      if (processed >= limits_.max_nodes || Clock::now() > deadline_) {
        limit_hit = true;
        break;
      }
      Node node = open.top();
      open.pop();
      ++processed;

      apply(node.changes);
      if (node.basis) lp_.set_basis(*node.basis);
      const LpResult r = robust_solve(lp_, deadline_);
      if (r == LpResult::kTimeLimit) {
        open.push(std::move(node));
        limit_hit = true;
        break;
      }
      if (r == LpResult::kNumerical || r == LpResult::kIterationLimit) {
        throw Error(Errc::kNumericalFailure, "LP relaxation failed during branch and bound");
      }
      if (r == LpResult::kUnbounded) {
        if (root) {
          sol.status = SolveStatus::kUnbounded;
          finish(sol, processed);
          return sol;
        }
        continue;
      }
      if (r == LpResult::kInfeasible) {
        root = false;
        continue;
      }
      std::vector<double> x = lp_.primal();
      const double obj = objective_of(model_, x);
      if (root) root_bound_ = obj;
      root = false;
      if (has_incumbent_ && !gap_open(obj)) continue;

      const int branch = most_fractional(x);
      if (branch < 0) {
        offer(x);
        continue;
      }
      auto basis = std::make_shared<const Basis>(lp_.basis());
      if (!has_incumbent_ && (processed == 1 || processed % 100 == 0)) dive(x, node.changes, *basis);

      const auto ub = static_cast<std::size_t>(branch);
      const double v = x[ub];
      const double cur_lo = current_lo(node.changes, branch);
      const double cur_hi = current_hi(node.changes, branch);
      Node down{obj, next_id_++, node.changes, basis};
      set_change(down.changes, branch, cur_lo, std::floor(v));
      Node up{obj, next_id_++, std::move(node.changes), basis};
      set_change(up.changes, branch, std::ceil(v), cur_hi);
      open.push(std::move(down));
      open.push(std::move(up));
    }

    if (has_incumbent_) {
      sol.has_values = true;
      sol.values = incumbent_;
      sol.objective = incumbent_obj_;
    }
    if (limit_hit) {
      sol.status = SolveStatus::kLimit;
      double b = open.empty() ? incumbent_obj_ : open.top().bound;
      if (!std::isfinite(b)) b = root_bound_;
      sol.bound = has_incumbent_ ? std::min(b, incumbent_obj_) : b;
    } else if (has_incumbent_) {
      sol.status = SolveStatus::kOptimal;
      sol.bound = open.empty() ? incumbent_obj_ : std::min(incumbent_obj_, open.top().bound);
    } else {
      sol.status = SolveStatus::kInfeasible;
    }
    finish(sol, processed);
    return sol;
  }

 private:
  bool gap_open(double bound) const {
    const double tol = std::max(limits_.abs_gap, limits_.rel_gap * std::fabs(incumbent_obj_));
    return bound < incumbent_obj_ - tol;
  }

  void finish(Solution& sol, long processed) {
    sol.nodes = processed;
    sol.iterations = lp_.iterations();
    sol.seconds = seconds_since(t0_);
  }

  static double find_change(const std::vector<BoundChange>& ch, int col, bool lo, double fallback) {
    for (const auto& c : ch) {
      if (c.col == col) return lo ? c.lo : c.hi;
    }
    return fallback;
  }
  double current_lo(const std::vector<BoundChange>& ch, int col) const {
    return find_change(ch, col, true, base_lo_[static_cast<std::size_t>(col)]);
  }
  double current_hi(const std::vector<BoundChange>& ch, int col) const {
    return find_change(ch, col, false, base_hi_[static_cast<std::size_t>(col)]);
  }
  static void set_change(std::vector<BoundChange>& ch, int col, double lo, double hi) {
    for (auto& c : ch) {
      if (c.col == col) {
        c.lo = lo;
        c.hi = hi;
        return;
      }
    }
    ch.push_back({col, lo, hi});
  }

  void apply(const std::vector<BoundChange>& ch) {
    for (int j : touched_) {
      const auto u = static_cast<std::size_t>(j);
      lp_.set_bounds(j, base_lo_[u], base_hi_[u]);
    }
    touched_.clear();
    for (const auto& c : ch) {
      lp_.set_bounds(c.col, c.lo, c.hi);
      touched_.push_back(c.col);
    }
  }

  int most_fractional(const std::vector<double>& x) const {
    int best = -1;
    double score = kIntTol;
    for (int j : ints_) {
      const double v = x[static_cast<std::size_t>(j)];
      const double f = v - std::floor(v);
      const double s = std::min(f, 1.0 - f);
      if (s > score) {
        score = s;
        best = j;
      }
    }
    return best;
  }

  void offer(std::vector<double> x) {
    for (int j : ints_) x[static_cast<std::size_t>(j)] = std::round(x[static_cast<std::size_t>(j)]);
    const double obj = objective_of(model_, x);
    if (has_incumbent_ && obj >= incumbent_obj_) return;
    if (!check_solution(model_, x, 1e-6).pass) return;
    incumbent_ = std::move(x);
    incumbent_obj_ = obj;
    has_incumbent_ = true;
  }

  // Rounds every fractional integer up and re-solves until integral.
  void dive(std::vector<double> x, const std::vector<BoundChange>& base, const Basis& start) {
    std::vector<BoundChange> ch = base;
    for (int round = 0; round < 50 && Clock::now() < deadline_; ++round) {
      bool any = false;
      for (int j : ints_) {
        const double v = x[static_cast<std::size_t>(j)];
        if (std::fabs(v - std::round(v)) <= kIntTol) continue;
        const double hi = current_hi(ch, j);
        const double c = std::ceil(v);
        if (c > hi) return;
        set_change(ch, j, c, hi);
        any = true;
      }
      if (!any) {
        offer(x);
        break;
      }
      apply(ch);
      const LpResult r = lp_.solve(deadline_);
      if (r != LpResult::kOptimal) break;
      x = lp_.primal();
      if (has_incumbent_ && objective_of(model_, x) >= incumbent_obj_) break;
    }
    lp_.set_basis(start);
  }

  const MilpModel& model_;
  SolveLimits limits_;
  Simplex lp_;
  Clock::time_point t0_, deadline_;
  std::vector<double> base_lo_, base_hi_;
  std::vector<int> ints_;
  std::vector<int> touched_;
  long next_id_ = 0;
  bool has_incumbent_ = false;
  std::vector<double> incumbent_;
  double incumbent_obj_ = kInf;
  double root_bound_ = -kInf;
};

}  // namespace

Solution solve_reference(const MilpModel& model, const SolveLimits& limits) {
  model.check_shape();
  bool any_int = false;
  for (char c : model.is_integer) any_int = any_int || c;
  if (!any_int) return solve_lp(model, limits);
  BranchAndBound bb(model, limits);
  return bb.run();
}

double dual_objective(const MilpModel& model, const Solution& lp) {
  if (lp.duals.size() != static_cast<std::size_t>(model.rows()) ||
      lp.reduced_costs.size() != static_cast<std::size_t>(model.cols())) {
    throw Error(Errc::kDimensionMismatch, "solution carries no dual information for this model");
  }
  double s = model.objective_offset;
  for (int i = 0; i < model.rows(); ++i) s += model.rhs[static_cast<std::size_t>(i)] * lp.duals[static_cast<std::size_t>(i)];
  for (int j = 0; j < model.cols(); ++j) {
    const auto u = static_cast<std::size_t>(j);
    const double d = lp.reduced_costs[u];
    if (std::fabs(d) <= 1e-12) continue;
    const double b = d > 0.0 ? model.lower[u] : model.upper[u];
    if (std::isfinite(b)) s += d * b;
  }
  return s;
}

FeasibilityReport check_solution(const MilpModel& model, const std::vector<double>& values, double tol) {
  if (values.size() != static_cast<std::size_t>(model.cols())) {
    throw Error(Errc::kDimensionMismatch, "solution has " + std::to_string(values.size()) + " values, model has " +
                                              std::to_string(model.cols()) + " columns");
  }
  FeasibilityReport rep;
  rep.tolerance = tol;
  std::vector<double> ax(static_cast<std::size_t>(model.rows()), 0.0);
  for (int j = 0; j < model.cols(); ++j) {
    const double v = values[static_cast<std::size_t>(j)];
    if (v == 0.0) continue;
    for (SparseMatrix::InnerIterator it(model.a, j); it; ++it) ax[static_cast<std::size_t>(it.row())] += it.value() * v;
  }
  for (int i = 0; i < model.rows(); ++i) {
    const auto u = static_cast<std::size_t>(i);
    const double b = model.rhs[u];
    double viol = 0.0;
    switch (model.sense[u]) {
      case RowSense::kLe: viol = ax[u] - b; break;
      case RowSense::kGe: viol = b - ax[u]; break;
      case RowSense::kEq: viol = std::fabs(ax[u] - b); break;
    }
    viol = std::max(0.0, viol) / std::max(1.0, std::fabs(b));
    if (viol > rep.max_row_violation) {
      rep.max_row_violation = viol;
      rep.worst_row = i;
    }
  }
  for (int j = 0; j < model.cols(); ++j) {
    const auto u = static_cast<std::size_t>(j);
    const double v = values[u];
    double bv = 0.0;
    if (v < model.lower[u]) bv = (model.lower[u] - v) / std::max(1.0, std::fabs(model.lower[u]));
    if (v > model.upper[u]) bv = (v - model.upper[u]) / std::max(1.0, std::fabs(model.upper[u]));
    if (!std::isfinite(v)) bv = kInf;
    if (bv > rep.max_bound_violation) {
      rep.max_bound_violation = bv;
      rep.worst_bound_column = j;
    }
    if (model.is_integer[u]) {
      const double iv = std::fabs(v - std::round(v));
      if (iv > rep.max_integrality_violation) {
        rep.max_integrality_violation = iv;
        rep.worst_integer_column = j;
      }
    }
  }
  rep.pass = rep.max_row_violation <= tol && rep.max_bound_violation <= tol && rep.max_integrality_violation <= tol;
  return rep;
}

Solution parse_external_output(const MilpModel& model, const std::string& output) {
  const auto names = mps_column_names(model);
  std::unordered_map<std::string, int> index;
  for (std::size_t j = 0; j < names.size(); ++j) index.emplace(names[j], static_cast<int>(j));
  Solution sol;
  std::istringstream in(output);
  std::string line;
  bool have_status = false;
  std::vector<double> values(names.size(), 0.0);
  bool any_var = false;
  while (std::getline(in, line)) {
    std::istringstream ls(line);
    std::string key;
    if (!(ls >> key)) continue;
    if (key == "STATUS") {
      std::string s;
      ls >> s;
      sol.status = status_from_name(s);
      have_status = true;
    } else if (key == "OBJ") {
      std::string v;
      ls >> v;
      sol.objective = std::strtod(v.c_str(), nullptr);
    } else if (key == "VAR") {
      std::string name, v;
      if (!(ls >> name >> v)) throw Error(Errc::kParseError, "malformed VAR line: " + line);
      auto it = index.find(name);
      if (it == index.end()) throw Error(Errc::kParseError, "external solver reported unknown column " + name);
      values[static_cast<std::size_t>(it->second)] = std::strtod(v.c_str(), nullptr);
      any_var = true;
    }
  }
  if (!have_status) throw Error(Errc::kParseError, "external solver output lacks a STATUS line");
  sol.has_values = any_var && (sol.status == SolveStatus::kOptimal || sol.status == SolveStatus::kLimit);
  if (sol.has_values) sol.values = std::move(values);
  if (sol.status == SolveStatus::kOptimal) sol.bound = sol.objective;
  return sol;
}

Solution ExternalSolver::solve(const MilpModel& model, const SolveLimits& limits) {
  const auto t0 = Clock::now();
  char tmpl[] = "/tmp/spacelog_ext_XXXXXX";
  const int fd = ::mkstemp(tmpl);
  if (fd < 0) throw Error(Errc::kIoFailure, "cannot create temporary model file");
  ::close(fd);
  const std::filesystem::path mps = std::string(tmpl) + ".mps";
  std::filesystem::rename(tmpl, mps);
  export_mps(model, mps);
  ::setenv("SPACELOG_EXT_TIME_LIMIT", std::to_string(limits.max_seconds).c_str(), 1);
  const std::string cmd = "'" + exe_ + "' '" + mps.string() + "'";
  std::string output;
  FILE* pipe = ::popen(cmd.c_str(), "r");
  if (!pipe) {
    std::filesystem::remove(mps);
    throw Error(Errc::kIoFailure, "cannot launch external solver " + exe_);
  }
  std::array<char, 4096> buf{};
  std::size_t got = 0;
  while ((got = std::fread(buf.data(), 1, buf.size(), pipe)) > 0) output.append(buf.data(), got);
  const int rc = ::pclose(pipe);
  std::error_code ec;
  std::filesystem::remove(mps, ec);
  if (rc != 0) throw Error(Errc::kIoFailure, "external solver exited with status " + std::to_string(rc));
  Solution sol = parse_external_output(model, output);
  sol.seconds = seconds_since(t0);
  return sol;
}

std::string external_solver_from_env() {
  const char* v = std::getenv("SPACELOG_EXT_SOLVER");
  return v ? std::string(v) : std::string();
}

}  // namespace spacelog
