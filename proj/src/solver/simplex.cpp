#include "simplex.hpp"

#include <Eigen/LU>
#include <algorithm>
#include <cmath>

#include "spacelog/kernels.hpp"

namespace spacelog::detail {

namespace {

double pow2_round(double v) { return std::ldexp(1.0, static_cast<int>(std::lround(std::log2(v)))); }

}  // namespace

Simplex::Simplex(const MilpModel& model, SimplexOptions options) : opt_(options) {
  n_ = model.cols();
  m_ = model.rows();
  scale_model(model);
  if (opt_.max_iterations <= 0) opt_.max_iterations = std::max<long>(20000, 60L * (n_ + m_));
  reset_basis();
}

void Simplex::scale_model(const MilpModel& model) {
  rscale_.assign(static_cast<std::size_t>(m_), 1.0);
  cscale_.assign(static_cast<std::size_t>(n_), 1.0);
  const SparseMatrix& a = model.a;
  for (int pass = 0; pass < 4; ++pass) {
    std::vector<double> rmin(static_cast<std::size_t>(m_), kInf), rmax(static_cast<std::size_t>(m_), 0.0);
    for (int j = 0; j < n_; ++j) {
      for (SparseMatrix::InnerIterator it(a, j); it; ++it) {
        const auto i = static_cast<std::size_t>(it.row());
        const double v = std::fabs(it.value()) * rscale_[i] * cscale_[static_cast<std::size_t>(j)];
        rmin[i] = std::min(rmin[i], v);
        rmax[i] = std::max(rmax[i], v);
      }
    }
    for (int i = 0; i < m_; ++i) {
      const auto ui = static_cast<std::size_t>(i);
      if (rmax[ui] > 0.0) rscale_[ui] *= pow2_round(1.0 / std::sqrt(rmin[ui] * rmax[ui]));
    }
    for (int j = 0; j < n_; ++j) {
      double cmin = kInf, cmax = 0.0;
      for (SparseMatrix::InnerIterator it(a, j); it; ++it) {
        const double v = std::fabs(it.value()) * rscale_[static_cast<std::size_t>(it.row())] *
                         cscale_[static_cast<std::size_t>(j)];
        cmin = std::min(cmin, v);
        cmax = std::max(cmax, v);
      }
      if (cmax > 0.0) cscale_[static_cast<std::size_t>(j)] *= pow2_round(1.0 / std::sqrt(cmin * cmax));
    }
  }
  a_ = a;
  for (int j = 0; j < n_; ++j) {
    for (SparseMatrix::InnerIterator it(a_, j); it; ++it) {
      it.valueRef() *= rscale_[static_cast<std::size_t>(it.row())] * cscale_[static_cast<std::size_t>(j)];
    }
  }
  cost_.resize(static_cast<std::size_t>(n_));
  lo_.resize(static_cast<std::size_t>(n_ + m_));
  hi_.resize(static_cast<std::size_t>(n_ + m_));
  for (int j = 0; j < n_; ++j) {
    const auto uj = static_cast<std::size_t>(j);
    cost_[uj] = model.objective[uj] * cscale_[uj];
    lo_[uj] = model.lower[uj] / cscale_[uj];
    hi_[uj] = model.upper[uj] / cscale_[uj];
  }
  rhs_.resize(static_cast<std::size_t>(m_));
  for (int i = 0; i < m_; ++i) {
    const auto ui = static_cast<std::size_t>(i);
    rhs_[ui] = model.rhs[ui] * rscale_[ui];
    const auto s = static_cast<std::size_t>(n_ + i);
    switch (model.sense[ui]) {
      case RowSense::kLe: lo_[s] = 0.0; hi_[s] = kInf; break;
      case RowSense::kEq: lo_[s] = 0.0; hi_[s] = 0.0; break;
      case RowSense::kGe: lo_[s] = -kInf; hi_[s] = 0.0; break;
    }
  }
}

void Simplex::place_nonbasic(int j) {
  const auto u = static_cast<std::size_t>(j);
  const double l = lo_[u], h = hi_[u];
  if (l == h) {
    status_[u] = VarStatus::kFixed;
    x_[u] = l;
  } else if (status_[u] == VarStatus::kUpper && std::isfinite(h)) {
    x_[u] = h;
  } else if (std::isfinite(l)) {
    status_[u] = VarStatus::kLower;
    x_[u] = l;
  } else if (std::isfinite(h)) {
    status_[u] = VarStatus::kUpper;
    x_[u] = h;
  } else {
    status_[u] = VarStatus::kFree;
    x_[u] = 0.0;
  }
}

void Simplex::reset_basis() {
  const auto total = static_cast<std::size_t>(n_ + m_);
  status_.assign(total, VarStatus::kLower);
  x_.assign(total, 0.0);
  pos_.assign(total, -1);
  head_.resize(static_cast<std::size_t>(m_));
  for (int j = 0; j < n_; ++j) place_nonbasic(j);
  for (int i = 0; i < m_; ++i) {
    head_[static_cast<std::size_t>(i)] = n_ + i;
    pos_[static_cast<std::size_t>(n_ + i)] = i;
    status_[static_cast<std::size_t>(n_ + i)] = VarStatus::kBasic;
  }
  factored_ = false;
}

void Simplex::set_basis(const Basis& b) {
  const auto total = static_cast<std::size_t>(n_ + m_);
  if (b.status.size() != total || b.head.size() != static_cast<std::size_t>(m_)) {
    reset_basis();
    return;
  }
  status_ = b.status;
  head_ = b.head;
  pos_.assign(total, -1);
  for (int i = 0; i < m_; ++i) pos_[static_cast<std::size_t>(head_[static_cast<std::size_t>(i)])] = i;
  for (int j = 0; j < n_ + m_; ++j) {
    if (status_[static_cast<std::size_t>(j)] != VarStatus::kBasic) place_nonbasic(j);
  }
  factored_ = false;
}

void Simplex::set_bounds(int j, double lower, double upper) {
  const auto u = static_cast<std::size_t>(j);
  lo_[u] = lower / cscale_[u];
  hi_[u] = upper / cscale_[u];
  if (status_[u] != VarStatus::kBasic) {
    if (status_[u] == VarStatus::kFixed) status_[u] = VarStatus::kLower;
    place_nonbasic(j);
  }
  factored_ = false;  // basic values must be recomputed
}

bool Simplex::refactor() {
  std::vector<Eigen::Triplet<double>> t;
  t.reserve(static_cast<std::size_t>(m_) * 4);
  for (int i = 0; i < m_; ++i) {
    const int j = head_[static_cast<std::size_t>(i)];
    if (j >= n_) {
      t.emplace_back(j - n_, i, 1.0);
    } else {
      for (SparseMatrix::InnerIterator it(a_, j); it; ++it) t.emplace_back(static_cast<int>(it.row()), i, it.value());
    }
  }
  Eigen::SparseMatrix<double> b(m_, m_);
  b.setFromTriplets(t.begin(), t.end());
  b.makeCompressed();
  etas_.clear();
  if (m_ == 0) {
    factored_ = true;
    return true;
  }
  lu_.analyzePattern(b);
  lu_.factorize(b);
  factored_ = lu_.info() == Eigen::Success;
  return factored_;
}

bool Simplex::repair_basis() {
  // Swap dependent basic columns for the slacks of the rows they leave uncovered.
  Eigen::MatrixXd b = Eigen::MatrixXd::Zero(m_, m_);
  for (int i = 0; i < m_; ++i) {
    const int j = head_[static_cast<std::size_t>(i)];
    if (j >= n_) {
      b(j - n_, i) = 1.0;
    } else {
      for (SparseMatrix::InnerIterator it(a_, j); it; ++it) b(it.row(), i) = it.value();
    }
  }
  Eigen::FullPivLU<Eigen::MatrixXd> lu(b);
  lu.setThreshold(1e-11);
  const int r = static_cast<int>(lu.rank());
  if (r == m_) return refactor();
  const auto& q = lu.permutationQ().indices();
  const auto& p = lu.permutationP().indices();
  std::vector<int> free_rows;
  for (int i = 0; i < m_; ++i) {
    if (p(i) >= r) free_rows.push_back(i);
  }
  for (int k = r; k < m_; ++k) {
    const int pos = q(k);
    const int row = free_rows[static_cast<std::size_t>(k - r)];
    const int out = head_[static_cast<std::size_t>(pos)];
    const int in = n_ + row;
    if (status_[static_cast<std::size_t>(in)] == VarStatus::kBasic) return false;
    status_[static_cast<std::size_t>(out)] = VarStatus::kLower;
    pos_[static_cast<std::size_t>(out)] = -1;
    place_nonbasic(out);
    head_[static_cast<std::size_t>(pos)] = in;
    pos_[static_cast<std::size_t>(in)] = pos;
    status_[static_cast<std::size_t>(in)] = VarStatus::kBasic;
  }
  return refactor();
}

void Simplex::ftran(Eigen::VectorXd& v) const {
  if (m_ == 0) return;
  v = lu_.solve(v).eval();
  for (const Eta& e : etas_) {
    const double vr = v(e.r) / e.pivot;
    if (vr != 0.0) {
      for (const auto& [i, a] : e.others) v(i) -= a * vr;
    }
    v(e.r) = vr;
  }
}

void Simplex::btran(Eigen::VectorXd& v) const {
  if (m_ == 0) return;
  for (auto it = etas_.rbegin(); it != etas_.rend(); ++it) {
    double s = v(it->r);
    for (const auto& [i, a] : it->others) s -= a * v(i);
    v(it->r) = s / it->pivot;
  }
  v = lu_.transpose().solve(v).eval();
}

void Simplex::load_column(int j, Eigen::VectorXd& out) const {
  out.setZero(m_);
  if (j >= n_) {
    out(j - n_) = 1.0;
    return;
  }
  for (SparseMatrix::InnerIterator it(a_, j); it; ++it) out(it.row()) = it.value();
}

double Simplex::column_dot(int j, const Eigen::VectorXd& y) const {
  if (j >= n_) return y(j - n_);
  double s = 0.0;
  for (SparseMatrix::InnerIterator it(a_, j); it; ++it) s += it.value() * y(it.row());
  return s;
}

void Simplex::compute_basic_values() {
  Eigen::VectorXd r(m_);
  for (int i = 0; i < m_; ++i) r(i) = rhs_[static_cast<std::size_t>(i)];
  for (int j = 0; j < n_ + m_; ++j) {
    const auto u = static_cast<std::size_t>(j);
    if (status_[u] == VarStatus::kBasic || x_[u] == 0.0) continue;
    if (j >= n_) {
      r(j - n_) -= x_[u];
    } else {
      for (SparseMatrix::InnerIterator it(a_, j); it; ++it) r(it.row()) -= it.value() * x_[u];
    }
  }
  ftran(r);
  for (int i = 0; i < m_; ++i) x_[static_cast<std::size_t>(head_[static_cast<std::size_t>(i)])] = r(i);
}

bool Simplex::basic_infeasible(int i) const {
  const auto j = static_cast<std::size_t>(head_[static_cast<std::size_t>(i)]);
  return x_[j] < lo_[j] - opt_.feas_tol || x_[j] > hi_[j] + opt_.feas_tol;
}

int Simplex::choose_entering(const Eigen::VectorXd& y, bool phase1, bool bland, double& d_out) const {
  int best = -1;
  double best_score = 0.0;
  for (int j = 0; j < n_ + m_; ++j) {
    const VarStatus st = status_[static_cast<std::size_t>(j)];
    if (st == VarStatus::kBasic || st == VarStatus::kFixed) continue;
    const double d = (phase1 ? 0.0 : cost_of(j)) - column_dot(j, y);
    bool ok = false;
    switch (st) {
      case VarStatus::kLower: ok = d < -opt_.opt_tol; break;
      case VarStatus::kUpper: ok = d > opt_.opt_tol; break;
      case VarStatus::kFree: ok = std::fabs(d) > opt_.opt_tol; break;
      default: break;
    }
    if (!ok) continue;
    if (bland) {
      d_out = d;
      return j;
    }
    if (std::fabs(d) > best_score) {
      best_score = std::fabs(d);
      best = j;
      d_out = d;
    }
  }
  return best;
}

LpResult Simplex::solve(Clock::time_point deadline) {
  const auto& kt = kernels::active();
  if (!refactor() && !repair_basis()) {
    reset_basis();
    if (!refactor()) return LpResult::kNumerical;
  }
  compute_basic_values();

  Eigen::VectorXd y(m_), alpha(m_), cb(m_);
  std::vector<double> xb(static_cast<std::size_t>(m_)), ab(static_cast<std::size_t>(m_));
  int since_refactor = 0;
  int degenerate_run = 0;
  int verify_rounds = 0;
  long local_iters = 0;

  struct Breakpoint {
    double t;
    int i;
    double bound;
    double slope;
  };
  std::vector<Breakpoint> bps;

  for (;;) {
    if (local_iters > opt_.max_iterations) return LpResult::kIterationLimit;
    if ((local_iters & 31) == 0 && Clock::now() > deadline) return LpResult::kTimeLimit;
    if (since_refactor >= opt_.refactor_every) {
      if (!refactor() && !repair_basis()) {
        reset_basis();
        if (!refactor()) return LpResult::kNumerical;
      }
      compute_basic_values();
      since_refactor = 0;
    }

    bool phase1 = false;
    for (int i = 0; i < m_; ++i) {
      const auto j = static_cast<std::size_t>(head_[static_cast<std::size_t>(i)]);
      double c = 0.0;
      if (x_[j] < lo_[j] - opt_.feas_tol) {
        c = -1.0;
        phase1 = true;
      } else if (x_[j] > hi_[j] + opt_.feas_tol) {
        c = 1.0;
        phase1 = true;
      }
      cb(i) = c;
    }
    if (!phase1) {
      for (int i = 0; i < m_; ++i) cb(i) = cost_of(head_[static_cast<std::size_t>(i)]);
    }
    y = cb;
    btran(y);

    const bool bland = degenerate_run > opt_.bland_after;
    double dq = 0.0;
    const int q = choose_entering(y, phase1, bland, dq);
    if (q < 0) {
      // Confirm on a fresh factorization before declaring the outcome.
      if (since_refactor > 0 && verify_rounds < 3) {
        ++verify_rounds;
        since_refactor = opt_.refactor_every;
        continue;
      }
      return phase1 ? LpResult::kInfeasible : LpResult::kOptimal;
    }

    load_column(q, alpha);
    ftran(alpha);
    const double dir = dq < 0.0 ? 1.0 : -1.0;  // entering moves up or down
    const auto uq = static_cast<std::size_t>(q);
    const double flip = hi_[uq] - lo_[uq];  // inf when either side is open

    for (int i = 0; i < m_; ++i) {
      ab[static_cast<std::size_t>(i)] = alpha(i);
      xb[static_cast<std::size_t>(i)] = x_[static_cast<std::size_t>(head_[static_cast<std::size_t>(i)])];
    }
    const double amax = m_ > 0 ? kt.max_abs(ab.data(), ab.size()) : 0.0;
    const double ptol = opt_.pivot_tol * std::max(1.0, amax);

    int leave = -1;
    double theta = kInf;
    double leave_bound = 0.0;

    if (!phase1) {
      if (bland) {
        for (int i = 0; i < m_; ++i) {
          const double a = alpha(i);
          if (std::fabs(a) <= ptol) continue;
          const auto j = static_cast<std::size_t>(head_[static_cast<std::size_t>(i)]);
          const double rate = -dir * a;
          double t = kInf, bnd = 0.0;
          if (rate < 0.0 && std::isfinite(lo_[j])) {
            t = std::max(0.0, (x_[j] - lo_[j]) / -rate);
            bnd = lo_[j];
          } else if (rate > 0.0 && std::isfinite(hi_[j])) {
            t = std::max(0.0, (hi_[j] - x_[j]) / rate);
            bnd = hi_[j];
          }
          if (t < theta || (t == theta && leave >= 0 && head_[static_cast<std::size_t>(i)] <
                                                            head_[static_cast<std::size_t>(leave)])) {
            theta = t;
            leave = i;
            leave_bound = bnd;
          }
        }
      } else {
        // Harris two-pass ratio test.
        double relaxed = kInf;
        for (int i = 0; i < m_; ++i) {
          const double a = alpha(i);
          if (std::fabs(a) <= ptol) continue;
          const auto j = static_cast<std::size_t>(head_[static_cast<std::size_t>(i)]);
          const double rate = -dir * a;
          if (rate < 0.0 && std::isfinite(lo_[j])) {
            relaxed = std::min(relaxed, (x_[j] - lo_[j] + opt_.feas_tol) / -rate);
          } else if (rate > 0.0 && std::isfinite(hi_[j])) {
            relaxed = std::min(relaxed, (hi_[j] - x_[j] + opt_.feas_tol) / rate);
          }
        }
        if (std::isfinite(relaxed)) {
          double best_a = 0.0;
          for (int i = 0; i < m_; ++i) {
            const double a = alpha(i);
            if (std::fabs(a) <= ptol) continue;
            const auto j = static_cast<std::size_t>(head_[static_cast<std::size_t>(i)]);
            const double rate = -dir * a;
            double t = kInf, bnd = 0.0;
            if (rate < 0.0 && std::isfinite(lo_[j])) {
              t = (x_[j] - lo_[j]) / -rate;
              bnd = lo_[j];
            } else if (rate > 0.0 && std::isfinite(hi_[j])) {
              t = (hi_[j] - x_[j]) / rate;
              bnd = hi_[j];
            }
            if (t <= relaxed && std::fabs(a) > best_a) {
              best_a = std::fabs(a);
              leave = i;
              theta = std::max(0.0, t);
              leave_bound = bnd;
            }
          }
        }
      }
      if (leave < 0 && !std::isfinite(flip)) {
        if (since_refactor > 0 && verify_rounds < 3) {
          ++verify_rounds;
          since_refactor = opt_.refactor_every;
          continue;
        }
        return LpResult::kUnbounded;
      }
    } else {
      // Phase 1: walk breakpoints of the piecewise-linear infeasibility sum.
      bps.clear();
      for (int i = 0; i < m_; ++i) {
        const double a = alpha(i);
        if (std::fabs(a) <= ptol) continue;
        const auto j = static_cast<std::size_t>(head_[static_cast<std::size_t>(i)]);
        const double rate = -dir * a;
        const double x = x_[j], l = lo_[j], h = hi_[j];
        const double w = std::fabs(rate);
        if (x < l - opt_.feas_tol) {
          if (rate > 0.0) {
            bps.push_back({(l - x) / rate, i, l, w});
            if (std::isfinite(h)) bps.push_back({(h - x) / rate, i, h, kInf});
          }
        } else if (x > h + opt_.feas_tol) {
          if (rate < 0.0) {
            bps.push_back({(x - h) / w, i, h, w});
            if (std::isfinite(l)) bps.push_back({(x - l) / w, i, l, kInf});
          }
        } else if (rate < 0.0 && std::isfinite(l)) {
          bps.push_back({std::max(0.0, (x - l) / w), i, l, kInf});
        } else if (rate > 0.0 && std::isfinite(h)) {
          bps.push_back({std::max(0.0, (h - x) / w), i, h, kInf});
        }
      }
      std::sort(bps.begin(), bps.end(), [](const Breakpoint& p, const Breakpoint& r) {
        if (p.t != r.t) return p.t < r.t;
        return p.i < r.i;
      });
      double slope = -std::fabs(dq);
      std::size_t last = bps.size();
      for (std::size_t k = 0; k < bps.size(); ++k) {
        if (bps[k].t >= flip) break;
        last = k;
        slope += bps[k].slope;
        if (slope >= 0.0) break;
      }
      if (last < bps.size()) {
        // Every breakpoint up to `last` is a valid stop; take the latest one
        // whose pivot is not tiny.
        const double big = std::max(ptol, 1e-5 * amax);
        std::size_t pick = last;
        for (std::size_t k = last + 1; k-- > 0;) {
          if (std::fabs(alpha(bps[k].i)) >= big) {
            pick = k;
            break;
          }
        }
        leave = bps[pick].i;
        theta = bps[pick].t;
        leave_bound = bps[pick].bound;
      }
      if (leave < 0 && !std::isfinite(flip)) return LpResult::kNumerical;
    }

    if (std::isfinite(flip) && flip <= theta) {
      // Entering variable reaches its opposite bound first.
      theta = flip;
      for (int i = 0; i < m_; ++i) xb[static_cast<std::size_t>(i)] = 0.0;
      kt.axpy(-dir * theta, ab.data(), xb.data(), ab.size());
      for (int i = 0; i < m_; ++i) x_[static_cast<std::size_t>(head_[static_cast<std::size_t>(i)])] += xb[static_cast<std::size_t>(i)];
      status_[uq] = status_[uq] == VarStatus::kUpper ? VarStatus::kLower : VarStatus::kUpper;
      x_[uq] = status_[uq] == VarStatus::kUpper ? hi_[uq] : lo_[uq];
      ++iterations_;
      ++local_iters;
      degenerate_run = 0;
      continue;
    }

    kt.axpy(-dir * theta, ab.data(), xb.data(), ab.size());
    for (int i = 0; i < m_; ++i) x_[static_cast<std::size_t>(head_[static_cast<std::size_t>(i)])] = xb[static_cast<std::size_t>(i)];
    x_[uq] += dir * theta;

    const int out = head_[static_cast<std::size_t>(leave)];
    const auto uo = static_cast<std::size_t>(out);
    x_[uo] = leave_bound;
    if (lo_[uo] == hi_[uo]) {
      status_[uo] = VarStatus::kFixed;
    } else {
      status_[uo] = leave_bound == lo_[uo] ? VarStatus::kLower : VarStatus::kUpper;
    }
    pos_[uo] = -1;
    head_[static_cast<std::size_t>(leave)] = q;
    pos_[uq] = leave;
    status_[uq] = VarStatus::kBasic;

    Eta e;
    e.r = leave;
    e.pivot = alpha(leave);
    for (int i = 0; i < m_; ++i) {
      if (i != leave && alpha(i) != 0.0) e.others.emplace_back(i, alpha(i));
    }
    etas_.push_back(std::move(e));
    ++since_refactor;
    ++iterations_;
    ++local_iters;
    degenerate_run = theta <= 1e-12 ? degenerate_run + 1 : 0;
  }
}

double Simplex::objective() const {
  double s = 0.0;
  for (int j = 0; j < n_; ++j) s += cost_[static_cast<std::size_t>(j)] * x_[static_cast<std::size_t>(j)];
  return s;
}

std::vector<double> Simplex::primal() const {
  std::vector<double> out(static_cast<std::size_t>(n_));
  for (int j = 0; j < n_; ++j) out[static_cast<std::size_t>(j)] = x_[static_cast<std::size_t>(j)] * cscale_[static_cast<std::size_t>(j)];
  return out;
}

std::vector<double> Simplex::duals() const {
  Eigen::VectorXd y(m_);
  for (int i = 0; i < m_; ++i) y(i) = cost_of(head_[static_cast<std::size_t>(i)]);
  btran(y);
  std::vector<double> out(static_cast<std::size_t>(m_));
  for (int i = 0; i < m_; ++i) out[static_cast<std::size_t>(i)] = y(i) * rscale_[static_cast<std::size_t>(i)];
  return out;
}

std::vector<double> Simplex::reduced_costs() const {
  Eigen::VectorXd y(m_);
  for (int i = 0; i < m_; ++i) y(i) = cost_of(head_[static_cast<std::size_t>(i)]);
  btran(y);
  std::vector<double> out(static_cast<std::size_t>(n_));
  for (int j = 0; j < n_; ++j) {
    const double d = status_[static_cast<std::size_t>(j)] == VarStatus::kBasic ? 0.0 : cost_of(j) - column_dot(j, y);
    out[static_cast<std::size_t>(j)] = d / cscale_[static_cast<std::size_t>(j)];
  }
  return out;
}

}  // namespace spacelog::detail
