#include "spacelog/model.hpp"

#include "spacelog/error.hpp"

namespace spacelog {

void MilpModel::check_shape() const {
  const auto n = objective.size();
  const auto m = rhs.size();
  const bool ok = lower.size() == n && upper.size() == n && is_integer.size() == n &&
                  col_meta.size() == n && sense.size() == m && row_meta.size() == m &&
                  static_cast<std::size_t>(a.rows()) == m && static_cast<std::size_t>(a.cols()) == n &&
                  (row_names.empty() || row_names.size() == m) &&
                  (col_names.empty() || col_names.size() == n);
  if (!ok) throw Error(Errc::kDimensionMismatch, "model arrays disagree in size");
}

bool models_identical(const MilpModel& x, const MilpModel& y) {
  if (x.objective != y.objective || x.objective_offset != y.objective_offset ||
      x.sense != y.sense || x.rhs != y.rhs || x.lower != y.lower || x.upper != y.upper ||
      x.is_integer != y.is_integer || x.row_meta != y.row_meta || x.col_meta != y.col_meta ||
      x.row_names != y.row_names || x.col_names != y.col_names || x.a.rows() != y.a.rows() ||
      x.a.cols() != y.a.cols() || x.a.nonZeros() != y.a.nonZeros()) {
    return false;
  }
  for (int j = 0; j < x.a.outerSize(); ++j) {
    SparseMatrix::InnerIterator ix(x.a, j), iy(y.a, j);
    for (; ix && iy; ++ix, ++iy) {
      if (ix.row() != iy.row() || ix.value() != iy.value()) return false;
    }
    if (ix || iy) return false;
  }
  return true;
}

ModelStats model_stats(const MilpModel& m) {
  ModelStats s;
  s.rows = m.rows();
  s.columns = m.cols();
  for (char c : m.is_integer) s.integer_columns += c ? 1 : 0;
  s.nonzeros = m.a.nonZeros();
  return s;
}

int ModelBuilder::add_column(double cost, double lower, double upper, bool integer,
                             ColumnMeta meta) {
  if (lower > upper) throw Error(Errc::kBoundOrderViolated, "column lower bound above upper");
  objective_.push_back(cost);
  lower_.push_back(lower);
  upper_.push_back(upper);
  integer_.push_back(integer ? 1 : 0);
  col_meta_.push_back(std::move(meta));
  return cols() - 1;
}

int ModelBuilder::add_row(RowSense sense, double rhs,
                          const std::vector<std::pair<int, double>>& entries, RowMeta meta) {
  const int r = rows();
  for (const auto& [col, v] : entries) {
    if (col < 0 || col >= cols()) throw Error(Errc::kDimensionMismatch, "row references unknown column");
    if (v != 0.0) triplets_.emplace_back(r, col, v);
  }
  sense_.push_back(sense);
  rhs_.push_back(rhs);
  row_meta_.push_back(std::move(meta));
  return r;
}

MilpModel ModelBuilder::finish(std::string name) && {
  MilpModel m;
  m.name = std::move(name);
  m.objective = std::move(objective_);
  m.lower = std::move(lower_);
  m.upper = std::move(upper_);
  m.is_integer = std::move(integer_);
  m.col_meta = std::move(col_meta_);
  m.sense = std::move(sense_);
  m.rhs = std::move(rhs_);
  m.row_meta = std::move(row_meta_);
  m.a.resize(static_cast<Eigen::Index>(m.rhs.size()), static_cast<Eigen::Index>(m.objective.size()));
  m.a.setFromTriplets(triplets_.begin(), triplets_.end());  // duplicates summed
  m.a.prune([](Eigen::Index, Eigen::Index, double v) { return v != 0.0; });
  m.a.makeCompressed();
  return m;
}

}  // namespace spacelog
