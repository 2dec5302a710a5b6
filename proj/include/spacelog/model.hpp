#pragma once
// Sparse MILP in row form: min c'x + offset, A x (<=|=|>=) b, l <= x <= u.

#include <Eigen/SparseCore>
#include <limits>
#include <string>
#include <tuple>
#include <vector>

namespace spacelog {

inline constexpr double kInf = std::numeric_limits<double>::infinity();

enum class RowSense { kLe, kEq, kGe };

enum class RowFamily { kMassBalance, kConcurrency, kGeneric };

struct RowMeta {
  RowFamily family = RowFamily::kGeneric;
  int node = -1;
  int step = -1;
  std::vector<int> commodities;  // mass-balance rows: one entry, more once aggregated
  int arc = -1;                  // concurrency rows
  std::string label;             // concurrency row kind ("payload", "power", ...)

  bool operator==(const RowMeta&) const = default;
};

enum class ColumnKind { kCommodity, kPackage, kBundle, kGeneric };

struct ColumnMeta {
  ColumnKind kind = ColumnKind::kGeneric;
  int arc = -1;
  std::vector<int> commodities;  // one for plain commodity columns
  std::vector<double> weights;   // bundle columns: per-commodity mass fraction
  std::string label;             // bundle id, or free text for generic columns

  bool operator==(const ColumnMeta&) const = default;
};

using SparseMatrix = Eigen::SparseMatrix<double, Eigen::ColMajor>;

struct MilpModel {
  std::string name = "model";
  std::vector<double> objective;
  double objective_offset = 0.0;
  SparseMatrix a;
  std::vector<RowSense> sense;
  std::vector<double> rhs;
  std::vector<double> lower;
  std::vector<double> upper;
  std::vector<char> is_integer;
  std::vector<RowMeta> row_meta;
  std::vector<ColumnMeta> col_meta;
  // Explicit names (set by the MPS parser); empty means derive from metadata.
  std::vector<std::string> row_names;
  std::vector<std::string> col_names;

  int rows() const { return static_cast<int>(rhs.size()); }
  int cols() const { return static_cast<int>(objective.size()); }
  /// Throws Error(kDimensionMismatch) if the parallel arrays disagree.
  void check_shape() const;
};

bool models_identical(const MilpModel& x, const MilpModel& y);

struct ModelStats {
  int rows = 0;
  int columns = 0;
  int integer_columns = 0;
  long long nonzeros = 0;

  bool operator==(const ModelStats&) const = default;
};

ModelStats model_stats(const MilpModel& m);

/// Incremental construction; rows may reference any column added so far.
class ModelBuilder {
 public:
  int add_column(double cost, double lower, double upper, bool integer, ColumnMeta meta = {});
  int add_row(RowSense sense, double rhs, const std::vector<std::pair<int, double>>& entries,
              RowMeta meta = {});
  int cols() const { return static_cast<int>(objective_.size()); }
  int rows() const { return static_cast<int>(rhs_.size()); }
  MilpModel finish(std::string name) &&;

 private:
  std::vector<double> objective_, lower_, upper_, rhs_;
  std::vector<char> integer_;
  std::vector<RowSense> sense_;
  std::vector<RowMeta> row_meta_;
  std::vector<ColumnMeta> col_meta_;
  std::vector<Eigen::Triplet<double>> triplets_;
};

}  // namespace spacelog
