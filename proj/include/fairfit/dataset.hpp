#pragma once

#include <Eigen/Core>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "fairfit/csv.hpp"

namespace fairfit {

enum class VarKind { numeric, factor };
enum class Role { response, predictor, sensitive, ignored };

std::string to_string(Role role);
std::string to_string(VarKind kind);

// Description of one column: its kind and, for factors, the ordered level
// labels (first level is the contrast reference).
struct VariableSpec {
  std::string name;
  VarKind kind = VarKind::numeric;
  std::vector<std::string> levels;  // factor only, first-appearance order

  int level_index(const std::string& label) const;  // -1 if unknown
};

struct Column {
  VariableSpec spec;
  std::vector<double> numeric;  // kind == numeric
  std::vector<int> codes;       // kind == factor, indices into spec.levels
};

// Role assignments plus declared factor columns, the contract for load_csv.
struct Schema {
  std::map<std::string, Role> roles;
  std::vector<std::string> factor_columns;

  bool is_factor(const std::string& name) const;
};

// Tabular data with variable roles. Immutable after construction.
struct Dataset {
  std::vector<Column> columns;
  std::map<std::string, Role> roles;
  std::size_t n = 0;
  std::size_t dropped_rows = 0;  // rows removed by listwise deletion

  const Column& column(const std::string& name) const;
  bool has_column(const std::string& name) const;
  std::vector<std::string> columns_with_role(Role role) const;
  const Column& response() const;

  // Checks the role invariants: exactly one response, at least one
  // predictor and one sensitive column, no column with two roles.
  void validate() const;

  // Row subset; factor levels are re-derived as the observed subset,
  // preserving this dataset's level order.
  Dataset subset(const std::vector<std::size_t>& rows) const;
};

// Numeric design matrix: factors expanded to reference-coded indicators,
// no intercept column.
struct DesignMatrix {
  Eigen::MatrixXd values;
  std::vector<std::string> names;
  // per design column: (source variable, level label or "" for identity)
  std::vector<std::pair<std::string, std::string>> source;
  std::vector<std::string> warnings;

  Eigen::Index ncol() const { return values.cols(); }
  Eigen::Index nrow() const { return values.rows(); }
};

Dataset load_csv(const std::string& path, const Schema& schema);
Dataset dataset_from_table(const csv::Table& table, const Schema& schema,
                           const std::string& origin);

// Recode a factor column. The mapping must cover every existing level; the
// new level order is first appearance among the mapping's images.
Dataset merge_levels(const Dataset& ds, const std::string& column,
                     const std::vector<std::pair<std::string, std::string>>& mapping);

DesignMatrix encode(const Dataset& ds, Role role);

// Missing-value policy shared by load_csv and the prediction path: a cell
// is missing when empty or "NA".
bool is_missing_cell(const std::string& cell);

// 0-based indices of rows with no missing cell in any of the named columns.
std::vector<std::size_t> complete_rows(const csv::Table& table,
                                       const std::vector<std::string>& columns);

// Encodes selected rows of a raw table against training-time specs (levels
// fixed; an unseen factor level is an error naming the level).
DesignMatrix encode_rows(const csv::Table& table,
                         const std::vector<VariableSpec>& specs,
                         const std::vector<std::size_t>& rows);

}  // namespace fairfit
