#include "fairfit/dataset.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <set>

#include "fairfit/errors.hpp"

namespace fairfit {

std::string to_string(Role role) {
  switch (role) {
    case Role::response: return "response";
    case Role::predictor: return "predictor";
    case Role::sensitive: return "sensitive";
    case Role::ignored: return "ignored";
  }
  return "?";
}

std::string to_string(VarKind kind) {
  return kind == VarKind::numeric ? "numeric" : "factor";
}

int VariableSpec::level_index(const std::string& label) const {
  for (std::size_t i = 0; i < levels.size(); ++i)
    if (levels[i] == label) return static_cast<int>(i);
  return -1;
}

bool Schema::is_factor(const std::string& name) const {
  return std::find(factor_columns.begin(), factor_columns.end(), name) !=
         factor_columns.end();
}

const Column& Dataset::column(const std::string& name) const {
  for (const auto& c : columns)
    if (c.spec.name == name) return c;
  throw SchemaError("no such column: " + name);
}

bool Dataset::has_column(const std::string& name) const {
  for (const auto& c : columns)
    if (c.spec.name == name) return true;
  return false;
}

std::vector<std::string> Dataset::columns_with_role(Role role) const {
  std::vector<std::string> out;
  for (const auto& c : columns) {
    auto it = roles.find(c.spec.name);
    if (it != roles.end() && it->second == role) out.push_back(c.spec.name);
  }
  return out;
}

const Column& Dataset::response() const {
  auto names = columns_with_role(Role::response);
  if (names.size() != 1)
    throw SchemaError("expected exactly one response column, found " +
                      std::to_string(names.size()));
  return column(names.front());
}

void Dataset::validate() const {
  std::size_t n_response = columns_with_role(Role::response).size();
  if (n_response != 1)
    throw SchemaError("expected exactly one response column, found " +
                      std::to_string(n_response));
  if (columns_with_role(Role::sensitive).empty())
    throw SchemaError("at least one sensitive column is required");
  if (columns_with_role(Role::predictor).empty())
    throw SchemaError("at least one predictor column is required");
  for (const auto& c : columns) {
    if (c.spec.kind == VarKind::factor) {
      if (c.spec.levels.size() < 2)
        throw SchemaError("factor column '" + c.spec.name +
                          "' has fewer than 2 levels");
      std::set<std::string> uniq(c.spec.levels.begin(), c.spec.levels.end());
      if (uniq.size() != c.spec.levels.size())
        throw SchemaError("factor column '" + c.spec.name +
                          "' has duplicate level labels");
    } else {
      for (double v : c.numeric)
        if (!std::isfinite(v))
          throw SchemaError("numeric column '" + c.spec.name +
                            "' contains non-finite values");
    }
  }
}

Dataset Dataset::subset(const std::vector<std::size_t>& rows) const {
  Dataset out;
  out.roles = roles;
  out.n = rows.size();
  for (const auto& c : columns) {
    Column nc;
    nc.spec.name = c.spec.name;
    nc.spec.kind = c.spec.kind;
    if (c.spec.kind == VarKind::numeric) {
      nc.numeric.reserve(rows.size());
      for (auto r : rows) nc.numeric.push_back(c.numeric.at(r));
    } else {
      // keep only the observed levels, preserving the parent's order
      std::vector<char> seen(c.spec.levels.size(), 0);
      for (auto r : rows) seen[static_cast<std::size_t>(c.codes.at(r))] = 1;
      std::vector<int> remap(c.spec.levels.size(), -1);
      for (std::size_t l = 0; l < c.spec.levels.size(); ++l) {
        if (seen[l]) {
          remap[l] = static_cast<int>(nc.spec.levels.size());
          nc.spec.levels.push_back(c.spec.levels[l]);
        }
      }
      nc.codes.reserve(rows.size());
      for (auto r : rows) nc.codes.push_back(remap[static_cast<std::size_t>(c.codes.at(r))]);
    }
    out.columns.push_back(std::move(nc));
  }
  return out;
}

bool is_missing_cell(const std::string& cell) {
  return cell.empty() || cell == "NA";
}

namespace {

std::string trim(const std::string& s) {
  std::size_t a = s.find_first_not_of(" \t");
  if (a == std::string::npos) return "";
  std::size_t b = s.find_last_not_of(" \t");
  return s.substr(a, b - a + 1);
}

double parse_numeric_cell(const std::string& raw, std::size_t row1,
                          const std::string& column, const std::string& origin) {
  std::string s = trim(raw);
  double value = 0.0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), value);
  if (ec != std::errc() || ptr != s.data() + s.size())
    throw ParseError(origin + ": cannot parse '" + raw + "' as a number (row " +
                     std::to_string(row1) + ", column '" + column + "')");
  return value;
}

}  // namespace

Dataset dataset_from_table(const csv::Table& table, const Schema& schema,
                           const std::string& origin) {
  // resolve schema columns against the header
  std::vector<long> col_of;
  std::vector<std::string> names;
  for (const auto& [name, role] : schema.roles) {
    long idx = table.column_index(name);
    if (idx < 0) throw SchemaError(origin + ": schema column '" + name +
                                   "' not found in header");
    if (role == Role::ignored) continue;
    col_of.push_back(idx);
    names.push_back(name);
  }
  for (const auto& f : schema.factor_columns)
    if (table.column_index(f) < 0)
      throw SchemaError(origin + ": factor column '" + f + "' not found in header");

  // listwise deletion over role-bearing columns
  std::vector<std::size_t> kept;
  std::size_t dropped = 0;
  for (std::size_t r = 0; r < table.nrow(); ++r) {
    bool missing = false;
    for (long j : col_of)
      if (is_missing_cell(table.rows[r][static_cast<std::size_t>(j)])) {
        missing = true;
        break;
      }
    if (missing) ++dropped;
    else kept.push_back(r);
  }

  Dataset ds;
  ds.roles = schema.roles;
  ds.roles.erase("");  // defensive no-op, keeps map clean
  for (auto it = ds.roles.begin(); it != ds.roles.end();) {
    if (it->second == Role::ignored) it = ds.roles.erase(it);
    else ++it;
  }
  ds.n = kept.size();
  ds.dropped_rows = dropped;

  for (std::size_t k = 0; k < col_of.size(); ++k) {
    const auto j = static_cast<std::size_t>(col_of[k]);
    Column c;
    c.spec.name = names[k];
    if (schema.is_factor(names[k])) {
      c.spec.kind = VarKind::factor;
      for (auto r : kept) {
        const std::string& cell = table.rows[r][j];
        int code = c.spec.level_index(cell);
        if (code < 0) {
          code = static_cast<int>(c.spec.levels.size());
          c.spec.levels.push_back(cell);
        }
        c.codes.push_back(code);
      }
    } else {
      c.spec.kind = VarKind::numeric;
      for (auto r : kept)
        c.numeric.push_back(parse_numeric_cell(table.rows[r][j], r + 2, names[k], origin));
    }
    ds.columns.push_back(std::move(c));
  }

  const Column& resp = ds.response();
  if (resp.spec.kind == VarKind::factor && resp.spec.levels.size() < 2)
    throw SchemaError(origin + ": response factor '" + resp.spec.name +
                      "' has fewer than 2 observed levels");
  ds.validate();
  return ds;
}

Dataset load_csv(const std::string& path, const Schema& schema) {
  return dataset_from_table(csv::read_file(path), schema, path);
}

Dataset merge_levels(const Dataset& ds, const std::string& column,
                     const std::vector<std::pair<std::string, std::string>>& mapping) {
  const Column& old = ds.column(column);
  if (old.spec.kind != VarKind::factor)
    throw SchemaError("merge_levels: column '" + column + "' is not a factor");

  // new levels in order of first appearance among the mapping images
  std::vector<std::string> new_levels;
  auto new_index = [&](const std::string& label) {
    for (std::size_t i = 0; i < new_levels.size(); ++i)
      if (new_levels[i] == label) return static_cast<int>(i);
    new_levels.push_back(label);
    return static_cast<int>(new_levels.size() - 1);
  };

  std::map<std::string, int> recode;
  for (const auto& [from, to] : mapping) {
    if (old.spec.level_index(from) < 0)
      throw SchemaError("merge_levels: '" + from + "' is not a level of '" + column + "'");
    recode[from] = new_index(to);
  }
  for (const auto& lvl : old.spec.levels)
    if (!recode.count(lvl))
      throw SchemaError("merge_levels: mapping does not cover level '" + lvl +
                        "' of '" + column + "'");

  Dataset out = ds;
  for (auto& c : out.columns) {
    if (c.spec.name != column) continue;
    c.spec.levels = new_levels;
    for (auto& code : c.codes)
      code = recode.at(old.spec.levels[static_cast<std::size_t>(code)]);
  }
  return out;
}

DesignMatrix encode(const Dataset& ds, Role role) {
  auto names = ds.columns_with_role(role);
  if (names.empty())
    throw SchemaError("encode: no column carries role '" + to_string(role) + "'");

  DesignMatrix dm;
  Eigen::Index p = 0;
  for (const auto& name : names) {
    const Column& c = ds.column(name);
    p += c.spec.kind == VarKind::numeric
             ? 1
             : static_cast<Eigen::Index>(c.spec.levels.size()) - 1;
  }
  dm.values.setZero(static_cast<Eigen::Index>(ds.n), p);

  Eigen::Index j = 0;
  for (const auto& name : names) {
    const Column& c = ds.column(name);
    if (c.spec.kind == VarKind::numeric) {
      for (std::size_t i = 0; i < ds.n; ++i) dm.values(static_cast<Eigen::Index>(i), j) = c.numeric[i];
      dm.names.push_back(name);
      dm.source.emplace_back(name, "");
      double mean = ds.n ? dm.values.col(j).mean() : 0.0;
      if (ds.n > 1 && (dm.values.col(j).array() - mean).abs().maxCoeff() < 1e-12)
        dm.warnings.push_back("numeric column '" + name + "' has zero variance");
      ++j;
    } else {
      // reference coding: indicators for levels 1..L-1
      for (std::size_t l = 1; l < c.spec.levels.size(); ++l) {
        for (std::size_t i = 0; i < ds.n; ++i)
          dm.values(static_cast<Eigen::Index>(i), j) =
              c.codes[i] == static_cast<int>(l) ? 1.0 : 0.0;
        dm.names.push_back(name + c.spec.levels[l]);
        dm.source.emplace_back(name, c.spec.levels[l]);
        ++j;
      }
    }
  }
  return dm;
}

std::vector<std::size_t> complete_rows(const csv::Table& table,
                                       const std::vector<std::string>& columns) {
  std::vector<std::size_t> idx;
  for (const auto& name : columns)
    if (table.column_index(name) < 0)
      throw SchemaError("column '" + name + "' not found in input");
  std::vector<std::size_t> cols;
  for (const auto& name : columns)
    cols.push_back(static_cast<std::size_t>(table.column_index(name)));
  for (std::size_t r = 0; r < table.nrow(); ++r) {
    bool ok = true;
    for (auto j : cols)
      if (is_missing_cell(table.rows[r][j])) {
        ok = false;
        break;
      }
    if (ok) idx.push_back(r);
  }
  return idx;
}

DesignMatrix encode_rows(const csv::Table& table,
                         const std::vector<VariableSpec>& specs,
                         const std::vector<std::size_t>& rows) {
  DesignMatrix dm;
  Eigen::Index p = 0;
  for (const auto& s : specs)
    p += s.kind == VarKind::numeric ? 1 : static_cast<Eigen::Index>(s.levels.size()) - 1;
  dm.values.setZero(static_cast<Eigen::Index>(rows.size()), p);

  Eigen::Index j = 0;
  for (const auto& s : specs) {
    long cidx = table.column_index(s.name);
    if (cidx < 0) throw SchemaError("column '" + s.name + "' not found in input");
    const auto c = static_cast<std::size_t>(cidx);
    if (s.kind == VarKind::numeric) {
      for (std::size_t i = 0; i < rows.size(); ++i)
        dm.values(static_cast<Eigen::Index>(i), j) =
            parse_numeric_cell(table.rows[rows[i]][c], rows[i] + 2, s.name, "input");
      dm.names.push_back(s.name);
      dm.source.emplace_back(s.name, "");
      ++j;
    } else {
      std::vector<int> codes(rows.size());
      for (std::size_t i = 0; i < rows.size(); ++i) {
        const std::string& cell = table.rows[rows[i]][c];
        int code = s.level_index(cell);
        if (code < 0)
          throw SchemaError("unseen level '" + cell + "' in column '" + s.name +
                            "' (row " + std::to_string(rows[i] + 2) + ")");
        codes[i] = code;
      }
      for (std::size_t l = 1; l < s.levels.size(); ++l) {
        for (std::size_t i = 0; i < rows.size(); ++i)
          dm.values(static_cast<Eigen::Index>(i), j) =
              codes[i] == static_cast<int>(l) ? 1.0 : 0.0;
        dm.names.push_back(s.name + s.levels[l]);
        dm.source.emplace_back(s.name, s.levels[l]);
        ++j;
      }
    }
  }
  return dm;
}

}  // namespace fairfit
