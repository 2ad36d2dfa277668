#pragma once

// Run configuration: taxation shares, tolerances, aggregation, output.

#include <cmath>
#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "eqrec/csv.hpp"
#include "eqrec/errors.hpp"
#include "eqrec/leontief.hpp"
#include "eqrec/linalg.hpp"
#include "eqrec/niot.hpp"

namespace eqrec {

enum class OutputFormat { kJson, kCsv, kText };

inline OutputFormat parse_format(const std::string& s) {
  if (s == "json") return OutputFormat::kJson;
  if (s == "csv") return OutputFormat::kCsv;
  if (s == "text") return OutputFormat::kText;
  throw Error(ErrorCode::kConfigError, "unknown format '" + s + "'");
}

/// Scalar broadcast or one share per industry.
using PiSpec = std::variant<double, Vec>;

struct BlockMap {
  AggregationMap map;
  std::vector<std::string> names;
};

struct RunConfig {
  PiSpec pi = 1.0;
  double recession_tol = 0.0;  // band for the recession sign test
  double tol = kDefaultTol;
  double rho_tol = 1e-6;
  double pf_tol = 1e-10;
  double cone_tol = 1e-8;
  double rank_tol = 1e-8;
  std::optional<BlockMap> aggregation;
  OutputFormat format = OutputFormat::kJson;
  std::size_t top_k = 4;
  std::uint64_t seed = 42;

  void validate() const {
    require(recession_tol >= 0.0, ErrorCode::kConfigError, "recession tolerance must be >= 0");
    for (double t : {tol, rho_tol, pf_tol, cone_tol, rank_tol})
      require(t > 0.0 && std::isfinite(t), ErrorCode::kConfigError, "tolerances must be > 0");
    auto check_share = [](double v) {
      require(v >= 0.0 && v <= 1.0, ErrorCode::kConfigError,
              "pi entries must lie in [0,1], got " + csv::format_exact(v));
    };
    if (const double* s = std::get_if<double>(&pi)) {
      check_share(*s);
    } else {
      for (double v : std::get<Vec>(pi)) check_share(v);
    }
  }

  /// Effective per-industry shares for a table with m industries.
  Vec resolve_pi(Index m) const {
    validate();
    if (const double* s = std::get_if<double>(&pi)) return Vec::Constant(m, *s);
    const Vec& v = std::get<Vec>(pi);
    require(v.size() == m, ErrorCode::kConfigError,
            "pi has " + std::to_string(v.size()) + " entries, table has " + std::to_string(m) +
                " industries");
    return v;
  }

  SolverOptions solver_options() const {
    SolverOptions opt;
    opt.pf_tol = pf_tol;
    opt.cone_tol = cone_tol;
    opt.tol = tol;
    return opt;
  }

  LeontiefOptions leontief_options() const {
    LeontiefOptions opt;
    opt.tol = tol;
    opt.rho_tol = rho_tol;
    opt.solver = solver_options();
    return opt;
  }
};

/// A number is a scalar broadcast; anything else names a CSV file holding
/// the shares, one per industry, optionally under a single header line.
inline PiSpec parse_pi_spec(const std::string& text) {
  if (const auto v = csv::to_double(text)) return *v;
  require(std::filesystem::exists(text), ErrorCode::kConfigError,
          "--pi is neither a number nor an existing file: " + text);
  const auto rows = csv::parse(read_file(text));
  std::vector<double> values;
  for (std::size_t r = 0; r < rows.size(); ++r) {
    for (const auto& field : rows[r]) {
      if (csv::trim(field).empty()) continue;
      const auto v = csv::to_double(field);
      if (!v) {
        if (r == 0) break;  // header line
        throw Error(ErrorCode::kConfigError, "pi file: not a number '" + field + "'");
      }
      values.push_back(*v);
    }
  }
  require(!values.empty(), ErrorCode::kConfigError, "pi file has no values");
  return Vec(Eigen::Map<const Vec>(values.data(), static_cast<Index>(values.size())));
}

/// Map file with header industry_index,block[,block_name]; block ids are
/// positive integers and blocks are ordered by id.
inline BlockMap parse_aggregation_map_text(const std::string& text, Index m) {
  const auto rows = csv::parse(text);
  if (rows.empty()) throw SchemaError(1, 1, "empty aggregation map");
  const bool named = rows[0].size() == 3;
  if (rows[0].size() < 2 || rows[0].size() > 3 || rows[0][0] != "industry_index" ||
      rows[0][1] != "block" || (named && rows[0][2] != "block_name"))
    throw SchemaError(1, 1, "aggregation map header must be industry_index,block[,block_name]");
  std::map<long, IndexSet> blocks;
  std::map<long, std::string> block_names;
  std::vector<char> seen(static_cast<std::size_t>(m), 0);
  for (std::size_t r = 1; r < rows.size(); ++r) {
    const auto& row = rows[r];
    if (row.size() != rows[0].size()) throw SchemaError(r + 1, row.size(), "wrong field count");
    const auto idx = csv::to_long(row[0]);
    if (!idx || *idx < 1 || *idx > m) throw SchemaError(r + 1, 1, "industry_index out of range");
    const auto block = csv::to_long(row[1]);
    if (!block || *block < 1) throw SchemaError(r + 1, 2, "block must be a positive integer");
    auto& flag = seen[static_cast<std::size_t>(*idx - 1)];
    if (flag) throw SchemaError(r + 1, 1, "industry listed twice");
    flag = 1;
    blocks[*block].push_back(*idx - 1);
    if (named && !row[2].empty()) block_names[*block] = row[2];
  }
  for (Index k = 0; k < m; ++k)
    if (!seen[static_cast<std::size_t>(k)])
      throw Error(ErrorCode::kBlockMismatch, "industry " + std::to_string(k + 1) + " has no block");
  std::vector<IndexSet> list;
  std::vector<std::string> names;
  for (auto& [id, members] : blocks) {
    list.push_back(sorted_unique(std::move(members)));
    const auto it = block_names.find(id);
    names.push_back(it != block_names.end() ? it->second : "block " + std::to_string(id));
  }
  return {AggregationMap(std::move(list), m), std::move(names)};
}

}  // namespace eqrec
