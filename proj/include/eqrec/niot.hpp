#pragma once

// National input-output tables in the normalized CSV schema:
//
//   industry_index,industry_name,X_1,...,X_m,final_consumption,gcf_inventory,export,import,gross_output
//
// one row per supplying industry, plus an optional meta.csv with
// country,year,currency.

#include <filesystem>
#include <fstream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "eqrec/csv.hpp"
#include "eqrec/errors.hpp"
#include "eqrec/leontief.hpp"
#include "eqrec/linalg.hpp"
#include "eqrec/registries.hpp"

namespace eqrec {

struct NiotTable {
  std::string country;
  std::optional<long> year;
  std::string currency;
  std::vector<std::string> names;  // as written in the file, possibly empty
  Mat flows;
  Vec household_consumption;
  Vec gcf_inventory;
  Vec exports;
  Vec imports;
  Vec gross_output;
  std::vector<std::string> warnings;

  Index industries() const { return flows.rows(); }

  Vec final_consumption() const { return household_consumption + gcf_inventory; }

  /// File name, else the built-in registry name, else the 1-based code.
  std::vector<std::string> display_names() const {
    const auto m = static_cast<std::size_t>(industries());
    const auto registry = registry_for(m);
    std::vector<std::string> out(m);
    for (std::size_t k = 0; k < m; ++k) {
      if (k < names.size() && !names[k].empty()) out[k] = names[k];
      else if (registry) out[k] = (*registry)[k];
      else out[k] = std::to_string(k + 1);
    }
    return out;
  }

  IOAccounts accounts(const Vec& pi) const {
    IOAccounts acc{flows, gross_output, final_consumption(), exports, imports, pi};
    acc.validate();
    return acc;
  }
};

struct ParseOptions {
  bool clamp_negative = false;
};

inline std::string niot_header(Index m) {
  csv::Row h = {"industry_index", "industry_name"};
  for (Index i = 1; i <= m; ++i) h.push_back("X_" + std::to_string(i));
  for (const char* c : {"final_consumption", "gcf_inventory", "export", "import", "gross_output"})
    h.emplace_back(c);
  return csv::join(h);
}

inline NiotTable parse_niot_text(const std::string& text, const ParseOptions& opt = {}) {
  const auto rows = csv::parse(text);
  if (rows.empty()) throw SchemaError(1, 1, "empty file");
  const csv::Row& header = rows.front();
  if (header.size() < 8) throw SchemaError(1, header.size(), "header has too few columns");
  const Index m = static_cast<Index>(header.size()) - 7;
  const auto expected = csv::parse(niot_header(m)).front();
  for (std::size_t c = 0; c < header.size(); ++c) {
    if (header[c] != expected[c])
      throw SchemaError(1, c + 1, "expected header '" + expected[c] + "', found '" + header[c] + "'");
  }
  if (static_cast<Index>(rows.size()) - 1 != m)
    throw SchemaError(rows.size(), 1,
                      "expected " + std::to_string(m) + " industry rows, found " +
                          std::to_string(rows.size() - 1));

  NiotTable t;
  t.flows = Mat::Zero(m, m);
  t.household_consumption = Vec::Zero(m);
  t.gcf_inventory = Vec::Zero(m);
  t.exports = Vec::Zero(m);
  t.imports = Vec::Zero(m);
  t.gross_output = Vec::Zero(m);
  for (Index k = 0; k < m; ++k) {
    const csv::Row& row = rows[static_cast<std::size_t>(k) + 1];
    const std::size_t line = static_cast<std::size_t>(k) + 2;
    if (row.size() != header.size())
      throw SchemaError(line, row.size(), "expected " + std::to_string(header.size()) + " fields");
    const auto index = csv::to_long(row[0]);
    if (!index || *index != k + 1)
      throw SchemaError(line, 1, "industry_index must be " + std::to_string(k + 1));
    t.names.push_back(row[1]);
    auto cell = [&](std::size_t c) {
      const auto v = csv::to_double(row[c]);
      if (!v) throw SchemaError(line, c + 1, "not a finite number: '" + row[c] + "'");
      if (*v < 0.0) {
        const std::string where = "row " + std::to_string(line) + ", column " +
                                  std::to_string(c + 1) + " (" + header[c] + ")";
        if (!opt.clamp_negative)
          throw Error(ErrorCode::kNegativeValue, where + " is " + row[c]);
        t.warnings.push_back("clamped negative value " + row[c] + " at " + where);
        return 0.0;
      }
      return *v;
    };
    for (Index i = 0; i < m; ++i) t.flows(k, i) = cell(static_cast<std::size_t>(i) + 2);
    const auto base = static_cast<std::size_t>(m) + 2;
    t.household_consumption(k) = cell(base);
    t.gcf_inventory(k) = cell(base + 1);
    t.exports(k) = cell(base + 2);
    t.imports(k) = cell(base + 3);
    t.gross_output(k) = cell(base + 4);
  }
  return t;
}

inline std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  require(static_cast<bool>(in), ErrorCode::kConfigError, "cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

struct NiotMeta {
  std::string country;
  std::optional<long> year;
  std::string currency;
};

inline NiotMeta parse_meta_text(const std::string& text) {
  const auto rows = csv::parse(text);
  if (rows.empty()) throw SchemaError(1, 1, "empty meta file");
  const csv::Row expected = {"country", "year", "currency"};
  if (rows[0] != expected) throw SchemaError(1, 1, "meta header must be country,year,currency");
  if (rows.size() != 2) throw SchemaError(rows.size(), 1, "meta file must have one data row");
  if (rows[1].size() != 3) throw SchemaError(2, rows[1].size(), "expected 3 fields");
  NiotMeta meta{rows[1][0], std::nullopt, rows[1][2]};
  if (!csv::trim(rows[1][1]).empty()) {
    meta.year = csv::to_long(rows[1][1]);
    if (!meta.year) throw SchemaError(2, 2, "year must be an integer");
  }
  return meta;
}

/// Parses a table; meta.csv is taken from `meta_path` if given, else from a
/// sibling file named meta.csv when one exists.
inline NiotTable parse_niot(const std::filesystem::path& path,
                            const std::optional<std::filesystem::path>& meta_path = std::nullopt,
                            const ParseOptions& opt = {}) {
  NiotTable t = parse_niot_text(read_file(path), opt);
  std::optional<std::filesystem::path> meta = meta_path;
  if (!meta) {
    const auto sibling = path.parent_path() / "meta.csv";
    if (std::filesystem::exists(sibling)) meta = sibling;
  }
  if (meta) {
    const NiotMeta m = parse_meta_text(read_file(*meta));
    t.country = m.country;
    t.year = m.year;
    t.currency = m.currency;
  }
  return t;
}

inline std::string serialize_niot(const NiotTable& t) {
  const Index m = t.industries();
  std::string out = niot_header(m) + "\n";
  for (Index k = 0; k < m; ++k) {
    csv::Row row = {std::to_string(k + 1),
                    static_cast<std::size_t>(k) < t.names.size() ? t.names[static_cast<std::size_t>(k)]
                                                                 : std::string()};
    for (Index i = 0; i < m; ++i) row.push_back(csv::format_exact(t.flows(k, i)));
    for (const Vec* v : {&t.household_consumption, &t.gcf_inventory, &t.exports, &t.imports,
                         &t.gross_output})
      row.push_back(csv::format_exact((*v)(k)));
    out += csv::join(row) + "\n";
  }
  return out;
}

inline std::string serialize_meta(const NiotTable& t) {
  return "country,year,currency\n" +
         csv::join({t.country, t.year ? std::to_string(*t.year) : std::string(), t.currency}) +
         "\n";
}

}  // namespace eqrec
