#pragma once

// Demand/supply diagnostics on value-form accounts. An industry creates
// recession when its demand D_k falls short of its supply S_k = X_k + I_k;
// the recession ratio relates the total shortfall to gross value added.

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>
#include <vector>

#include "eqrec/errors.hpp"
#include "eqrec/leontief.hpp"
#include "eqrec/linalg.hpp"

namespace eqrec {

/// D_k = sum_i X_ki pi_i X_i / sum_s X_si
///     + C^f_k [sum_i (1-pi_i) X_i + sum_ij X_ij pi_j] / sum_s C^f_s
///     + E_k sum_s I_s / sum_s E_s
///     - sum_i X_ki pi_i.
/// Industries without intermediate inputs contribute nothing to the first
/// term; the trade term is zero when there is no trade at all.
inline Vec demand_vector(const IOAccounts& acc) {
  acc.validate();
  const Index m = acc.industries();
  double cf_total = 0.0, export_total = 0.0, import_total = 0.0;
  for (Index s = 0; s < m; ++s) {
    cf_total += acc.final_consumption(s);
    export_total += acc.exports(s);
    import_total += acc.imports(s);
  }
  require(cf_total > 0.0, ErrorCode::kZeroDenominator, "total final consumption is zero");
  require(export_total > 0.0 || import_total == 0.0, ErrorCode::kZeroDenominator,
          "total exports are zero while imports are not");

  double household = 0.0;
  for (Index i = 0; i < m; ++i) {
    household += (1.0 - acc.pi(i)) * acc.gross_output(i);
    for (Index j = 0; j < m; ++j) household += acc.flows(i, j) * acc.pi(j);
  }
  std::vector<double> input_cost(static_cast<std::size_t>(m), 0.0);
  for (Index i = 0; i < m; ++i)
    for (Index s = 0; s < m; ++s) input_cost[static_cast<std::size_t>(i)] += acc.flows(s, i);

  Vec d(m);
  for (Index k = 0; k < m; ++k) {
    double production = 0.0, retained = 0.0;
    for (Index i = 0; i < m; ++i) {
      const double cost = input_cost[static_cast<std::size_t>(i)];
      if (cost > 0.0) production += acc.flows(k, i) * acc.pi(i) * acc.gross_output(i) / cost;
      retained += acc.flows(k, i) * acc.pi(i);
    }
    const double trade = export_total > 0.0 ? acc.exports(k) * import_total / export_total : 0.0;
    d(k) = production + acc.final_consumption(k) * household / cf_total + trade - retained;
  }
  return d;
}

/// S_k = X_k + I_k.
inline Vec supply_vector(const IOAccounts& acc) {
  require(acc.gross_output.size() == acc.imports.size(), ErrorCode::kDimensionMismatch,
          "gross output vs imports");
  return acc.gross_output + acc.imports;
}

/// Gross value added from the same table: sum X_s - sum X_ij.
inline double gross_value_added(const IOAccounts& acc) {
  return acc.gross_output.sum() - acc.flows.sum();
}

struct RecessionSet {
  IndexSet industries;
  Vec shortfall;  // |D_k - S_k| for each listed industry
};

/// {k : D_k - S_k < -tol * max(1, S_k)}; tol = 0 is the strict sign test.
inline RecessionSet recession_industries(const Vec& demand, const Vec& supply, double tol = 0.0) {
  require(demand.size() == supply.size(), ErrorCode::kDimensionMismatch, "D vs S length");
  RecessionSet out;
  std::vector<double> gaps;
  for (Index k = 0; k < demand.size(); ++k) {
    const double gap = demand(k) - supply(k);
    if (gap < -tol * std::max(1.0, supply(k))) {
      out.industries.push_back(k);
      gaps.push_back(-gap);
    }
  }
  out.shortfall = Eigen::Map<const Vec>(gaps.data(), static_cast<Index>(gaps.size()));
  return out;
}

/// Total shortfall over gross value added.
inline double recession_ratio(const IOAccounts& acc, const Vec& demand, const Vec& supply,
                              double tol = 0.0) {
  const double gdp = gross_value_added(acc);
  require(gdp > 0.0, ErrorCode::kNonpositiveGdp,
          "gross value added is " + std::to_string(gdp));
  return recession_industries(demand, supply, tol).shortfall.sum() / gdp;
}

enum class RankingMode {
  kSensitive,     // shortfall relative to gross output
  kContributing,  // absolute shortfall
};

struct RankedIndustry {
  Index index = 0;
  std::string name;
  double shortfall = 0.0;
  double gross_output = 0.0;
  double imports = 0.0;
  double exports = 0.0;
};

struct RecessionReport {
  Vec demand;
  Vec supply;
  Vec deficit;  // D - S
  RecessionSet recession;
  double ratio = 0.0;
  double gdp = 0.0;
  double tol = 0.0;
  Vec gross_output;
  Vec imports;
  Vec exports;
};

inline RecessionReport analyze_recession(const IOAccounts& acc, double tol = 0.0) {
  RecessionReport out;
  out.tol = tol;
  out.demand = demand_vector(acc);
  out.supply = supply_vector(acc);
  out.deficit = out.demand - out.supply;
  out.recession = recession_industries(out.demand, out.supply, tol);
  out.gdp = gross_value_added(acc);
  out.ratio = recession_ratio(acc, out.demand, out.supply, tol);
  out.gross_output = acc.gross_output;
  out.imports = acc.imports;
  out.exports = acc.exports;
  return out;
}

/// Top-k recession industries. Ties keep industry order. Names are taken from
/// `names` when it has an entry for the industry, else the 1-based code.
inline std::vector<RankedIndustry> rank_industries(const RecessionReport& report, std::size_t k,
                                                   RankingMode mode,
                                                   const std::vector<std::string>& names = {}) {
  std::vector<RankedIndustry> rows;
  const IndexSet& set = report.recession.industries;
  for (std::size_t r = 0; r < set.size(); ++r) {
    const Index i = set[r];
    RankedIndustry row;
    row.index = i;
    const auto ui = static_cast<std::size_t>(i);
    row.name = ui < names.size() && !names[ui].empty() ? names[ui] : std::to_string(i + 1);
    row.shortfall = report.recession.shortfall(static_cast<Index>(r));
    row.gross_output = report.gross_output(i);
    row.imports = report.imports(i);
    row.exports = report.exports(i);
    rows.push_back(std::move(row));
  }
  auto key = [mode](const RankedIndustry& row) {
    if (mode == RankingMode::kContributing) return row.shortfall;
    return row.gross_output > 0.0 ? row.shortfall / row.gross_output
                                  : std::numeric_limits<double>::infinity();
  };
  std::stable_sort(rows.begin(), rows.end(),
                   [&](const RankedIndustry& a, const RankedIndustry& b) { return key(a) > key(b); });
  if (rows.size() > k) rows.resize(k);
  return rows;
}

}  // namespace eqrec
