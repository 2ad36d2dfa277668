#pragma once

// Serializers for analysis results. JSON reports use a fixed top-level field
// order, alphabetical keys in nested objects and numbers rounded to 6
// significant digits, so equal inputs give byte-identical output. CSV tables
// keep full precision.

#include <sstream>
#include <string>
#include <vector>

#include "json.hpp"

#include "eqrec/csv.hpp"
#include "eqrec/workflow.hpp"

namespace eqrec {

namespace detail {

inline ojson year_json(const std::optional<long>& year) {
  return year ? ojson(*year) : ojson(nullptr);
}

inline ojson strings(const std::vector<std::string>& items) {
  ojson a = ojson::array();
  for (const auto& s : items) a.push_back(s);
  return a;
}

inline ojson ranking_rows(const std::vector<RankedIndustry>& rows) {
  ojson a = ojson::array();
  for (const auto& r : rows) {
    ojson j;
    j["demand_reduction"] = demo::number(r.shortfall);
    j["export"] = demo::number(r.exports);
    j["gross_output"] = demo::number(r.gross_output);
    j["import"] = demo::number(r.imports);
    j["index"] = r.index + 1;
    j["name"] = r.name;
    a.push_back(std::move(j));
  }
  return a;
}

}  // namespace detail

inline ojson analyze_json(const AnalyzeResult& r) {
  ojson j;
  j["country"] = r.country;
  j["year"] = detail::year_json(r.year);
  j["pi"] = demo::vec(r.table.accounts.pi);
  j["D"] = demo::vec(r.report.demand);
  j["S"] = demo::vec(r.report.supply);
  j["deficit"] = demo::vec(r.report.deficit);
  j["recession_set"] = demo::set(r.report.recession.industries);
  j["r"] = demo::number(r.report.ratio);
  j["gdp"] = demo::number(r.report.gdp);
  ojson rankings;
  rankings["contributing"] = detail::ranking_rows(r.contributing);
  rankings["sensitive"] = detail::ranking_rows(r.sensitive);
  rankings["top"] = r.top_k;
  j["rankings"] = std::move(rankings);
  ojson diag;
  diag["aggregated"] = r.table.aggregated;
  diag["currency"] = r.currency;
  diag["demand_total"] = demo::number(r.report.demand.sum());
  diag["industries"] = r.table.accounts.industries();
  diag["recession_tol"] = demo::number(r.report.tol);
  diag["supply_total"] = demo::number(r.report.supply.sum());
  diag["value_balance_error"] = demo::number(r.value_balance_error);
  diag["warnings"] = detail::strings(r.warnings);
  j["diagnostics"] = std::move(diag);
  return j;
}

/// industry_index,industry_name,demand,supply,deficit,recession
inline std::string deficits_csv(const AnalyzeResult& r) {
  std::string out = "industry_index,industry_name,demand,supply,deficit,recession\n";
  const auto& rep = r.report;
  for (Index k = 0; k < rep.demand.size(); ++k) {
    out += csv::join({std::to_string(k + 1), r.table.names[static_cast<std::size_t>(k)],
                      csv::format_exact(rep.demand(k)), csv::format_exact(rep.supply(k)),
                      csv::format_exact(rep.deficit(k)),
                      contains(rep.recession.industries, k) ? "1" : "0"}) +
           "\n";
  }
  return out;
}

/// Two-sided histogram data: negative deficits on the left, S_k on the right.
inline std::string histogram_csv(const AnalyzeResult& r) {
  std::string out = "industry_index,industry_name,deficit_left,supply_right\n";
  const auto& rep = r.report;
  for (Index k = 0; k < rep.demand.size(); ++k) {
    const double left = contains(rep.recession.industries, k) ? rep.deficit(k) : 0.0;
    out += csv::join({std::to_string(k + 1), r.table.names[static_cast<std::size_t>(k)],
                      csv::format_exact(left), csv::format_exact(rep.supply(k))}) +
           "\n";
  }
  return out;
}

inline std::string analyze_text(const AnalyzeResult& r) {
  std::ostringstream o;
  o << "country: " << (r.country.empty() ? "-" : r.country)
    << "  year: " << (r.year ? std::to_string(*r.year) : "-")
    << "  currency: " << (r.currency.empty() ? "-" : r.currency) << "\n";
  o << "industries: " << r.report.demand.size() << "  gdp: " << csv::format_sig6(r.report.gdp)
    << "  r: " << csv::format_sig6(r.report.ratio) << "\n\n";
  o << "idx  demand        supply        deficit       name\n";
  for (Index k = 0; k < r.report.demand.size(); ++k) {
    char line[128];
    std::snprintf(line, sizeof line, "%-4ld %-13s %-13s %-13s ", static_cast<long>(k + 1),
                  csv::format_sig6(r.report.demand(k)).c_str(),
                  csv::format_sig6(r.report.supply(k)).c_str(),
                  csv::format_sig6(r.report.deficit(k)).c_str());
    o << line << r.table.names[static_cast<std::size_t>(k)]
      << (contains(r.report.recession.industries, k) ? "  [recession]" : "") << "\n";
  }
  auto table = [&](const char* title, const std::vector<RankedIndustry>& rows) {
    o << "\n" << title << "\n";
    for (const auto& row : rows)
      o << "  " << row.index + 1 << "  reduction " << csv::format_sig6(row.shortfall)
        << "  output " << csv::format_sig6(row.gross_output) << "  import "
        << csv::format_sig6(row.imports) << "  export " << csv::format_sig6(row.exports) << "  "
        << row.name << "\n";
  };
  table("most sensitive:", r.sensitive);
  table("most contributing:", r.contributing);
  for (const auto& w : r.warnings) o << "warning: " << w << "\n";
  return o.str();
}

inline ojson equilibrium_json(const EquilibriumRun& r) {
  ojson j;
  j["country"] = r.country;
  j["year"] = detail::year_json(r.year);
  j["pi"] = demo::vec(r.table.accounts.pi);
  const Theorem9Solution& s = *r.solution;
  j["rho"] = demo::number(s.rho);
  j["certified"] = r.certified;
  j["y"] = demo::vec(s.y);
  j["p"] = s.p.size() ? demo::vec(s.p) : ojson(nullptr);
  j["equality_set"] = demo::set(s.equality_set);
  j["slack_set"] = demo::set(s.slack_set);
  ojson value;
  value["cleared"] = demo::set(r.value.cleared);
  value["deficit"] = demo::set(r.value.deficit);
  value["is_equilibrium"] = r.value.is_equilibrium;
  value["lhs"] = demo::vec(r.value.lhs);
  value["residual"] = demo::vec(r.value.residual);
  value["rhs"] = demo::vec(r.value.rhs);
  value["violated"] = demo::set(r.value.violated);
  j["value_equilibrium"] = std::move(value);
  ojson diag;
  diag["household_closure_gap"] = demo::number(s.household_closure_gap);
  diag["messages"] = detail::strings(s.diagnostics);
  diag["positivity_ok"] = s.positivity_ok;
  diag["rho_is_one"] = !r.rho_not_one;
  diag["seed_residual"] = demo::number(s.seed_residual);
  diag["seed_used"] = s.seed_used;
  diag["trade_closure_gap"] = demo::number(s.trade_closure_gap);
  j["diagnostics"] = std::move(diag);
  return j;
}

inline std::string equilibrium_text(const EquilibriumRun& r) {
  const Theorem9Solution& s = *r.solution;
  std::ostringstream o;
  o << "rho: " << csv::format_sig6(s.rho) << (r.rho_not_one ? "  (not 1)" : "") << "\n";
  o << "certified: " << (r.certified ? "yes" : "no") << "\n";
  o << "value-form equilibrium: " << (r.value.is_equilibrium ? "yes" : "no") << "\n";
  o << "idx  residual      y\n";
  for (Index k = 0; k < r.value.residual.size(); ++k)
    o << k + 1 << "    " << csv::format_sig6(r.value.residual(k)) << "    "
      << csv::format_sig6(s.y(k)) << "\n";
  for (const auto& d : s.diagnostics) o << "note: " << d << "\n";
  return o.str();
}

/// One row per industry: index, residual of the value balance, demand scale.
inline std::string equilibrium_csv(const EquilibriumRun& r) {
  const Theorem9Solution& s = *r.solution;
  std::string out = "industry_index,industry_name,lhs,rhs,residual,y,p\n";
  for (Index k = 0; k < r.value.residual.size(); ++k)
    out += csv::join({std::to_string(k + 1), r.table.names[static_cast<std::size_t>(k)],
                      csv::format_exact(r.value.lhs(k)), csv::format_exact(r.value.rhs(k)),
                      csv::format_exact(r.value.residual(k)), csv::format_exact(s.y(k)),
                      s.p.size() ? csv::format_exact(s.p(k)) : std::string()}) +
           "\n";
  return out;
}

inline std::string transcript_text(const Transcript& t) {
  std::ostringstream o;
  o << "fixture " << t.fixture << "\n";
  for (const auto& s : t.steps)
    o << (s["passed"].get<bool>() ? "[ok]   " : "[FAIL] ") << s["step"].get<std::string>() << "\n"
      << "       " << s["details"].dump() << "\n";
  o << (t.passed ? "all checks passed" : "some checks failed") << "\n";
  return o.str();
}

/// step,passed
inline std::string transcript_csv(const Transcript& t) {
  std::string out = "step,passed\n";
  for (const auto& s : t.steps)
    out += csv::join({s["step"].get<std::string>(), s["passed"].get<bool>() ? "1" : "0"}) + "\n";
  return out;
}

}  // namespace eqrec
