#pragma once

// End-to-end pipelines behind the command-line tool.

#include <optional>
#include <random>
#include <string>
#include <vector>

#include "json.hpp"

#include "eqrec/config.hpp"
#include "eqrec/core_model.hpp"
#include "eqrec/csv.hpp"
#include "eqrec/leontief.hpp"
#include "eqrec/niot.hpp"
#include "eqrec/recession.hpp"
#include "eqrec/sampling.hpp"
#include "eqrec/structure.hpp"

namespace eqrec {

using ojson = nlohmann::ordered_json;

/// Accounts and display names after applying pi and the optional aggregation.
struct PreparedTable {
  IOAccounts accounts;
  std::vector<std::string> names;
  bool aggregated = false;
};

inline PreparedTable prepare_table(const NiotTable& table, const RunConfig& config) {
  PreparedTable out;
  out.accounts = table.accounts(config.resolve_pi(table.industries()));
  out.names = table.display_names();
  if (config.aggregation) {
    out.accounts = aggregate_accounts(out.accounts, config.aggregation->map);
    out.names = config.aggregation->names;
    out.aggregated = true;
  }
  return out;
}

struct AnalyzeResult {
  std::string country;
  std::optional<long> year;
  std::string currency;
  PreparedTable table;
  RecessionReport report;
  std::vector<RankedIndustry> sensitive;
  std::vector<RankedIndustry> contributing;
  std::size_t top_k = 0;
  double value_balance_error = 0.0;  // |sum D - sum S| / sum S
  std::vector<std::string> warnings;
};

inline AnalyzeResult run_analyze(const NiotTable& table, const RunConfig& config) {
  config.validate();
  AnalyzeResult out;
  out.country = table.country;
  out.year = table.year;
  out.currency = table.currency;
  out.table = prepare_table(table, config);
  out.report = analyze_recession(out.table.accounts, config.recession_tol);
  out.top_k = config.top_k;
  out.sensitive = rank_industries(out.report, config.top_k, RankingMode::kSensitive, out.table.names);
  out.contributing =
      rank_industries(out.report, config.top_k, RankingMode::kContributing, out.table.names);
  const double supply_total = out.report.supply.sum();
  out.value_balance_error =
      supply_total > 0.0 ? std::abs(out.report.demand.sum() - supply_total) / supply_total : 0.0;
  out.warnings = table.warnings;
  const Vec flows_in = out.table.accounts.flows.colwise().sum().transpose();
  for (Index i = 0; i < flows_in.size(); ++i)
    if (flows_in(i) <= 0.0)
      out.warnings.push_back("industry " + std::to_string(i + 1) +
                             " has no intermediate inputs; its production term is zero");
  return out;
}

struct EquilibriumRun {
  std::string country;
  std::optional<long> year;
  PreparedTable table;
  std::optional<Theorem9Solution> solution;
  bool rho_not_one = false;
  ValueEquilibriumReport value;
  bool certified = false;
};

/// Production-cone solve plus the value-form balance check. A spectral radius other
/// than one is reported, not thrown; other computation errors propagate.
inline EquilibriumRun run_equilibrium(const NiotTable& table, const RunConfig& config) {
  config.validate();
  EquilibriumRun out;
  out.country = table.country;
  out.year = table.year;
  out.table = prepare_table(table, config);
  out.value = check_value_equilibrium(out.table.accounts, config.tol);
  try {
    out.solution = theorem9_solve(out.table.accounts, config.leontief_options());
  } catch (const RhoNotOneError& e) {
    out.solution = e.partial();
    out.rho_not_one = true;
  }
  out.certified = !out.rho_not_one && out.solution->certified;
  return out;
}

// ---------------------------------------------------------------------------
// Built-in demo fixtures

struct Transcript {
  std::string fixture;
  ojson steps = ojson::array();
  bool passed = true;

  void step(const std::string& name, bool ok, ojson details) {
    ojson s;
    s["step"] = name;
    s["passed"] = ok;
    s["details"] = std::move(details);
    steps.push_back(std::move(s));
    passed = passed && ok;
  }

  ojson to_json() const {
    ojson j;
    j["fixture"] = fixture;
    j["passed"] = passed;
    j["steps"] = steps;
    return j;
  }
};

namespace demo {

inline ojson number(double v) {
  if (!std::isfinite(v)) return v > 0 ? ojson("inf") : v < 0 ? ojson("-inf") : ojson("nan");
  return csv::round_sig6(v);
}

inline ojson vec(const Vec& v) {
  ojson a = ojson::array();
  for (Index k = 0; k < v.size(); ++k) a.push_back(number(v(k)));
  return a;
}

inline ojson mat(const Mat& m) {
  ojson a = ojson::array();
  for (Index r = 0; r < m.rows(); ++r) a.push_back(vec(m.row(r).transpose()));
  return a;
}

inline ojson set(const IndexSet& s) {
  ojson a = ojson::array();
  for (Index k : s) a.push_back(k + 1);
  return a;
}

inline double rel_diff(const Mat& a, const Mat& b) {
  return (a - b).cwiseAbs().maxCoeff() / std::max(1.0, b.cwiseAbs().maxCoeff());
}

inline ojson report_json(const EquilibriumReport& r) {
  ojson j;
  j["demand"] = vec(r.demand);
  j["equality_set"] = set(r.equality_set);
  j["is_equilibrium"] = r.is_equilibrium;
  j["residual"] = vec(r.residual);
  j["strict_set"] = set(r.strict_set);
  j["y"] = vec(r.y);
  return j;
}

inline void e1(Transcript& t) {
  Mat c(2, 2), b(2, 2);
  c << 1, 1, 1, 0;
  b << 4.0 / 3, 2.0 / 3, 2.0 / 3, 1.0 / 3;
  const ExchangeEconomy econ(c, b);
  const PriceVector p(Vec::Ones(2));
  t.step("economy", true, {{"B", mat(b)}, {"C", mat(c)}, {"psi", vec(econ.supply())}});

  const EquilibriumReport rep = check_equilibrium(econ, p);
  t.step("check_equilibrium at p = (1,1)", rep.is_equilibrium && rep.strict_set.empty(),
         report_json(rep));

  const Vec psi_bar = c * rep.y;
  const CertificateCheck cert = verify_certificate(econ, p, rep.y, psi_bar);
  ojson failed = ojson::array();
  for (const auto& f : cert.failed) failed.push_back(f);
  t.step("verify_certificate", cert.valid, {{"failed", failed}, {"psi_bar", vec(psi_bar)}});

  const Decomposition dec = decompose_property(econ, p, {0, 1});
  const Mat again = synthesize_property(c, p, dec.parts);
  const double err = rel_diff(again, b);
  t.step("decompose and synthesize", err <= 1e-9,
         {{"a", mat(dec.parts.a)}, {"relative_error", number(err)}, {"transfers", mat(dec.transfers)}});

  Vec off(2);
  off << 1.0, 10.0;
  const EquilibriumReport bad = check_equilibrium(econ, PriceVector(off));
  t.step("check_equilibrium at p = (1,10) is rejected", !bad.is_equilibrium, report_json(bad));

  const double money = real_money_value(p, econ.supply());
  t.step("real money value at p = (1,1)", std::abs(money - 0.5) <= 1e-12,
         {{"value", number(money)}});
}

inline void e2(Transcript& t, double b21) {
  Mat c(2, 2), b(2, 2);
  c << 1, 1, 1, 0;
  b << 1, 1, b21, 1.0 - b21;
  const ExchangeEconomy econ(c, b);
  Vec pv(2);
  pv << 1.0, 0.0;
  const PriceVector p(pv);
  t.step("economy", true,
         {{"B", mat(b)}, {"C", mat(c)}, {"b21", number(b21)}, {"psi", vec(econ.supply())}});

  const EquilibriumReport rep = check_equilibrium(econ, p);
  t.step("check_equilibrium at p = (1,0)", rep.is_equilibrium, report_json(rep));

  const DegenerateTransform tr = degenerate_transform(econ, p, {0});
  const bool equivalent = is_equivalent(b, tr.property, p);
  t.step("degenerate_transform with I = {1}", equivalent,
         {{"B_bar", mat(tr.property)}, {"equivalent", equivalent}, {"transfer", mat(tr.transfer)}});

  const ExchangeEconomy transformed = econ.with_property(tr.property);
  ojson family = ojson::array();
  bool all_ok = true;
  for (double q2 : {0.0, 0.5, 1.0, 2.0, 10.0}) {
    Vec q(2);
    q << 1.0, q2;
    const EquilibriumReport r = check_equilibrium(transformed, PriceVector(q));
    const double err = r.residual.cwiseAbs().maxCoeff();
    all_ok = all_ok && r.is_equilibrium && err <= 1e-9;
    family.push_back({{"max_residual", number(err)}, {"q2", number(q2)}});
  }
  t.step("q = (1, q2) family stays in equilibrium", all_ok, {{"samples", family}});

  const Index mult = degeneracy_multiplicity(tr.property, c, tr.y);
  t.step("degeneracy multiplicity", mult >= tr.multiplicity_lower_bound,
         {{"lower_bound", tr.multiplicity_lower_bound}, {"multiplicity", mult}});

  const MoneyValueRange range = money_value_range(p, transformed.supply(), {1});
  t.step("money value range over the family", range.lower == 0.0 && std::isinf(range.upper),
         {{"lower", number(range.lower)}, {"upper", number(range.upper)}});
}

struct RandomSpec {
  std::uint64_t seed = 42;
  Index n = 4;
  Index l = 3;
  Index support = 2;
};

inline RandomSpec parse_random_spec(const std::string& spec, std::uint64_t default_seed) {
  RandomSpec out;
  out.seed = default_seed;
  const auto colon = spec.find(':');
  if (colon == std::string::npos) return out;
  const auto fields = csv::parse(spec.substr(colon + 1));
  if (fields.empty()) return out;
  for (const auto& kv : fields.front()) {
    const auto eq = kv.find('=');
    if (eq == std::string::npos)
      throw Error(ErrorCode::kUnknownFixture, "malformed random fixture field '" + kv + "'");
    const std::string key = std::string(csv::trim(kv.substr(0, eq)));
    const auto value = csv::to_long(kv.substr(eq + 1));
    if (!value || *value < 0)
      throw Error(ErrorCode::kUnknownFixture, "random fixture field '" + kv + "' is not a count");
    if (key == "seed") out.seed = static_cast<std::uint64_t>(*value);
    else if (key == "n") out.n = *value;
    else if (key == "l") out.l = *value;
    else if (key == "I") out.support = *value;
    else throw Error(ErrorCode::kUnknownFixture, "unknown random fixture field '" + key + "'");
  }
  if (out.n < 1 || out.l < 1 || out.support < 1 || out.support > out.n)
    throw Error(ErrorCode::kUnknownFixture, "random fixture needs n, l >= 1 and 1 <= I <= n");
  return out;
}

inline void random(Transcript& t, const RandomSpec& spec) {
  std::mt19937_64 rng(spec.seed);
  const RandomEquilibrium eq = random_equilibrium(rng, spec.n, spec.l, spec.support);
  const ExchangeEconomy econ(eq.demand, eq.property);
  t.step("sampled economy", true,
         {{"B", mat(eq.property)},
          {"C", mat(eq.demand)},
          {"I", set(eq.parts.support)},
          {"p", vec(eq.price.values())},
          {"seed", spec.seed}});

  const EquilibriumReport rep = check_equilibrium(econ, eq.price);
  const double res = rep.residual.cwiseAbs().maxCoeff();
  t.step("check_equilibrium", rep.is_equilibrium && res <= 1e-9, report_json(rep));

  const Decomposition dec = decompose_property(econ, eq.price, eq.parts.support);
  const double err = rel_diff(synthesize_property(eq.demand, eq.price, dec.parts), eq.property);
  t.step("decompose and synthesize", err <= 1e-9, {{"relative_error", number(err)}});

  const DegenerateTransform tr = degenerate_transform(econ, eq.price, eq.parts.support);
  const ExchangeEconomy transformed = econ.with_property(tr.property);
  const IndexSet zero_goods = complement(tr.support, spec.n);
  double worst = 0.0;
  bool all_ok = is_equivalent(eq.property, tr.property, eq.price);
  for (int draw = 0; draw < 100; ++draw) {
    Vec q = eq.price.values();
    for (Index k : zero_goods) q(k) = uniform(rng, 0.0, 5.0);
    const EquilibriumReport r = check_equilibrium(transformed, PriceVector(q));
    worst = std::max(worst, r.residual.cwiseAbs().maxCoeff());
    all_ok = all_ok && r.is_equilibrium;
  }
  t.step("degenerate family over 100 draws", all_ok && worst <= 1e-9,
         {{"max_residual", number(worst)}, {"zero_priced_goods", set(zero_goods)}});

  const Index mult = degeneracy_multiplicity(tr.property, eq.demand, tr.y);
  t.step("degeneracy multiplicity", mult >= tr.multiplicity_lower_bound,
         {{"lower_bound", tr.multiplicity_lower_bound}, {"multiplicity", mult}});

  Vec positive(spec.n);
  for (Index k = 0; k < spec.n; ++k) positive(k) = uniform(rng, 0.1, 3.0);
  const PriceVector pp(positive);
  const double walras = excess_demand(econ, pp).dot(pp.normalized());
  t.step("Walras identity at a positive price", std::abs(walras) <= 1e-9 * econ.supply().sum(),
         {{"value", number(walras)}});
}

}  // namespace demo

/// Runs a built-in fixture: "E1", "E2", "random" or "random:seed=..,n=..,l=..,I=..".
inline Transcript run_theorems(const std::string& spec, std::uint64_t seed = 42) {
  Transcript t;
  t.fixture = spec;
  if (spec == "E1") demo::e1(t);
  else if (spec == "E2") demo::e2(t, 0.25);
  else if (spec == "random" || spec.rfind("random:", 0) == 0) demo::random(t, demo::parse_random_spec(spec, seed));
  else throw Error(ErrorCode::kUnknownFixture, "unknown fixture '" + spec + "'");
  return t;
}

}  // namespace eqrec
