#pragma once

// National economy with m pure industries in Leontief form. Canonical data
// is value form (X_ki = p_k a_ki x_i and friends); physical form is derived at
// declared prices when an algorithm needs quantities.

#include <algorithm>
#include <cmath>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "eqrec/core_model.hpp"
#include "eqrec/errors.hpp"
#include "eqrec/linalg.hpp"
#include "eqrec/solvers.hpp"

namespace eqrec {

/// Value-form input-output accounts.
struct IOAccounts {
  Mat flows;              // X, m x m; X(k,i) = value of good k used by industry i
  Vec gross_output;       // X_k
  Vec final_consumption;  // C^f_k (household consumption + capital formation)
  Vec exports;            // E_k
  Vec imports;            // I_k
  Vec pi;                 // taxation shares in [0,1]

  Index industries() const { return flows.rows(); }

  void validate() const {
    const Index m = flows.rows();
    require(m > 0 && flows.cols() == m, ErrorCode::kDimensionMismatch, "flow matrix must be square");
    for (const Vec* v : {&gross_output, &final_consumption, &exports, &imports, &pi})
      require(v->size() == m, ErrorCode::kDimensionMismatch,
              "account vector length differs from industry count " + std::to_string(m));
    require(flows.allFinite() && gross_output.allFinite() && final_consumption.allFinite() &&
                exports.allFinite() && imports.allFinite() && pi.allFinite(),
            ErrorCode::kInvalidArgument, "non-finite account entry");
    require(all_nonnegative(flows) && all_nonnegative(gross_output) &&
                all_nonnegative(final_consumption) && all_nonnegative(exports) &&
                all_nonnegative(imports),
            ErrorCode::kInvalidArgument, "negative account entry");
    require((pi.array() >= 0.0).all() && (pi.array() <= 1.0).all(), ErrorCode::kInvalidArgument,
            "taxation shares must lie in [0,1]");
  }

  IOAccounts scaled(double alpha) const {
    return {alpha * flows, alpha * gross_output, alpha * final_consumption,
            alpha * exports, alpha * imports, pi};
  }
};

/// Physical-form accounts: technical coefficients and quantities.
struct PhysicalAccounts {
  Mat technology;         // A, a(k,i) = units of good k per unit of output i
  Vec output;             // x
  Vec final_consumption;  // c^f
  Vec exports;            // e
  Vec imports;            // i
  Vec pi;

  Index industries() const { return technology.rows(); }

  /// x - (A x + c^f + e - i).
  Vec balance_residual() const {
    return output - (technology * output + final_consumption + exports - imports);
  }
};

inline PhysicalAccounts to_physical(const IOAccounts& acc, const Vec& prices) {
  acc.validate();
  const Index m = acc.industries();
  require(prices.size() == m, ErrorCode::kDimensionMismatch, "price length vs industries");
  require((prices.array() > 0.0).all(), ErrorCode::kInvalidArgument, "prices must be positive");
  PhysicalAccounts phys;
  phys.output = acc.gross_output.cwiseQuotient(prices);
  phys.final_consumption = acc.final_consumption.cwiseQuotient(prices);
  phys.exports = acc.exports.cwiseQuotient(prices);
  phys.imports = acc.imports.cwiseQuotient(prices);
  phys.pi = acc.pi;
  phys.technology = Mat::Zero(m, m);
  for (Index i = 0; i < m; ++i) {
    if (phys.output(i) == 0.0) {
      require(acc.flows.col(i).isZero(0.0), ErrorCode::kZeroDenominator,
              "industry " + std::to_string(i) + " uses inputs but has zero output");
      continue;
    }
    for (Index k = 0; k < m; ++k)
      phys.technology(k, i) = acc.flows(k, i) / (prices(k) * phys.output(i));
  }
  return phys;
}

inline PhysicalAccounts to_physical(const IOAccounts& acc) {
  return to_physical(acc, Vec::Ones(acc.industries()));
}

inline IOAccounts to_value(const PhysicalAccounts& phys, const Vec& prices) {
  const Index m = phys.industries();
  require(prices.size() == m, ErrorCode::kDimensionMismatch, "price length vs industries");
  IOAccounts acc;
  acc.flows = prices.asDiagonal() * phys.technology * phys.output.asDiagonal();
  acc.gross_output = phys.output.cwiseProduct(prices);
  acc.final_consumption = phys.final_consumption.cwiseProduct(prices);
  acc.exports = phys.exports.cwiseProduct(prices);
  acc.imports = phys.imports.cwiseProduct(prices);
  acc.pi = phys.pi;
  return acc;
}

// ---------------------------------------------------------------------------
// Aggregation

/// Partition of n goods into m blocks and the summation map U it induces.
class AggregationMap {
 public:
  AggregationMap(std::vector<IndexSet> blocks, Index n) : blocks_(std::move(blocks)), n_(n) {
    std::vector<int> hits(static_cast<std::size_t>(n), 0);
    require(!blocks_.empty(), ErrorCode::kBlockMismatch, "aggregation needs at least one block");
    for (const IndexSet& block : blocks_) {
      require(!block.empty(), ErrorCode::kBlockMismatch, "empty aggregation block");
      for (Index k : block) {
        require(k >= 0 && k < n, ErrorCode::kBlockMismatch,
                "block member " + std::to_string(k) + " outside [0," + std::to_string(n) + ")");
        ++hits[static_cast<std::size_t>(k)];
      }
    }
    for (Index k = 0; k < n; ++k)
      require(hits[static_cast<std::size_t>(k)] == 1, ErrorCode::kBlockMismatch,
              "good " + std::to_string(k) + " must belong to exactly one block");
  }

  static AggregationMap identity(Index n) {
    std::vector<IndexSet> blocks;
    for (Index k = 0; k < n; ++k) blocks.push_back({k});
    return AggregationMap(std::move(blocks), n);
  }

  Index source_size() const { return n_; }
  Index blocks() const { return static_cast<Index>(blocks_.size()); }
  const IndexSet& block(Index b) const { return blocks_[static_cast<std::size_t>(b)]; }

  Mat matrix() const {
    Mat u = Mat::Zero(blocks(), n_);
    for (Index b = 0; b < blocks(); ++b)
      for (Index k : block(b)) u(b, k) = 1.0;
    return u;
  }

 private:
  std::vector<IndexSet> blocks_;
  Index n_;
};

/// Block sums of a vector, or of each column of a matrix (rows are goods).
inline Mat aggregate(const Mat& rows, const AggregationMap& map) {
  require(rows.rows() == map.source_size(), ErrorCode::kBlockMismatch,
          "aggregation expects " + std::to_string(map.source_size()) + " rows, got " +
              std::to_string(rows.rows()));
  Mat out = Mat::Zero(map.blocks(), rows.cols());
  for (Index b = 0; b < map.blocks(); ++b)
    for (Index k : map.block(b)) out.row(b) += rows.row(k);
  return out;
}

inline Vec aggregate(const Vec& v, const AggregationMap& map) {
  return aggregate(Mat(v), map).col(0);
}

inline ExchangeEconomy aggregate_economy(const ExchangeEconomy& econ, const AggregationMap& map) {
  return ExchangeEconomy(aggregate(econ.demand(), map), aggregate(econ.property(), map));
}

/// Aggregates accounts to blocks of industries. Flows are summed on both
/// sides; taxation shares are averaged with gross-output weights (plain mean
/// for blocks with zero output).
inline IOAccounts aggregate_accounts(const IOAccounts& acc, const AggregationMap& map) {
  acc.validate();
  IOAccounts out;
  const Mat u = map.matrix();
  require(u.cols() == acc.industries(), ErrorCode::kBlockMismatch,
          "aggregation map size differs from industry count");
  out.flows = u * acc.flows * u.transpose();
  out.gross_output = u * acc.gross_output;
  out.final_consumption = u * acc.final_consumption;
  out.exports = u * acc.exports;
  out.imports = u * acc.imports;
  out.pi.resize(map.blocks());
  for (Index b = 0; b < map.blocks(); ++b) {
    double weighted = 0.0, weight = 0.0, plain = 0.0;
    for (Index k : map.block(b)) {
      weighted += acc.pi(k) * acc.gross_output(k);
      weight += acc.gross_output(k);
      plain += acc.pi(k);
    }
    out.pi(b) = weight > 0.0 ? weighted / weight
                             : plain / static_cast<double>(map.block(b).size());
  }
  return out;
}

struct AggregationAgreement {
  bool agreed = false;
  bool aggregated_equilibrium = false;  // inequalities hold at p_u
  IndexSet disaggregated_equalities;    // blocks where the summed inequalities are tight
  IndexSet aggregated_equalities;
};

/// Whether aggregating to blocks is consistent with the equilibrium p0: the
/// aggregated economy clears at p_u with equality on the same blocks where
/// the block-summed disaggregated inequalities are tight.
inline AggregationAgreement check_aggregation_agreement(const ExchangeEconomy& econ,
                                                        const PriceVector& p0,
                                                        const AggregationMap& map,
                                                        const PriceVector& p_u,
                                                        double tol = kDefaultTol) {
  const EquilibriumReport fine = check_equilibrium(econ, p0, tol);
  require(fine.is_equilibrium, ErrorCode::kNotAnEquilibrium, "p0 is not an equilibrium");
  const Vec summed = aggregate(fine.residual, map);
  const Vec psi_u = aggregate(econ.supply(), map);

  AggregationAgreement out;
  for (Index b = 0; b < map.blocks(); ++b)
    if (std::abs(summed(b)) <= tol * std::max(1.0, psi_u(b)))
      out.disaggregated_equalities.push_back(b);

  const EquilibriumReport coarse = check_equilibrium(aggregate_economy(econ, map), p_u, tol);
  out.aggregated_equilibrium = coarse.is_equilibrium;
  out.aggregated_equalities = coarse.equality_set;
  out.agreed = out.aggregated_equilibrium &&
               out.aggregated_equalities == out.disaggregated_equalities;
  return out;
}

// ---------------------------------------------------------------------------
// Exchange economy built from the accounts

/// Exchange economy with m goods and up to 2m+1 agents. Industry i offers
/// pi_i x_i of its own good and demands its input column x_i a_{.i};
/// household i offers ((1-pi_i) x_i + (A pi x)_i) of good i and demands along
/// c^f; the trade agent offers imports and demands exports (omitted when both
/// are zero). Definition-1 excess demand at p then equals (D_k - S_k)/p_k.
inline ExchangeEconomy build_exchange_from_iot(const PhysicalAccounts& phys) {
  const Index m = phys.industries();
  const Mat& a = phys.technology;
  const Vec& x = phys.output;
  require(phys.final_consumption.sum() > 0.0, ErrorCode::kZeroDenominator,
          "final consumption is zero");
  const bool trade = phys.exports.sum() > 0.0 || phys.imports.sum() > 0.0;
  require(!trade || phys.exports.sum() > 0.0, ErrorCode::kZeroDenominator,
          "imports without exports");
  const Index agents = 2 * m + (trade ? 1 : 0);
  Mat demand = Mat::Zero(m, agents);
  Mat property = Mat::Zero(m, agents);
  const Vec taxed_inputs = a * phys.pi.cwiseProduct(x);
  for (Index i = 0; i < m; ++i) {
    demand.col(i) = x(i) * a.col(i);
    require(demand.col(i).sum() > 0.0, ErrorCode::kZeroDenominator,
            "industry " + std::to_string(i) + " has no intermediate inputs");
    property(i, i) = phys.pi(i) * x(i);
    demand.col(m + i) = phys.final_consumption;
    property(i, m + i) = (1.0 - phys.pi(i)) * x(i) + taxed_inputs(i);
  }
  if (trade) {
    demand.col(2 * m) = phys.exports;
    property.col(2 * m) = phys.imports;
  }
  return ExchangeEconomy(std::move(demand), std::move(property));
}

inline ExchangeEconomy build_exchange_from_iot(const IOAccounts& acc, const Vec& prices) {
  return build_exchange_from_iot(to_physical(acc, prices));
}

// ---------------------------------------------------------------------------
// Value-form equilibrium test

struct ValueEquilibriumReport {
  Vec lhs;
  Vec rhs;
  Vec residual;  // lhs - rhs
  IndexSet cleared;
  IndexSet deficit;
  IndexSet violated;
  bool is_equilibrium = false;
  double tol = kDefaultTol;
};

/// Left and right sides of the value-form inequalities
///   sum_i X_ki pi_i X_i / sum_s X_si + C^f_k H / sum C^f + E_k sum I / sum E
///     <= X_k + I_k + sum_i X_ki pi_i,
/// with H = sum (1-pi_i) X_i + sum_ij X_ij pi_j.
inline ValueEquilibriumReport check_value_equilibrium(const IOAccounts& acc,
                                                      double tol = kDefaultTol) {
  acc.validate();
  const Index m = acc.industries();
  const double cf_total = acc.final_consumption.sum();
  const double export_total = acc.exports.sum();
  const double import_total = acc.imports.sum();
  require(cf_total > 0.0, ErrorCode::kZeroDenominator, "total final consumption is zero");
  require(export_total > 0.0 || import_total == 0.0, ErrorCode::kZeroDenominator,
          "total exports are zero while imports are not");

  const Vec input_cost = acc.flows.colwise().sum().transpose();
  const Vec taxed = acc.pi.cwiseProduct(acc.gross_output);
  const double household_budget =
      (Vec::Ones(m) - acc.pi).dot(acc.gross_output) + (acc.flows * acc.pi).sum();
  const double trade_ratio = export_total > 0.0 ? import_total / export_total : 0.0;

  ValueEquilibriumReport out;
  out.tol = tol;
  out.lhs = Vec::Zero(m);
  for (Index i = 0; i < m; ++i)
    if (input_cost(i) > 0.0) out.lhs += acc.flows.col(i) * (taxed(i) / input_cost(i));
  out.lhs += acc.final_consumption * (household_budget / cf_total);
  out.lhs += acc.exports * trade_ratio;
  out.rhs = acc.gross_output + acc.imports + acc.flows * acc.pi;
  out.residual = out.lhs - out.rhs;
  for (Index k = 0; k < m; ++k) {
    const double band = tol * std::max(1.0, acc.gross_output(k) + acc.imports(k));
    if (std::abs(out.residual(k)) <= band) out.cleared.push_back(k);
    else if (out.residual(k) < 0.0) out.deficit.push_back(k);
    else out.violated.push_back(k);
  }
  out.is_equilibrium = out.violated.empty();
  return out;
}

// ---------------------------------------------------------------------------
// Production equilibrium via demand scales and a Perron price

struct LeontiefOptions {
  double tol = kDefaultTol;
  double rho_tol = 1e-6;
  SolverOptions solver{};
};

struct Theorem9Solution {
  Vec y;    // m industry scales, then household scale, then trade scale
  Vec p;    // max-norm 1 when computed
  double rho = 0.0;
  IndexSet equality_set;
  IndexSet slack_set;
  bool seed_used = false;
  double seed_residual = 0.0;       // relative sup-norm of C y0 - target
  double household_closure_gap = 0.0;
  double trade_closure_gap = 0.0;
  bool positivity_ok = false;
  bool certified = false;
  std::vector<std::string> diagnostics;
};

/// Raised when the spectral radius of A(y) is not one: the equilibrium is not
/// certified. Carries everything computed before the check.
class RhoNotOneError : public Error {
 public:
  explicit RhoNotOneError(Theorem9Solution partial)
      : Error(ErrorCode::kRhoNotOne,
              "spectral radius of A(y) is " + std::to_string(partial.rho) + ", not 1"),
        partial_(std::move(partial)) {}
  const Theorem9Solution& partial() const noexcept { return partial_; }

 private:
  Theorem9Solution partial_;
};

/// Demand-scale matrix [x_i a_ki | c^f | e] and target x + i + A(pi x).
inline std::pair<Mat, Vec> production_cone(const PhysicalAccounts& phys) {
  const Index m = phys.industries();
  Mat c(m, m + 2);
  c.leftCols(m) = phys.technology * phys.output.asDiagonal();
  c.col(m) = phys.final_consumption;
  c.col(m + 1) = phys.exports;
  const Vec target = phys.output + phys.imports + phys.technology * phys.pi.cwiseProduct(phys.output);
  return {c, target};
}

/// y0 = (1 + pi_1, ..., 1 + pi_m, 1, 1), which solves C y = target for
/// balanced accounts.
inline Vec production_seed(const PhysicalAccounts& phys) {
  const Index m = phys.industries();
  Vec y0 = Vec::Ones(m + 2);
  y0.head(m) += phys.pi;
  return y0;
}

inline Theorem9Solution theorem9_solve(const PhysicalAccounts& phys,
                                       const LeontiefOptions& opt = {}) {
  const Index m = phys.industries();
  require(phys.technology.cols() == m && phys.output.size() == m &&
              phys.final_consumption.size() == m && phys.exports.size() == m &&
              phys.imports.size() == m && phys.pi.size() == m,
          ErrorCode::kDimensionMismatch, "physical accounts have inconsistent dimensions");
  require(all_nonnegative(phys.technology) && (phys.output.array() >= 0).all(),
          ErrorCode::kInvalidArgument, "negative technology or output");

  Theorem9Solution sol;
  const auto [c, target] = production_cone(phys);
  const double target_scale = std::max(1.0, target.cwiseAbs().maxCoeff());
  const Vec seed = production_seed(phys);
  sol.seed_residual = (c * seed - target).cwiseAbs().maxCoeff() / target_scale;
  if (sol.seed_residual <= opt.tol) {
    sol.y = seed;
    sol.seed_used = true;
  } else {
    sol.y = nnls(c, target);
    sol.diagnostics.push_back("accounts are unbalanced; demand scales from nonnegative least squares");
  }
  const Vec residual = c * sol.y - target;
  for (Index k = 0; k < m; ++k) {
    const double band = std::max(opt.tol, opt.solver.cone_tol) * std::max(1.0, target(k));
    if (std::abs(residual(k)) <= band) sol.equality_set.push_back(k);
    else if (residual(k) < 0.0) sol.slack_set.push_back(k);
    else
      throw Error(ErrorCode::kNotInCone, "no nonnegative demand scales keep industry " +
                                             std::to_string(k) + " within supply");
  }
  require(!sol.equality_set.empty(), ErrorCode::kNotInCone, "no industry is cleared");

  for (Index i = 0; i < m; ++i)
    require(phys.pi(i) > 0.0, ErrorCode::kZeroDenominator,
            "taxation share of industry " + std::to_string(i) + " is zero");
  const Vec scales = sol.y.head(m);
  const Mat a_y = phys.pi.cwiseInverse().asDiagonal() * phys.technology * scales.asDiagonal();
  sol.rho = nonneg_spectral_radius(a_y, opt.solver);
  if (std::abs(sol.rho - 1.0) > opt.rho_tol) throw RhoNotOneError(sol);

  // Price: sum_s y_i a_si p_s = pi_i p_i, i.e. p = K p with K = diag(y/pi) A^T.
  const Mat k = scales.cwiseQuotient(phys.pi).asDiagonal() * phys.technology.transpose();
  if (is_irreducible(k)) {
    sol.p = perron_eigen(k, opt.solver).right;
  } else {
    Mat stacked(m + 1, m);
    stacked.topRows(m) = k - Mat::Identity(m, m);
    stacked.row(m).setOnes();
    Vec rhs = Vec::Zero(m + 1);
    rhs(m) = 1.0;
    sol.p = nnls(stacked, rhs);
    if ((stacked * sol.p - rhs).norm() > opt.solver.cone_tol || sol.p.maxCoeff() <= 0.0)
      throw Error(ErrorCode::kNoPositivePrice, "no nonnegative price solves p = K p");
    sol.p /= sol.p.maxCoeff();
  }

  const Vec& p = sol.p;
  const double cf_value = phys.final_consumption.dot(p);
  const double export_value = phys.exports.dot(p);
  const Vec unit_cost = phys.technology.transpose() * p;
  const bool trade = phys.exports.sum() > 0.0 || phys.imports.sum() > 0.0;
  sol.positivity_ok = cf_value > 0.0 && (!trade || export_value > 0.0) &&
                      (unit_cost.array() > 0.0).all();
  if (!sol.positivity_ok) sol.diagnostics.push_back("positivity side conditions fail at p");

  if (cf_value > 0.0) {
    const double household =
        ((Vec::Ones(m) - phys.pi).cwiseProduct(phys.output).dot(p) +
         p.dot(phys.technology * phys.pi.cwiseProduct(phys.output))) / cf_value;
    sol.household_closure_gap = std::abs(sol.y(m) - household) / std::max(1.0, household);
  }
  if (trade && export_value > 0.0) {
    const double ratio = phys.imports.dot(p) / export_value;
    sol.trade_closure_gap = std::abs(sol.y(m + 1) - ratio) / std::max(1.0, ratio);
  }
  const double closure_tol = std::max(opt.rho_tol, opt.tol);
  if (sol.household_closure_gap > closure_tol)
    sol.diagnostics.push_back("household scale differs from the budget ratio at p");
  if (sol.trade_closure_gap > closure_tol)
    sol.diagnostics.push_back("trade scale differs from the import/export value ratio at p");

  bool slack_prices_zero = true;
  for (Index k2 : sol.slack_set)
    if (p(k2) > kDefaultTolPos) slack_prices_zero = false;
  if (!slack_prices_zero) sol.diagnostics.push_back("slack industries carry positive prices");

  sol.certified = sol.positivity_ok && slack_prices_zero &&
                  sol.household_closure_gap <= closure_tol && sol.trade_closure_gap <= closure_tol;
  return sol;
}

inline Theorem9Solution theorem9_solve(const IOAccounts& acc, const LeontiefOptions& opt = {}) {
  return theorem9_solve(to_physical(acc), opt);
}

}  // namespace eqrec
