#pragma once

// Structure of property distributions that keep a given price vector an
// equilibrium. With p positive on the support I and zero on J, every
// equilibrium endowment decomposes as
//
//   b_i = w_i psi_bar + sum_{s in I} a_s^i g_s + d0_i,
//   w_i = y_i <C_i,p>/<psi_bar,p>,  psi_bar = C*y,
//
// where g_s = e_s - p_s/(sum_{t in I} p_t) e_I is the clearing basis,
// sum_i a_s^i = 1 for each s, and d0_i vanishes on I. In the exact case
// sum_i d0_i = 0; in the partial case (strict deficits on J) sum_i d0_i >= 0.

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>
#include <vector>

#include "eqrec/core_model.hpp"
#include "eqrec/errors.hpp"
#include "eqrec/linalg.hpp"

namespace eqrec {

enum class ClearingMode {
  kExact,    // demand equals supply for every good
  kPartial,  // strict deficits allowed on J
};

inline constexpr double kRankTol = 1e-8;

struct ClearingBasis {
  IndexSet support;
  Mat vectors;  // n x |I|, column c is g_{support[c]}
};

/// g_s = e_s - (p_s / sum_{t in I} p_t) e_I for s in I.
inline ClearingBasis clearing_basis(const PriceVector& p, IndexSet support) {
  support = sorted_unique(std::move(support));
  require(!support.empty(), ErrorCode::kEmptySupport, "clearing basis needs a nonempty support");
  const Vec q = p.normalized();
  double total = 0.0;
  for (Index s : support) {
    require(s >= 0 && s < q.size(), ErrorCode::kInvalidArgument, "support index out of range");
    require(q(s) > 0.0, ErrorCode::kSupportMismatch,
            "price of support good " + std::to_string(s) + " is not positive");
    total += q(s);
  }
  ClearingBasis basis{support, Mat::Zero(q.size(), static_cast<Index>(support.size()))};
  for (Index c = 0; c < basis.vectors.cols(); ++c) {
    const Index s = support[c];
    for (Index t : support) basis.vectors(t, c) = -q(s) / total;
    basis.vectors(s, c) += 1.0;
  }
  return basis;
}

struct RepresentationParts {
  Vec y;          // l demand scales
  Mat a;          // |I| x l coefficients, each row sums to 1
  Mat d0;         // n x l, zero on rows in I
  IndexSet support;
  ClearingMode mode = ClearingMode::kExact;
};

/// Builds B from a demand structure, a price with support I and the
/// representation coefficients. Fails with NegativeEndowment rather than
/// clipping: clipping would break the equilibrium.
inline Mat synthesize_property(const Mat& demand, const PriceVector& p,
                               const RepresentationParts& parts, double tol = kDefaultTol) {
  const Index n = demand.rows();
  const Index l = demand.cols();
  const IndexSet support = sorted_unique(parts.support);
  require(p.size() == n, ErrorCode::kDimensionMismatch, "price length vs goods");
  require(parts.y.size() == l, ErrorCode::kDimensionMismatch, "y length vs consumers");
  require(parts.a.rows() == static_cast<Index>(support.size()) && parts.a.cols() == l,
          ErrorCode::kDimensionMismatch, "coefficient table must be |I| x l");
  require(parts.d0.rows() == n && parts.d0.cols() == l, ErrorCode::kDimensionMismatch,
          "d0 must be n x l");
  require((parts.y.array() >= 0.0).all(), ErrorCode::kInvalidArgument, "negative demand scale");

  for (Index s = 0; s < parts.a.rows(); ++s) {
    const double slack = 1e-12 * std::max(1.0, parts.a.row(s).cwiseAbs().sum());
    require(std::abs(parts.a.row(s).sum() - 1.0) <= slack, ErrorCode::kInvalidArgument,
            "coefficients of basis vector " + std::to_string(support[s]) + " do not sum to 1");
  }
  for (Index s : support)
    require(parts.d0.row(s).isZero(0.0), ErrorCode::kInvalidArgument,
            "d0 must vanish on the support (good " + std::to_string(s) + ")");
  const Vec psi_bar = demand * parts.y;
  const Vec d0_sum = parts.d0.rowwise().sum();
  for (Index k = 0; k < n; ++k) {
    const double slack =
        tol * std::max({1.0, parts.d0.row(k).cwiseAbs().sum(), std::abs(psi_bar(k))});
    if (parts.mode == ClearingMode::kExact)
      require(std::abs(d0_sum(k)) <= slack, ErrorCode::kInvalidArgument,
              "d0 rows must sum to zero in exact mode (good " + std::to_string(k) + ")");
    else
      require(d0_sum(k) >= -slack, ErrorCode::kInvalidArgument,
              "d0 rows must sum to a nonnegative vector (good " + std::to_string(k) + ")");
  }

  const Vec q = p.normalized();
  for (Index s : support)
    require(psi_bar(s) > 0.0, ErrorCode::kPreconditionFailed,
            "C*y must be positive on the support (good " + std::to_string(s) + ")");
  const Vec demand_value = demand.transpose() * q;
  for (Index i = 0; i < l; ++i)
    require(demand_value(i) > kDefaultTolPos, ErrorCode::kZeroDemandValue,
            "consumer " + std::to_string(i) + " demands only zero-priced goods");
  const double psi_bar_value = psi_bar.dot(q);

  const ClearingBasis basis = clearing_basis(p, support);
  const Vec w = parts.y.cwiseProduct(demand_value) / psi_bar_value;
  Mat b = psi_bar * w.transpose() + basis.vectors * parts.a + parts.d0;

  const Vec psi = b.rowwise().sum();
  for (Index k = 0; k < n; ++k) {
    const double band = tol * std::max(1.0, std::abs(psi(k)));
    for (Index i = 0; i < l; ++i) {
      if (b(k, i) < -band)
        throw Error(ErrorCode::kNegativeEndowment,
                    "b(" + std::to_string(k) + "," + std::to_string(i) + ") = " +
                        std::to_string(b(k, i)));
      if (b(k, i) < 0.0) b(k, i) = 0.0;
    }
  }
  return b;
}

struct Decomposition {
  RepresentationParts parts;
  Mat transfers;   // d_i = b_i - w_i psi_bar
  Vec psi_bar;     // C*y
  double basis_residual = 0.0;
};

/// Inverse of synthesize_property. The coefficient gauge fixes a = 1/l on the
/// last support good, so the expansion is unique.
inline Decomposition decompose_property(const ExchangeEconomy& econ, const PriceVector& p,
                                        IndexSet support,
                                        ClearingMode mode = ClearingMode::kExact,
                                        double tol = kDefaultTol,
                                        double tol_pos = kDefaultTolPos) {
  require_price_dimension(econ, p);
  support = sorted_unique(std::move(support));
  require(!support.empty(), ErrorCode::kEmptySupport, "support must be nonempty");
  const Index n = econ.goods();
  const Index l = econ.consumers();
  const Vec q = p.normalized();
  const IndexSet zero_goods = complement(support, n);
  for (Index s : support)
    require(q(s) > tol_pos, ErrorCode::kSupportMismatch,
            "good " + std::to_string(s) + " is in I but has zero price");
  for (Index k : zero_goods)
    require(q(k) <= tol_pos, ErrorCode::kSupportMismatch,
            "good " + std::to_string(k) + " is outside I but has positive price");

  const EquilibriumReport report = check_equilibrium(econ, p, tol, tol_pos);
  require(report.is_equilibrium, ErrorCode::kNotAnEquilibrium, "demand exceeds supply");
  if (mode == ClearingMode::kExact)
    require(report.strict_set.empty(), ErrorCode::kNotAnEquilibrium,
            "exact mode needs demand = supply for every good");
  for (Index k : report.strict_set)
    require(!contains(support, k), ErrorCode::kNotAnEquilibrium,
            "good " + std::to_string(k) + " in I is not cleared");

  Decomposition out;
  out.parts.support = support;
  out.parts.mode = mode;
  out.parts.y = demand_scales(econ, p, tol_pos);
  out.psi_bar = econ.demand() * out.parts.y;
  const Vec demand_value = econ.demand().transpose() * q;
  const Vec w = out.parts.y.cwiseProduct(demand_value) / out.psi_bar.dot(q);
  out.transfers = econ.property() - out.psi_bar * w.transpose();

  out.parts.d0 = Mat::Zero(n, l);
  for (Index k : zero_goods) out.parts.d0.row(k) = out.transfers.row(k);

  // d1 restricted to I expands in {g_s}: a_s = d1_s - d1_last + 1/l, a_last = 1/l.
  const Index m = static_cast<Index>(support.size());
  const Index last = support.back();
  out.parts.a.resize(m, l);
  for (Index c = 0; c < m; ++c)
    for (Index i = 0; i < l; ++i)
      out.parts.a(c, i) =
          (c + 1 == m ? 0.0 : out.transfers(support[c], i) - out.transfers(last, i)) +
          1.0 / static_cast<double>(l);

  const ClearingBasis basis = clearing_basis(p, support);
  Mat d1 = out.transfers - out.parts.d0;
  const Mat rebuilt = basis.vectors * out.parts.a;
  out.basis_residual = max_abs(rebuilt - d1);
  const double scale = std::max(1.0, max_abs(econ.property()));
  if (out.basis_residual > tol * scale)
    throw Error(ErrorCode::kRankDeficiency,
                "transfers on I do not lie in the span of the clearing basis");
  return out;
}

/// Equal value of every consumer's endowment at p.
inline bool is_equivalent(const Mat& b, const Mat& b_bar, const PriceVector& p,
                          double tol = kDefaultTol) {
  require_same_shape(b, b_bar, "equivalence");
  require(p.size() == b.rows(), ErrorCode::kDimensionMismatch, "price length vs goods");
  const Vec q = p.normalized();
  const Vec before = b.transpose() * q;
  const Vec after = b_bar.transpose() * q;
  for (Index i = 0; i < b.cols(); ++i)
    if (std::abs(after(i) - before(i)) > tol * (1.0 + std::abs(before(i)))) return false;
  return true;
}

struct DegenerateTransform {
  Mat transfer;   // d~0, zero on I
  Mat property;   // B_bar = B + d~0
  Vec y;
  IndexSet support;
  Index multiplicity_lower_bound = 0;  // n - |I|
};

/// Equivalent redistribution that makes the goods in J exactly cleared at
/// every price q with q_I = p_I, so the equilibrium branches in q_J.
inline DegenerateTransform degenerate_transform(const ExchangeEconomy& econ, const PriceVector& p,
                                                IndexSet support,
                                                ClearingMode mode = ClearingMode::kExact,
                                                double tol = kDefaultTol,
                                                double tol_pos = kDefaultTolPos) {
  const Decomposition dec = decompose_property(econ, p, std::move(support), mode, tol, tol_pos);
  const Index n = econ.goods();
  const Index l = econ.consumers();
  const Vec q = p.normalized();
  const IndexSet zero_goods = complement(dec.parts.support, n);
  const Vec demand_value = econ.demand().transpose() * q;
  const Vec w = dec.parts.y.cwiseProduct(demand_value) / dec.psi_bar.dot(q);

  Mat target_transfer = Mat::Zero(n, l);  // d-bar 0
  for (Index k : zero_goods)
    for (Index i = 0; i < l; ++i)
      target_transfer(k, i) = -w(i) * dec.psi_bar(k) + dec.parts.y(i) * econ.demand()(k, i);

  DegenerateTransform out;
  out.support = dec.parts.support;
  out.y = dec.parts.y;
  out.transfer = target_transfer - dec.parts.d0;
  out.property = econ.property() + out.transfer;
  out.multiplicity_lower_bound = n - static_cast<Index>(out.support.size());

  const Vec psi = econ.supply();
  const Vec moved = out.transfer.rowwise().sum();
  for (Index k = 0; k < n; ++k) {
    const double band = tol * std::max(1.0, psi(k));
    if (mode == ClearingMode::kExact)
      require(std::abs(moved(k)) <= band, ErrorCode::kVerificationFailed,
              "exact transform must preserve totals (good " + std::to_string(k) + ")");
    else
      require(moved(k) <= band, ErrorCode::kVerificationFailed,
              "partial transform may only remove slack (good " + std::to_string(k) + ")");
    for (Index i = 0; i < l; ++i) {
      require(out.property(k, i) >= -band, ErrorCode::kNegativeEndowment,
              "transformed endowment is negative");
      if (out.property(k, i) < 0.0) out.property(k, i) = 0.0;
    }
  }
  return out;
}

/// n - rank{b_bar_i - y_i C_i}, with the rank cutoff relative to the size of B_bar and C diag(y).
inline Index degeneracy_multiplicity(const Mat& b_bar, const Mat& demand, const Vec& y,
                                     double rank_tol = kRankTol) {
  require_same_shape(b_bar, demand, "degeneracy multiplicity");
  require(y.size() == demand.cols(), ErrorCode::kDimensionMismatch, "y length vs consumers");
  const Mat scaled = demand * y.asDiagonal();
  const Mat residual = b_bar - scaled;
  return demand.rows() - numerical_rank(residual, rank_tol, std::max(max_abs(b_bar), max_abs(scaled)));
}

/// (sum_{k>=1} p_k psi_k) / psi_0 at unit money price.
inline double real_money_value(const PriceVector& p, const Vec& psi) {
  require(psi.size() == p.size(), ErrorCode::kDimensionMismatch, "psi length vs price length");
  require(p[0] > 0.0, ErrorCode::kInvalidArgument, "money price must be positive");
  require(psi(0) > 0.0, ErrorCode::kNoMoneySupply, "money supply must be positive");
  const Vec q = p.normalized();
  return (q.dot(psi) - psi(0)) / psi(0);
}

struct MoneyValueRange {
  double lower = 0.0;
  double upper = 0.0;  // +inf when some zero-priced good has positive supply
};

/// Range of the real money value over the degenerate family q_I = p_I,
/// q_J in [0, q_max]^|J|.
inline MoneyValueRange money_value_range(const PriceVector& p, const Vec& psi,
                                         const IndexSet& zero_goods,
                                         double q_max = std::numeric_limits<double>::infinity()) {
  MoneyValueRange out;
  const Vec q = p.normalized();
  Vec base = q;
  double free_supply = 0.0;
  for (Index k : zero_goods) {
    require(k != 0, ErrorCode::kInvalidArgument, "money cannot be a free-priced good");
    base(k) = 0.0;
    free_supply += psi(k);
  }
  out.lower = real_money_value(PriceVector(base), psi);
  if (free_supply <= 0.0) out.upper = out.lower;
  else if (std::isinf(q_max)) out.upper = std::numeric_limits<double>::infinity();
  else out.upper = out.lower + q_max * free_supply / psi(0);
  return out;
}

}  // namespace eqrec
