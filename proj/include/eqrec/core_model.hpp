#pragma once

// Exchange economy: l consumers, n goods. Consumer i owns the bundle b_i
// (column i of the property matrix B) and wants to trade it for a bundle
// proportional to C_i (column i of the demand matrix C). At prices p the
// consumer can afford y_i = <b_i,p>/<C_i,p> units of C_i, so aggregate demand
// is C*y and the equilibrium test compares it with total supply psi = B*1.
// Good 0 is money by convention.

#include <string>
#include <utility>
#include <vector>

#include "eqrec/errors.hpp"
#include "eqrec/linalg.hpp"

namespace eqrec {

inline constexpr double kDefaultTol = 1e-9;
inline constexpr double kDefaultTolPos = 1e-12;

/// Column sums across consumers: psi_k = sum_i b_ki.
inline Vec total_supply(const Mat& property) {
  require(all_nonnegative(property), ErrorCode::kInvalidArgument,
          "property matrix has negative entries");
  return property.rowwise().sum();
}

class ExchangeEconomy {
 public:
  ExchangeEconomy(Mat demand, Mat property)
      : demand_(std::move(demand)), property_(std::move(property)) {
    require_same_shape(demand_, property_, "demand vs property matrix");
    require(demand_.rows() > 0 && demand_.cols() > 0, ErrorCode::kInvalidArgument,
            "economy needs at least one good and one consumer");
    require(all_finite(demand_) && all_finite(property_), ErrorCode::kInvalidArgument,
            "non-finite entries in economy");
    require(all_nonnegative(demand_), ErrorCode::kInvalidArgument,
            "demand matrix has negative entries");
    require(all_nonnegative(property_), ErrorCode::kInvalidArgument,
            "property matrix has negative entries");
    for (Index i = 0; i < demand_.cols(); ++i)
      require(demand_.col(i).sum() > 0.0, ErrorCode::kInvalidArgument,
              "demand vector of consumer " + std::to_string(i) + " is zero");
  }

  Index goods() const { return demand_.rows(); }
  Index consumers() const { return demand_.cols(); }
  const Mat& demand() const { return demand_; }
  const Mat& property() const { return property_; }
  Vec supply() const { return property_.rowwise().sum(); }

  ExchangeEconomy with_property(Mat property) const {
    return ExchangeEconomy(demand_, std::move(property));
  }

  /// sum_{k in I} C_ki > 0 for every consumer.
  bool demands_support(const IndexSet& support) const {
    for (Index i = 0; i < consumers(); ++i) {
      double s = 0.0;
      for (Index k : support) s += demand_(k, i);
      if (s <= 0.0) return false;
    }
    return true;
  }

 private:
  Mat demand_;
  Mat property_;
};

/// Nonzero nonnegative price vector. Component 0 is the money price.
class PriceVector {
 public:
  explicit PriceVector(Vec values) : values_(std::move(values)) {
    require(values_.size() > 0, ErrorCode::kInvalidArgument, "empty price vector");
    require(values_.allFinite(), ErrorCode::kInvalidArgument, "non-finite price");
    require((values_.array() >= 0.0).all(), ErrorCode::kInvalidArgument, "negative price");
    require(values_.maxCoeff() > 0.0, ErrorCode::kInvalidArgument, "zero price vector");
  }

  Index size() const { return values_.size(); }
  double operator[](Index k) const { return values_(k); }
  const Vec& values() const { return values_; }

  /// Unit money price when money has a positive price, unit max-norm otherwise.
  Vec normalized() const {
    if (values_(0) > 0.0) return values_ / values_(0);
    return values_ / values_.maxCoeff();
  }

  /// Goods whose normalized price exceeds tol_pos.
  IndexSet support(double tol_pos = kDefaultTolPos) const {
    const Vec q = normalized();
    IndexSet out;
    for (Index k = 0; k < q.size(); ++k)
      if (q(k) > tol_pos) out.push_back(k);
    return out;
  }

 private:
  Vec values_;
};

inline void require_price_dimension(const ExchangeEconomy& econ, const PriceVector& p) {
  require(p.size() == econ.goods(), ErrorCode::kDimensionMismatch,
          "price vector has " + std::to_string(p.size()) + " components, economy has " +
              std::to_string(econ.goods()) + " goods");
}

/// y_i = <b_i,p>/<C_i,p>. Throws ZeroDemandValue when some <C_i,p> vanishes.
inline Vec demand_scales(const ExchangeEconomy& econ, const PriceVector& p,
                         double tol_pos = kDefaultTolPos) {
  require_price_dimension(econ, p);
  const Vec q = p.normalized();
  const Vec demand_value = econ.demand().transpose() * q;
  const Vec budget = econ.property().transpose() * q;
  Vec y(econ.consumers());
  for (Index i = 0; i < econ.consumers(); ++i) {
    if (!(demand_value(i) > tol_pos))
      throw Error(ErrorCode::kZeroDemandValue,
                  "consumer " + std::to_string(i) + " demands only zero-priced goods");
    y(i) = budget(i) / demand_value(i);
  }
  return y;
}

/// Signed violation of the equilibrium inequalities: C*y(p) - psi.
inline Vec excess_demand(const ExchangeEconomy& econ, const PriceVector& p,
                         double tol_pos = kDefaultTolPos) {
  return econ.demand() * demand_scales(econ, p, tol_pos) - econ.supply();
}

struct EquilibriumReport {
  Vec y;       // demand scales
  Vec demand;  // C * y
  Vec residual;
  IndexSet equality_set;  // I
  IndexSet strict_set;    // J: demand strictly below supply
  IndexSet violated_set;  // demand above supply
  bool is_equilibrium = false;
  /// Every strict-deficit good carries a (numerically) zero price.
  bool zero_price_on_strict_set = true;
  double tol = kDefaultTol;
  std::vector<std::string> warnings;
};

inline EquilibriumReport check_equilibrium(const ExchangeEconomy& econ, const PriceVector& p,
                                           double tol = kDefaultTol,
                                           double tol_pos = kDefaultTolPos) {
  EquilibriumReport report;
  report.tol = tol;
  report.y = demand_scales(econ, p, tol_pos);
  const Vec psi = econ.supply();
  const Vec q = p.normalized();
  report.demand = econ.demand() * report.y;
  report.residual = report.demand - psi;
  for (Index k = 0; k < econ.goods(); ++k) {
    const double band = tol * std::max(1.0, psi(k));
    const double r = report.residual(k);
    if (std::abs(r) <= band) {
      report.equality_set.push_back(k);
    } else if (r < 0.0) {
      report.strict_set.push_back(k);
      if (q(k) > tol_pos) report.zero_price_on_strict_set = false;
    } else {
      report.violated_set.push_back(k);
    }
    if (psi(k) == 0.0 && q(k) <= tol_pos)
      report.warnings.push_back("good " + std::to_string(k) + " has zero total supply");
  }
  report.is_equilibrium = report.violated_set.empty();
  return report;
}

/// Outcome of the existence certificate (psi_bar, y) for a price vector.
struct CertificateCheck {
  bool valid = false;
  std::vector<std::string> failed;  // clause identifiers, empty when valid
  std::vector<std::string> notes;
};

/// Checks the necessary-and-sufficient existence certificate: psi_bar = C*y,
/// psi_bar <= psi, <C_i,p> > 0, and the transfers
/// d_i = b_i - y_i <C_i,p>/<psi_bar,p> psi_bar have zero value with
/// sum_i d_i = psi - psi_bar >= 0. The value-balance clause is read as
/// <psi,p> = <psi_bar,p>.
inline CertificateCheck verify_certificate(const ExchangeEconomy& econ, const PriceVector& p,
                                           const Vec& y, const Vec& psi_bar,
                                           double tol = kDefaultTol,
                                           double tol_pos = kDefaultTolPos) {
  require_price_dimension(econ, p);
  require(y.size() == econ.consumers(), ErrorCode::kDimensionMismatch,
          "certificate y has wrong length");
  require(psi_bar.size() == econ.goods(), ErrorCode::kDimensionMismatch,
          "certificate psi_bar has wrong length");

  CertificateCheck out;
  const Vec q = p.normalized();
  const Vec psi = econ.supply();
  const double scale = std::max(1.0, psi.cwiseAbs().maxCoeff());
  auto fail = [&](const char* clause) { out.failed.emplace_back(clause); };

  if ((y.array() < 0.0).any() || y.maxCoeff() <= 0.0) fail("y_nonzero_nonnegative");
  if ((psi_bar.array() < 0.0).any() || psi_bar.maxCoeff() <= 0.0)
    fail("psi_bar_nonzero_nonnegative");
  if ((psi_bar - econ.demand() * y).cwiseAbs().maxCoeff() > tol * scale)
    fail("psi_bar_equals_cy");
  if (((psi_bar - psi).array() > tol * scale).any()) fail("psi_bar_le_psi");

  const Vec demand_value = econ.demand().transpose() * q;
  const bool positive_demand_value = (demand_value.array() > tol_pos).all();
  if (!positive_demand_value) fail("positive_demand_value");

  const double psi_bar_value = psi_bar.dot(q);
  if (psi_bar_value > tol_pos && positive_demand_value) {
    Mat d = econ.property();
    for (Index i = 0; i < econ.consumers(); ++i)
      d.col(i) -= y(i) * demand_value(i) / psi_bar_value * psi_bar;
    const Vec transfer_value = d.transpose() * q;
    for (Index i = 0; i < econ.consumers(); ++i) {
      if (std::abs(transfer_value(i)) > tol * std::max(1.0, std::abs(econ.property().col(i).dot(q)))) {
        fail("zero_value_transfers");
        break;
      }
    }
    const Vec transfer_sum = d.rowwise().sum();
    if ((transfer_sum - (psi - psi_bar)).cwiseAbs().maxCoeff() > tol * scale)
      fail("transfer_sum_matches_slack");
  } else if (psi_bar_value <= tol_pos) {
    fail("positive_psi_bar_value");
  }

  if (std::abs(psi.dot(q) - psi_bar_value) > tol * std::max(1.0, std::abs(psi.dot(q))))
    fail("value_balance");
  out.notes.emplace_back("value-balance clause evaluated as <psi,p> = <psi_bar,p>");

  out.valid = out.failed.empty();
  return out;
}

}  // namespace eqrec
