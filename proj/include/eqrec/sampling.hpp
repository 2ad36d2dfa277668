#pragma once

// Random equilibrium economies built through the representation
// b_i = w_i psi_bar + sum_s a_s^i g_s + d0_i. Deterministic for a given
// engine state.

#include <algorithm>
#include <numeric>
#include <random>
#include <vector>

#include "eqrec/core_model.hpp"
#include "eqrec/errors.hpp"
#include "eqrec/linalg.hpp"
#include "eqrec/structure.hpp"

namespace eqrec {

struct RandomEquilibrium {
  Mat demand;
  Mat property;
  PriceVector price;
  RepresentationParts parts;
};

inline double uniform(std::mt19937_64& rng, double lo, double hi) {
  return std::uniform_real_distribution<double>(lo, hi)(rng);
}

/// Random subset of {0..n-1} of the given size, always containing good 0
/// (the money good), sorted.
inline IndexSet random_support(std::mt19937_64& rng, Index n, Index size) {
  require(size >= 1 && size <= n, ErrorCode::kInvalidArgument, "support size outside [1,n]");
  std::vector<Index> rest(static_cast<std::size_t>(n - 1));
  std::iota(rest.begin(), rest.end(), Index{1});
  std::shuffle(rest.begin(), rest.end(), rng);
  IndexSet support = {0};
  support.insert(support.end(), rest.begin(), rest.begin() + (size - 1));
  return sorted_unique(std::move(support));
}

/// Samples C > 0, a price supported on a random I of the given size, and
/// representation parts; perturbations are halved until B >= 0.
inline RandomEquilibrium random_equilibrium(std::mt19937_64& rng, Index n, Index l,
                                            Index support_size,
                                            ClearingMode mode = ClearingMode::kExact) {
  require(n >= 1 && l >= 1, ErrorCode::kInvalidArgument, "need at least one good and consumer");
  Mat c(n, l);
  for (Index k = 0; k < n; ++k)
    for (Index i = 0; i < l; ++i) c(k, i) = uniform(rng, 0.1, 1.0);
  const IndexSet support = random_support(rng, n, support_size);
  Vec p = Vec::Zero(n);
  for (Index s : support) p(s) = uniform(rng, 0.5, 2.0);
  const PriceVector price(p);

  Vec y(l);
  for (Index i = 0; i < l; ++i) y(i) = uniform(rng, 0.5, 2.0);

  const Index m = static_cast<Index>(support.size());
  Mat delta(m, l);
  for (Index s = 0; s < m; ++s) {
    for (Index i = 0; i < l; ++i) delta(s, i) = uniform(rng, -1.0, 1.0);
    delta.row(s).array() -= delta.row(s).mean();
  }
  Mat e0 = Mat::Zero(n, l);
  for (Index k = 0; k < n; ++k) {
    if (contains(support, k)) continue;
    for (Index i = 0; i < l; ++i) e0(k, i) = uniform(rng, -1.0, 1.0);
    e0.row(k).array() -= e0.row(k).mean();
    if (mode == ClearingMode::kPartial) {
      const auto pick = std::uniform_int_distribution<Index>(0, l - 1)(rng);
      e0(k, pick) += uniform(rng, 0.0, 1.0);
    }
  }

  // Smallest entry of the rank-one part psi_bar w^T sets the perturbation size.
  const Vec psi_bar = c * y;
  const Vec value = c.transpose() * price.normalized();
  const Vec w = y.cwiseProduct(value) / psi_bar.dot(price.normalized());
  double scale = 0.9 * psi_bar.minCoeff() * w.minCoeff();

  for (int attempt = 0; attempt < 60; ++attempt) {
    RepresentationParts parts;
    parts.y = y;
    parts.a = Mat::Constant(m, l, 1.0 / static_cast<double>(l)) + scale * delta;
    // Rows must sum to 1 to working precision.
    for (Index s = 0; s < m; ++s) parts.a(s, l - 1) = 1.0 - parts.a.row(s).head(l - 1).sum();
    parts.d0 = scale * e0;
    parts.support = support;
    parts.mode = mode;
    try {
      Mat b = synthesize_property(c, price, parts);
      return {c, std::move(b), price, std::move(parts)};
    } catch (const Error& e) {
      if (e.code() != ErrorCode::kNegativeEndowment) throw;
      scale *= 0.5;
    }
  }
  throw Error(ErrorCode::kNoConvergence, "could not sample a nonnegative property matrix");
}

}  // namespace eqrec
