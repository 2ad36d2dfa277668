#pragma once

// Numerical kernels behind the existence constructions: Perron-Frobenius
// eigenpairs of nonnegative matrices, nonnegative solutions of C*y = target,
// and the two constructive equilibria for property matrices of the form
// B = C*B1.

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>
#include <vector>

#include "eqrec/core_model.hpp"
#include "eqrec/errors.hpp"
#include "eqrec/linalg.hpp"

namespace eqrec {

struct SolverOptions {
  double pf_tol = 1e-10;
  long max_iter = 100000;
  /// Diagonal shift relative to the largest entry; breaks periodicity.
  double shift = 1e-3;
  double cone_tol = 1e-8;
  double interior_tol = 1e-10;
  double tol = kDefaultTol;
};

// ---------------------------------------------------------------------------
// Graph structure

/// Strong connectivity of the digraph with an edge i->j whenever m(i,j) > 0.
/// A 1x1 matrix is irreducible iff its entry is positive.
inline bool is_irreducible(const Mat& m) {
  require(m.rows() == m.cols(), ErrorCode::kDimensionMismatch, "matrix is not square");
  require(all_nonnegative(m), ErrorCode::kInvalidArgument, "matrix has negative entries");
  const Index n = m.rows();
  if (n == 0) return false;
  if (n == 1) return m(0, 0) > 0.0;
  auto reaches_all = [n](auto&& edge) {
    std::vector<bool> seen(static_cast<std::size_t>(n), false);
    std::vector<Index> stack{0};
    seen[0] = true;
    Index count = 1;
    while (!stack.empty()) {
      const Index u = stack.back();
      stack.pop_back();
      for (Index v = 0; v < n; ++v) {
        if (!seen[static_cast<std::size_t>(v)] && edge(u, v)) {
          seen[static_cast<std::size_t>(v)] = true;
          ++count;
          stack.push_back(v);
        }
      }
    }
    return count == n;
  };
  return reaches_all([&](Index u, Index v) { return m(u, v) > 0.0; }) &&
         reaches_all([&](Index u, Index v) { return m(v, u) > 0.0; });
}

/// Strongly connected components (Tarjan), each as a list of vertices.
inline std::vector<IndexSet> strong_components(const Mat& m) {
  const Index n = m.rows();
  std::vector<Index> index(static_cast<std::size_t>(n), -1), low(static_cast<std::size_t>(n), 0);
  std::vector<char> on_stack(static_cast<std::size_t>(n), 0);
  std::vector<Index> stack;
  std::vector<IndexSet> out;
  Index counter = 0;
  auto at = [](auto& v, Index i) -> auto& { return v[static_cast<std::size_t>(i)]; };

  auto visit = [&](auto&& self, Index u) -> void {
    at(index, u) = at(low, u) = counter++;
    stack.push_back(u);
    at(on_stack, u) = 1;
    for (Index v = 0; v < n; ++v) {
      if (!(m(u, v) > 0.0)) continue;
      if (at(index, v) < 0) {
        self(self, v);
        at(low, u) = std::min(at(low, u), at(low, v));
      } else if (at(on_stack, v)) {
        at(low, u) = std::min(at(low, u), at(index, v));
      }
    }
    if (at(low, u) == at(index, u)) {
      IndexSet component;
      Index v;
      do {
        v = stack.back();
        stack.pop_back();
        at(on_stack, v) = 0;
        component.push_back(v);
      } while (v != u);
      out.push_back(sorted_unique(std::move(component)));
    }
  };
  for (Index u = 0; u < n; ++u)
    if (at(index, u) < 0) visit(visit, u);
  return out;
}

// ---------------------------------------------------------------------------
// Perron-Frobenius

struct PerronResult {
  double rho = 0.0;       // from the right iteration
  double rho_left = 0.0;  // from the left iteration
  Vec right;              // max-norm 1, strictly positive
  Vec left;               // max-norm 1, strictly positive
  long iterations = 0;
  double residual = 0.0;  // max of left/right ||Mv - rho v||_inf
};

namespace detail {

struct PowerOutcome {
  double rho;
  Vec v;
  long iterations;
  double residual;
};

inline PowerOutcome power_iterate(const Mat& m, const SolverOptions& opt) {
  const Index n = m.rows();
  const double eps = opt.shift * std::max(max_abs(m), std::numeric_limits<double>::min());
  Mat shifted = m;
  shifted.diagonal().array() += eps;
  Vec v = Vec::Ones(n);
  for (long it = 1; it <= opt.max_iter; ++it) {
    Vec w = shifted * v;
    w /= w.maxCoeff();
    v = w;
    const Vec mv = m * v;
    const double rho = mv.maxCoeff();  // ||v||_inf = 1 and v > 0
    const double residual = (mv - rho * v).cwiseAbs().maxCoeff();
    if (residual <= opt.pf_tol * std::max(1.0, rho)) return {rho, v, it, residual};
  }
  throw Error(ErrorCode::kNoConvergence,
              "power iteration did not converge in " + std::to_string(opt.max_iter) + " steps");
}

}  // namespace detail

/// Perron root and positive eigenvectors of an irreducible nonnegative matrix,
/// by power iteration on M + eps*I.
inline PerronResult perron_eigen(const Mat& m, const SolverOptions& opt = {}) {
  require(m.rows() == m.cols(), ErrorCode::kDimensionMismatch, "matrix is not square");
  require(is_irreducible(m), ErrorCode::kNotIrreducible, "matrix is reducible");
  PerronResult out;
  if (m.rows() == 1) {
    out.rho = out.rho_left = m(0, 0);
    out.right = out.left = Vec::Ones(1);
    return out;
  }
  const auto right = detail::power_iterate(m, opt);
  const Mat mt = m.transpose();
  const auto left = detail::power_iterate(mt, opt);
  out.rho = right.rho;
  out.rho_left = left.rho;
  out.right = right.v;
  out.left = left.v;
  out.iterations = std::max(right.iterations, left.iterations);
  out.residual = std::max(right.residual, left.residual);
  return out;
}

/// Spectral radius of any nonnegative square matrix: the largest Perron root
/// over its irreducible diagonal blocks (a trivial block without a self-loop
/// contributes 0).
inline double nonneg_spectral_radius(const Mat& m, const SolverOptions& opt = {}) {
  require(m.rows() == m.cols(), ErrorCode::kDimensionMismatch, "matrix is not square");
  require(all_nonnegative(m), ErrorCode::kInvalidArgument, "matrix has negative entries");
  double rho = 0.0;
  for (const IndexSet& block : strong_components(m)) {
    const Index k = static_cast<Index>(block.size());
    Mat sub(k, k);
    for (Index a = 0; a < k; ++a)
      for (Index b = 0; b < k; ++b) sub(a, b) = m(block[a], block[b]);
    if (k == 1 && !(sub(0, 0) > 0.0)) continue;
    rho = std::max(rho, perron_eigen(sub, opt).rho);
  }
  return rho;
}

// ---------------------------------------------------------------------------
// Nonnegative least squares (Lawson-Hanson active set)

inline Vec nnls(const Mat& a, const Vec& b) {
  require(a.rows() == b.size(), ErrorCode::kDimensionMismatch, "nnls: rows vs target");
  const Index n = a.cols();
  Vec x = Vec::Zero(n);
  if (n == 0) return x;
  std::vector<bool> passive(static_cast<std::size_t>(n), false);
  const double tol =
      1e-13 * std::max(1.0, max_abs(a)) * std::max(1.0, b.cwiseAbs().maxCoeff()) * double(n);

  auto solve_passive = [&](Vec& z) {
    IndexSet cols;
    for (Index j = 0; j < n; ++j)
      if (passive[static_cast<std::size_t>(j)]) cols.push_back(j);
    Mat sub(a.rows(), static_cast<Index>(cols.size()));
    for (Index c = 0; c < sub.cols(); ++c) sub.col(c) = a.col(cols[c]);
    const Vec zs = sub.completeOrthogonalDecomposition().solve(b);
    z.setZero(n);
    for (Index c = 0; c < sub.cols(); ++c) z(cols[c]) = zs(c);
  };

  const long max_outer = 3 * n + 10;
  for (long outer = 0; outer < max_outer; ++outer) {
    const Vec w = a.transpose() * (b - a * x);
    Index best = -1;
    double best_w = tol;
    for (Index j = 0; j < n; ++j)
      if (!passive[static_cast<std::size_t>(j)] && w(j) > best_w) {
        best_w = w(j);
        best = j;
      }
    if (best < 0) break;
    passive[static_cast<std::size_t>(best)] = true;

    Vec z;
    solve_passive(z);
    for (long inner = 0; inner < 3 * n + 10; ++inner) {
      bool feasible = true;
      for (Index j = 0; j < n; ++j)
        if (passive[static_cast<std::size_t>(j)] && z(j) <= 0.0) feasible = false;
      if (feasible) break;
      double alpha = 1.0;
      for (Index j = 0; j < n; ++j)
        if (passive[static_cast<std::size_t>(j)] && z(j) <= 0.0)
          alpha = std::min(alpha, x(j) / (x(j) - z(j)));
      x += alpha * (z - x);
      for (Index j = 0; j < n; ++j)
        if (passive[static_cast<std::size_t>(j)] && x(j) <= 1e-15 * std::max(1.0, x.maxCoeff())) {
          passive[static_cast<std::size_t>(j)] = false;
          x(j) = 0.0;
        }
      solve_passive(z);
    }
    x = z.cwiseMax(0.0);
  }
  return x;
}

struct ConeSolution {
  Vec y;
  double residual = 0.0;           // ||C y - target||_2
  double relative_residual = 0.0;  // residual / ||target||_2 (residual itself if target = 0)
  bool interior = false;           // min y_i > interior_tol after max-normalization
};

namespace detail {

inline ConeSolution make_cone_solution(const Mat& c, const Vec& target, Vec y,
                                       const SolverOptions& opt) {
  ConeSolution out;
  out.y = std::move(y);
  out.residual = (c * out.y - target).norm();
  const double tn = target.norm();
  out.relative_residual = tn > 0.0 ? out.residual / tn : out.residual;
  const double ymax = out.y.size() ? out.y.maxCoeff() : 0.0;
  out.interior = ymax > 0.0 && (out.y / ymax).minCoeff() > opt.interior_tol;
  return out;
}

}  // namespace detail

/// Nonnegative y with C*y = target, or NotInCone when target lies outside the
/// cone spanned by the columns of C.
inline ConeSolution solve_nonneg(const Mat& c, const Vec& target, const SolverOptions& opt = {}) {
  require(c.rows() == target.size(), ErrorCode::kDimensionMismatch,
          "solve_nonneg: matrix rows vs target length");
  require(target.allFinite() && c.allFinite(), ErrorCode::kInvalidArgument,
          "solve_nonneg: non-finite input");
  ConeSolution out = detail::make_cone_solution(c, target, nnls(c, target), opt);
  if (out.relative_residual > opt.cone_tol)
    throw Error(ErrorCode::kNotInCone, "target outside the cone (relative residual " +
                                           std::to_string(out.relative_residual) + ")");
  return out;
}

/// Like solve_nonneg, but prefers a strictly positive solution: maximizes t
/// with y >= t*1 by bisection and returns the solution at t*/2. A shifted
/// system counts as solvable only if it is solved as accurately as the base
/// one. Falls back to the boundary solution (interior = false) when no
/// interior point exists.
inline ConeSolution solve_nonneg_positive(const Mat& c, const Vec& target,
                                          const SolverOptions& opt = {}) {
  ConeSolution base = solve_nonneg(c, target, opt);
  if (target.norm() == 0.0 || c.cols() == 0) return base;
  const Vec ones_image = c * Vec::Ones(c.cols());
  const double tn = target.norm();
  const double accept = std::max(2.0 * base.residual, 1e-12 * tn);
  auto shifted = [&](double t, Vec* q) {
    const Vec rhs = target - t * ones_image;
    Vec z = nnls(c, rhs);
    if ((c * z - rhs).norm() > accept) return false;
    if (q) *q = std::move(z);
    return true;
  };

  double lo = 0.0;
  double hi = std::max(base.y.maxCoeff(), std::numeric_limits<double>::min());
  int doublings = 0;
  while (shifted(hi, nullptr) && doublings < 60) {
    lo = hi;
    hi *= 2.0;
    ++doublings;
  }
  for (int it = 0; it < 60 && hi - lo > 1e-12 * hi; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (shifted(mid, nullptr)) lo = mid;
    else hi = mid;
  }
  if (lo <= 0.0) return base;
  const double t = 0.5 * lo;
  Vec q;
  if (!shifted(t, &q)) return base;
  ConeSolution inner = detail::make_cone_solution(c, target, (q.array() + t).matrix(), opt);
  return inner.interior ? inner : base;
}

// ---------------------------------------------------------------------------
// Constructive equilibria for B = C * B1

struct ConstructedEquilibrium {
  Vec p;                      // money-normalized when p_0 > 0
  Vec y;                      // demand scales at p
  Vec weights;                // Perron weights d (first construction) or ones (second)
  bool strictly_positive = false;
  EquilibriumReport report;
};

namespace detail {

inline void require_construction_inputs(const Mat& c, const Mat& b1) {
  require(b1.rows() == b1.cols(), ErrorCode::kDimensionMismatch, "B1 must be square (l x l)");
  require(c.cols() == b1.rows(), ErrorCode::kDimensionMismatch,
          "C has " + std::to_string(c.cols()) + " consumers, B1 is " + std::to_string(b1.rows()) +
              " x " + std::to_string(b1.cols()));
  require(all_nonnegative(c), ErrorCode::kInvalidArgument, "C has negative entries");
  require(all_nonnegative(b1), ErrorCode::kInvalidArgument, "B1 has negative entries");
  for (Index i = 0; i < c.cols(); ++i)
    require(c.col(i).sum() > 0.0, ErrorCode::kPreconditionFailed,
            "demand vector " + std::to_string(i) + " is zero");
}

inline ConstructedEquilibrium finish_construction(const Mat& c, const Mat& b1, const Vec& p_raw,
                                                  Vec weights, bool interior,
                                                  const SolverOptions& opt) {
  ConstructedEquilibrium out;
  const ExchangeEconomy econ(c, c * b1);
  const PriceVector price(p_raw);
  out.p = price.normalized();
  out.weights = std::move(weights);
  out.strictly_positive = interior && (out.p.array() > 0.0).all();
  out.y = demand_scales(econ, price);
  out.report = check_equilibrium(econ, price, opt.tol);
  if (!out.report.is_equilibrium || !out.report.strict_set.empty())
    throw Error(ErrorCode::kVerificationFailed,
                "constructed price does not clear every market");
  return out;
}

}  // namespace detail

/// B1 irreducible: d solves sum_k b1_ks d_k = y_s d_s with y = B1*1 (the left
/// Perron vector of diag(1/y) B1, rescaled by 1/y); the price then solves
/// C^T p = d. NoPositivePrice when d is outside the cone of the rows of C.
inline ConstructedEquilibrium theorem7_equilibrium(const Mat& c, const Mat& b1,
                                                   const SolverOptions& opt = {}) {
  detail::require_construction_inputs(c, b1);
  require(is_irreducible(b1), ErrorCode::kNotIrreducible, "B1 is reducible");
  const Vec y = b1.rowwise().sum();
  Mat stochastic = b1;
  for (Index k = 0; k < b1.rows(); ++k) stochastic.row(k) /= y(k);
  const PerronResult pr = perron_eigen(stochastic, opt);
  const Vec d = pr.left.cwiseQuotient(y);

  ConeSolution price;
  try {
    price = solve_nonneg_positive(c.transpose(), d, opt);
  } catch (const Error& e) {
    if (e.code() != ErrorCode::kNotInCone) throw;
    throw Error(ErrorCode::kNoPositivePrice,
                "C^T p = d has no nonnegative solution (weights outside the cone)");
  }
  return detail::finish_construction(c, b1, price.y, d, price.interior, opt);
}

/// Column sums ybar of B1 must satisfy C*ybar = psi; the price then solves
/// <C_i,p> = 1 for every consumer.
inline ConstructedEquilibrium theorem8_equilibrium(const Mat& c, const Mat& b1, const Vec& psi,
                                                   const SolverOptions& opt = {}) {
  detail::require_construction_inputs(c, b1);
  require(psi.size() == c.rows(), ErrorCode::kDimensionMismatch, "psi has wrong length");
  const Vec ybar = b1.colwise().sum().transpose();
  const Vec implied = c * b1.rowwise().sum();
  const double scale = std::max(1.0, psi.cwiseAbs().maxCoeff());
  require((c * ybar - psi).cwiseAbs().maxCoeff() <= opt.cone_tol * scale,
          ErrorCode::kPreconditionFailed, "column sums of B1 do not solve C*ybar = psi");
  require((implied - psi).cwiseAbs().maxCoeff() <= opt.cone_tol * scale,
          ErrorCode::kPreconditionFailed, "psi differs from the total supply of B = C*B1");

  const Vec ones = Vec::Ones(c.cols());
  ConeSolution price;
  try {
    price = solve_nonneg_positive(c.transpose(), ones, opt);
  } catch (const Error& e) {
    if (e.code() != ErrorCode::kNotInCone) throw;
    throw Error(ErrorCode::kNoPositivePrice, "<C_i,p> = 1 has no nonnegative solution");
  }
  return detail::finish_construction(c, b1, price.y, ones, price.interior, opt);
}

}  // namespace eqrec
