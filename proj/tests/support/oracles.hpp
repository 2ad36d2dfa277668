#pragma once

// Reference computations written independently of the library: plain loops in
// long double over std::vector data, or dense Eigen decompositions the library
// does not use.

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>
#include <complex>
#include <vector>

namespace oracle {

using Mat = Eigen::MatrixXd;
using Vec = Eigen::VectorXd;
using ld = long double;

/// sum_i C_ki <b_i,p>/<C_i,p> - sum_i b_ki.
inline std::vector<ld> excess_demand(const Mat& c, const Mat& b, const Vec& p) {
  const auto n = static_cast<std::size_t>(c.rows());
  const auto l = static_cast<std::size_t>(c.cols());
  std::vector<ld> out(n, 0.0L);
  for (std::size_t i = 0; i < l; ++i) {
    ld bp = 0, cp = 0;
    for (std::size_t k = 0; k < n; ++k) {
      bp += static_cast<ld>(b(k, i)) * p(k);
      cp += static_cast<ld>(c(k, i)) * p(k);
    }
    for (std::size_t k = 0; k < n; ++k) out[k] += c(k, i) * (bp / cp) - b(k, i);
  }
  return out;
}

struct Accounts {
  std::vector<std::vector<ld>> x;  // x[k][i]
  std::vector<ld> out, cf, ex, im, pi;
};

inline Accounts from_eigen(const Mat& x, const Vec& out, const Vec& cf, const Vec& ex,
                           const Vec& im, const Vec& pi) {
  Accounts a;
  const auto m = static_cast<std::size_t>(x.rows());
  a.x.assign(m, std::vector<ld>(m));
  for (std::size_t k = 0; k < m; ++k)
    for (std::size_t i = 0; i < m; ++i) a.x[k][i] = x(k, i);
  for (std::size_t k = 0; k < m; ++k) {
    a.out.push_back(out(k));
    a.cf.push_back(cf(k));
    a.ex.push_back(ex(k));
    a.im.push_back(im(k));
    a.pi.push_back(pi(k));
  }
  return a;
}

/// The four demand terms evaluated separately, then combined.
inline std::vector<ld> demand(const Accounts& a) {
  const std::size_t m = a.out.size();
  ld cf_sum = 0, ex_sum = 0, im_sum = 0, new_value = 0, resource = 0;
  for (std::size_t s = 0; s < m; ++s) {
    cf_sum += a.cf[s];
    ex_sum += a.ex[s];
    im_sum += a.im[s];
    new_value += (1 - a.pi[s]) * a.out[s];
  }
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = 0; j < m; ++j) resource += a.x[i][j] * a.pi[j];
  std::vector<ld> d(m, 0.0L);
  for (std::size_t k = 0; k < m; ++k) {
    ld production = 0, retained = 0;
    for (std::size_t i = 0; i < m; ++i) {
      ld column = 0;
      for (std::size_t s = 0; s < m; ++s) column += a.x[s][i];
      if (column > 0) production += a.x[k][i] * a.pi[i] * a.out[i] / column;
      retained += a.x[k][i] * a.pi[i];
    }
    const ld household = a.cf[k] * (new_value + resource) / cf_sum;
    const ld trade = ex_sum > 0 ? a.ex[k] * im_sum / ex_sum : 0;
    d[k] = production + household + trade - retained;
  }
  return d;
}

inline std::vector<ld> supply(const Accounts& a) {
  std::vector<ld> s(a.out.size());
  for (std::size_t k = 0; k < s.size(); ++k) s[k] = a.out[k] + a.im[k];
  return s;
}

inline ld gdp(const Accounts& a) {
  ld g = 0;
  for (std::size_t k = 0; k < a.out.size(); ++k) {
    g += a.out[k];
    for (std::size_t i = 0; i < a.out.size(); ++i) g -= a.x[k][i];
  }
  return g;
}

inline ld recession_ratio(const Accounts& a) {
  const auto d = demand(a);
  const auto s = supply(a);
  ld lack = 0;
  for (std::size_t k = 0; k < d.size(); ++k)
    if (d[k] < s[k]) lack += s[k] - d[k];
  return lack / gdp(a);
}

struct Eigenpair {
  double rho = 0;
  Vec vector;  // real, max-norm 1, nonnegative orientation
};

/// Dominant eigenpair from a full nonsymmetric eigendecomposition.
inline Eigenpair dominant(const Mat& m) {
  Eigen::EigenSolver<Mat> es(m);
  const auto values = es.eigenvalues();
  Eigen::Index best = 0;
  for (Eigen::Index i = 1; i < values.size(); ++i)
    if (values(i).real() > values(best).real()) best = i;
  Eigenpair out;
  out.rho = values(best).real();
  Vec v = es.eigenvectors().col(best).real();
  const Eigen::Index arg = [&] {
    Eigen::Index a = 0;
    v.cwiseAbs().maxCoeff(&a);
    return a;
  }();
  out.vector = v / v(arg);
  return out;
}

/// Rank from singular values of a divide-and-conquer SVD.
inline long rank(const Mat& m, double rel_tol = 1e-8, double scale = 0.0) {
  if (m.size() == 0) return 0;
  Eigen::BDCSVD<Mat> svd(m);
  const Vec s = svd.singularValues();
  if (s.size() == 0 || s(0) == 0.0) return 0;
  long r = 0;
  for (Eigen::Index i = 0; i < s.size(); ++i)
    if (s(i) > rel_tol * std::max(s(0), scale)) ++r;
  return r;
}

inline double max_abs_diff(const std::vector<ld>& a, const Vec& b) {
  double worst = 0;
  for (std::size_t k = 0; k < a.size(); ++k)
    worst = std::max(worst, static_cast<double>(std::fabs(a[k] - static_cast<ld>(b(static_cast<Eigen::Index>(k))))));
  return worst;
}

}  // namespace oracle
