#pragma once

// Small dense helpers shared by every module. Goods and consumers are
// 0-based internally; reports shift to 1-based only at the I/O boundary.

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include "eqrec/errors.hpp"

namespace eqrec {

using Vec = Eigen::VectorXd;
using Mat = Eigen::MatrixXd;
using Index = Eigen::Index;
using IndexSet = std::vector<Index>;

inline bool all_finite(const Mat& m) { return m.allFinite(); }

inline bool all_nonnegative(const Mat& m) { return (m.array() >= 0.0).all(); }

inline void require_same_rows(const Mat& a, const Mat& b, const std::string& what) {
  require(a.rows() == b.rows(), ErrorCode::kDimensionMismatch,
          what + ": " + std::to_string(a.rows()) + " vs " + std::to_string(b.rows()) + " rows");
}

inline void require_same_shape(const Mat& a, const Mat& b, const std::string& what) {
  require(a.rows() == b.rows() && a.cols() == b.cols(), ErrorCode::kDimensionMismatch,
          what + ": " + std::to_string(a.rows()) + "x" + std::to_string(a.cols()) + " vs " +
              std::to_string(b.rows()) + "x" + std::to_string(b.cols()));
}

/// Indices in [0, n) that are not in `set`; `set` need not be sorted.
inline IndexSet complement(const IndexSet& set, Index n) {
  std::vector<bool> member(static_cast<std::size_t>(n), false);
  for (Index k : set) {
    require(k >= 0 && k < n, ErrorCode::kInvalidArgument,
            "index " + std::to_string(k) + " outside [0, " + std::to_string(n) + ")");
    member[static_cast<std::size_t>(k)] = true;
  }
  IndexSet out;
  for (Index k = 0; k < n; ++k)
    if (!member[static_cast<std::size_t>(k)]) out.push_back(k);
  return out;
}

inline IndexSet sorted_unique(IndexSet set) {
  std::sort(set.begin(), set.end());
  set.erase(std::unique(set.begin(), set.end()), set.end());
  return set;
}

inline bool contains(const IndexSet& set, Index k) {
  return std::find(set.begin(), set.end(), k) != set.end();
}

/// Number of singular values above rel_tol * max(largest singular value, scale).
/// `scale` lets a difference of two matrices be judged against the operands.
inline Index numerical_rank(const Mat& m, double rel_tol = 1e-8, double scale = 0.0) {
  if (m.size() == 0) return 0;
  Eigen::JacobiSVD<Mat> svd(m);
  const Vec& sv = svd.singularValues();
  if (sv.size() == 0 || sv(0) == 0.0) return 0;
  const double cut = rel_tol * std::max(sv(0), scale);
  Index rank = 0;
  for (Index i = 0; i < sv.size(); ++i)
    if (sv(i) > cut) ++rank;
  return rank;
}

inline double max_abs(const Mat& m) { return m.size() == 0 ? 0.0 : m.cwiseAbs().maxCoeff(); }

}  // namespace eqrec
