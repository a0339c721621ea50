#include "evflow/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <vector>

namespace evflow {

void check_finite(const Mat& m, const std::string& what) {
  if (!m.allFinite()) fail(Err::NonFinite, what + " contains NaN or Inf");
}

void check_finite(const Vec& v, const std::string& what) {
  if (!v.allFinite()) fail(Err::NonFinite, what + " contains NaN or Inf");
}

Mat symmetrize(const Mat& m) { return 0.5 * (m + m.transpose()); }

void apply_sign_convention(Mat& vectors) {
  for (Eigen::Index j = 0; j < vectors.cols(); ++j) {
    Eigen::Index pivot = 0;
    double best = -1.0;
    for (Eigen::Index i = 0; i < vectors.rows(); ++i) {
      double a = std::abs(vectors(i, j));
      if (a > best) {  // strict: ties keep the lowest index
        best = a;
        pivot = i;
      }
    }
    if (vectors(pivot, j) < 0.0) vectors.col(j) = -vectors.col(j);
  }
}

EigDecomposition eig_sym(const Mat& m) {
  require(m.rows() == m.cols(), Err::DimensionMismatch,
          "eig_sym needs a square matrix");
  check_finite(m, "eig_sym input");
  Eigen::SelfAdjointEigenSolver<Mat> es(symmetrize(m));
  if (es.info() != Eigen::Success)
    fail(Err::NoConvergence, "symmetric eigensolver did not converge");
  const Eigen::Index n = m.rows();
  EigDecomposition out;
  out.values = Vec(n);
  out.vectors = Mat(n, n);
  // Eigen returns ascending order; emit descending. Exact eigenvalue ties are
  // broken by lexicographic comparison of the sign-fixed columns so the
  // output is a deterministic function of the input matrix.
  std::vector<Eigen::Index> order(n);
  std::iota(order.begin(), order.end(), Eigen::Index(0));
  std::reverse(order.begin(), order.end());
  Mat v = es.eigenvectors();
  apply_sign_convention(v);
  std::stable_sort(order.begin(), order.end(),
                   [&](Eigen::Index a, Eigen::Index b) {
                     double la = es.eigenvalues()(a), lb = es.eigenvalues()(b);
                     if (la != lb) return la > lb;
                     for (Eigen::Index i = 0; i < n; ++i) {
                       if (v(i, a) != v(i, b)) return v(i, a) > v(i, b);
                     }
                     return false;
                   });
  for (Eigen::Index k = 0; k < n; ++k) {
    out.values(k) = es.eigenvalues()(order[k]);
    out.vectors.col(k) = v.col(order[k]);
  }
  return out;
}

PartialEig partial_eig_sym(const std::function<void(const Mat&, Mat&)>& apply,
                           int n, int want, int block_size, const Mat& guess,
                           double rel_tol, int max_iter) {
  require(n > 0 && want > 0, Err::OutOfRange,
          "partial_eig_sym needs positive sizes");
  require(want <= n, Err::RankTooHigh, "more eigenpairs requested than size");
  block_size = std::min(std::max(block_size, want), n);

  Mat V(n, block_size);
  if (guess.rows() == n && guess.cols() >= block_size) {
    V = guess.leftCols(block_size);
  } else if (guess.rows() == n && guess.cols() > 0) {
    V.leftCols(guess.cols()) = guess;
    // Deterministic fill for the remaining columns.
    for (Eigen::Index j = guess.cols(); j < block_size; ++j)
      for (Eigen::Index i = 0; i < n; ++i)
        V(i, j) = std::cos(double(i + 1) * double(j + 1));
  } else {
    for (Eigen::Index j = 0; j < block_size; ++j)
      for (Eigen::Index i = 0; i < n; ++i)
        V(i, j) = (i == j) ? 1.0 : std::cos(double(i + 1) * double(j + 1));
  }

  Eigen::HouseholderQR<Mat> qr(V);
  V = qr.householderQ() * Mat::Identity(n, block_size);

  Mat W(n, block_size);
  Vec prev = Vec::Constant(want, std::numeric_limits<double>::infinity());
  PartialEig out;
  for (int iter = 1; iter <= max_iter; ++iter) {
    apply(V, W);
    Mat h = V.transpose() * W;
    Eigen::SelfAdjointEigenSolver<Mat> es(symmetrize(h));
    if (es.info() != Eigen::Success)
      fail(Err::NoConvergence, "Rayleigh-Ritz solve failed");
    // Ascending -> descending rotation.
    Mat rot(block_size, block_size);
    Vec ritz(block_size);
    for (int k = 0; k < block_size; ++k) {
      rot.col(k) = es.eigenvectors().col(block_size - 1 - k);
      ritz(k) = es.eigenvalues()(block_size - 1 - k);
    }
    V = V * rot;
    W = W * rot;
    out.iterations = iter;

    double scale = std::max(std::abs(ritz(0)), 1e-300);
    double delta = 0.0;
    for (int k = 0; k < want; ++k)
      delta = std::max(delta, std::abs(ritz(k) - prev(k)));
    prev = ritz.head(want);
    if (delta <= rel_tol * scale) {
      out.values = ritz.head(want);
      out.vectors = V.leftCols(want);
      apply_sign_convention(out.vectors);
      out.block = V;
      return out;
    }
    // Next subspace: span of A*V, orthonormalized.
    Eigen::HouseholderQR<Mat> step(W);
    V = step.householderQ() * Mat::Identity(n, block_size);
  }
  fail(Err::NoConvergence, "subspace iteration exceeded max_iter");
}

double frobenius_distance(const Mat& a, const Mat& b) {
  require(a.rows() == b.rows() && a.cols() == b.cols(),
          Err::DimensionMismatch, "frobenius_distance shapes differ");
  return (a - b).norm();
}

}  // namespace evflow
