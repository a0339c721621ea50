#include "evflow/kernel.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

namespace evflow {

Mat pairwise_sq_dists(const Mat& x) {
  check_finite(x, "pairwise distance input");
  const Eigen::Index n = x.rows();
  Vec sq = x.rowwise().squaredNorm();
  Mat d = sq.replicate(1, n) + sq.transpose().replicate(n, 1) -
          2.0 * (x * x.transpose());
  d = d.cwiseMax(0.0);
  d.diagonal().setZero();
  return d;
}

double median_scale(const Mat& x) {
  const Eigen::Index n = x.rows();
  require(n >= 2, Err::DegenerateData, "median_scale needs at least 2 points");
  Mat d = pairwise_sq_dists(x);
  std::vector<double> vals;
  vals.reserve(static_cast<size_t>(n) * (n - 1) / 2);
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = i + 1; j < n; ++j) vals.push_back(d(i, j));
  std::sort(vals.begin(), vals.end());
  double med;
  size_t m = vals.size();
  if (m % 2 == 1) {
    med = vals[m / 2];
  } else {
    med = 0.5 * (vals[m / 2 - 1] + vals[m / 2]);
  }
  require(med > 0.0, Err::DegenerateData,
          "median pairwise distance is zero (coincident points)");
  return med;
}

Mat gaussian_affinity(const Mat& x, double epsilon) {
  require(epsilon > 0.0 && std::isfinite(epsilon), Err::NonPositiveScale,
          "affinity scale must be positive and finite");
  Mat d = pairwise_sq_dists(x);
  return (-d / epsilon).array().exp().matrix();
}

KernelBundle normalize_to_spd(const Mat& w) {
  require(w.rows() == w.cols(), Err::DimensionMismatch,
          "affinity matrix must be square");
  check_finite(w, "affinity matrix");
  require((w.array() >= 0.0).all(), Err::DomainError,
          "affinity matrix has negative entries");
  const Eigen::Index n = w.rows();

  KernelBundle b;
  b.w = w;
  b.dbar = w.rowwise().sum();
  for (Eigen::Index i = 0; i < n; ++i)
    require(b.dbar(i) > 0.0, Err::ZeroRowSum,
            "affinity row " + std::to_string(i) + " sums to zero");

  Vec inv_dbar = b.dbar.cwiseInverse();
  Mat kbar = inv_dbar.asDiagonal() * w * inv_dbar.asDiagonal();
  b.d = kbar.rowwise().sum();
  for (Eigen::Index i = 0; i < n; ++i)
    require(b.d(i) > 0.0, Err::ZeroRowSum,
            "normalized row " + std::to_string(i) + " sums to zero");

  b.a = b.d.cwiseInverse().asDiagonal() * kbar;
  Vec inv_sqrt_d = b.d.cwiseSqrt().cwiseInverse();
  b.k = symmetrize(inv_sqrt_d.asDiagonal() * kbar * inv_sqrt_d.asDiagonal());
  return b;
}

KernelBundle build_kernel(const Mat& x, double epsilon) {
  if (epsilon <= 0.0) epsilon = median_scale(x);
  KernelBundle b = normalize_to_spd(gaussian_affinity(x, epsilon));
  b.epsilon = epsilon;
  return b;
}

Mat diffusion_map_embedding(const KernelBundle& bundle, double t, int ell) {
  const Eigen::Index n = bundle.k.rows();
  require(ell >= 1 && ell <= n - 1, Err::OutOfRange,
          "embedding dimension must lie in [1, n-1]");
  require(t > 0.0, Err::OutOfRange, "diffusion time must be positive");
  EigDecomposition e = eig_sym(bundle.k);

  // Right eigenvectors of a, unit-norm in l2(pi).
  double total = bundle.d.sum();
  Vec inv_sqrt_d = bundle.d.cwiseSqrt().cwiseInverse();
  Mat out(n, ell);
  for (int j = 0; j < ell; ++j) {
    // Skip the stationary pair (k = 1).
    Vec v = inv_sqrt_d.asDiagonal() * e.vectors.col(j + 1);
    double norm_pi = std::sqrt(
        (bundle.d.array() * v.array().square()).sum() / total);
    v /= norm_pi;
    // The kernel is SPD; tiny negative trailing eigenvalues are roundoff.
    double mu = e.values(j + 1);
    if (mu < 0.0) {
      require(mu > -1e-12 * e.values(0), Err::NotPositiveDefinite,
              "normalized kernel has a significantly negative eigenvalue");
      mu = 0.0;
    }
    out.col(j) = std::pow(mu, t) * v;
  }
  return out;
}

double unnormalized_diffusion_distance(const KernelBundle& bundle, int steps,
                                       int i, int j) {
  const Eigen::Index n = bundle.a.rows();
  require(steps >= 1, Err::OutOfRange, "step count must be at least 1");
  require(i >= 0 && i < n && j >= 0 && j < n, Err::IndexOutOfRange,
          "diffusion distance point index outside the dataset");
  Eigen::RowVectorXd ri = bundle.a.row(i);
  Eigen::RowVectorXd rj = bundle.a.row(j);
  for (int s = 1; s < steps; ++s) {
    ri = ri * bundle.a;
    rj = rj * bundle.a;
  }
  return (ri - rj).norm();
}

}  // namespace evflow
