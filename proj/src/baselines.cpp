#include "evflow/baselines.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

namespace evflow {

Mat linear_interpolation_point(const Mat& k1, const Mat& k2, double t) {
  require(k1.rows() == k2.rows() && k1.cols() == k2.cols(),
          Err::DimensionMismatch, "interpolation endpoints differ in shape");
  require(t >= 0.0 && t <= 1.0, Err::OutOfRange,
          "interpolation parameter must lie in [0, 1]");
  return (1.0 - t) * k1 + t * k2;
}

KernelBundle alternating_diffusion_kernel(const KernelBundle& b1,
                                          const KernelBundle& b2, int steps,
                                          double epsilon) {
  require(b1.a.rows() == b2.a.rows(), Err::DimensionMismatch,
          "bundles must describe the same points");
  require(steps >= 1, Err::OutOfRange, "step count must be at least 1");
  const Eigen::Index n = b1.a.rows();

  // Column-stochastic composite operator.
  Mat ad = b2.a.transpose() * b1.a.transpose();
  Mat power = ad;
  for (int s = 1; s < steps; ++s) power = ad * power;

  // Pairwise distances between columns.
  Mat d2 = pairwise_sq_dists(power.transpose());
  if (epsilon <= 0.0) {
    std::vector<double> vals;
    vals.reserve(static_cast<size_t>(n) * (n - 1) / 2);
    for (Eigen::Index i = 0; i < n; ++i)
      for (Eigen::Index j = i + 1; j < n; ++j) vals.push_back(d2(i, j));
    std::sort(vals.begin(), vals.end());
    size_t m = vals.size();
    epsilon = (m % 2 == 1) ? vals[m / 2]
                           : 0.5 * (vals[m / 2 - 1] + vals[m / 2]);
    require(epsilon > 0.0, Err::DegenerateData,
            "median alternating-diffusion distance is zero");
  }
  Mat w = (-d2 / epsilon).array().exp().matrix();
  KernelBundle out = normalize_to_spd(w);
  out.epsilon = epsilon;
  return out;
}

double smoothness_score(const Mat& basis_ell, const Mat& x) {
  require(basis_ell.rows() == x.rows(), Err::DimensionMismatch,
          "basis and signal lengths differ");
  double total = x.squaredNorm();
  require(total > 0.0, Err::ZeroVector,
          "smoothness of the zero signal is undefined");
  return (basis_ell.transpose() * x).squaredNorm() / total;
}

double smoothness_score(const Mat& basis_ell, const Vec& x) {
  return smoothness_score(basis_ell, Mat(x));
}

Vec kernel_diffusion_distances(const Mat& k, int t_steps,
                               const std::vector<std::pair<int, int>>& pairs) {
  require(k.rows() == k.cols(), Err::DimensionMismatch,
          "kernel must be square");
  require(t_steps >= 1, Err::OutOfRange, "step count must be at least 1");
  const Eigen::Index n = k.rows();
  Vec row_sums = k.rowwise().sum();
  for (Eigen::Index i = 0; i < n; ++i)
    require(row_sums(i) != 0.0, Err::ZeroRowSum,
            "kernel row " + std::to_string(i) + " sums to zero");
  Mat a = row_sums.cwiseInverse().asDiagonal() * k;
  Mat at = a;
  for (int s = 1; s < t_steps; ++s) at = at * a;

  Vec out(pairs.size());
  for (size_t p = 0; p < pairs.size(); ++p) {
    auto [i, j] = pairs[p];
    require(i >= 0 && i < n && j >= 0 && j < n, Err::IndexOutOfRange,
            "distance pair index outside the kernel");
    out(p) = (at.row(i) - at.row(j)).norm();
  }
  return out;
}

PolyfitResult polyfit_correspondence(const Vec& d_kernel, const Vec& d_latent,
                                     int degree) {
  require(d_kernel.size() == d_latent.size(), Err::DimensionMismatch,
          "distance vectors differ in length");
  require(degree >= 1 && degree <= 5, Err::OutOfRange,
          "polynomial degree must lie in [1, 5]");
  require(d_kernel.size() >= degree + 1, Err::DegenerateDesign,
          "not enough samples for the requested degree");
  check_finite(d_kernel, "kernel distances");
  check_finite(d_latent, "latent distances");

  double scale = d_kernel.cwiseAbs().maxCoeff();
  require(scale > 0.0, Err::DegenerateDesign,
          "kernel distances are identically zero");
  double spread = d_kernel.maxCoeff() - d_kernel.minCoeff();
  require(spread > 1e-14 * scale, Err::DegenerateDesign,
          "kernel distances are constant; the fit is underdetermined");

  const Eigen::Index n = d_kernel.size();
  Mat design(n, degree + 1);
  for (Eigen::Index i = 0; i < n; ++i) {
    double u = d_kernel(i) / scale;
    double p = 1.0;
    for (int j = 0; j <= degree; ++j) {
      design(i, j) = p;
      p *= u;
    }
  }
  Mat gram = design.transpose() * design;
  Vec rhs = design.transpose() * d_latent;
  Eigen::LDLT<Mat> ldlt(gram);
  require(ldlt.info() == Eigen::Success, Err::DegenerateDesign,
          "normal equations are singular");
  Vec coeffs = ldlt.solve(rhs);
  check_finite(coeffs, "polynomial coefficients");

  PolyfitResult out;
  out.coeffs = coeffs;
  out.scale = scale;
  Vec fitted = design * coeffs;
  out.residual = (d_latent - fitted).squaredNorm();
  double mean = d_latent.mean();
  double total = (d_latent.array() - mean).square().sum();
  out.r2 = (total > 0.0) ? 1.0 - out.residual / total : 1.0;
  return out;
}

}  // namespace evflow
