#include "evflow/spd.hpp"

#include <cmath>

namespace evflow {

namespace {

// Spectral power with an explicit policy for small eigenvalues.
// clamp_rel > 0: lift eigenvalues to clamp_rel * lambda_max.
// clamp_rel == 0: raise NotPositiveDefinite below floor_rel * lambda_max.
Mat power_with_policy(const Mat& k, double t, double clamp_rel,
                      double floor_rel, const char* what) {
  EigDecomposition e = evd(k);
  double lmax = e.values(0);
  require(lmax > 0.0, Err::NotPositiveDefinite,
          std::string(what) + " has no positive eigenvalue");
  Vec lam = e.values;
  if (clamp_rel > 0.0) {
    double lo = clamp_rel * lmax;
    for (Eigen::Index i = 0; i < lam.size(); ++i)
      lam(i) = std::max(lam(i), lo);
  } else {
    double floor = floor_rel * lmax;
    for (Eigen::Index i = 0; i < lam.size(); ++i)
      require(lam(i) > floor, Err::NotPositiveDefinite,
              std::string(what) + " eigenvalue at or below positivity floor");
  }
  Vec pw(lam.size());
  for (Eigen::Index i = 0; i < lam.size(); ++i) pw(i) = std::pow(lam(i), t);
  return symmetrize(e.vectors * pw.asDiagonal() * e.vectors.transpose());
}

}  // namespace

EigDecomposition evd(const Mat& k) { return eig_sym(k); }

Mat fractional_power(const Mat& k, double t, double floor_rel) {
  require(std::isfinite(t), Err::OutOfRange, "power exponent must be finite");
  return power_with_policy(k, t, 0.0, floor_rel, "fractional_power input");
}

Mat geodesic_point(const Mat& k1, const Mat& k2, double t,
                   double eig_clamp_rel) {
  require(k1.rows() == k1.cols() && k2.rows() == k2.cols() &&
              k1.rows() == k2.rows(),
          Err::DimensionMismatch, "geodesic endpoints must be same-size square");
  require(t >= 0.0 && t <= 1.0, Err::OutOfRange,
          "geodesic parameter must lie in [0, 1]");
  check_finite(k1, "geodesic endpoint 1");
  check_finite(k2, "geodesic endpoint 2");

  Mat half = power_with_policy(k1, 0.5, eig_clamp_rel, kSpdFloorRel,
                               "geodesic endpoint 1");
  Mat inv_half = power_with_policy(k1, -0.5, eig_clamp_rel, kSpdFloorRel,
                                   "geodesic endpoint 1");
  Mat ct;
  if (eig_clamp_rel > 0.0) {
    // Regularized mode: both endpoint spectra are lifted, and the whitened
    // matrix only gets a representability floor against roundoff.
    Mat k2c = power_with_policy(k2, 1.0, eig_clamp_rel, kSpdFloorRel,
                                "geodesic endpoint 2");
    Mat c = symmetrize(inv_half * k2c * inv_half);
    EigDecomposition ec = evd(c);
    Vec lam = ec.values.cwiseMax(1e-300);
    Vec pw(lam.size());
    for (Eigen::Index i = 0; i < lam.size(); ++i)
      pw(i) = std::pow(lam(i), t);
    ct = symmetrize(ec.vectors * pw.asDiagonal() * ec.vectors.transpose());
  } else {
    Mat c = symmetrize(inv_half * k2 * inv_half);
    ct = power_with_policy(c, t, 0.0, kSpdFloorRel,
                           "whitened midpoint matrix");
  }
  return symmetrize(half * ct * half);
}

double affine_invariant_distance(const Mat& k1, const Mat& k2) {
  require(k1.rows() == k1.cols() && k2.rows() == k2.cols() &&
              k1.rows() == k2.rows(),
          Err::DimensionMismatch, "distance endpoints must be same-size square");
  Mat inv_half =
      power_with_policy(k1, -0.5, 0.0, kSpdFloorRel, "distance endpoint 1");
  Mat c = symmetrize(inv_half * k2 * inv_half);
  EigDecomposition e = evd(c);
  double lmax = e.values(0);
  require(lmax > 0.0, Err::NotPositiveDefinite,
          "distance endpoint 2 is not positive definite");
  double s = 0.0;
  for (Eigen::Index i = 0; i < e.values.size(); ++i) {
    require(e.values(i) > kSpdFloorRel * lmax, Err::NotPositiveDefinite,
            "distance endpoint 2 eigenvalue at or below positivity floor");
    double l = std::log(e.values(i));
    s += l * l;
  }
  return std::sqrt(s);
}

SpsdKernel truncate_to_rank(const Mat& k, int p) {
  require(k.rows() == k.cols(), Err::DimensionMismatch,
          "truncate_to_rank needs a square matrix");
  require(p >= 1, Err::OutOfRange, "rank must be at least 1");
  require(p <= k.rows(), Err::RankTooHigh,
          "requested rank exceeds matrix size");
  EigDecomposition e = evd(k);
  require(e.values(p - 1) > 0.0, Err::NotPositiveDefinite,
          "leading block contains a non-positive eigenvalue");
  SpsdKernel out;
  out.U = e.vectors.leftCols(p);
  out.core = e.values.head(p).asDiagonal();
  return out;
}

SpsdKernel spsd_geodesic_point(const SpsdKernel& a, const SpsdKernel& b,
                               double t) {
  require(a.rank() == b.rank(), Err::RankMismatch,
          "fixed-rank geodesic endpoints have different ranks");
  require(a.n() == b.n(), Err::DimensionMismatch,
          "fixed-rank geodesic endpoints have different sizes");
  require(t >= 0.0 && t <= 1.0, Err::OutOfRange,
          "geodesic parameter must lie in [0, 1]");
  const int p = a.rank();

  // Principal angles between the two ranges via the SVD of U_a^T U_b.
  Eigen::JacobiSVD<Mat> svd(a.U.transpose() * b.U,
                            Eigen::ComputeFullU | Eigen::ComputeFullV);
  Mat oa = svd.matrixU();
  Mat ob = svd.matrixV();
  Vec sigma = svd.singularValues();

  Mat va = a.U * oa;
  Mat vb = b.U * ob;
  Vec theta(p);
  Mat x = Mat::Zero(a.n(), p);
  for (int i = 0; i < p; ++i) {
    double s = std::min(1.0, std::max(-1.0, sigma(i)));
    theta(i) = std::acos(s);
    if (std::abs(theta(i)) >= 1e-10) {
      // Unit tangent direction orthogonal to va in span(va, vb).
      x.col(i) = (vb.col(i) - s * va.col(i)) / std::sin(theta(i));
    }
  }

  SpsdKernel out;
  out.U = Mat(a.n(), p);
  for (int i = 0; i < p; ++i) {
    if (std::abs(theta(i)) < 1e-10) {
      out.U.col(i) = va.col(i);
    } else {
      out.U.col(i) = va.col(i) * std::cos(theta(i) * t) +
                     x.col(i) * std::sin(theta(i) * t);
    }
  }

  // Cores expressed in the rotated bases, then moved along the SPD geodesic.
  Mat core_a = symmetrize(oa.transpose() * a.core * oa);
  Mat core_b = symmetrize(ob.transpose() * b.core * ob);
  if (t == 0.0) {
    out.core = core_a;
  } else if (t == 1.0) {
    out.core = core_b;
  } else {
    out.core = geodesic_point(core_a, core_b, t);
  }
  return out;
}

}  // namespace evflow
