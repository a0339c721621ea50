#pragma once

#include "evflow/linalg.hpp"

namespace evflow {

// Relative eigenvalue floor below which a matrix is not treated as strictly
// positive definite.
inline constexpr double kSpdFloorRel = 1e-12;

// Symmetric EVD of a kernel matrix (descending, sign-fixed columns).
EigDecomposition evd(const Mat& k);

// k^t for symmetric positive definite k via the spectral map. Eigenvalues at
// or below floor_rel * lambda_max raise NotPositiveDefinite.
Mat fractional_power(const Mat& k, double t, double floor_rel = kSpdFloorRel);

// Point on the affine-invariant geodesic between two SPD kernels,
// k1^{1/2} (k1^{-1/2} k2 k1^{-1/2})^t k1^{1/2}, for t in [0, 1].
// With eig_clamp_rel > 0 eigenvalues of each kernel are clamped up to
// eig_clamp_rel * lambda_max instead of raising, which regularizes kernels
// whose trailing spectrum underflows.
Mat geodesic_point(const Mat& k1, const Mat& k2, double t,
                   double eig_clamp_rel = 0.0);

// Riemannian distance sqrt(sum log^2 eig(k1^{-1/2} k2 k1^{-1/2})).
double affine_invariant_distance(const Mat& k1, const Mat& k2);

// Fixed-rank positive semidefinite kernel U core U^T with U n x p
// orthonormal and core p x p SPD.
struct SpsdKernel {
  Mat U;
  Mat core;
  int n() const { return static_cast<int>(U.rows()); }
  int rank() const { return static_cast<int>(U.cols()); }
  Mat to_dense() const { return U * core * U.transpose(); }
};

// Best rank-p approximation of a symmetric PSD matrix as an SpsdKernel.
// Raises RankTooHigh if p exceeds the matrix size and NotPositiveDefinite if
// any of the leading p eigenvalues is not strictly positive.
SpsdKernel truncate_to_rank(const Mat& k, int p);

/// Fixed-rank geodesic: the structured curve that follows the Grassmann
// geodesic between the ranges and the affine-invariant geodesic between the
// rotated cores. Endpoints reproduce the inputs exactly; ranks must match.
SpsdKernel spsd_geodesic_point(const SpsdKernel& a, const SpsdKernel& b,
                               double t);

}  // namespace evflow
