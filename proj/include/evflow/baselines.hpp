#pragma once

#include "evflow/kernel.hpp"

namespace evflow {

// Straight-line kernel interpolation (1 - t) k1 + t k2.
Mat linear_interpolation_point(const Mat& k1, const Mat& k2, double t);

// Alternating-diffusion kernel: propagate the column-stochastic composite
// a2^T a1^T for `steps` rounds, measure pairwise column distances, rebuild a
// Gaussian affinity from them (epsilon <= 0 selects the median squared
// distance) and renormalize. Returns the SPD kernel of the new bundle.
KernelBundle alternating_diffusion_kernel(const KernelBundle& b1,
                                          const KernelBundle& b2,
                                          int steps = 1,
                                          double epsilon = 0.0);

// Energy fraction of x captured by the leading columns of the orthonormal
// basis: ||basis_ell^T x||^2 / ||x||^2. Equals 1 when the basis is complete
// and is monotone in the number of columns.
double smoothness_score(const Mat& basis_ell, const Vec& x);
double smoothness_score(const Mat& basis_ell, const Mat& x);

// Row-normalized diffusion distances ||delta_i^T a^t - delta_j^T a^t|| of an
// evaluated kernel, a = diag(k 1)^-1 k, for the requested index pairs.
Vec kernel_diffusion_distances(const Mat& k, int t_steps,
                               const std::vector<std::pair<int, int>>& pairs);

// Least-squares fit of latent distances by a polynomial in kernel
// distances, on a scaled variable for conditioning. Degree is capped at 5.
struct PolyfitResult {
  Vec coeffs;       // ascending powers of (d_kernel / scale)
  double scale;     // max |d_kernel|
  double residual;  // sum of squared errors
  double r2;        // 1 - residual / total variance
};
PolyfitResult polyfit_correspondence(const Vec& d_kernel, const Vec& d_latent,
                                     int degree = 3);

}  // namespace evflow
