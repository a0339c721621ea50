#pragma once

#include <cstdint>

#include "evflow/linalg.hpp"

namespace evflow {

// Latent samples shared by a pair of views: x is the common coordinate, y
// and z are view-specific.
struct LatentTriple {
  Vec x, y, z;
};

// Independent uniform latents on [lo, hi]^3, one stream per coordinate.
LatentTriple gen_latents(int n, uint64_t seed, double lo, double hi);

struct FlatScales {
  double lx1, ly1;  // view 1 strip lengths
  double lx2, lz2;  // view 2 strip lengths
};

// Two flat-strip views of shared latents on [-1/2, 1/2]:
//   s1 = (lx1 * x, ly1 * y),  s2 = (lx2 * x, lz2 * z).
struct SynthPair {
  Mat s1, s2;
  LatentTriple latent;
};
SynthPair gen_flat_2d(int n, const FlatScales& scales, uint64_t seed);

// Neumann Laplacian eigenvalue of the rectangle [0,lx] x [0,ly]:
// (kx pi / lx)^2 + (ky pi / ly)^2 for integer mode counts kx, ky >= 0.
double analytic_flat_eigenvalue(double lx, double ly, int kx, int ky);

// Discrete kernel eigenvalue that a continuous Laplacian eigenvalue maps to,
// exp(-epsilon^2 lambda / 4). epsilon here is the Gaussian bandwidth, the
// square root of the affinity divisor.
double continuous_to_discrete_eig(double lambda, double epsilon);

// Torus views sharing one angle. With common_angle_poloidal the shared
// latent is the small circle: view v embeds
//   ((R_v + r_v cos x) cos t_v, (R_v + r_v cos x) sin t_v, r_v sin x)
// with t_1 = y, t_2 = z. Otherwise the shared latent is the toroidal angle.
struct TorusRadii {
  double R1, r1, R2, r2;
};
SynthPair gen_torus(int n, const TorusRadii& radii, bool common_angle_poloidal,
                    uint64_t seed);

// Flat-torus Laplacian eigenvalue (jx / r)^2 + (jy / R)^2 for integer wave
// numbers along the poloidal (radius r) and toroidal (radius R) circles.
// Every nonzero wave number appears with multiplicity 2.
double analytic_torus_eigenvalue(double R, double r, int j_pol, int j_tor);

// Nonlinear measurement maps of (x, z) latents in [0, 1]:
//   which = 1:  (sa * x,        sb * (1 - sqrt(z)))   warps the specific part
//   which = 2:  (sa * (1 - sqrt(x)), sb * z)          warps the common part
// DomainError when a latent under the square root is negative.
Mat nonlinear_measurement(const Vec& x, const Vec& z, int which, double sa,
                          double sb);

// Interpolant over three kernels: the geodesic from the (k1,k2) geodesic at
// t1 toward k3 at t2. (t2 = 0 recovers the two-kernel geodesic.)
Mat convex_hull_point(const Mat& k1, const Mat& k2, const Mat& k3, double t1,
                      double t2, double eig_clamp_rel = 0.0);

// Bandwidth-normalized strip length interpolated in log scale,
// (l1/e1)^(1-t) (l2/e2)^t. The heuristic predictor of which view dominates
// the flow at parameter t.
double effective_length(double l1, double l2, double e1, double e2, double t);

}  // namespace evflow
