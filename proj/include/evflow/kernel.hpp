#pragma once

#include "evflow/linalg.hpp"

namespace evflow {

// Squared Euclidean pairwise distances of the rows of x.
Mat pairwise_sq_dists(const Mat& x);

// Median of the n(n-1)/2 pairwise squared distances; the default affinity
// scale. Raises DegenerateData when all points coincide.
double median_scale(const Mat& x);

// w_ij = exp(-||x_i - x_j||^2 / epsilon); epsilon is the divisor itself.
Mat gaussian_affinity(const Mat& x, double epsilon);

// Two-step normalization of an affinity matrix:
//   kbar = dbar^-1 w dbar^-1 with dbar = diag(w 1)   (density correction)
//   a    = d^-1 kbar        with d = diag(kbar 1)    (row-stochastic)
//   k    = d^-1/2 kbar d^-1/2                        (symmetric, SPD)
// a and k share eigenvalues; if v is an eigenvector of k then d^-1/2 v is a
// right eigenvector of a.
struct KernelBundle {
  Mat w;
  Mat a;
  Mat k;
  Vec dbar;
  Vec d;
  double epsilon = 0.0;
};

KernelBundle normalize_to_spd(const Mat& w);

// Affinity + normalization in one call. epsilon <= 0 selects median_scale.
KernelBundle build_kernel(const Mat& x, double epsilon = 0.0);

// Diffusion-map embedding: column k-1 is mu_k^t v_k for k = 2..ell+1, where
// v_k are right eigenvectors of a normalized to unit norm in l2(pi) with
// pi = d / sum(d). With ell = n-1 and integer t the embedding distances equal
// the pi-weighted distance between rows of a^t.
Mat diffusion_map_embedding(const KernelBundle& bundle, double t, int ell);

// || row i of a^steps - row j of a^steps ||_2 without stationary weighting.
double unnormalized_diffusion_distance(const KernelBundle& bundle, int steps,
                                       int i, int j);

}  // namespace evflow
