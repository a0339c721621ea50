#pragma once

#include <utility>
#include <vector>

#include "evflow/linalg.hpp"

namespace evflow::graph {

// Closed-form model: two product graphs of odd cycles, C_n x C_m, sharing
// the C_n coordinate while the C_m coordinate of the second view is shuffled
// by a permutation. Everything about the flow between their kernels has an
// analytic form, which makes this the reference oracle for the whole
// pipeline. All node and mode indices are 1-based to match the closed-form
// expressions; permutations are 0-based vectors.

// Cycle affinity: 1 on the diagonal, 1/2 for ring neighbours. Row sum 2; the
// normalized kernel is the affinity divided by 2.
Mat cycle_affinity(int n);
Mat cycle_kernel(int n);

// Kernel eigenvalue (1 + cos(2 pi (k-1)/n)) / 2 and the matching cosine or
// sine eigenvector, k = 1..n. Each nonzero frequency appears twice.
double cycle_eigenvalue(int n, int k);
Vec cycle_eigenvector(int n, int k);
Mat cycle_eigenvector_matrix(int n);  // columns ordered by k

// Product-graph kernel (A_x kron I + I kron A_y) / 4 and its closed-form
// spectrum. Pair (k, l) sits at column (k-1) m + l - 1; the eigenvalue is
// the mean of the factors' eigenvalues and the eigenvector the pointwise
// product of the factors' eigenvectors.
Mat product_kernel(int n, int m);
double product_eigenvalue(int n, int m, int k, int l);
struct ProductSpectrum {
  Vec values;
  Mat vectors;
};
ProductSpectrum analytic_product_spectrum(int n, int m);

// Linearization r(x, y) = (x-1) m + y of grid coordinates and its inverse.
int index_map(int x, int y, int n, int m);
std::pair<int, int> index_unmap(int r, int n, int m);

// Permutation matrix with columns p e_j = e_{pi[j]} (0-based pi).
Mat permutation_matrix(const std::vector<int>& pi);

// b = V_y^T P V_y, the orthogonal coupling of the shuffled cycle modes.
// Its first row and column are exactly e_1.
Mat small_b(int m, const std::vector<int>& pi);

// Full change-of-basis chain for one permutation:
//   b_full = V^T (I kron P) V = I kron b
//   c      = b_full s b_full^T          (second kernel in the first basis)
//   c_s    = s^-1/2 c s^-1/2            (whitened flow generator)
// All of c, c_s are block diagonal with n blocks of size m.
struct BcmChain {
  Mat b_small;  // m x m
  Mat b_full;   // nm x nm
  Mat c;        // nm x nm
  Mat c_s;      // nm x nm
  Vec s;        // product eigenvalues in analytic order
};
BcmChain bcm_chain(int n, int m, const std::vector<int>& pi);

// Expectations over a uniformly random permutation, in closed form:
// the diagonal of c, the diagonal of the whitened matrix, and the flow
// eigenvalue approximation cbar(r)^t mu(r)^(1-t).
double mean_c_diagonal(int n, int m, int r);
double mean_whitened_diagonal(int n, int m, int r);
double mean_flow_eigenvalue(int n, int m, int r, double t);

// Monte-Carlo helpers that exploit the block structure.
Vec c_diagonal(int n, int m, const std::vector<int>& pi);
// Block k (1-based) of c_s^t, computed by an m x m eigendecomposition.
Mat whitened_block_power(int n, int m, const std::vector<int>& pi, int k,
                         double t);
// Full c_s^t assembled from the blocks.
Mat whitened_power(int n, int m, const std::vector<int>& pi, double t);
// gamma(t) = v s^1/2 c_s^t s^1/2 v^T evaluated densely.
Mat flow_point(int n, int m, const std::vector<int>& pi, double t);

// Diffusion-distance split: total distance || gamma^s (e_p1 - e_p2) ||, the
// part carried by the supplied exact eigenpairs (the permutation-invariant
// directions), and the remainder.
struct DistanceSplit {
  double d_common;
  double d_noncommon;
  double d_total;
};
DistanceSplit diffusion_distance_decomposition(const Mat& gamma_t, int s,
                                               int p1, int p2,
                                               const Vec& common_values,
                                               const Mat& common_vectors);

// Slot-split variant on gamma's own (numeric, descending) eigendecomposition:
// d_c over the listed slots, d_nc over the complement.
DistanceSplit diffusion_distance_decomposition(const Mat& gamma_t, int s,
                                               int p1, int p2,
                                               const std::vector<int>& slots);

}  // namespace evflow::graph
