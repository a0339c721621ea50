#pragma once

#include <Eigen/Dense>
#include <functional>
#include <string>

#include "evflow/errors.hpp"

namespace evflow {

using Mat = Eigen::MatrixXd;
using Vec = Eigen::VectorXd;

// Eigenvalues in descending order; vectors[ :, i ] belongs to values[i].
// Each column is sign-fixed: the entry of largest magnitude (lowest index on
// ties) is made positive.
struct EigDecomposition {
  Vec values;
  Mat vectors;
};

void check_finite(const Mat& m, const std::string& what);
void check_finite(const Vec& v, const std::string& what);

Mat symmetrize(const Mat& m);

// Flip eigenvector columns in place to the canonical sign.
void apply_sign_convention(Mat& vectors);

// Full symmetric EVD with the ordering and sign conventions above.
EigDecomposition eig_sym(const Mat& m);

// Leading eigenpairs of a symmetric operator given as y = apply(x), by
// blocked subspace iteration with Rayleigh-Ritz extraction. `guess` seeds the
// block (pass an empty matrix for a deterministic default). Throws
// NoConvergence when the leading `want` Ritz values fail to settle.
struct PartialEig {
  Vec values;   // want entries, descending
  Mat vectors;  // n x want, sign-fixed
  Mat block;    // n x block_size, the converged subspace (warm start reuse)
  int iterations = 0;
};
PartialEig partial_eig_sym(
    const std::function<void(const Mat&, Mat&)>& apply, int n, int want,
    int block_size, const Mat& guess, double rel_tol = 1e-12,
    int max_iter = 400);

// Sum of squared pairwise distances helper used by tests and kernels.
double frobenius_distance(const Mat& a, const Mat& b);

}  // namespace evflow
