#include "evflow/graph.hpp"

#include <cmath>

#include "evflow/spd.hpp"

namespace evflow::graph {

namespace {

constexpr double kPi = 3.14159265358979323846264338327950288;

void check_cycle_size(int n) {
  require(n >= 3, Err::DomainError, "cycle needs at least 3 nodes");
  require(n % 2 == 1, Err::DomainError,
          "closed forms require an odd cycle length");
}

void check_permutation(int m, const std::vector<int>& pi) {
  require(static_cast<int>(pi.size()) == m, Err::DimensionMismatch,
          "permutation length does not match the cycle size");
  std::vector<char> seen(m, 0);
  for (int v : pi) {
    require(v >= 0 && v < m, Err::DomainError,
            "permutation entry outside [0, m)");
    require(!seen[v], Err::DomainError, "permutation repeats an entry");
    seen[v] = 1;
  }
}

// Frequency of mode k: k-1 in the first half, folded back in the second.
int mode_frequency(int n, int k) {
  return (k <= (n + 1) / 2) ? k - 1 : n - k + 1;
}

}  // namespace

Mat cycle_affinity(int n) {
  check_cycle_size(n);
  Mat a = Mat::Identity(n, n);
  for (int i = 0; i < n; ++i) {
    a(i, (i + 1) % n) = 0.5;
    a(i, (i + n - 1) % n) = 0.5;
  }
  return a;
}

Mat cycle_kernel(int n) { return cycle_affinity(n) / 2.0; }

double cycle_eigenvalue(int n, int k) {
  check_cycle_size(n);
  require(k >= 1 && k <= n, Err::IndexOutOfRange,
          "mode index outside [1, n]");
  return 0.5 * (1.0 + std::cos(2.0 * kPi * (k - 1) / n));
}

Vec cycle_eigenvector(int n, int k) {
  check_cycle_size(n);
  require(k >= 1 && k <= n, Err::IndexOutOfRange,
          "mode index outside [1, n]");
  const int j = mode_frequency(n, k);
  const double alpha = (k == 1) ? 1.0 : std::sqrt(2.0);
  const bool second_half = k > (n + 1) / 2;
  Vec v(n);
  for (int x = 1; x <= n; ++x) {
    double arg = 2.0 * kPi * j * (x - 1) / n;
    v(x - 1) = alpha * std::sqrt(1.0 / n) *
               (second_half ? -std::sin(arg) : std::cos(arg));
  }
  return v;
}

Mat cycle_eigenvector_matrix(int n) {
  Mat v(n, n);
  for (int k = 1; k <= n; ++k) v.col(k - 1) = cycle_eigenvector(n, k);
  return v;
}

Mat product_kernel(int n, int m) {
  Mat ax = cycle_affinity(n);
  Mat ay = cycle_affinity(m);
  Mat k = Mat::Zero(n * m, n * m);
  for (int x1 = 0; x1 < n; ++x1)
    for (int x2 = 0; x2 < n; ++x2)
      for (int y1 = 0; y1 < m; ++y1)
        for (int y2 = 0; y2 < m; ++y2) {
          double v = 0.0;
          if (y1 == y2) v += ax(x1, x2);
          if (x1 == x2) v += ay(y1, y2);
          if (v != 0.0) k(x1 * m + y1, x2 * m + y2) = v / 4.0;
        }
  return k;
}

double product_eigenvalue(int n, int m, int k, int l) {
  return 0.5 * (cycle_eigenvalue(n, k) + cycle_eigenvalue(m, l));
}

ProductSpectrum analytic_product_spectrum(int n, int m) {
  check_cycle_size(n);
  check_cycle_size(m);
  Mat vx = cycle_eigenvector_matrix(n);
  Mat vy = cycle_eigenvector_matrix(m);
  ProductSpectrum ps;
  ps.values = Vec(n * m);
  ps.vectors = Mat(n * m, n * m);
  for (int k = 1; k <= n; ++k)
    for (int l = 1; l <= m; ++l) {
      int col = (k - 1) * m + l - 1;
      ps.values(col) = product_eigenvalue(n, m, k, l);
      for (int x = 1; x <= n; ++x)
        for (int y = 1; y <= m; ++y)
          ps.vectors((x - 1) * m + y - 1, col) =
              vx(x - 1, k - 1) * vy(y - 1, l - 1);
    }
  return ps;
}

int index_map(int x, int y, int n, int m) {
  check_cycle_size(n);
  check_cycle_size(m);
  require(x >= 1 && x <= n, Err::IndexOutOfRange,
          "first coordinate outside [1, n]");
  require(y >= 1 && y <= m, Err::IndexOutOfRange,
          "second coordinate outside [1, m]");
  return (x - 1) * m + y;
}

std::pair<int, int> index_unmap(int r, int n, int m) {
  check_cycle_size(n);
  check_cycle_size(m);
  require(r >= 1 && r <= n * m, Err::IndexOutOfRange,
          "linear index outside [1, n m]");
  return {1 + (r - 1) / m, 1 + (r - 1) % m};
}

Mat permutation_matrix(const std::vector<int>& pi) {
  const int m = static_cast<int>(pi.size());
  check_permutation(m, pi);
  Mat p = Mat::Zero(m, m);
  for (int j = 0; j < m; ++j) p(pi[j], j) = 1.0;
  return p;
}

Mat small_b(int m, const std::vector<int>& pi) {
  check_cycle_size(m);
  check_permutation(m, pi);
  Mat vy = cycle_eigenvector_matrix(m);
  Mat pv(m, m);
  for (int j = 0; j < m; ++j) pv.row(pi[j]) = vy.row(j);
  // pv = P vy since P moves row j to row pi[j].
  return vy.transpose() * pv;
}

BcmChain bcm_chain(int n, int m, const std::vector<int>& pi) {
  check_cycle_size(n);
  check_cycle_size(m);
  check_permutation(m, pi);
  const int nm = n * m;

  BcmChain out;
  out.b_small = small_b(m, pi);
  out.b_full = Mat::Zero(nm, nm);
  for (int k = 0; k < n; ++k)
    out.b_full.block(k * m, k * m, m, m) = out.b_small;

  out.s = Vec(nm);
  for (int k = 1; k <= n; ++k)
    for (int l = 1; l <= m; ++l)
      out.s((k - 1) * m + l - 1) = product_eigenvalue(n, m, k, l);

  out.c = out.b_full * out.s.asDiagonal() * out.b_full.transpose();
  out.c = symmetrize(out.c);
  Vec inv_sqrt_s = out.s.cwiseSqrt().cwiseInverse();
  out.c_s = symmetrize(inv_sqrt_s.asDiagonal() * out.c *
                       inv_sqrt_s.asDiagonal());
  return out;
}

// Exact expectation over a uniformly random permutation. For slots on the
// shared coordinate (y = 1) the entry is invariant and equals mu + 1/4. For
// the rest, E[b_iu^2] = 1/(m-1) over the m-1 non-constant modes and the mode
// cosines sum to -1, leaving a -1/(4(m-1)) finite-size term. Verified by
// exhaustive enumeration of all permutations at small m.
double mean_c_diagonal(int n, int m, int r) {
  auto [x, y] = index_unmap(r, n, m);
  double v = 0.5 + 0.25 * std::cos(2.0 * kPi * (x - 1) / n);
  if (y == 1) return v + 0.25;
  return v - 0.25 / (m - 1);
}

double mean_whitened_diagonal(int n, int m, int r) {
  auto [x, y] = index_unmap(r, n, m);
  if (y == 1) return 1.0;
  double cx = std::cos(2.0 * kPi * (x - 1) / n);
  double cy = std::cos(2.0 * kPi * (y - 1) / m);
  return 1.0 - (cy + 1.0 / (m - 1)) / (2.0 + cx + cy);
}

double mean_flow_eigenvalue(int n, int m, int r, double t) {
  require(t >= 0.0 && t <= 1.0, Err::OutOfRange,
          "flow parameter must lie in [0, 1]");
  auto [x, y] = index_unmap(r, n, m);
  double mu = product_eigenvalue(n, m, x, y);
  double cbar = mean_c_diagonal(n, m, r);
  return std::pow(cbar, t) * std::pow(mu, 1.0 - t);
}

Vec c_diagonal(int n, int m, const std::vector<int>& pi) {
  check_cycle_size(n);
  Mat b = small_b(m, pi);
  // q = b s_y b^T; only its diagonal is needed and it repeats per block.
  Vec sy(m);
  for (int l = 1; l <= m; ++l) sy(l - 1) = cycle_eigenvalue(m, l);
  Vec qdiag(m);
  for (int i = 0; i < m; ++i)
    qdiag(i) = (b.row(i).array().square() * sy.transpose().array()).sum();
  Vec diag(n * m);
  for (int k = 1; k <= n; ++k) {
    double mx = cycle_eigenvalue(n, k);
    for (int i = 0; i < m; ++i)
      diag((k - 1) * m + i) = 0.5 * (mx + qdiag(i));
  }
  return diag;
}

Mat whitened_block_power(int n, int m, const std::vector<int>& pi, int k,
                         double t) {
  require(k >= 1 && k <= n, Err::IndexOutOfRange,
          "block index outside [1, n]");
  Mat b = small_b(m, pi);
  Vec sy(m);
  for (int l = 1; l <= m; ++l) sy(l - 1) = cycle_eigenvalue(m, l);
  Mat q = b * sy.asDiagonal() * b.transpose();
  double mx = cycle_eigenvalue(n, k);
  Mat c_block = 0.5 * (mx * Mat::Identity(m, m) + q);
  Vec s_block(m);
  for (int l = 1; l <= m; ++l) s_block(l - 1) = product_eigenvalue(n, m, k, l);
  Vec inv_sqrt = s_block.cwiseSqrt().cwiseInverse();
  Mat cs = symmetrize(inv_sqrt.asDiagonal() * c_block * inv_sqrt.asDiagonal());
  EigDecomposition e = eig_sym(cs);
  Vec pw(m);
  for (int l = 0; l < m; ++l) {
    require(e.values(l) > 0.0, Err::NotPositiveDefinite,
            "whitened block is not positive definite");
    pw(l) = std::pow(e.values(l), t);
  }
  return symmetrize(e.vectors * pw.asDiagonal() * e.vectors.transpose());
}

Mat whitened_power(int n, int m, const std::vector<int>& pi, double t) {
  Mat out = Mat::Zero(n * m, n * m);
  for (int k = 1; k <= n; ++k)
    out.block((k - 1) * m, (k - 1) * m, m, m) =
        whitened_block_power(n, m, pi, k, t);
  return out;
}

Mat flow_point(int n, int m, const std::vector<int>& pi, double t) {
  ProductSpectrum ps = analytic_product_spectrum(n, m);
  Mat cst = whitened_power(n, m, pi, t);
  Vec sqrt_s = Vec(n * m);
  for (int r = 0; r < n * m; ++r) sqrt_s(r) = std::sqrt(ps.values(r));
  Mat f = sqrt_s.asDiagonal() * cst * sqrt_s.asDiagonal();
  return symmetrize(ps.vectors * f * ps.vectors.transpose());
}

DistanceSplit diffusion_distance_decomposition(const Mat& gamma_t, int s,
                                               int p1, int p2,
                                               const Vec& common_values,
                                               const Mat& common_vectors) {
  require(gamma_t.rows() == gamma_t.cols(), Err::DimensionMismatch,
          "flow point must be square");
  const Eigen::Index nm = gamma_t.rows();
  require(s >= 1, Err::OutOfRange, "diffusion power must be at least 1");
  require(p1 >= 0 && p1 < nm && p2 >= 0 && p2 < nm, Err::IndexOutOfRange,
          "probe index outside the graph");
  require(common_vectors.rows() == nm, Err::DimensionMismatch,
          "common eigenvectors have the wrong length");
  require(common_values.size() == common_vectors.cols(),
          Err::DimensionMismatch, "one eigenvalue per common vector required");

  EigDecomposition e = eig_sym(gamma_t);
  Vec delta = Vec::Zero(nm);
  delta(p1) = 1.0;
  delta(p2) = -1.0;

  // Total: || gamma^s delta || through gamma's own spectral map.
  Vec coeff = e.vectors.transpose() * delta;
  double total_sq = 0.0;
  for (Eigen::Index r = 0; r < nm; ++r) {
    double lp = std::pow(std::max(e.values(r), 0.0), s);
    total_sq += lp * lp * coeff(r) * coeff(r);
  }

  double common_sq = 0.0;
  for (Eigen::Index j = 0; j < common_values.size(); ++j) {
    double proj = common_vectors.col(j).dot(delta);
    double lp = std::pow(common_values(j), s);
    common_sq += lp * lp * proj * proj;
  }

  DistanceSplit out;
  out.d_total = std::sqrt(total_sq);
  out.d_common = std::sqrt(common_sq);
  out.d_noncommon = std::sqrt(std::max(total_sq - common_sq, 0.0));
  return out;
}

DistanceSplit diffusion_distance_decomposition(const Mat& gamma_t, int s,
                                               int p1, int p2,
                                               const std::vector<int>& slots) {
  require(gamma_t.rows() == gamma_t.cols(), Err::DimensionMismatch,
          "flow point must be square");
  const Eigen::Index nm = gamma_t.rows();
  require(s >= 1, Err::OutOfRange, "diffusion power must be at least 1");
  require(p1 >= 0 && p1 < nm && p2 >= 0 && p2 < nm, Err::IndexOutOfRange,
          "probe index outside the graph");

  EigDecomposition e = eig_sym(gamma_t);
  std::vector<char> is_common(nm, 0);
  for (int slot : slots) {
    require(slot >= 0 && slot < nm, Err::IndexOutOfRange,
            "slot outside the spectrum");
    is_common[slot] = 1;
  }
  double common_sq = 0.0, noncommon_sq = 0.0;
  for (Eigen::Index r = 0; r < nm; ++r) {
    double diff = e.vectors(p1, r) - e.vectors(p2, r);
    double lp = std::pow(std::max(e.values(r), 0.0), s);
    double term = lp * lp * diff * diff;
    (is_common[r] ? common_sq : noncommon_sq) += term;
  }
  DistanceSplit out;
  out.d_common = std::sqrt(common_sq);
  out.d_noncommon = std::sqrt(noncommon_sq);
  out.d_total = std::sqrt(common_sq + noncommon_sq);
  return out;
}

}  // namespace evflow::graph
