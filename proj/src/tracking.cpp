#include "evflow/tracking.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <numeric>

namespace evflow {

int swap_distance(const std::vector<int>& a, const std::vector<int>& b) {
  require(a.size() == b.size(), Err::DimensionMismatch,
          "permutations differ in length");
  const int n = static_cast<int>(a.size());
  // Cycle count of b composed with a^-1.
  std::vector<int> inv_a(n), m(n);
  for (int k = 0; k < n; ++k) inv_a[a[k]] = k;
  for (int s = 0; s < n; ++s) m[s] = b[inv_a[s]];
  std::vector<char> seen(n, 0);
  int cycles = 0;
  for (int s = 0; s < n; ++s) {
    if (seen[s]) continue;
    ++cycles;
    for (int j = s; !seen[j]; j = m[j]) seen[j] = 1;
  }
  return n - cycles;
}

namespace {

using Perm = std::vector<int>;

struct State {
  std::vector<Perm> tuple;  // oldest first
  double score;
  int parent;  // index into previous beam
};

// Candidate permutations reachable from `base` by zero, one, or two
// transpositions of slots adjacent in the sorted eigenvalue order. Both
// orderings of overlapping transposition pairs are produced; they differ.
std::vector<Perm> candidate_perms(const Perm& base, int n_e) {
  auto swap_adjacent = [n_e](const Perm& p, int j) {
    Perm q = p;
    for (int k = 0; k < n_e; ++k) {
      if (q[k] == j) {
        q[k] = j + 1;
      } else if (q[k] == j + 1) {
        q[k] = j;
      }
    }
    return q;
  };
  std::vector<Perm> out;
  out.push_back(base);
  std::vector<Perm> singles;
  for (int j = 0; j + 1 < n_e; ++j) singles.push_back(swap_adjacent(base, j));
  for (int a = 0; a + 1 < n_e; ++a)
    for (int b = 0; b + 1 < n_e; ++b)
      if (a != b) out.push_back(swap_adjacent(singles[a], b));
  for (auto& s : singles) out.push_back(std::move(s));
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

}  // namespace

TrajectorySet track_trajectories(const FlowDiagram& diagram,
                                 const TrackingOptions& opt) {
  const int n_t = diagram.n_t();
  const int n_e = diagram.n_slots();
  require(n_t >= 2, Err::TooFewGridPoints,
          "tracking needs at least 2 grid points");
  require(!diagram.vectors.empty() &&
              static_cast<int>(diagram.vectors.size()) == n_t,
          Err::VectorsMissing,
          "tracking needs eigenvectors at every grid point");
  require(opt.window_l >= 1, Err::OutOfRange, "window must be at least 1");
  require(opt.beam_width >= 1, Err::OutOfRange, "beam width must be positive");
  require(opt.p1 >= 0.0 && opt.p2 >= 0.0 && opt.p1 + opt.p2 < 1.0,
          Err::OutOfRange, "swap probabilities must satisfy p1 + p2 < 1");

  TrajectorySet out;

  // Reference order is the slot order at t = 0. A repeated eigenvalue there
  // makes the trajectory identities a convention, not a fact; flag it.
  for (int j = 0; j + 1 < n_e; ++j) {
    double gap = diagram.eigenvalues(0, j) - diagram.eigenvalues(0, j + 1);
    if (gap <= 1e-12 * std::max(1.0, std::abs(diagram.eigenvalues(0, 0)))) {
      out.warnings.push_back(
          "reference spectrum has a repeated eigenvalue at slot " +
          std::to_string(j) + "; trajectory identities there follow the "
          "deterministic slot order");
      break;
    }
  }

  const int L = opt.window_l;
  Perm identity(n_e);
  std::iota(identity.begin(), identity.end(), 0);

  std::vector<std::vector<State>> beams(n_t);
  beams[0].push_back(State{std::vector<Perm>(L, identity), 0.0, -1});

  const double log_p1 = std::log(opt.p1 > 0 ? opt.p1 : 1e-300);
  const double log_p2 = std::log(opt.p2 > 0 ? opt.p2 : 1e-300);
  const double log_p0 = std::log(1.0 - opt.p1 - opt.p2);

  for (int i = 1; i < n_t; ++i) {
    // Eigenvector correlations across the state window, |V_old^T V_new|.
    int old_idx = std::max(0, i - L + 1);
    Mat g = (diagram.vectors[old_idx].transpose() * diagram.vectors[i])
                .cwiseAbs();

    std::map<std::vector<int>, State> merged;
    for (int b = 0; b < static_cast<int>(beams[i - 1].size()); ++b) {
      const State& prev = beams[i - 1][b];
      for (Perm& cand : candidate_perms(prev.tuple.back(), n_e)) {
        int swaps = swap_distance(prev.tuple.front(), cand);
        double log_trans =
            swaps == 1 ? log_p1 : (swaps == 2 ? log_p2 : log_p0);

        std::vector<Perm> tuple(prev.tuple.begin() + 1, prev.tuple.end());
        tuple.push_back(std::move(cand));

        const Perm& first = tuple.front();
        const Perm& last = tuple.back();
        double emit = 0.0;
        for (int k = 0; k < n_e; ++k) emit += g(first[k], last[k]);
        if (!(emit > 0.0)) continue;
        double score =
            prev.score + std::log(emit / double(n_e)) + log_trans;

        std::vector<int> key;
        key.reserve(static_cast<size_t>(L) * n_e);
        for (const Perm& p : tuple) key.insert(key.end(), p.begin(), p.end());
        auto it = merged.find(key);
        if (it == merged.end()) {
          merged.emplace(std::move(key), State{std::move(tuple), score, b});
        } else if (score > it->second.score) {
          it->second.score = score;
          it->second.parent = b;
        }
      }
    }
    if (merged.empty())
      fail(Err::BeamExhausted,
           "no permutation sequence has positive likelihood at grid point " +
               std::to_string(i));

    std::vector<std::pair<std::vector<int>, State>> flat;
    flat.reserve(merged.size());
    for (auto& kv : merged) flat.emplace_back(kv.first, std::move(kv.second));
    std::stable_sort(flat.begin(), flat.end(),
                     [](const auto& a, const auto& b) {
                       if (a.second.score != b.second.score)
                         return a.second.score > b.second.score;
                       return a.first < b.first;  // deterministic ties
                     });
    int keep = std::min<int>(opt.beam_width, static_cast<int>(flat.size()));
    beams[i].reserve(keep);
    for (int k = 0; k < keep; ++k) beams[i].push_back(std::move(flat[k].second));
  }

  // Backtrack from the best final state.
  std::vector<int> pick(n_t);
  pick[n_t - 1] = 0;
  for (int i = n_t - 1; i > 0; --i)
    pick[i - 1] = beams[i][pick[i]].parent;

  out.slot_of.resize(n_t);
  out.values = Mat(n_t, n_e);
  for (int i = 0; i < n_t; ++i) {
    out.slot_of[i] = beams[i][pick[i]].tuple.back();
    for (int k = 0; k < n_e; ++k)
      out.values(i, k) = diagram.eigenvalues(i, out.slot_of[i][k]);
  }
  return out;
}

}  // namespace evflow
