#pragma once

#include "evflow/evfd.hpp"

namespace evflow {

// Eigenvalue trajectories through a flow diagram. Trajectory k starts at
// slot k of the reference grid point (t = 0); slot_of[i][k] is the slot it
// occupies at grid point i, values(i, k) the eigenvalue along it.
struct TrajectorySet {
  std::vector<std::vector<int>> slot_of;
  Mat values;
  std::vector<std::string> warnings;

  int n_t() const { return static_cast<int>(slot_of.size()); }
  int n_traj() const {
    return slot_of.empty() ? 0 : static_cast<int>(slot_of[0].size());
  }
};

struct TrackingOptions {
  int window_l = 3;     // permutations per hidden state
  double p1 = 0.05;     // one-swap transition probability
  double p2 = 0.01;     // two-swap transition probability
  int beam_width = 64;
};

// Beam-searched Viterbi pass over the diagram. Hidden states are tuples of
// window_l successive permutations; a step appends a permutation that
// differs from the previous one by at most two transpositions of slots
// adjacent in the sorted eigenvalue order, weighted by how many swaps
// accumulated across the window and scored by eigenvector correlation
// across the window. Requires diagram.vectors (VectorsMissing otherwise).
TrajectorySet track_trajectories(const FlowDiagram& diagram,
                                 const TrackingOptions& opt = {});

// Minimum number of transpositions turning permutation a into b.
int swap_distance(const std::vector<int>& a, const std::vector<int>& b);

}  // namespace evflow
