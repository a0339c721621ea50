#pragma once

#include "evflow/cmr.hpp"
#include "evflow/config.hpp"
#include "evflow/kernel.hpp"

namespace evflow {

struct RunReport {
  FlowDiagram diagram;
  TrajectorySet traj;
  CommonalityReport commonality;
  Mat embedding;                    // empty when no common components
  bool embedding_empty = false;
  std::vector<std::string> notes;
  double epsilon1 = 0.0;
  double epsilon2 = 0.0;

  // Three-view mode: leading eigenvalues over the (t1, t2) hull grid.
  bool hull_mode = false;
  Vec hull_grid;                    // shared axis for t1 and t2
  std::vector<Mat> hull_eigenvalues;  // [i](j, slot) for t1 = grid(i)
  double epsilon3 = 0.0;
};

// Full run on in-memory datasets. Builds kernels, the flow diagram,
// trajectories, commonality scores, and the embedding.
RunReport run_pipeline(const RunConfig& cfg, const std::vector<Mat>& views);

// Convenience entry: load the configured inputs, run, write every output
// file into cfg.out_dir.
RunReport run_pipeline_files(const RunConfig& cfg);

// Output writers (deterministic byte-for-byte).
std::string diagram_json(const RunReport& rep, const RunConfig& cfg);
std::string diagram_svg(const RunReport& rep);
void write_report(const RunReport& rep, const RunConfig& cfg);

}  // namespace evflow
