#include <cstdint>
#include <filesystem>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "evflow/graph.hpp"
#include "evflow/io.hpp"
#include "evflow/pipeline.hpp"
#include "evflow/rng.hpp"
#include "evflow/synthetic.hpp"

namespace {

using evflow::Mat;
using evflow::RunConfig;
using evflow::Vec;

int run_cmd(const std::string& config_path) {
  RunConfig cfg = evflow::parse_config(config_path);
  evflow::RunReport rep = evflow::run_pipeline_files(cfg);
  if (rep.hull_mode) {
    std::cout << "hull run over " << cfg.hull_grid << " x " << cfg.hull_grid
              << " interpolation points, n = " << rep.diagram.n_points << "\n";
    std::cout << "bandwidths " << evflow::format_g17(rep.epsilon1) << ", "
              << evflow::format_g17(rep.epsilon2) << ", "
              << evflow::format_g17(rep.epsilon3) << "\n";
    std::cout << "wrote " << cfg.out_dir << "/diagram.json\n";
    return 0;
  }
  std::cout << "geometry " << rep.diagram.geometry;
  if (rep.diagram.geometry == "spsd")
    std::cout << " (rank " << rep.diagram.rank << ")";
  std::cout << ", n = " << rep.diagram.n_points << ", grid " << cfg.n_t
            << " points, " << rep.diagram.n_slots() << " slots\n";
  std::cout << "bandwidths " << evflow::format_g17(rep.epsilon1) << ", "
            << evflow::format_g17(rep.epsilon2) << "\n";
  std::cout << "t* = " << evflow::format_g17(rep.commonality.t_star)
            << " (index " << rep.commonality.t_star_index << "), peak ratio "
            << evflow::format_g17(
                   rep.commonality.cmr(rep.commonality.t_star_index))
            << "\n";
  std::cout << "common slots:";
  for (int s : rep.commonality.common_set) std::cout << " " << s;
  std::cout << "\nnon-common slots:";
  for (int s : rep.commonality.noncommon_set) std::cout << " " << s;
  std::cout << "\n";
  for (const std::string& note : rep.notes) std::cout << "note: " << note << "\n";
  std::cout << "wrote " << cfg.out_dir << "/diagram.json";
  if (!rep.embedding_empty) std::cout << ", embedding.csv";
  if (cfg.svg) std::cout << ", diagram.svg";
  std::cout << "\n";
  return 0;
}

void write_latents(const std::string& path, const evflow::LatentTriple& l) {
  Mat lat(l.x.size(), 3);
  lat.col(0) = l.x;
  lat.col(1) = l.y;
  lat.col(2) = l.z;
  evflow::write_csv(path, lat, {"x", "y", "z"});
}

int synth_cmd(const std::string& suite, const std::string& out, uint64_t seed,
              int n) {
  std::error_code ec;
  std::filesystem::create_directories(out, ec);
  evflow::require(!ec, evflow::Err::IoError,
                  "cannot create output directory: " + out);

  if (suite == "flat" || suite == "torus") {
    evflow::SynthPair pair;
    RunConfig cfg;
    if (suite == "flat") {
      if (n <= 0) n = 1000;
      pair = evflow::gen_flat_2d(n, {2.0, 2.0, 2.0, 2.0}, seed);
      cfg.epsilon1 = 0.2;
      cfg.epsilon2 = 0.2;
      cfg.k = 20;
    } else {
      if (n <= 0) n = 2000;
      pair = evflow::gen_torus(n, {10.0, 5.0, 10.0, 3.0}, true, seed);
      cfg.epsilon1 = 15.0;
      cfg.epsilon2 = 15.0;
      cfg.k = 10;
    }
    evflow::write_csv(out + "/s1.csv", pair.s1);
    evflow::write_csv(out + "/s2.csv", pair.s2);
    write_latents(out + "/latents.csv", pair.latent);
    cfg.input1 = out + "/s1.csv";
    cfg.input2 = out + "/s2.csv";
    cfg.out_dir = out + "/report";
    cfg.geometry = "spd";
    cfg.seed = seed;
    evflow::write_text_file(out + "/run.cfg", evflow::config_echo(cfg));
    std::cout << "wrote " << out << "/{s1.csv, s2.csv, latents.csv, run.cfg} ("
              << n << " points)\n";
    std::cout << "next: evflow run --config " << out << "/run.cfg\n";
    return 0;
  }

  // Two product graphs of odd cycles sharing one coordinate; the second has
  // its other coordinate shuffled. Kernel-level fixture, consumed by the
  // closed-form checks in `verify` and by the test suite, not by `run`.
  const int cn = 11, cm = 31;
  std::vector<int> pi(cm);
  for (int i = 0; i < cm; ++i) pi[i] = i;
  evflow::Rng rng(seed, 7);
  rng.shuffle(pi);
  Mat k1 = evflow::graph::product_kernel(cn, cm);
  Mat pm = evflow::graph::permutation_matrix(pi);
  Mat pfull = Mat::Zero(cn * cm, cn * cm);
  for (int i = 0; i < cn; ++i) pfull.block(i * cm, i * cm, cm, cm) = pm;
  Mat k2 = pfull * k1 * pfull.transpose();
  evflow::graph::ProductSpectrum sp =
      evflow::graph::analytic_product_spectrum(cn, cm);
  Mat pim(cm, 1);
  for (int i = 0; i < cm; ++i) pim(i, 0) = pi[i];
  evflow::write_csv(out + "/kxy.csv", k1);
  evflow::write_csv(out + "/kxz.csv", k2);
  evflow::write_csv(out + "/spectrum.csv", sp.values);
  evflow::write_csv(out + "/permutation.csv", pim);
  std::cout << "wrote " << out
            << "/{kxy.csv, kxz.csv, spectrum.csv, permutation.csv} for the "
            << cn << " x " << cm << " cycle-product model\n";
  std::cout << "next: evflow verify --suite graph\n";
  return 0;
}

struct Check {
  std::string name;
  bool pass;
  double measured;
  double bound;
};

int verify_cmd(const std::string& out_path, uint64_t seed) {
  namespace g = evflow::graph;
  const int n = 11, m = 31, nm = n * m;
  std::vector<Check> checks;
  evflow::Rng rng(seed, 11);
  auto random_perm = [&]() {
    std::vector<int> pi(m);
    for (int i = 0; i < m; ++i) pi[i] = i;
    rng.shuffle(pi);
    return pi;
  };

  // Closed-form spectrum of the product kernel against a direct solve.
  {
    Mat k1 = g::product_kernel(n, m);
    evflow::EigDecomposition e = evflow::eig_sym(k1);
    g::ProductSpectrum sp = g::analytic_product_spectrum(n, m);
    std::vector<double> sorted(sp.values.data(), sp.values.data() + nm);
    std::sort(sorted.begin(), sorted.end(), std::greater<double>());
    double worst = 0.0;
    for (int i = 0; i < nm; ++i)
      worst = std::max(worst, std::abs(e.values(i) - sorted[i]));
    checks.push_back({"product_spectrum", worst <= 1e-9, worst, 1e-9});
  }

  // The mode-coupling matrix b fixes the constant mode: first row and
  // column are e_1 up to rounding.
  {
    std::vector<int> pi = random_perm();
    Mat b = g::small_b(m, pi);
    double worst = std::abs(b(0, 0) - 1.0);
    for (int i = 1; i < m; ++i)
      worst = std::max({worst, std::abs(b(0, i)), std::abs(b(i, 0))});
    checks.push_back({"coupling_fixes_constant", worst <= 1e-12, worst, 1e-12});
  }

  // Diagonal entries on shared-coordinate modes (l = 1) are permutation
  // invariant and equal their closed-form mean exactly.
  {
    double worst = 0.0;
    for (int rep = 0; rep < 5; ++rep) {
      std::vector<int> pi = random_perm();
      Vec diag = g::c_diagonal(n, m, pi);
      for (int k = 1; k <= n; ++k) {
        int r = g::index_map(k, 1, n, m);
        worst = std::max(worst,
                         std::abs(diag(r - 1) - g::mean_c_diagonal(n, m, r)));
      }
    }
    checks.push_back({"invariant_diagonal", worst <= 1e-12, worst, 1e-12});
  }

  // Monte-Carlo mean of the full diagonal against the closed form, three
  // standard errors per entry.
  {
    const int reps = 500;
    Vec sum = Vec::Zero(nm), sumsq = Vec::Zero(nm);
    for (int rep = 0; rep < reps; ++rep) {
      Vec diag = g::c_diagonal(n, m, random_perm());
      sum += diag;
      sumsq += diag.cwiseProduct(diag);
    }
    int outside = 0;
    double worst_z = 0.0;
    for (int r = 1; r <= nm; ++r) {
      double mean = sum(r - 1) / reps;
      double var =
          std::max(0.0, sumsq(r - 1) / reps - mean * mean) * reps / (reps - 1);
      double se = std::sqrt(var / reps);
      double diff = std::abs(mean - g::mean_c_diagonal(n, m, r));
      double band = std::max(3.0 * se, 1e-12);
      if (diff > band) ++outside;
      if (se > 0) worst_z = std::max(worst_z, diff / se);
    }
    double frac = double(outside) / nm;
    checks.push_back({"mc_mean_diagonal_3se", frac <= 0.01, frac, 0.01});
  }

  // The analytic flow recast matches the direct geodesic between the two
  // kernels.
  {
    Mat k1 = g::product_kernel(n, m);
    std::vector<int> pi = random_perm();
    Mat pm = g::permutation_matrix(pi);
    Mat pfull = Mat::Zero(nm, nm);
    for (int i = 0; i < n; ++i) pfull.block(i * m, i * m, m, m) = pm;
    Mat k2 = pfull * k1 * pfull.transpose();
    double worst = 0.0;
    for (double t : {0.3, 0.7}) {
      Mat direct = evflow::geodesic_point(k1, k2, t);
      Mat recast = g::flow_point(n, m, pi, t);
      worst = std::max(worst, (direct - recast).cwiseAbs().maxCoeff());
    }
    checks.push_back({"flow_recast", worst <= 1e-8, worst, 1e-8});
  }

  // Invariant eigenpairs: shared-coordinate eigenvectors ride the flow with
  // constant eigenvalue.
  {
    std::vector<int> pi = random_perm();
    Mat gamma = g::flow_point(n, m, pi, 0.4);
    g::ProductSpectrum sp = g::analytic_product_spectrum(n, m);
    double worst = 0.0;
    for (int k = 1; k <= n; ++k) {
      int r = g::index_map(k, 1, n, m);
      Vec v = sp.vectors.col(r - 1);
      double mu = sp.values(r - 1);
      worst = std::max(worst, (gamma * v - mu * v).cwiseAbs().maxCoeff());
    }
    checks.push_back({"invariant_eigenpairs", worst <= 1e-9, worst, 1e-9});
  }

  // Chebyshev tail fractions for off-diagonal entries of the coupled kernel
  // blocks and for the coupling-matrix entries.
  {
    const int reps = 100;
    long long cross_total = 0, cross_out[3] = {0, 0, 0};
    long long bent_total = 0, bent_out[3] = {0, 0, 0};
    const double alphas[3] = {0.1, 0.2, 0.5};
    for (int rep = 0; rep < reps; ++rep) {
      std::vector<int> pi = random_perm();
      g::BcmChain chain = g::bcm_chain(n, m, pi);
      for (int bi = 0; bi < n; ++bi) {
        for (int i = 0; i < m; ++i) {
          for (int j = 0; j < m; ++j) {
            if (i == j) continue;
            double v = std::abs(chain.c(bi * m + i, bi * m + j));
            ++cross_total;
            for (int a = 0; a < 3; ++a)
              if (v > std::sqrt(1.0 / (32.0 * (m - 1))) / alphas[a])
                ++cross_out[a];
          }
        }
      }
      for (int i = 1; i < m; ++i) {
        for (int j = 1; j < m; ++j) {
          double v = std::abs(chain.b_small(i, j));
          ++bent_total;
          for (int a = 0; a < 3; ++a)
            if (v > std::sqrt(2.0 / m) / alphas[a]) ++bent_out[a];
        }
      }
    }
    for (int a = 0; a < 3; ++a) {
      double bound = alphas[a] * alphas[a];
      double f1 = double(cross_out[a]) / cross_total;
      double f2 = double(bent_out[a]) / bent_total;
      char name[64];
      std::snprintf(name, sizeof(name), "tail_offdiag_alpha_%g", alphas[a]);
      checks.push_back({name, f1 <= bound, f1, bound});
      std::snprintf(name, sizeof(name), "tail_coupling_alpha_%g", alphas[a]);
      checks.push_back({name, f2 <= bound, f2, bound});
    }
  }

  bool all_pass = true;
  evflow::JsonWriter w;
  w.begin_object();
  w.key("suite").value(std::string("graph"));
  w.key("checks").begin_array();
  for (const Check& c : checks) {
    all_pass = all_pass && c.pass;
    w.begin_object();
    w.key("name").value(c.name);
    w.key("pass").value(c.pass);
    w.key("measured").value(c.measured);
    w.key("bound").value(c.bound);
    w.end_object();
  }
  w.end_array();
  w.key("pass").value(all_pass);
  w.end_object();
  std::string report = w.str();
  if (out_path.empty()) {
    std::cout << report << "\n";
  } else {
    evflow::write_text_file(out_path, report);
    std::cout << "wrote " << out_path << "\n";
  }
  for (const Check& c : checks)
    std::cout << (c.pass ? "pass" : "FAIL") << "  " << c.name << "  measured "
              << evflow::format_g17(c.measured) << "  bound "
              << evflow::format_g17(c.bound) << "\n";
  return all_pass ? 0 : 3;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"eigenvalue flow between diffusion kernels of aligned views"};
  app.require_subcommand(1);
  int threads = 1;
  app.add_option("--threads", threads,
                 "accepted for interface stability; execution stays "
                 "single-threaded");

  std::string config_path;
  CLI::App* run = app.add_subcommand("run", "run the pipeline on CSV views");
  run->add_option("--config", config_path, "key = value run description")
      ->required();

  std::string suite, synth_out = "synth";
  uint64_t seed = 0;
  int n = 0;
  CLI::App* synth = app.add_subcommand(
      "synth", "generate a synthetic dataset plus a ready-to-run config");
  synth->add_option("--suite", suite, "flat | torus | graph")
      ->required()
      ->check(CLI::IsMember({"flat", "torus", "graph"}));
  synth->add_option("--out", synth_out, "output directory");
  synth->add_option("--seed", seed, "generator seed");
  synth->add_option("--n", n, "sample count (suite default when omitted)");

  std::string vsuite, vout;
  uint64_t vseed = 0;
  CLI::App* verify = app.add_subcommand(
      "verify", "check the closed-form cycle-product model numerically");
  verify->add_option("--suite", vsuite, "graph")
      ->required()
      ->check(CLI::IsMember({"graph"}));
  verify->add_option("--out", vout, "write the JSON report here");
  verify->add_option("--seed", vseed, "generator seed");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (*run) return run_cmd(config_path);
    if (*synth) return synth_cmd(suite, synth_out, seed, n);
    if (*verify) return verify_cmd(vout, vseed);
  } catch (const evflow::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return evflow::is_validation_error(e.code()) ? 2 : 3;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  }
  return 0;
}
