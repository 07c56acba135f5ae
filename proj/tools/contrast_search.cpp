// Grid search for a position-based instance on which CascadeKL-UCB settles on
// a suboptimal list in some seeds while BatchRank does not.
//
//   contrast_search [horizon] [seeds]

#include <cstdio>
#include <cstdlib>
#include <vector>

#include "clickbandit/config.hpp"
#include "clickbandit/harness.hpp"

using namespace clickbandit;

namespace {

std::size_t suboptimal_runs(ExperimentConfig config, Algorithm algorithm, double& mean_final) {
  config.algorithm = algorithm;
  const auto sweep = run_sweep(std::span(&config, 1), 1);
  const auto& g = sweep.groups.front();
  mean_final = 0.0;
  for (double r : g.final_window_regrets) mean_final += r;
  mean_final /= static_cast<double>(g.runs);
  return g.suboptimal_runs;
}

}  // namespace

int main(int argc, char** argv) {
  const std::uint64_t horizon = argc > 1 ? std::strtoull(argv[1], nullptr, 10) : 200000;
  const std::uint64_t seeds = argc > 2 ? std::strtoull(argv[2], nullptr, 10) : 10;
  const std::vector<std::vector<double>> alphas{
      {0.6, 0.5}, {0.7, 0.5}, {0.8, 0.6}, {0.9, 0.7}, {0.5, 0.4}, {0.6, 0.5, 0.1}, {0.7, 0.5, 0.2}};
  const std::vector<double> second_position{0.3, 0.5, 0.7};

  for (const auto& alpha : alphas) {
    for (double chi2 : second_position) {
      ExperimentConfig c;
      c.model = ModelKind::kPositionBased;
      c.alpha = alpha;
      c.chi = {1.0, chi2};
      c.num_positions = 2;
      c.horizon = horizon;
      c.window = horizon / 10;
      c.seeds.clear();
      for (std::uint64_t s = 0; s < seeds; ++s) c.seeds.push_back(s);
      double ckl_mean = 0.0, br_mean = 0.0;
      const auto ckl = suboptimal_runs(c, Algorithm::kCascadeKlUcb, ckl_mean);
      const auto br = suboptimal_runs(c, Algorithm::kBatchRank, br_mean);
      std::printf("alpha=");
      for (double a : alpha) std::printf("%g,", a);
      std::printf(" chi2=%g  cascadeklucb %zu/%zu (mean %.3g)  batchrank %zu/%zu (mean %.3g)\n",
                  chi2, ckl, static_cast<std::size_t>(seeds), ckl_mean, br,
                  static_cast<std::size_t>(seeds), br_mean);
      std::fflush(stdout);
    }
  }
}
