#pragma once

#include <filesystem>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace clickbandit::plot {

struct Series {
  std::string label;
  std::string color;
  bool dashed = false;
  std::vector<std::pair<double, double>> points;  // (step, regret)
};

struct LineChartOptions {
  std::string title = "Expected per-step regret";
  std::string x_label = "Step";
  std::string y_label = "Per-step regret";
  bool log_y = false;
  int width = 720;
  int height = 440;
};

// SVG line chart, one <polyline> per series in input order.
std::string render_line_chart(std::span<const Series> series, const LineChartOptions& options);

struct BarSeries {
  std::string label;
  std::string color;
  std::vector<std::size_t> counts;  // one per bin
};

// SVG grouped bar chart over the bins [edges[i], edges[i + 1]).
std::string render_histogram(std::span<const double> edges, std::span<const BarSeries> series,
                             const std::string& title);

struct PlotOptions {
  std::vector<double> bin_edges;  // empty: harness defaults
  bool log_y = false;
};

struct PlotFiles {
  std::filesystem::path line_chart;
  std::filesystem::path histogram;
};

// Reads harness results CSVs and writes regret.svg (mean windowed regret per
// algorithm and model) and histogram.svg (final-window regret of each run)
// into `out_dir`. Nothing is written if any input fails to parse.
PlotFiles render_plots(std::span<const std::filesystem::path> results_csvs,
                       const std::filesystem::path& out_dir, const PlotOptions& options);

}  // namespace clickbandit::plot
