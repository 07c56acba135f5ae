#include "clickbandit/plot.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <numeric>
#include <sstream>

#include "clickbandit/error.hpp"
#include "clickbandit/harness.hpp"
#include "clickbandit/results_io.hpp"

namespace clickbandit::plot {
namespace {

constexpr double kMarginLeft = 80, kMarginRight = 170, kMarginTop = 40, kMarginBottom = 60;
constexpr double kLogFloor = 1e-6;

std::string fmt(double v, const char* spec = "%.2f") {
  char buffer[48];
  std::snprintf(buffer, sizeof(buffer), spec, v);
  return buffer;
}

std::string escape(const std::string& text) {
  std::string out;
  for (char c : text) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      default: out += c;
    }
  }
  return out;
}

std::string header(int width, int height, const std::string& title) {
  std::ostringstream s;
  s << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
    << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width << "\" height=\"" << height
    << "\" viewBox=\"0 0 " << width << ' ' << height << "\" font-family=\"sans-serif\" font-size=\"12\">\n"
    << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n"
    << "<text x=\"" << width / 2 << "\" y=\"24\" text-anchor=\"middle\" font-size=\"15\">"
    << escape(title) << "</text>\n";
  return s.str();
}

std::string color_for(const std::string& algorithm) {
  if (algorithm == "batchrank") return "#d62728";
  if (algorithm == "cascadeklucb") return "#1f77b4";
  if (algorithm == "rankedexp3") return "#7f7f7f";
  return "#2ca02c";
}

}  // namespace

std::string render_line_chart(std::span<const Series> series, const LineChartOptions& options) {
  const double plot_w = options.width - kMarginLeft - kMarginRight;
  const double plot_h = options.height - kMarginTop - kMarginBottom;

  auto transform_y = [&](double v) { return options.log_y ? std::log10(std::max(v, kLogFloor)) : v; };
  double x_min = INFINITY, x_max = -INFINITY, y_min = INFINITY, y_max = -INFINITY;
  for (const auto& s : series) {
    for (const auto& [x, y] : s.points) {
      x_min = std::min(x_min, x);
      x_max = std::max(x_max, x);
      y_min = std::min(y_min, transform_y(y));
      y_max = std::max(y_max, transform_y(y));
    }
  }
  if (!std::isfinite(x_min)) x_min = 0, x_max = 1, y_min = 0, y_max = 1;
  if (!options.log_y) y_min = std::min(y_min, 0.0);
  if (options.log_y) y_min = std::floor(y_min), y_max = std::ceil(y_max);
  if (x_max == x_min) x_max = x_min + 1;
  if (y_max == y_min) y_max = y_min + 1;

  auto px = [&](double x) { return kMarginLeft + (x - x_min) / (x_max - x_min) * plot_w; };
  auto py = [&](double y) {
    return kMarginTop + plot_h - (transform_y(y) - y_min) / (y_max - y_min) * plot_h;
  };

  std::ostringstream s;
  s << header(options.width, options.height, options.title);
  s << "<rect x=\"" << kMarginLeft << "\" y=\"" << kMarginTop << "\" width=\"" << plot_w
    << "\" height=\"" << plot_h << "\" fill=\"none\" stroke=\"black\"/>\n";

  // y ticks: decades on a log axis, five even steps otherwise.
  std::vector<double> y_ticks;
  if (options.log_y) {
    for (double e = y_min; e <= y_max + 1e-9; e += 1.0) y_ticks.push_back(e);
  } else {
    for (int i = 0; i <= 5; ++i) y_ticks.push_back(y_min + (y_max - y_min) * i / 5.0);
  }
  for (double t : y_ticks) {
    const double y = kMarginTop + plot_h - (t - y_min) / (y_max - y_min) * plot_h;
    const std::string label = options.log_y ? "1e" + fmt(t, "%.0f") : fmt(t, "%.3g");
    s << "<line class=\"tick\" x1=\"" << kMarginLeft - 5 << "\" y1=\"" << fmt(y) << "\" x2=\""
      << kMarginLeft << "\" y2=\"" << fmt(y) << "\" stroke=\"black\"/>\n"
      << "<text x=\"" << kMarginLeft - 8 << "\" y=\"" << fmt(y + 4)
      << "\" text-anchor=\"end\">" << label << "</text>\n";
  }
  for (int i = 0; i <= 5; ++i) {
    const double v = x_min + (x_max - x_min) * i / 5.0;
    s << "<text x=\"" << fmt(px(v)) << "\" y=\"" << fmt(kMarginTop + plot_h + 18)
      << "\" text-anchor=\"middle\">" << fmt(v, "%.3g") << "</text>\n";
  }
  s << "<text x=\"" << fmt(kMarginLeft + plot_w / 2) << "\" y=\"" << options.height - 15
    << "\" text-anchor=\"middle\">" << escape(options.x_label) << "</text>\n"
    << "<text transform=\"translate(18," << fmt(kMarginTop + plot_h / 2)
    << ") rotate(-90)\" text-anchor=\"middle\">" << escape(options.y_label)
    << (options.log_y ? " (log scale)" : "") << "</text>\n";

  for (std::size_t i = 0; i < series.size(); ++i) {
    const auto& sr = series[i];
    s << "<polyline class=\"series\" data-label=\"" << escape(sr.label) << "\" fill=\"none\" stroke=\""
      << sr.color << "\" stroke-width=\"2\"" << (sr.dashed ? " stroke-dasharray=\"6,4\"" : "")
      << " points=\"";
    for (std::size_t j = 0; j < sr.points.size(); ++j) {
      if (j) s << ' ';
      s << fmt(px(sr.points[j].first)) << ',' << fmt(py(sr.points[j].second));
    }
    s << "\"/>\n";
    const double ly = kMarginTop + 10 + 20.0 * static_cast<double>(i);
    const double lx = kMarginLeft + plot_w + 12;
    s << "<line x1=\"" << lx << "\" y1=\"" << ly << "\" x2=\"" << lx + 24 << "\" y2=\"" << ly
      << "\" stroke=\"" << sr.color << "\" stroke-width=\"2\""
      << (sr.dashed ? " stroke-dasharray=\"6,4\"" : "") << "/>\n"
      << "<text class=\"legend\" x=\"" << lx + 30 << "\" y=\"" << ly + 4 << "\">"
      << escape(sr.label) << "</text>\n";
  }
  s << "</svg>\n";
  return s.str();
}

std::string render_histogram(std::span<const double> edges, std::span<const BarSeries> series,
                             const std::string& title) {
  constexpr int width = 720, height = 440;
  const double plot_w = width - kMarginLeft - kMarginRight;
  const double plot_h = height - kMarginTop - kMarginBottom;
  const std::size_t bins = edges.size() < 2 ? 0 : edges.size() - 1;

  std::size_t max_count = 1;
  for (const auto& sr : series) {
    for (std::size_t c : sr.counts) max_count = std::max(max_count, c);
  }

  std::ostringstream s;
  s << header(width, height, title);
  s << "<rect x=\"" << kMarginLeft << "\" y=\"" << kMarginTop << "\" width=\"" << plot_w
    << "\" height=\"" << plot_h << "\" fill=\"none\" stroke=\"black\"/>\n";
  for (int i = 0; i <= 4; ++i) {
    const double v = static_cast<double>(max_count) * i / 4.0;
    const double y = kMarginTop + plot_h - plot_h * i / 4.0;
    s << "<text x=\"" << kMarginLeft - 8 << "\" y=\"" << fmt(y + 4) << "\" text-anchor=\"end\">"
      << fmt(v, "%.3g") << "</text>\n";
  }

  const double bin_w = bins ? plot_w / static_cast<double>(bins) : plot_w;
  const double bar_w = series.empty() ? 0 : 0.8 * bin_w / static_cast<double>(series.size());
  for (std::size_t b = 0; b < bins; ++b) {
    const double x0 = kMarginLeft + bin_w * static_cast<double>(b);
    s << "<text x=\"" << fmt(x0 + bin_w / 2) << "\" y=\"" << fmt(kMarginTop + plot_h + 18)
      << "\" text-anchor=\"middle\" font-size=\"10\">[" << fmt(edges[b], "%g") << ", "
      << fmt(edges[b + 1], "%g") << ")</text>\n";
    for (std::size_t i = 0; i < series.size(); ++i) {
      const std::size_t count = b < series[i].counts.size() ? series[i].counts[b] : 0;
      const double h = plot_h * static_cast<double>(count) / static_cast<double>(max_count);
      s << "<rect class=\"bar\" data-label=\"" << escape(series[i].label) << "\" data-count=\""
        << count << "\" x=\"" << fmt(x0 + 0.1 * bin_w + bar_w * static_cast<double>(i))
        << "\" y=\"" << fmt(kMarginTop + plot_h - h) << "\" width=\"" << fmt(bar_w)
        << "\" height=\"" << fmt(h) << "\" fill=\"" << series[i].color << "\"/>\n";
    }
  }
  s << "<text x=\"" << fmt(kMarginLeft + plot_w / 2) << "\" y=\"" << height - 15
    << "\" text-anchor=\"middle\">Final-window per-step regret</text>\n";
  for (std::size_t i = 0; i < series.size(); ++i) {
    const double ly = kMarginTop + 10 + 20.0 * static_cast<double>(i);
    const double lx = kMarginLeft + plot_w + 12;
    s << "<rect x=\"" << lx << "\" y=\"" << ly - 6 << "\" width=\"24\" height=\"12\" fill=\""
      << series[i].color << "\"/>\n"
      << "<text class=\"legend\" x=\"" << lx + 30 << "\" y=\"" << ly + 4 << "\">"
      << escape(series[i].label) << "</text>\n";
  }
  s << "</svg>\n";
  return s.str();
}

PlotFiles render_plots(std::span<const std::filesystem::path> results_csvs,
                       const std::filesystem::path& out_dir, const PlotOptions& options) {
  if (results_csvs.empty()) fail(ErrorCode::kSchema, "no results files given");
  std::vector<ResultRow> rows;
  for (const auto& path : results_csvs) {
    auto part = read_results_csv(path);
    rows.insert(rows.end(), std::make_move_iterator(part.begin()), std::make_move_iterator(part.end()));
  }
  const std::vector<double> edges =
      options.bin_edges.empty() ? default_histogram_edges() : options.bin_edges;

  // (algorithm, model) -> window_end -> values; and run -> last window value
  using Key = std::pair<std::string, std::string>;
  std::map<Key, std::map<std::uint64_t, std::vector<double>>> windows;
  std::map<Key, std::map<std::string, std::pair<std::size_t, double>>> finals;
  for (const auto& r : rows) {
    const Key key{r.algorithm, r.model};
    windows[key][r.window_end].push_back(r.avg_per_step_regret);
    auto& last = finals[key][r.run_id + "#" + std::to_string(r.seed)];
    if (r.window_index >= last.first) last = {r.window_index, r.avg_per_step_regret};
  }

  std::vector<Series> series;
  std::vector<BarSeries> bars;
  for (auto& [key, by_step] : windows) {
    Series sr{key.first + " (" + key.second + ")", color_for(key.first), key.second == "pbm", {}};
    for (auto& [step, values] : by_step) {
      std::sort(values.begin(), values.end());
      sr.points.emplace_back(static_cast<double>(step),
                             std::accumulate(values.begin(), values.end(), 0.0) /
                                 static_cast<double>(values.size()));
    }
    series.push_back(std::move(sr));

    std::vector<double> final_values;
    for (const auto& [run, last] : finals[key]) final_values.push_back(last.second);
    bars.push_back({series.back().label, series.back().color,
                    make_histogram(final_values, edges).counts});
  }

  LineChartOptions line_options;
  line_options.log_y = options.log_y;
  const std::string line_svg = render_line_chart(series, line_options);
  const std::string hist_svg = render_histogram(edges, bars, "Final-window regret distribution");

  std::error_code ec;
  std::filesystem::create_directories(out_dir, ec);
  if (ec) fail(ErrorCode::kIo, "cannot create directory " + out_dir.string());
  PlotFiles files{out_dir / "regret.svg", out_dir / "histogram.svg"};
  for (const auto& [path, text] : {std::pair{files.line_chart, &line_svg},
                                  std::pair{files.histogram, &hist_svg}}) {
    std::ofstream out(path, std::ios::binary);
    out << *text;
    if (!out) fail(ErrorCode::kIo, "cannot write " + path.string());
  }
  return files;
}

}  // namespace clickbandit::plot
