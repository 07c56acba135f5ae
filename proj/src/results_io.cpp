#include "clickbandit/results_io.hpp"

#include <charconv>
#include <cstdio>
#include <fstream>
#include <string_view>

#include "clickbandit/error.hpp"

namespace clickbandit {
namespace {

std::string num(double value) {
  char buffer[32];
  std::snprintf(buffer, sizeof(buffer), "%.17g", value);
  return buffer;
}

std::ofstream open_for_write(const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) fail(ErrorCode::kIo, "cannot write " + path.string());
  return out;
}

void finish(std::ofstream& out, const std::filesystem::path& path) {
  out.flush();
  if (!out) fail(ErrorCode::kIo, "failed writing " + path.string());
}

std::vector<std::string_view> split_fields(std::string_view line) {
  std::vector<std::string_view> fields;
  std::size_t start = 0;
  while (true) {
    const auto comma = line.find(',', start);
    fields.push_back(line.substr(start, comma - start));
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  return fields;
}

template <typename T>
T parse_field(std::string_view field, const std::filesystem::path& path, std::size_t line) {
  T value{};
  const auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(), value);
  if (field.empty() || ec != std::errc() || ptr != field.data() + field.size()) {
    fail(ErrorCode::kSchema, path.string() + ":" + std::to_string(line) + ": malformed field '" +
                                 std::string(field) + "'");
  }
  return value;
}

}  // namespace

void write_results_csv(std::ostream& out, std::span<const RegretTrace> traces) {
  out << kResultsHeader << '\n';
  for (const auto& trace : traces) {
    for (const auto& w : trace.windows) {
      out << trace.run_id << ',' << trace.algorithm << ',' << trace.model << ',' << trace.seed
          << ',' << w.index << ',' << w.start << ',' << w.end << ',' << num(w.avg_per_step_regret)
          << ',' << num(w.cumulative_regret) << '\n';
    }
  }
}

void write_events_csv(std::ostream& out, std::span<const RegretTrace> traces) {
  out << kEventsHeader << '\n';
  for (const auto& trace : traces) {
    for (const auto& e : trace.events) {
      out << trace.run_id << ',' << e.step << ',' << to_string(e.event.type) << ','
          << e.event.batch_id << ',' << e.event.detail << '\n';
    }
  }
}

void write_aggregate_csv(std::ostream& out, std::span<const SweepGroup> groups) {
  out << kAggregateHeader << '\n';
  for (const auto& g : groups) {
    for (const auto& w : g.mean_windows) {
      out << g.algorithm << ',' << g.model << ',' << g.runs << ',' << w.index << ',' << w.start
          << ',' << w.end << ',' << num(w.avg_per_step_regret) << ','
          << num(w.cumulative_regret) << '\n';
    }
  }
}

void write_histogram_csv(std::ostream& out, std::span<const SweepGroup> groups) {
  out << kHistogramHeader << '\n';
  for (const auto& g : groups) {
    for (std::size_t i = 0; i < g.histogram.counts.size(); ++i) {
      out << g.algorithm << ',' << g.model << ',' << num(g.histogram.edges[i]) << ','
          << num(g.histogram.edges[i + 1]) << ',' << g.histogram.counts[i] << '\n';
    }
  }
}

void write_run_files(const std::filesystem::path& dir, std::span<const RegretTrace> traces) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) fail(ErrorCode::kIo, "cannot create directory " + dir.string() + ": " + ec.message());
  {
    const auto path = dir / "results.csv";
    auto out = open_for_write(path);
    write_results_csv(out, traces);
    finish(out, path);
  }
  {
    const auto path = dir / "events.csv";
    auto out = open_for_write(path);
    write_events_csv(out, traces);
    finish(out, path);
  }
}

void write_sweep_files(const std::filesystem::path& dir, const SweepResult& sweep) {
  write_run_files(dir, sweep.runs);
  {
    const auto path = dir / "aggregate.csv";
    auto out = open_for_write(path);
    write_aggregate_csv(out, sweep.groups);
    finish(out, path);
  }
  {
    const auto path = dir / "histogram.csv";
    auto out = open_for_write(path);
    write_histogram_csv(out, sweep.groups);
    finish(out, path);
  }
}

std::vector<ResultRow> read_results_csv(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail(ErrorCode::kIo, "cannot open " + path.string());
  std::string line;
  if (!std::getline(in, line)) fail(ErrorCode::kSchema, path.string() + ": empty file");
  if (!line.empty() && line.back() == '\r') line.pop_back();
  if (line != kResultsHeader) {
    fail(ErrorCode::kSchema, path.string() + ": unexpected header '" + line + "'");
  }
  std::vector<ResultRow> rows;
  std::size_t line_number = 1;
  while (std::getline(in, line)) {
    ++line_number;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    const auto f = split_fields(line);
    if (f.size() != 9) {
      fail(ErrorCode::kSchema, path.string() + ":" + std::to_string(line_number) +
                                   ": expected 9 fields, got " + std::to_string(f.size()));
    }
    ResultRow row;
    row.run_id = std::string(f[0]);
    row.algorithm = std::string(f[1]);
    row.model = std::string(f[2]);
    row.seed = parse_field<std::uint64_t>(f[3], path, line_number);
    row.window_index = parse_field<std::size_t>(f[4], path, line_number);
    row.window_start = parse_field<std::uint64_t>(f[5], path, line_number);
    row.window_end = parse_field<std::uint64_t>(f[6], path, line_number);
    row.avg_per_step_regret = parse_field<double>(f[7], path, line_number);
    row.cumulative_regret = parse_field<double>(f[8], path, line_number);
    rows.push_back(std::move(row));
  }
  if (rows.empty()) fail(ErrorCode::kSchema, path.string() + ": no data rows");
  return rows;
}

}  // namespace clickbandit
