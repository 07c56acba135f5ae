#include "clickbandit/config.hpp"

#include <charconv>
#include <cstdio>
#include <fstream>
#include <optional>
#include <sstream>

#include "clickbandit/error.hpp"

namespace clickbandit {
namespace {

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

std::string format_double(double value) {
  char buffer[32];
  std::snprintf(buffer, sizeof(buffer), "%.17g", value);
  return buffer;
}

class LineParser {
 public:
  LineParser(std::string_view source, std::size_t line) : source_(source), line_(line) {}

  [[noreturn]] void error(const std::string& message) const {
    fail(ErrorCode::kConfig, std::string(source_) + ":" + std::to_string(line_) + ": " + message);
  }

  double parse_double(std::string_view token) const {
    token = trim(token);
    double value = 0.0;
    const auto [ptr, ec] = std::from_chars(token.data(), token.data() + token.size(), value);
    if (ec != std::errc() || ptr != token.data() + token.size() || token.empty()) {
      error("expected a number, got '" + std::string(token) + "'");
    }
    return value;
  }

  double parse_probability(std::string_view token) const {
    const double value = parse_double(token);
    if (!(value >= 0.0 && value <= 1.0)) {
      error("probability must lie in [0, 1], got '" + std::string(trim(token)) + "'");
    }
    return value;
  }

  std::uint64_t parse_uint(std::string_view token) const {
    token = trim(token);
    std::uint64_t value = 0;
    const auto [ptr, ec] = std::from_chars(token.data(), token.data() + token.size(), value);
    if (ec != std::errc() || ptr != token.data() + token.size() || token.empty()) {
      error("expected a nonnegative integer, got '" + std::string(token) + "'");
    }
    return value;
  }

  template <typename Parse>
  auto parse_list(std::string_view value, Parse parse) const {
    std::vector<decltype(parse(value))> out;
    if (trim(value).empty()) error("empty list");
    std::size_t start = 0;
    while (true) {
      const auto comma = value.find(',', start);
      out.push_back(parse(value.substr(start, comma - start)));
      if (comma == std::string_view::npos) break;
      start = comma + 1;
    }
    return out;
  }

 private:
  std::string_view source_;
  std::size_t line_;
};

}  // namespace

std::string_view to_string(Algorithm algorithm) {
  switch (algorithm) {
    case Algorithm::kBatchRank: return "batchrank";
    case Algorithm::kCascadeKlUcb: return "cascadeklucb";
    case Algorithm::kRankedExp3: return "rankedexp3";
    case Algorithm::kOptimal: return "optimal";
  }
  return "unknown";
}

Algorithm parse_algorithm(std::string_view name) {
  for (Algorithm a : {Algorithm::kBatchRank, Algorithm::kCascadeKlUcb, Algorithm::kRankedExp3,
                      Algorithm::kOptimal}) {
    if (name == to_string(a)) return a;
  }
  fail(ErrorCode::kConfig, "unknown algorithm '" + std::string(name) +
                               "' (expected batchrank, cascadeklucb, rankedexp3 or optimal)");
}

ModelKind parse_model_kind(std::string_view name) {
  if (name == "cm") return ModelKind::kCascade;
  if (name == "pbm") return ModelKind::kPositionBased;
  fail(ErrorCode::kConfig, "unknown model '" + std::string(name) + "' (expected cm or pbm)");
}

void ExperimentConfig::validate() const {
  auto bad = [](const std::string& message) { fail(ErrorCode::kConfig, message); };
  if (label.empty() || label.find_first_not_of("abcdefghijklmnopqrstuvwxyz"
                                                "ABCDEFGHIJKLMNOPQRSTUVWXYZ0123456789._-") !=
                           std::string::npos) {
    bad("label must be nonempty and use only letters, digits, '.', '_' and '-'");
  }
  if (alpha.empty()) bad("alpha must list at least one attraction probability");
  for (double a : alpha) {
    if (!(a >= 0.0 && a <= 1.0)) bad("alpha entries must lie in [0, 1]");
  }
  if (num_positions < 1 || num_positions > alpha.size()) bad("K must satisfy 1 <= K <= L");
  if (model == ModelKind::kPositionBased) {
    if (chi.size() != num_positions) bad("chi must have exactly K entries for the pbm model");
    for (std::size_t k = 0; k < chi.size(); ++k) {
      if (!(chi[k] >= 0.0 && chi[k] <= 1.0)) bad("chi entries must lie in [0, 1]");
      if (k > 0 && chi[k] > chi[k - 1]) bad("chi must be nonincreasing");
    }
  } else if (!chi.empty()) {
    bad("chi is only valid for the pbm model");
  }
  if (horizon < 5) bad("T must be at least 5");
  if (window < 1) bad("window must be positive");
  if (seeds.empty()) bad("at least one seed is required");
}

ClickModel ExperimentConfig::make_model() const {
  validate();
  if (model == ModelKind::kPositionBased) {
    return ClickModel(PbmParams{AttractionParams(alpha), chi});
  }
  return ClickModel(CmParams{AttractionParams(alpha), num_positions});
}

ExperimentConfig parse_config(std::string_view text, std::string_view source) {
  ExperimentConfig config;
  std::optional<std::size_t> positions;
  bool have_alpha = false, have_horizon = false, have_model = false, have_algorithm = false;
  std::size_t line_number = 0;
  std::size_t last_line = 0;

  while (!text.empty()) {
    ++line_number;
    const auto newline = text.find('\n');
    std::string_view line = text.substr(0, newline);
    text = newline == std::string_view::npos ? std::string_view{} : text.substr(newline + 1);

    if (const auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    last_line = line_number;

    const LineParser p(source, line_number);
    const auto eq = line.find('=');
    if (eq == std::string_view::npos) p.error("expected 'key = value'");
    const std::string_view key = trim(line.substr(0, eq));
    const std::string_view value = trim(line.substr(eq + 1));
    if (value.empty()) p.error("missing value for '" + std::string(key) + "'");

    try {
      if (key == "label") {
        config.label = std::string(value);
      } else if (key == "model") {
        config.model = parse_model_kind(value);
        have_model = true;
      } else if (key == "alpha") {
        config.alpha = p.parse_list(value, [&](std::string_view t) { return p.parse_probability(t); });
        have_alpha = true;
      } else if (key == "chi") {
        config.chi = p.parse_list(value, [&](std::string_view t) { return p.parse_probability(t); });
      } else if (key == "K") {
        positions = p.parse_uint(value);
      } else if (key == "T") {
        config.horizon = p.parse_uint(value);
        have_horizon = true;
      } else if (key == "algorithm") {
        config.algorithm = parse_algorithm(value);
        have_algorithm = true;
      } else if (key == "seeds") {
        config.seeds = p.parse_list(value, [&](std::string_view t) { return p.parse_uint(t); });
      } else if (key == "window") {
        config.window = p.parse_uint(value);
      } else {
        p.error("unknown key '" + std::string(key) + "'");
      }
    } catch (const Error& e) {
      if (e.code() != ErrorCode::kConfig || std::string_view(e.what()).starts_with(source)) throw;
      p.error(e.what());
    }
  }

  const LineParser end(source, last_line);
  if (!have_model) end.error("missing required key 'model'");
  if (!have_alpha) end.error("missing required key 'alpha'");
  if (!have_horizon) end.error("missing required key 'T'");
  if (!have_algorithm) end.error("missing required key 'algorithm'");
  if (positions) {
    config.num_positions = *positions;
  } else if (config.model == ModelKind::kPositionBased) {
    config.num_positions = config.chi.size();
  } else {
    end.error("missing required key 'K'");
  }
  try {
    config.validate();
  } catch (const Error& e) {
    end.error(e.what());
  }
  return config;
}

ExperimentConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) fail(ErrorCode::kIo, "cannot open config file " + path.string());
  std::stringstream buffer;
  buffer << in.rdbuf();
  return parse_config(buffer.str(), path.string());
}

std::string serialize_config(const ExperimentConfig& config) {
  auto join_doubles = [](const std::vector<double>& values) {
    std::string out;
    for (std::size_t i = 0; i < values.size(); ++i) {
      if (i) out += ',';
      out += format_double(values[i]);
    }
    return out;
  };
  std::string out;
  out += "label = " + config.label + "\n";
  out += "model = " + std::string(to_string(config.model)) + "\n";
  out += "alpha = " + join_doubles(config.alpha) + "\n";
  if (!config.chi.empty()) out += "chi = " + join_doubles(config.chi) + "\n";
  out += "K = " + std::to_string(config.num_positions) + "\n";
  out += "T = " + std::to_string(config.horizon) + "\n";
  out += "algorithm = " + std::string(to_string(config.algorithm)) + "\n";
  out += "seeds = ";
  for (std::size_t i = 0; i < config.seeds.size(); ++i) {
    if (i) out += ',';
    out += std::to_string(config.seeds[i]);
  }
  out += "\nwindow = " + std::to_string(config.window) + "\n";
  return out;
}

void save_config(const ExperimentConfig& config, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) fail(ErrorCode::kIo, "cannot write config file " + path.string());
  out << serialize_config(config);
  if (!out) fail(ErrorCode::kIo, "failed writing config file " + path.string());
}

}  // namespace clickbandit
