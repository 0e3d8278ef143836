#include "lmnne_cli/config.h"

#include <charconv>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include "lmnne/errors.h"

namespace lmnne::cli {
namespace {

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

double parse_real(std::string_view key, std::string_view text) {
  double v = 0.0;
  if (text == "inf" || text == "+inf") return INFINITY;
  auto [end, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
  if (ec != std::errc() || end != text.data() + text.size() || std::isnan(v)) {
    throw ConfigError(std::string(key), "expected a number, got '" + std::string(text) + "'");
  }
  return v;
}

std::uint64_t parse_count(std::string_view key, std::string_view text) {
  std::uint64_t v = 0;
  auto [end, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
  if (ec != std::errc() || end != text.data() + text.size()) {
    throw ConfigError(std::string(key),
                      "expected a non-negative integer, got '" + std::string(text) + "'");
  }
  return v;
}

NormKind parse_norm_value(std::string_view key, std::string_view text) {
  if (auto n = parse_norm(text)) return *n;
  throw ConfigError(std::string(key), "expected L1 or L2, got '" + std::string(text) + "'");
}

std::string real_text(double v) {
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[64];
  auto [end, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, end);
}

}  // namespace

void set_config_value(TrainConfig& c, std::string_view key, std::string_view value) {
  value = trim(value);
  if (key == "dim") c.dim = parse_count(key, value);
  else if (key == "gamma") c.model.gamma = parse_real(key, value);
  else if (key == "alpha") c.alpha = parse_real(key, value);
  else if (key == "beta") c.beta = parse_real(key, value);
  else if (key == "mu") c.model.mu = parse_real(key, value);
  else if (key == "epsilon") c.epsilon = parse_real(key, value);
  else if (key == "max_epochs") c.max_epochs = parse_count(key, value);
  else if (key == "seed") c.seed = parse_count(key, value);
  else if (key == "pull_norm") c.model.pull_norm = parse_norm_value(key, value);
  else if (key == "push_norm") c.model.push_norm = parse_norm_value(key, value);
  else if (key == "baseline") {
    if (value == "true" || value == "1") c.baseline = true;
    else if (value == "false" || value == "0") c.baseline = false;
    else throw ConfigError(std::string(key), "expected true or false");
  } else {
    throw ConfigError(std::string(key), "unknown configuration key");
  }
}

TrainConfig parse_train_config(std::istream& in, std::string_view source, TrainConfig base) {
  std::set<std::string, std::less<>> seen;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    std::string_view text = line;
    if (auto hash = text.find('#'); hash != std::string_view::npos) text = text.substr(0, hash);
    text = trim(text);
    if (text.empty()) continue;
    const auto eq = text.find('=');
    if (eq == std::string_view::npos) {
      throw ConfigError("", std::string(source) + ":" + std::to_string(line_no) +
                                ": expected key = value");
    }
    const std::string key(trim(text.substr(0, eq)));
    if (!seen.insert(key).second) throw ConfigError(key, "given more than once");
    set_config_value(base, key, text.substr(eq + 1));
  }
  base.validate();
  return base;
}

TrainConfig load_train_config(const std::filesystem::path& path, TrainConfig base) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open config " + path.string());
  return parse_train_config(in, path.string(), base);
}

std::map<std::string, std::string> config_entries(const TrainConfig& c) {
  return {
      {"dim", std::to_string(c.dim)},
      {"gamma", real_text(c.model.gamma)},
      {"alpha", real_text(c.alpha)},
      {"beta", real_text(c.beta)},
      {"mu", real_text(c.model.mu)},
      {"epsilon", real_text(c.epsilon)},
      {"max_epochs", std::to_string(c.max_epochs)},
      {"seed", std::to_string(c.seed)},
      {"pull_norm", std::string(to_string(c.model.pull_norm))},
      {"push_norm", std::string(to_string(c.model.push_norm))},
      {"baseline", c.baseline ? "true" : "false"},
  };
}

std::string format_train_config(const TrainConfig& c) {
  const auto entries = config_entries(c);
  std::ostringstream out;
  for (std::string_view key : kConfigKeys) out << key << " = " << entries.at(std::string(key)) << '\n';
  return out.str();
}

}  // namespace lmnne::cli
