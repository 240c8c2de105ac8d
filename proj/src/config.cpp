#include "stabsgd/config.hpp"

#include <algorithm>
#include <array>
#include <charconv>
#include <fstream>
#include <stdexcept>

namespace stabsgd {
namespace {

constexpr std::array kAlgorithms = {"stabilized", "sgd", "truncated", "rda", "fobos"};

constexpr std::array kTrainKeys = {"beta0", "gamma",     "pi0",      "K",          "alpha",           "K_max",
                                   "n_K",   "M",         "eta",      "delta_K",    "g0_init",         "max_stages",
                                   "convergence_tol", "passes", "seed", "carryover", "prob_unit",
                                   "anneal_argument", "threads"};
constexpr std::array kBaselineKeys = {"eta",    "g0",           "K",          "lambda", "gamma_rda", "rho",
                                      "lambda_fobos", "fobos_eta0", "fobos_half_step", "passes", "seed"};

std::string_view trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string_view::npos) {
    return {};
  }
  return s.substr(b, s.find_last_not_of(" \t\r\n") - b + 1);
}

double to_double(const std::string& key, const std::string& v) {
  std::size_t used = 0;
  double out = 0.0;
  try {
    out = std::stod(v, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used == 0 || used != v.size()) {
    throw std::invalid_argument("setting '" + key + "': expected a number, got '" + v + "'");
  }
  return out;
}

std::uint64_t to_uint(const std::string& key, const std::string& v) {
  std::uint64_t out = 0;
  const auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
  if (ec != std::errc() || ptr != v.data() + v.size()) {
    throw std::invalid_argument("setting '" + key + "': expected a nonnegative integer, got '" + v + "'");
  }
  return out;
}

bool to_bool(const std::string& key, const std::string& v) {
  if (v == "1" || v == "true" || v == "yes" || v == "on") return true;
  if (v == "0" || v == "false" || v == "no" || v == "off") return false;
  throw std::invalid_argument("setting '" + key + "': expected a boolean, got '" + v + "'");
}

template <typename Fn>
void with(const Settings& s, const char* key, Fn&& fn) {
  if (const auto it = s.find(key); it != s.end()) {
    fn(it->first, it->second);
  }
}

}  // namespace

std::pair<std::string, std::string> parse_assignment(std::string_view text) {
  const auto eq = text.find('=');
  if (eq == std::string_view::npos) {
    throw std::invalid_argument("expected key=value, got '" + std::string(text) + "'");
  }
  const auto key = trim(text.substr(0, eq));
  const auto value = trim(text.substr(eq + 1));
  if (key.empty() || value.empty()) {
    throw std::invalid_argument("expected key=value, got '" + std::string(text) + "'");
  }
  return {std::string(key), std::string(value)};
}

Settings parse_settings(std::istream& in) {
  Settings out;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    std::string_view body = line;
    if (const auto hash = body.find('#'); hash != std::string_view::npos) {
      body = body.substr(0, hash);
    }
    body = trim(body);
    if (body.empty()) {
      continue;
    }
    try {
      auto [k, v] = parse_assignment(body);
      out[k] = v;
    } catch (const std::invalid_argument& e) {
      throw std::invalid_argument("config line " + std::to_string(line_no) + ": " + e.what());
    }
  }
  return out;
}

Settings load_settings(const std::string& path) {
  std::ifstream in(path);
  if (!in) {
    throw std::runtime_error("cannot open config " + path);
  }
  return parse_settings(in);
}

Settings settings_for(const Settings& all, std::string_view algo) {
  Settings out;
  for (const auto& [k, v] : all) {
    if (k.find('.') == std::string::npos) {
      out[k] = v;
    }
  }
  const std::string prefix = std::string(algo) + ".";
  for (const auto& [k, v] : all) {
    if (k.starts_with(prefix)) {
      out[k.substr(prefix.size())] = v;
    }
  }
  return out;
}

std::vector<std::string> unknown_keys(const Settings& all) {
  std::vector<std::string> bad;
  for (const auto& [k, v] : all) {
    std::string_view key = k;
    if (const auto dot = key.find('.'); dot != std::string_view::npos) {
      const auto algo = key.substr(0, dot);
      if (std::find(kAlgorithms.begin(), kAlgorithms.end(), algo) == kAlgorithms.end()) {
        bad.push_back(k);
        continue;
      }
      key = key.substr(dot + 1);
    }
    const bool known = std::find(kTrainKeys.begin(), kTrainKeys.end(), key) != kTrainKeys.end() ||
                       std::find(kBaselineKeys.begin(), kBaselineKeys.end(), key) != kBaselineKeys.end();
    if (!known) {
      bad.push_back(k);
    }
  }
  return bad;
}

void apply_settings(TrainConfig& cfg, const Settings& s) {
  with(s, "beta0", [&](auto& k, auto& v) { cfg.beta0 = to_double(k, v); });
  with(s, "gamma", [&](auto& k, auto& v) { cfg.gamma = to_double(k, v); });
  with(s, "pi0", [&](auto& k, auto& v) { cfg.pi0 = to_double(k, v); });
  with(s, "K", [&](auto& k, auto& v) { cfg.K = to_uint(k, v); });
  with(s, "alpha", [&](auto& k, auto& v) { cfg.alpha = to_double(k, v); });
  with(s, "K_max", [&](auto& k, auto& v) { cfg.K_max = to_uint(k, v); });
  with(s, "n_K", [&](auto& k, auto& v) { cfg.n_K = to_uint(k, v); });
  with(s, "M", [&](auto& k, auto& v) { cfg.M = to_uint(k, v); });
  with(s, "eta", [&](auto& k, auto& v) { cfg.eta = to_double(k, v); });
  with(s, "delta_K", [&](auto& k, auto& v) { cfg.delta_K = to_double(k, v); });
  with(s, "g0_init", [&](auto& k, auto& v) { cfg.g0_init = to_double(k, v); });
  with(s, "max_stages", [&](auto& k, auto& v) { cfg.max_stages = to_uint(k, v); });
  with(s, "convergence_tol", [&](auto& k, auto& v) { cfg.convergence_tol = to_double(k, v); });
  with(s, "passes", [&](auto& k, auto& v) { cfg.passes = to_double(k, v); });
  with(s, "seed", [&](auto& k, auto& v) { cfg.seed = to_uint(k, v); });
  with(s, "carryover", [&](auto& k, auto& v) { cfg.carryover = to_bool(k, v); });
  with(s, "prob_unit", [&](auto&, auto& v) { cfg.prob_unit = parse_probability_unit(v); });
  with(s, "anneal_argument", [&](auto&, auto& v) { cfg.anneal_argument = parse_anneal_argument(v); });
  with(s, "threads", [&](auto& k, auto& v) { cfg.threads = to_uint(k, v); });
}

void apply_settings(BaselineConfig& cfg, const Settings& s) {
  with(s, "eta", [&](auto& k, auto& v) { cfg.eta = to_double(k, v); });
  with(s, "g0", [&](auto& k, auto& v) { cfg.g0 = to_double(k, v); });
  with(s, "K", [&](auto& k, auto& v) { cfg.K = to_uint(k, v); });
  with(s, "lambda", [&](auto& k, auto& v) { cfg.lambda = to_double(k, v); });
  with(s, "gamma_rda", [&](auto& k, auto& v) { cfg.gamma_rda = to_double(k, v); });
  with(s, "rho", [&](auto& k, auto& v) { cfg.rho = to_double(k, v); });
  with(s, "lambda_fobos", [&](auto& k, auto& v) { cfg.lambda_fobos = to_double(k, v); });
  with(s, "fobos_eta0", [&](auto& k, auto& v) { cfg.fobos_eta0 = to_double(k, v); });
  with(s, "fobos_half_step", [&](auto& k, auto& v) {
    if (v == "next") {
      cfg.fobos_half_step = FobosHalfStep::Next;
    } else if (v == "current") {
      cfg.fobos_half_step = FobosHalfStep::Current;
    } else {
      throw std::invalid_argument("setting '" + k + "': expected next or current");
    }
  });
  with(s, "passes", [&](auto& k, auto& v) { cfg.passes = to_double(k, v); });
  with(s, "seed", [&](auto& k, auto& v) { cfg.seed = to_uint(k, v); });
}

}  // namespace stabsgd
