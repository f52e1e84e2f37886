#include "cli/config.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <iomanip>
#include <map>
#include <sstream>

#include <openssl/evp.h>

#include "cli/format.hpp"
#include "pme/error.hpp"

namespace pme::cli {

namespace {

std::string trim(std::string s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

std::vector<std::string> split_list(const std::string& value) {
  std::vector<std::string> out;
  std::stringstream ss(value);
  std::string item;
  while (std::getline(ss, item, ',')) {
    item = trim(item);
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

template <class T>
bool parse_number(const std::string& s, T& out) {
  const char* end = s.data() + s.size();
  auto [ptr, ec] = std::from_chars(s.data(), end, out);
  return ec == std::errc() && ptr == end;
}

struct Parser {
  int line;
  std::string key;

  [[noreturn]] void fail(const std::string& msg) const { throw ConfigError(line, key, msg); }

  double real(const std::string& v) const {
    double x = 0.0;
    if (!parse_number(v, x) || !std::isfinite(x)) fail("expected a number, got '" + v + "'");
    return x;
  }

  int integer(const std::string& v) const {
    int x = 0;
    if (!parse_number(v, x)) fail("expected an integer, got '" + v + "'");
    return x;
  }

  std::vector<int> int_list(const std::string& v) const {
    std::vector<int> out;
    for (const auto& item : split_list(v)) {
      const auto dots = item.find("..");
      if (dots == std::string::npos) {
        out.push_back(integer(item));
        continue;
      }
      const int lo = integer(trim(item.substr(0, dots)));
      const int hi = integer(trim(item.substr(dots + 2)));
      if (hi < lo) fail("empty range '" + item + "'");
      for (int i = lo; i <= hi; ++i) out.push_back(i);
    }
    return out;
  }

  std::vector<double> real_list(const std::string& v) const {
    std::vector<double> out;
    for (const auto& item : split_list(v)) out.push_back(real(item));
    return out;
  }

  template <class E>
  E choice(const std::string& v, std::initializer_list<std::pair<const char*, E>> options) const {
    std::string allowed;
    for (const auto& [name, value] : options) {
      if (v == name) return value;
      allowed += allowed.empty() ? name : std::string(" | ") + name;
    }
    fail("expected one of " + allowed + ", got '" + v + "'");
  }
};

const char* name_of(experiments::TRule r) { return r == experiments::TRule::kFixed ? "fixed" : "scaled_by_sqrtN"; }
const char* name_of(model::ProbeConvention c) {
  return c == model::ProbeConvention::kShiftOnOne ? "shift_on_one" : "shift_on_zero";
}
const char* name_of(model::GateModel g) { return g == model::GateModel::kExact ? "exact" : "approximate"; }
const char* name_of(channel::PurityWeighting w) {
  return w == channel::PurityWeighting::kUniform ? "uniform" : "probability";
}

template <class T>
std::string join(const std::vector<T>& v) {
  std::string out;
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (i) out += ',';
    if constexpr (std::is_floating_point_v<T>) {
      out += format_double(v[i]);
    } else {
      out += std::to_string(v[i]);
    }
  }
  return out;
}

}  // namespace

ConfigError::ConfigError(int line, const std::string& field, const std::string& message)
    : std::runtime_error((line > 0 ? "line " + std::to_string(line) + ": " : std::string()) +
                         (field.empty() ? std::string() : "'" + field + "': ") + message),
      line_(line),
      field_(field) {}

RunConfig parse_config(const std::string& text) {
  RunConfig cfg;
  std::map<std::string, int> seen;
  std::istringstream in(text);
  std::string raw;
  int line_no = 0;
  while (std::getline(in, raw)) {
    ++line_no;
    if (const auto hash = raw.find('#'); hash != std::string::npos) raw.erase(hash);
    const std::string line = trim(raw);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) throw ConfigError(line_no, "", "expected 'key = value'");
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    const Parser p{line_no, key};
    if (key.empty()) p.fail("missing key");
    if (auto [it, inserted] = seen.emplace(key, line_no); !inserted) {
      p.fail("duplicate key (first set on line " + std::to_string(it->second) + ")");
    }

    if (key == "g_over_2pi_khz") {
      cfg.g_over_2pi_khz = p.real(value);
    } else if (key == "sigma_g_over_2pi_khz") {
      cfg.sigma_g_over_2pi_khz = p.real(value);
    } else if (key == "t_rule") {
      cfg.t_rule = p.choice(value, {std::pair{"scaled_by_sqrtN", experiments::TRule::kScaledBySqrtN},
                                    std::pair{"fixed", experiments::TRule::kFixed}});
    } else if (key == "t_sqrtN_ms") {
      cfg.t_sqrt_n_ms = p.real(value);
    } else if (key == "t_ms") {
      cfg.t_ms = p.real(value);
    } else if (key == "L_list") {
      cfg.rounds = p.int_list(value);
    } else if (key == "N_list") {
      cfg.num_qubits = p.int_list(value);
    } else if (key == "n_samples") {
      cfg.n_samples = p.integer(value);
    } else if (key == "seed") {
      if (!parse_number(value, cfg.seed)) p.fail("expected an unsigned 64-bit integer, got '" + value + "'");
    } else if (key == "probe_convention") {
      cfg.convention = p.choice(value, {std::pair{"shift_on_one", model::ProbeConvention::kShiftOnOne},
                                        std::pair{"shift_on_zero", model::ProbeConvention::kShiftOnZero}});
    } else if (key == "gate_model") {
      cfg.gates = p.choice(value, {std::pair{"approximate", model::GateModel::kApproximate},
                                   std::pair{"exact", model::GateModel::kExact}});
    } else if (key == "purity_weighting") {
      cfg.purity_weighting = p.choice(value, {std::pair{"probability", channel::PurityWeighting::kProbability},
                                              std::pair{"uniform", channel::PurityWeighting::kUniform}});
    } else if (key == "detunings_khz") {
      cfg.detunings_khz = p.real_list(value);
    } else if (key == "initial_bits") {
      cfg.initial_bits = p.int_list(value);
    } else {
      p.fail("unknown key");
    }
  }
  if (!seen.contains("L_list")) throw ConfigError(0, "L_list", "required key missing");
  if (!seen.contains("N_list")) throw ConfigError(0, "N_list", "required key missing");
  if (cfg.t_rule == experiments::TRule::kFixed && !cfg.t_ms) {
    throw ConfigError(0, "t_ms", "required when t_rule = fixed");
  }
  return cfg;
}

RunConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError(0, "", "cannot read config file '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str());
}

std::string canonicalize(const RunConfig& c) {
  std::map<std::string, std::string> kv;
  kv["g_over_2pi_khz"] = format_double(c.g_over_2pi_khz);
  kv["sigma_g_over_2pi_khz"] = format_double(c.sigma_g_over_2pi_khz);
  kv["t_rule"] = name_of(c.t_rule);
  kv["t_sqrtN_ms"] = format_double(c.t_sqrt_n_ms);
  if (c.t_ms) kv["t_ms"] = format_double(*c.t_ms);
  kv["L_list"] = join(c.rounds);
  kv["N_list"] = join(c.num_qubits);
  kv["n_samples"] = std::to_string(c.n_samples);
  kv["seed"] = std::to_string(c.seed);
  kv["probe_convention"] = name_of(c.convention);
  kv["gate_model"] = name_of(c.gates);
  kv["purity_weighting"] = name_of(c.purity_weighting);
  if (!c.detunings_khz.empty()) kv["detunings_khz"] = join(c.detunings_khz);
  if (!c.initial_bits.empty()) kv["initial_bits"] = join(c.initial_bits);
  std::string out;
  for (const auto& [k, v] : kv) out += k + " = " + v + "\n";
  return out;
}

std::string config_hash(const RunConfig& config) {
  const std::string text = canonicalize(config);
  unsigned char digest[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  EVP_Digest(text.data(), text.size(), digest, &len, EVP_sha256(), nullptr);
  std::ostringstream hex;
  for (unsigned int i = 0; i < len; ++i) hex << std::hex << std::setw(2) << std::setfill('0') << int(digest[i]);
  return hex.str();
}

experiments::ExperimentConfig to_experiment_config(const RunConfig& c, unsigned threads) {
  try {
    const double t_fixed = c.t_ms.value_or(c.t_sqrt_n_ms) * 1e3;
    model::ProtocolParams base(model::khz_to_rad_per_us(c.g_over_2pi_khz), t_fixed, 1, 1,
                               model::khz_to_rad_per_us(c.sigma_g_over_2pi_khz), c.convention, c.gates);
    experiments::ExperimentConfig out(base);
    out.n_samples = c.n_samples;
    out.seed = c.seed;
    out.t_rule = c.t_rule;
    out.t_sqrt_n = c.t_sqrt_n_ms * 1e3;
    out.purity_weighting = c.purity_weighting;
    out.threads = std::max(1U, threads);
    for (int n : c.num_qubits)
      for (int l : c.rounds) out.sweep.push_back({n, l});
    return out;
  } catch (const ValidationError& e) {
    throw ConfigError(0, "", e.what());
  }
}

model::DetuningSample fixed_detunings(const RunConfig& config) {
  model::DetuningSample s;
  for (double khz : config.detunings_khz) s.deltas.push_back(model::khz_to_rad_per_us(khz));
  return s;
}

}  // namespace pme::cli
