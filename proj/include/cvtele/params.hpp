#pragma once

// Flat key=value scenario description shared by the config files, --set
// overrides and sweep axes.  Assignments are applied in order, so a later key
// overrides an earlier one that touches the same quantity.

#include <charconv>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "cvtele/codebook.hpp"
#include "cvtele/error.hpp"
#include "cvtele/nocloning.hpp"
#include "cvtele/security.hpp"
#include "cvtele/teleport.hpp"
#include "cvtele/units.hpp"

namespace cvtele {

enum class Match {
  none,
  gain,  // G = 4 / (η (1 - ε_ff))
  eta    // η = 4 / (G (1 - ε_ff))
};

inline double parse_number(std::string_view key, std::string_view text) {
  while (!text.empty() && (text.front() == ' ' || text.front() == '\t')) text.remove_prefix(1);
  while (!text.empty() && (text.back() == ' ' || text.back() == '\t')) text.remove_suffix(1);
  if (!text.empty() && text.front() == '+') text.remove_prefix(1);
  double v = 0.0;
  const char* end = text.data() + text.size();
  const auto [ptr, ec] = std::from_chars(text.data(), end, v);
  if (text.empty() || ec != std::errc() || ptr != end) {
    throw UsageError("value of '" + std::string(key) + "' is not a number: '" + std::string(text) + "'");
  }
  return v;
}

inline bool parse_bool(std::string_view key, std::string_view text) {
  if (text == "1" || text == "true" || text == "yes" || text == "on") return true;
  if (text == "0" || text == "false" || text == "no" || text == "off") return false;
  throw UsageError("value of '" + std::string(key) + "' is not a boolean: '" + std::string(text) + "'");
}

// Shortest decimal text that parses back to the same double.
inline std::string format_number(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  for (int prec = 1; prec < 17; ++prec) {
    char shorter[32];
    std::snprintf(shorter, sizeof shorter, "%.*g", prec, v);
    if (std::strtod(shorter, nullptr) == v) return shorter;
  }
  return buf;
}

struct Scenario {
  TeleportConfig chain;
  Match match = Match::none;
  std::optional<std::string> codebook_kind;
  double sigma2 = 1.0;
  std::optional<double> cutoff;
  std::optional<double> n_over_sigma2;
  HolevoPipeline pipeline = HolevoPipeline::differential_entropy;
  bool gain_infinite = false;
  double a_max = 50.0;
  std::vector<std::pair<std::string, std::string>> assignments;

  void set(std::string_view key, std::string_view value);
  void set(std::string_view key, double value) { set(key, format_number(value)); }

  // Chain configuration with displacement matching applied.
  TeleportConfig resolved_chain() const {
    TeleportConfig c = chain;
    if (match == Match::gain) {
      c.gain = displacement_matching_gain(c.coupling, c.eps_ff());
    } else if (match == Match::eta) {
      if (!(c.eps_ff() < 1.0)) throw PhysicsError("displacement matching needs ε_ff < 1");
      c.coupling = 4.0 / (c.gain * (1.0 - c.eps_ff()));
      if (c.coupling > 1.0) throw PhysicsError("gain too small to match displacement (η would exceed 1)");
    }
    c.validate();
    return c;
  }

  Codebook codebook() const {
    std::optional<double> n = cutoff;
    if (n_over_sigma2) n = *n_over_sigma2 * sigma2;
    const std::string kind = codebook_kind.value_or(n ? "truncgaussian" : "gaussian");
    if (kind == "gaussian") return Codebook::gaussian(sigma2);
    if (!n) throw UsageError("codebook '" + kind + "' needs a cutoff N");
    if (kind == "truncuniform") return Codebook::truncated_uniform(*n);
    return Codebook::truncated_gaussian(sigma2, *n);
  }

  SecurityParams security() const {
    const TeleportConfig c = resolved_chain();
    SecurityParams p;
    p.squeeze_factor = c.squeeze_factor;
    p.gain = c.gain;
    p.coupling = c.coupling;
    p.eps_ff = c.eps_ff();
    p.t_ff = c.segment_temperature(kFeedforwardSegment);
    p.frequency_hz = c.carrier_frequency_hz;
    p.codebook = codebook();
    p.pipeline = pipeline;
    return p;
  }

  ClonerOptions cloner_options() const {
    ClonerOptions o;
    o.a_max = a_max;
    return o;
  }
};

namespace detail {

// "eps12" -> 12, "T3" -> 3; nullopt when the key is not prefix + segment.
inline std::optional<int> segment_index(std::string_view key, std::string_view prefix, std::string_view suffix = {}) {
  if (key.size() <= prefix.size() + suffix.size() || key.substr(0, prefix.size()) != prefix) return std::nullopt;
  if (key.substr(key.size() - suffix.size()) != suffix) return std::nullopt;
  const std::string_view digits = key.substr(prefix.size(), key.size() - prefix.size() - suffix.size());
  int idx = 0;
  const auto [ptr, ec] = std::from_chars(digits.data(), digits.data() + digits.size(), idx);
  if (ec != std::errc() || ptr != digits.data() + digits.size() || idx < 1 || idx > kSegments) return std::nullopt;
  if (digits.front() == '0') return std::nullopt;
  return idx;
}

}  // namespace detail

inline void Scenario::set(std::string_view key, std::string_view value) {
  TeleportConfig& c = chain;
  auto num = [&] { return parse_number(key, value); };

  if (key == "preset") {
    throw UsageError("'preset' must be resolved by the config loader");
  } else if (key == "squeezing_db") {
    c.squeeze_factor = squeeze_factor_from_db(num());
  } else if (key == "squeeze_factor") {
    c.squeeze_factor = num();
  } else if (key == "gain_db") {
    c.gain = gain_from_db(num());
  } else if (key == "gain") {
    c.gain = num();
  } else if (key == "eta_db" || key == "coupling_db") {
    c.coupling = coupling_from_db(num());
  } else if (key == "eta" || key == "coupling") {
    c.coupling = num();
  } else if (key == "eps_ent") {
    c.segment_loss(kEntanglementSegment) = num();
  } else if (key == "eps_ff") {
    c.segment_loss(kFeedforwardSegment) = num();
  } else if (key == "eps_ent_db") {
    c.segment_loss(kEntanglementSegment) = loss_from_db(num());
  } else if (key == "eps_ff_db") {
    c.segment_loss(kFeedforwardSegment) = loss_from_db(num());
  } else if (auto j = detail::segment_index(key, "eps", "_db")) {
    c.segment_loss(*j) = loss_from_db(num());
  } else if (auto j2 = detail::segment_index(key, "eps")) {
    c.segment_loss(*j2) = num();
  } else if (key == "loss_total_db") {
    // spread evenly (in dB) over the fifteen internal segments
    const double per_segment = loss_from_db(num() / 15.0);
    for (int s = 1; s <= 15; ++s) c.segment_loss(s) = per_segment;
  } else if (key == "T_ent") {
    c.segment_temperature(kEntanglementSegment) = num();
  } else if (key == "T_ff") {
    c.segment_temperature(kFeedforwardSegment) = num();
  } else if (key == "T_all") {
    const double t = num();
    for (int s = 1; s <= kSegments; ++s) c.segment_temperature(s) = t;
  } else if (auto t = detail::segment_index(key, "T")) {
    c.segment_temperature(*t) = num();
  } else if (key == "n1" || key == "n2" || key == "n3") {
    c.input_noise[static_cast<std::size_t>(key[1] - '1')] = num();
  } else if (key == "freq_ghz") {
    c.carrier_frequency_hz = num() * 1e9;
  } else if (key == "freq_hz") {
    c.carrier_frequency_hz = num();
  } else if (key == "alpha_re") {
    c.alpha.real(num());
  } else if (key == "alpha_im") {
    c.alpha.imag(num());
  } else if (key == "alpha2") {
    const double a2 = num();
    if (a2 < 0.0) throw PhysicsError("alpha2 must be >= 0");
    c.alpha = std::sqrt(a2);
  } else if (key == "ensemble_sigma2") {
    c.ensemble_sigma2 = num();
  } else if (key == "gamma1") {
    c.gamma1 = num();
  } else if (key == "gamma2") {
    c.gamma2 = num();
  } else if (key == "gamma3") {
    c.gamma3 = num();
  } else if (key == "gamma4") {
    c.gamma4 = num();
  } else if (key == "noise_scope") {
    if (value == "all") c.noise_scope = NoiseScope::all_segments;
    else if (value == "channels") c.noise_scope = NoiseScope::channels_only;
    else throw UsageError("noise_scope must be 'all' or 'channels'");
  } else if (key == "match") {
    if (value == "none") match = Match::none;
    else if (value == "gain") match = Match::gain;
    else if (value == "eta") match = Match::eta;
    else throw UsageError("match must be 'none', 'gain' or 'eta'");
  } else if (key == "codebook") {
    const Codebook cb = Codebook::parse(value);
    codebook_kind = std::string(value.substr(0, value.find(':')));
    n_over_sigma2.reset();
    cutoff.reset();
    if (!std::isinf(cb.sigma2())) sigma2 = cb.sigma2();
    if (!std::isinf(cb.cutoff())) cutoff = cb.cutoff();
  } else if (key == "sigma2") {
    sigma2 = num();
    if (!(sigma2 > 0.0)) throw PhysicsError("sigma2 must be positive");
  } else if (key == "N") {
    cutoff = num();
    n_over_sigma2.reset();
    if (!(*cutoff > 0.0)) throw PhysicsError("N must be positive");
  } else if (key == "N_over_sigma2") {
    n_over_sigma2 = num();
    if (!(*n_over_sigma2 > 0.0)) throw PhysicsError("N_over_sigma2 must be positive");
  } else if (key == "holevo_pipeline") {
    if (value == "differential") pipeline = HolevoPipeline::differential_entropy;
    else if (value == "von_neumann") pipeline = HolevoPipeline::von_neumann;
    else throw UsageError("holevo_pipeline must be 'differential' or 'von_neumann'");
  } else if (key == "gain_infinite") {
    gain_infinite = parse_bool(key, value);
  } else if (key == "a_max") {
    a_max = num();
    if (!(a_max > 1.0)) throw PhysicsError("a_max must exceed 1");
  } else {
    throw UsageError("unknown parameter '" + std::string(key) + "'");
  }
  assignments.emplace_back(std::string(key), std::string(value));
}

// Built-in starting points.
inline std::vector<std::pair<std::string, std::string>> preset_assignments(std::string_view name) {
  if (name == "ideal") {
    return {{"freq_ghz", "5"},    {"alpha2", "10"},        {"squeezing_db", "10"}, {"eta_db", "-20"},
            {"match", "gain"},    {"noise_scope", "all"},  {"T_all", "0"}};
  }
  if (name == "realistic") {
    return {{"freq_ghz", "5.35"},      {"alpha2", "1.3"},  {"squeezing_db", "5"}, {"eta_db", "-15"},
            {"gain_db", "21"},         {"match", "none"},  {"noise_scope", "all"},
            {"loss_total_db", "1.6"},  {"T_all", "0.05"}};
  }
  throw UsageError("unknown preset '" + std::string(name) + "' (expected ideal or realistic)");
}

inline void apply_preset(Scenario& s, std::string_view name) {
  const auto items = preset_assignments(name);
  s.assignments.emplace_back("preset", std::string(name));
  for (const auto& [k, v] : items) s.set(k, v);
}

// Applies one "key=value" item; "preset=NAME" expands the named preset.
inline void apply_assignment(Scenario& s, std::string_view item) {
  const auto eq = item.find('=');
  if (eq == std::string_view::npos) throw UsageError("expected key=value, got '" + std::string(item) + "'");
  auto trim = [](std::string_view t) {
    while (!t.empty() && (t.front() == ' ' || t.front() == '\t')) t.remove_prefix(1);
    while (!t.empty() && (t.back() == ' ' || t.back() == '\t' || t.back() == '\r')) t.remove_suffix(1);
    return t;
  };
  const std::string_view key = trim(item.substr(0, eq));
  const std::string_view value = trim(item.substr(eq + 1));
  if (key.empty()) throw UsageError("empty key in '" + std::string(item) + "'");
  if (key == "preset") {
    apply_preset(s, value);
  } else {
    s.set(key, value);
  }
}

// Config file: one key=value per line, '#' starts a comment.
inline void load_config(Scenario& s, const std::string& path) {
  std::ifstream in(path);
  if (!in) throw UsageError("cannot open config file '" + path + "'");
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    try {
      apply_assignment(s, line);
    } catch (const UsageError& e) {
      throw UsageError(path + ":" + std::to_string(lineno) + ": " + e.what());
    }
  }
}

}  // namespace cvtele
