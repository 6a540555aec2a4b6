#pragma once

// Registered figure-data recipes and the reproduce driver that writes their
// CSV grids plus a JSON manifest.

#include <chrono>
#include <filesystem>
#include <fstream>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <nlohmann/json.hpp>

#include "cvtele/error.hpp"
#include "cvtele/params.hpp"
#include "cvtele/sweep.hpp"
#include "cvtele/version.hpp"

namespace cvtele {

struct FigureRecipe {
  std::string id;
  std::string title;
  std::vector<std::pair<std::string, std::string>> fixed;  // applied in order, "preset" expands
  Axis axis1;
  Axis axis2;
  std::vector<Quantity> quantities;

  Scenario scenario() const {
    Scenario s;
    for (const auto& [k, v] : fixed) apply_assignment(s, k + "=" + v);
    return s;
  }
};

inline const std::vector<FigureRecipe>& figure_recipes() {
  using Q = Quantity;
  using S = AxisScale;
  static const std::vector<FigureRecipe> recipes = {
      {"fig2a", "fidelity vs feedforward loss and temperature (ideal, matched gain)",
       {{"preset", "ideal"}},
       {"eps_ff_db", 0.0, 30.0, 101, S::linear}, {"T_ff", 1e-2, 1e3, 101, S::log}, {Q::fidelity}},
      {"fig2b", "fidelity vs entanglement-channel loss and temperature (ideal, matched gain)",
       {{"preset", "ideal"}},
       {"eps_ent_db", 0.0, 10.0, 101, S::linear}, {"T_ent", 1e-2, 1e3, 101, S::log}, {Q::fidelity}},
      {"fig2c", "fidelity vs entanglement-channel loss and squeezing (ideal, matched gain)",
       {{"preset", "ideal"}},
       {"eps_ent_db", 0.0, 10.0, 101, S::linear}, {"squeezing_db", 0.0, 20.0, 101, S::linear}, {Q::fidelity}},
      {"fig3a", "fidelity vs feedforward loss and temperature (realistic)",
       {{"preset", "realistic"}},
       {"eps_ff_db", 0.0, 10.0, 101, S::linear}, {"T_ff", 1e-2, 1e3, 101, S::log}, {Q::fidelity}},
      {"fig3b", "fidelity vs feedforward coupling and measurement gain (realistic)",
       {{"preset", "realistic"}},
       {"eta_db", -40.0, 0.0, 101, S::linear}, {"gain_db", 0.0, 40.0, 101, S::linear}, {Q::fidelity}},
      {"fig3c", "fidelity vs feedforward coupling and temperature (realistic, matched gain)",
       {{"preset", "realistic"}, {"match", "gain"}, {"eps_ff_db", "0.2"}},
       {"eta_db", -40.0, -10.0, 101, S::linear}, {"T_ff", 1e-2, 1e3, 101, S::log}, {Q::fidelity}},
      {"fig5a", "no-cloning threshold of the truncated Gaussian codebook",
       {{"codebook", "truncgaussian:sigma2=1,N=1"}},
       {"N", 1e-3, 1e3, 101, S::log}, {"sigma2", 1e-2, 1e3, 101, S::log}, {Q::f_nc}},
      {"fig5b", "no-cloning threshold cross-sections at fixed cutoff N",
       {{"codebook", "truncgaussian:sigma2=1,N=1"}},
       {"N", 1e-1, 1e4, 6, S::log}, {"sigma2", 1e-2, 1e4, 101, S::log}, {Q::f_nc}},
      {"fig5c", "no-cloning threshold cross-sections at fixed variance",
       {{"codebook", "truncgaussian:sigma2=1,N=1"}},
       {"sigma2", 1e-1, 1e4, 6, S::log}, {"N", 1e-3, 1e4, 101, S::log}, {Q::f_nc}},
      {"fig6a", "Bob's mutual information and Eve's Holevo quantity vs feedforward temperature",
       {{"freq_ghz", "5"}, {"squeezing_db", "5"}, {"gain_db", "30"}, {"match", "eta"}, {"noise_scope", "channels"},
        {"alpha2", "0"}, {"codebook", "gaussian:sigma2=1"}},
       {"eps_ff", 0.1, 0.9, 5, S::linear}, {"T_ff", 1e-3, 1e6, 101, S::log},
       {Q::mutual_information, Q::holevo}},
      {"fig6b", "teleportation fidelity for the fig6a parameters",
       {{"freq_ghz", "5"}, {"squeezing_db", "5"}, {"gain_db", "30"}, {"match", "eta"}, {"noise_scope", "channels"},
        {"alpha2", "0"}, {"codebook", "gaussian:sigma2=1"}},
       {"eps_ff", 0.1, 0.9, 5, S::linear}, {"T_ff", 1e-3, 1e6, 101, S::log}, {Q::fidelity}},
      {"fig6c", "secure fidelity vs squeezing and measurement gain (-1: never secure, -2: always secure)",
       {{"freq_ghz", "5"}, {"eps_ff", "0.5"}, {"match", "eta"}, {"noise_scope", "channels"},
        {"codebook", "gaussian:sigma2=1"}},
       {"squeezing_db", 0.0, 20.0, 61, S::linear}, {"gain_db", 10.0, 40.0, 61, S::linear}, {Q::secure_fidelity}},
      {"figB1", "secure fidelity of truncated Gaussian codebooks vs N/sigma2",
       {{"freq_ghz", "5"}, {"eps_ff", "0.9"}, {"gain_db", "60"}, {"match", "eta"}, {"noise_scope", "channels"},
        {"codebook", "truncgaussian:sigma2=1,N=1"}},
       {"N_over_sigma2", 0.1, 100.0, 13, S::log}, {"squeezing_db", 4.0, 12.0, 3, S::linear}, {Q::secure_fidelity}},
  };
  return recipes;
}

inline const FigureRecipe& find_recipe(std::string_view id) {
  for (const auto& r : figure_recipes()) {
    if (r.id == id) return r;
  }
  std::string known;
  for (const auto& r : figure_recipes()) known += (known.empty() ? "" : ", ") + r.id;
  throw UsageError("unknown figure '" + std::string(id) + "' (known: " + known + ")");
}

inline nlohmann::json axis_json(const Axis& a) {
  return {{"name", a.name}, {"min", a.min}, {"max", a.max}, {"count", a.count}, {"scale", to_string(a.scale)}};
}

// Assignments as a JSON object; numeric values are stored as numbers and a
// later assignment of the same key wins.
inline nlohmann::json parameters_json(const Scenario& s) {
  nlohmann::json out = nlohmann::json::object();
  for (const auto& [k, v] : s.assignments) {
    try {
      out[k] = parse_number(k, v);
    } catch (const UsageError&) {
      out[k] = v;
    }
  }
  return out;
}

struct ReproduceOptions {
  std::filesystem::path out_dir = ".";
  std::optional<std::pair<int, int>> grid;
  unsigned threads = default_threads();
  std::vector<std::pair<std::string, std::string>> overrides;
};

struct ReproduceReport {
  std::vector<std::filesystem::path> files;
  std::filesystem::path manifest;
  std::vector<SweepResult> results;
  double runtime_seconds = 0.0;
};

inline ReproduceReport reproduce(const FigureRecipe& recipe, const ReproduceOptions& opt) {
  const auto start = std::chrono::steady_clock::now();
  SweepGrid grid;
  grid.base = recipe.scenario();
  for (const auto& [k, v] : opt.overrides) apply_assignment(grid.base, k + "=" + v);
  grid.axis1 = recipe.axis1;
  grid.axis2 = recipe.axis2;
  if (opt.grid) {
    grid.axis1.count = opt.grid->first;
    grid.axis2.count = opt.grid->second;
  }

  std::error_code ec;
  std::filesystem::create_directories(opt.out_dir, ec);
  if (ec) throw UsageError("cannot create output directory '" + opt.out_dir.string() + "': " + ec.message());

  ReproduceReport report;
  for (Quantity q : recipe.quantities) {
    grid.quantity = q;
    report.results.push_back(run_sweep(grid, opt.threads));
    const std::string name =
        recipe.quantities.size() == 1 ? recipe.id + ".csv" : recipe.id + "_" + to_string(q) + ".csv";
    const auto path = opt.out_dir / name;
    std::ofstream out(path, std::ios::binary);
    if (!out) throw UsageError("cannot write '" + path.string() + "'");
    write_csv(out, report.results.back());
    report.files.push_back(path);
  }
  report.runtime_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();

  nlohmann::json quantities = nlohmann::json::array();
  for (Quantity q : recipe.quantities) quantities.push_back(to_string(q));
  nlohmann::json files = nlohmann::json::array();
  for (const auto& f : report.files) files.push_back(f.filename().string());
  const nlohmann::json manifest = {
      {"figure", recipe.id},
      {"title", recipe.title},
      {"tool", kToolName},
      {"version", kToolVersion},
      {"quantities", quantities},
      {"axis1", axis_json(grid.axis1)},
      {"axis2", axis_json(grid.axis2)},
      {"parameters", parameters_json(grid.base)},
      {"threads", opt.threads},
      {"runtime_seconds", report.runtime_seconds},
      {"files", files},
  };
  report.manifest = opt.out_dir / (recipe.id + "_manifest.json");
  std::ofstream mout(report.manifest, std::ios::binary);
  if (!mout) throw UsageError("cannot write '" + report.manifest.string() + "'");
  mout << manifest.dump(2) << '\n';
  return report;
}

}  // namespace cvtele
