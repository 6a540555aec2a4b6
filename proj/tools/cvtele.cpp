// cvtele: command-line front end for teleportation fidelity, no-cloning
// thresholds, feedforward security and figure-data sweeps.
//
// Exit codes: 0 success, 2 usage or configuration error, 3 physics or
// convergence error.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "cvtele/cvtele.hpp"

namespace {

using nlohmann::json;
using namespace cvtele;

constexpr int kExitUsage = 2;
constexpr int kExitPhysics = 3;

struct CommonOptions {
  std::string config;
  std::vector<std::string> sets;
  bool json_output = false;
  unsigned threads = default_threads();
};

void add_common(CLI::App* cmd, CommonOptions& o) {
  cmd->add_option("--config", o.config, "key=value config file (preset=ideal|realistic allowed)");
  cmd->add_option("--set", o.sets, "override one parameter, key=value (repeatable)")->take_all();
  cmd->add_flag("--json", o.json_output, "machine-readable output");
  cmd->add_option("--threads", o.threads, "worker threads")->check(CLI::PositiveNumber);
}

// The ideal preset is the starting point unless a config file is given.
Scenario build_scenario(const CommonOptions& o) {
  Scenario s;
  if (o.config.empty()) {
    apply_preset(s, "ideal");
  } else {
    load_config(s, o.config);
  }
  for (const auto& item : o.sets) apply_assignment(s, item);
  return s;
}

std::optional<std::pair<int, int>> parse_grid(const std::string& text) {
  if (text.empty()) return std::nullopt;
  const auto x = text.find_first_of("xX");
  if (x == std::string::npos) throw UsageError("--grid must look like AxB");
  const double a = parse_number("grid", text.substr(0, x));
  const double b = parse_number("grid", text.substr(x + 1));
  if (a != std::floor(a) || b != std::floor(b) || a < 2 || b < 2 || a > 1e6 || b > 1e6) {
    throw UsageError("--grid counts must be integers >= 2");
  }
  return std::pair<int, int>{static_cast<int>(a), static_cast<int>(b)};
}

void print_rows(const std::vector<std::pair<std::string, std::string>>& rows) {
  std::size_t width = 0;
  for (const auto& [k, v] : rows) width = std::max(width, k.size());
  for (const auto& [k, v] : rows) std::cout << k << std::string(width + 2 - k.size(), ' ') << v << '\n';
}

std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.9g", v);
  return buf;
}

int cmd_fidelity(const CommonOptions& o) {
  const Scenario s = build_scenario(o);
  const TeleportConfig cfg = s.resolved_chain();
  const ChainResult r = run_chain(cfg);
  const double v_out = 0.5 * r.bob_state.covariance().trace();
  const double product = cfg.gain * cfg.coupling * (1.0 - cfg.eps_ff());
  const bool matched = std::abs(product - 4.0) <= 1e-9 * 4.0;
  if (o.json_output) {
    const json j = {{"fidelity", r.fidelity},          {"v_out", v_out},
                    {"k", r.displacement_gain},        {"displacement_matched", matched},
                    {"gain", cfg.gain},                {"coupling", cfg.coupling},
                    {"parameters", parameters_json(s)}};
    std::cout << j.dump(2) << '\n';
  } else {
    print_rows({{"fidelity", num(r.fidelity)},
                {"v_out", num(v_out)},
                {"k", num(r.displacement_gain)},
                {"gain", num(cfg.gain)},
                {"coupling", num(cfg.coupling)},
                {"G*eta*(1-eps_ff)", num(product)},
                {"displacement_matched", matched ? "yes" : "no"}});
  }
  return 0;
}

int cmd_nocloning(const CommonOptions& o, const std::string& spec) {
  Scenario s = build_scenario(o);
  if (!spec.empty()) s.set("codebook", spec);
  const Codebook cb = s.codebook();
  const ClonerResult r = threshold(cb, s.cloner_options());
  std::optional<double> closed;
  if (cb.is_gaussian()) closed = gaussian_threshold_closed_form(cb.sigma2());
  if (o.json_output) {
    json j = {{"codebook", cb.to_string()}, {"f_nc", r.f_nc}, {"a_opt", r.a_opt}, {"multimodal", r.multimodal}};
    if (closed) j["f_nc_closed_form"] = *closed;
    std::cout << j.dump(2) << '\n';
  } else {
    std::vector<std::pair<std::string, std::string>> rows = {
        {"codebook", cb.to_string()}, {"f_nc", num(r.f_nc)}, {"a_opt", num(r.a_opt)}};
    if (closed) rows.emplace_back("f_nc_closed_form", num(*closed));
    if (r.multimodal) rows.emplace_back("warning", "objective has several local maxima in A; scan maximum kept");
    print_rows(rows);
  }
  return 0;
}

int cmd_security(const CommonOptions& o, const std::string& spec) {
  Scenario s = build_scenario(o);
  if (!spec.empty()) s.set("codebook", spec);
  const Codebook cb = s.codebook();
  const double r = s.chain.squeeze_factor;
  json j = {{"codebook", cb.to_string()}, {"squeezing_db", db_from_squeeze_factor(r)}};
  std::vector<std::pair<std::string, std::string>> rows = {{"codebook", cb.to_string()},
                                                           {"squeezing_db", num(db_from_squeeze_factor(r))}};
  if (s.gain_infinite) {
    const double v_bob = 0.25 * (1.0 + 2.0 * std::exp(-2.0 * r));
    const double mi = channel_information(cb, 1.0, v_bob);
    const double chi = channel_information(cb, 1.0, eve_thermal_variance(r));
    const double fs = secure_fidelity_limit(r);
    const double s_min = minimum_secure_squeezing(std::numeric_limits<double>::infinity());
    j.update({{"gain", "infinite"},
              {"mutual_information", mi},
              {"holevo", chi},
              {"secure", mi > chi},
              {"secure_fidelity", fs},
              {"minimum_secure_squeezing_db", s_min}});
    rows.insert(rows.end(), {{"gain", "infinite"},
                             {"mutual_information", num(mi)},
                             {"holevo", num(chi)},
                             {"secure", mi > chi ? "yes" : "no"},
                             {"secure_fidelity", num(fs)},
                             {"minimum_secure_squeezing_db", num(s_min)}});
  } else {
    const SecurityParams p = s.security();
    const SecurityPoint pt = finite_parameter_point(p);
    const SecureFidelity sf = secure_fidelity(p);
    const double s_min = minimum_secure_squeezing(p.gain);
    j.update({{"gain", p.gain},
              {"coupling", p.coupling},
              {"eps_ff", p.eps_ff},
              {"T_ff", p.t_ff},
              {"mutual_information", pt.mutual_information},
              {"holevo", pt.holevo},
              {"secure", pt.secure()},
              {"fidelity", pt.fidelity},
              {"secure_class", to_string(sf.classification)},
              {"minimum_secure_squeezing_db", s_min}});
    rows.insert(rows.end(), {{"gain", num(p.gain)},
                             {"coupling", num(p.coupling)},
                             {"eps_ff", num(p.eps_ff)},
                             {"T_ff", num(p.t_ff)},
                             {"mutual_information", num(pt.mutual_information)},
                             {"holevo", num(pt.holevo)},
                             {"secure", pt.secure() ? "yes" : "no"},
                             {"fidelity", num(pt.fidelity)},
                             {"secure_class", to_string(sf.classification)}});
    if (sf.classification == SecureClass::crossing) {
      j["secure_fidelity"] = sf.fidelity;
      j["T_ff_crossing"] = sf.t_cross;
      rows.emplace_back("secure_fidelity", num(sf.fidelity));
      rows.emplace_back("T_ff_crossing", num(sf.t_cross));
    }
    rows.emplace_back("minimum_secure_squeezing_db", num(s_min));
  }
  if (o.json_output) {
    std::cout << j.dump(2) << '\n';
  } else {
    print_rows(rows);
  }
  return 0;
}

int cmd_sweep(const CommonOptions& o, const std::string& axis1, const std::string& axis2, const std::string& quantity,
              const std::string& grid_text, const std::string& out_dir) {
  const auto start = std::chrono::steady_clock::now();
  SweepGrid grid;
  grid.base = build_scenario(o);
  grid.axis1 = parse_axis(axis1);
  grid.axis2 = parse_axis(axis2);
  grid.quantity = parse_quantity(quantity);
  if (const auto g = parse_grid(grid_text)) {
    grid.axis1.count = g->first;
    grid.axis2.count = g->second;
  }
  const SweepResult r = run_sweep(grid, o.threads);
  if (out_dir.empty()) {
    write_csv(std::cout, r);
    return 0;
  }
  std::filesystem::create_directories(out_dir);
  const auto csv = std::filesystem::path(out_dir) / "sweep.csv";
  std::ofstream out(csv, std::ios::binary);
  if (!out) throw UsageError("cannot write '" + csv.string() + "'");
  write_csv(out, r);
  const json manifest = {
      {"tool", kToolName},
      {"version", kToolVersion},
      {"quantities", json::array({r.quantity_name})},
      {"axis1", axis_json(grid.axis1)},
      {"axis2", axis_json(grid.axis2)},
      {"parameters", parameters_json(grid.base)},
      {"threads", o.threads},
      {"runtime_seconds", std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count()},
      {"files", json::array({"sweep.csv"})},
  };
  std::ofstream(std::filesystem::path(out_dir) / "sweep_manifest.json", std::ios::binary) << manifest.dump(2) << '\n';
  if (o.json_output) std::cout << manifest.dump(2) << '\n';
  return 0;
}

int cmd_reproduce(const CommonOptions& o, const std::string& figure, const std::string& grid_text,
                  const std::string& out_dir) {
  const FigureRecipe& recipe = find_recipe(figure);
  ReproduceOptions opt;
  opt.out_dir = out_dir;
  opt.grid = parse_grid(grid_text);
  opt.threads = o.threads;
  if (!o.config.empty()) throw UsageError("reproduce takes its parameters from the recipe; use --set to override");
  for (const auto& item : o.sets) {
    const auto eq = item.find('=');
    if (eq == std::string::npos) throw UsageError("expected key=value, got '" + item + "'");
    opt.overrides.emplace_back(item.substr(0, eq), item.substr(eq + 1));
  }
  const ReproduceReport report = reproduce(recipe, opt);
  if (o.json_output) {
    std::ifstream in(report.manifest);
    std::cout << in.rdbuf();
  } else {
    for (const auto& f : report.files) std::cout << f.string() << '\n';
    std::cout << report.manifest.string() << '\n';
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Continuous-variable teleportation toolkit: fidelity, no-cloning, security, sweeps", "cvtele"};
  app.set_version_flag("--version", std::string(kToolVersion));
  app.require_subcommand(1);

  CommonOptions common;

  auto* fidelity = app.add_subcommand("fidelity", "teleportation fidelity of the configured chain");
  add_common(fidelity, common);

  std::string codebook_spec;
  auto* nocloning = app.add_subcommand("nocloning", "no-cloning threshold of a codebook");
  add_common(nocloning, common);
  nocloning->add_option("codebook", codebook_spec, "e.g. gaussian:sigma2=1, truncuniform:N=10");

  auto* security = app.add_subcommand("security", "mutual information, Holevo quantity and secure fidelity");
  add_common(security, common);
  security->add_option("codebook", codebook_spec, "codebook spec (default from parameters)");

  std::string axis1, axis2, quantity = "fidelity", grid_text, out_dir;
  auto* sweep = app.add_subcommand("sweep", "two-axis parameter sweep written as CSV");
  add_common(sweep, common);
  sweep->add_option("--axis1", axis1, "NAME:MIN:MAX:COUNT[:linear|log|db]")->required();
  sweep->add_option("--axis2", axis2, "NAME:MIN:MAX:COUNT[:linear|log|db]")->required();
  sweep->add_option("--quantity", quantity, "fidelity|f_nc|mutual_information|holevo|secure_fidelity");
  sweep->add_option("--grid", grid_text, "override point counts, AxB");
  sweep->add_option("--out", out_dir, "write sweep.csv and a manifest here instead of stdout");

  std::string figure;
  std::string reproduce_out = ".";
  auto* reproduce_cmd = app.add_subcommand("reproduce", "write the data grid of a registered figure");
  add_common(reproduce_cmd, common);
  reproduce_cmd->add_option("figure", figure, "figure id, e.g. fig2a")->required();
  reproduce_cmd->add_option("--grid", grid_text, "override point counts, AxB");
  reproduce_cmd->add_option("--out", reproduce_out, "output directory");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitUsage;
  }

  try {
    if (fidelity->parsed()) return cmd_fidelity(common);
    if (nocloning->parsed()) return cmd_nocloning(common, codebook_spec);
    if (security->parsed()) return cmd_security(common, codebook_spec);
    if (sweep->parsed()) return cmd_sweep(common, axis1, axis2, quantity, grid_text, out_dir);
    if (reproduce_cmd->parsed()) return cmd_reproduce(common, figure, grid_text, reproduce_out);
  } catch (const UsageError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const ConvergenceError& e) {
    std::cerr << "convergence error: " << e.what() << " (last estimate " << e.last_estimate() << ")\n";
    return kExitPhysics;
  } catch (const PhysicsError& e) {
    std::cerr << "physics error: " << e.what() << '\n';
    return kExitPhysics;
  } catch (const std::filesystem::filesystem_error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitPhysics;
  }
  return kExitUsage;
}
