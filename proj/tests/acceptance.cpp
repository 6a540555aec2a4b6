// Acceptance checks: one PASS/FAIL line per criterion, non-zero exit if any
// criterion fails.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <functional>
#include <limits>
#include <string>
#include <vector>

#include "cvtele/cvtele.hpp"

using namespace cvtele;

namespace {

struct Outcome {
  bool pass = true;
  std::string detail;
};

void note(Outcome& o, bool ok, const char* fmt, double a, double b = 0.0, double c = 0.0) {
  if (ok) return;
  o.pass = false;
  if (o.detail.size() > 400) return;
  char buf[256];
  std::snprintf(buf, sizeof buf, fmt, a, b, c);
  o.detail += (o.detail.empty() ? "" : "; ") + std::string(buf);
}

std::vector<double> log_space(double lo, double hi, int n) {
  std::vector<double> v(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) v[static_cast<std::size_t>(i)] = lo * std::pow(hi / lo, static_cast<double>(i) / (n - 1));
  return v;
}

TeleportConfig matched_chain(double s_db, double gain, double eps_ff, double w_ff) {
  TeleportConfig c;
  c.squeeze_factor = squeeze_factor_from_db(s_db);
  c.gain = gain;
  c.coupling = 4.0 / (gain * (1.0 - eps_ff));
  c.segment_loss(kFeedforwardSegment) = eps_ff;
  c.segment_temperature(kFeedforwardSegment) = temperature_for_occupation(0.5 * (w_ff - 1.0), c.carrier_frequency_hz);
  c.alpha = {1.0, 0.5};
  return c;
}

SecurityParams security_params(double s_db, double gain, double eps_ff, Codebook cb) {
  SecurityParams p;
  p.squeeze_factor = squeeze_factor_from_db(s_db);
  p.gain = gain;
  p.eps_ff = eps_ff;
  p.coupling = matched_coupling(gain, eps_ff);
  p.codebook = std::move(cb);
  return p;
}

// 1. chain vs large-gain closed-form fidelity
Outcome chain_matches_closed_form() {
  Outcome o;
  double worst = 0.0;
  for (double s : {0.0, 5.0, 10.0, 15.0, 20.0}) {
    for (double eps : {0.0, 0.3, 0.6, 0.9}) {
      for (double w : {1.0, 10.0, 100.0}) {
        const TeleportConfig c = matched_chain(s, 1e4, eps, w);
        const double d = std::abs(run_chain(c).fidelity - large_gain_fidelity(c.squeeze_factor, c.coupling, eps, w));
        worst = std::max(worst, d);
        note(o, d < 1e-3, "S=%g eps=%g W=%g", s, eps, w);
      }
    }
  }
  o.detail = "max |dF| = " + std::to_string(worst) + (o.detail.empty() ? "" : " at " + o.detail);
  return o;
}

// 2. classical and no-cloning anchors
Outcome classical_anchors() {
  Outcome o;
  TeleportConfig c = matched_chain(0.0, 1e7, 0.0, 1.0);
  const double f = run_chain(c).fidelity;
  note(o, std::abs(f - 0.5) <= 1e-6, "S=0 chain F=%.9f", f);
  const double fnc = threshold(Codebook::gaussian(1e6)).f_nc;
  note(o, std::abs(fnc - 2.0 / 3.0) <= 1e-4, "F_nc(1e6)=%.9f", fnc);
  char buf[128];
  std::snprintf(buf, sizeof buf, "F(S=0, G=1e7)=%.9f, F_nc(sigma2=1e6)=%.9f", f, fnc);
  if (o.pass) o.detail = buf;
  return o;
}

// 3. Gaussian threshold optimizer vs piecewise closed form
Outcome gaussian_threshold_oracle() {
  Outcome o;
  double worst = 0.0;
  for (double s2 : log_space(0.01, 1e3, 50)) {
    const double d = std::abs(threshold(Codebook::gaussian(s2)).f_nc - gaussian_threshold_closed_form(s2));
    worst = std::max(worst, d);
    note(o, d <= 1e-4, "sigma2=%g dF=%g", s2, d);
  }
  const double bp = kGaussianThresholdBreakpoint;
  const double lower = 1.0 / (1.0 + bp * (3.0 - 2.0 * std::sqrt(2.0)));
  const double upper = 2.0 * (1.0 + 2.0 * bp) / (1.0 + 6.0 * bp);
  const double numeric = threshold(Codebook::gaussian(bp)).f_nc;
  note(o, std::abs(lower - upper) < 1e-12 && std::abs(lower - 0.82843) < 1e-5, "branches %.9f vs %.9f", lower, upper);
  note(o, std::abs(numeric - lower) <= 1e-4, "optimizer at breakpoint %.9f", numeric);
  char buf[160];
  std::snprintf(buf, sizeof buf, "max |dF| = %.2e over 50 points; breakpoint %.6f / %.6f / optimizer %.6f", worst,
                lower, upper, numeric);
  if (o.pass) o.detail = buf;
  return o;
}

// 4. truncated-codebook limits and monotonicity
Outcome truncated_limits() {
  Outcome o;
  for (double s2 : log_space(0.01, 1e3, 11)) {
    const double d = std::abs(threshold(Codebook::truncated_gaussian(s2, 1e4 * s2)).f_nc -
                              gaussian_threshold_closed_form(s2));
    note(o, d <= 1e-3, "N=1e4 sigma2, sigma2=%g dF=%g", s2, d);
  }
  for (double n : log_space(1e-3, 1e3, 13)) {
    const double d = std::abs(threshold(Codebook::truncated_gaussian(1e6 * n, n)).f_nc -
                              threshold(Codebook::truncated_uniform(n)).f_nc);
    note(o, d <= 1e-3, "sigma2=1e6 N, N=%g dF=%g", n, d);
  }
  for (double s2 : {0.01, 1.0, 1e3}) {
    const double f = threshold(Codebook::truncated_gaussian(s2, 1e-3)).f_nc;
    note(o, f > 0.99, "N=1e-3 sigma2=%g F_nc=%g", s2, f);
  }
  const auto ns = log_space(1e-3, 1e3, 21);
  const auto s2s = log_space(1e-2, 1e3, 21);
  std::vector<double> grid(21 * 21);
  for (std::size_t i = 0; i < 21; ++i) {
    for (std::size_t j = 0; j < 21; ++j) grid[i * 21 + j] = threshold(Codebook::truncated_gaussian(s2s[j], ns[i])).f_nc;
  }
  int violations = 0;
  for (std::size_t i = 0; i < 21; ++i) {
    for (std::size_t j = 0; j < 21; ++j) {
      if (i + 1 < 21 && grid[(i + 1) * 21 + j] > grid[i * 21 + j] + 1e-9) ++violations;
      if (j + 1 < 21 && grid[i * 21 + j + 1] > grid[i * 21 + j] + 1e-9) ++violations;
    }
  }
  note(o, violations == 0, "%g monotonicity violations on the 21x21 grid", violations);
  if (o.pass) o.detail = "both limits within 1e-3, F_nc(N=1e-3) > 0.99, 21x21 grid monotone";
  return o;
}

// 5. security anchors
Outcome security_anchors() {
  Outcome o;
  const double s_min = minimum_secure_squeezing(std::numeric_limits<double>::infinity());
  note(o, std::abs(s_min - 2.39) <= 0.02, "minimum secure squeezing %.4f dB", s_min);

  // F_s(S = 0) in the infinite-gain limit, through the same path the CLI uses.
  Scenario lim;
  lim.set("squeezing_db", "0");
  lim.set("gain_infinite", "true");
  const double fs0 = evaluate(Quantity::secure_fidelity, lim);
  note(o, std::abs(fs0 - 2.0 / 3.0) <= 1e-3, "F_s(S=0) = %.6f", fs0);

  double worst = 0.0;
  int points = 0;
  for (double s = 2.39; s <= 20.0 + 1e-9; s += 0.25) {
    const SecureFidelity fs = secure_fidelity(security_params(s, 1e6, 0.9, Codebook::gaussian(1.0)));
    const double expect = secure_fidelity_limit(squeeze_factor_from_db(s));
    if (fs.classification != SecureClass::crossing) {
      note(o, false, "S=%g: no crossing in [1 mK, 1e6 K]", s);
      continue;
    }
    const double d = std::abs(fs.fidelity - expect);
    worst = std::max(worst, d);
    ++points;
    note(o, d <= 1e-3, "S=%g F_s=%.6f expected %.6f", s, fs.fidelity, expect);
  }
  char buf[200];
  std::snprintf(buf, sizeof buf,
                "S_min = %.4f dB, F_s(S=0, G->inf) = %.6f, finite-G (1e6) F_s vs limit max |dF| = %.2e over %d points",
                s_min, fs0, worst, points);
  if (o.pass) o.detail = buf;
  return o;
}

// 6. information-pipeline oracles
Outcome information_oracles() {
  Outcome o;
  double worst_mi = 0.0;
  double worst_chi = 0.0;
  for (double s2 : log_space(0.01, 100.0, 9)) {
    for (auto [k, v] : {std::pair{1.0, 0.25}, std::pair{0.5, 0.8}}) {
      const double d = std::abs(mutual_information_numeric(Codebook::gaussian(s2), k, v) -
                                mutual_information_gaussian(s2, k, v));
      worst_mi = std::max(worst_mi, d);
      note(o, d <= 1e-4, "MI sigma2=%g k=%g dI=%g", s2, k, d);
    }
    for (double r : {0.0, 0.5, 1.2}) {
      const double d = std::abs(holevo_numeric(Codebook::gaussian(s2), r) - holevo_gaussian(s2, r));
      worst_chi = std::max(worst_chi, d);
      note(o, d <= 1e-4, "chi sigma2=%g r=%g dchi=%g", s2, r, d);
    }
  }
  double worst_rel = 0.0;
  const double k = 0.8;
  const double v = 0.3;
  for (double s2 : {0.3, 1.0, 3.0, 10.0, std::numeric_limits<double>::infinity()}) {
    for (double n : {0.1, 0.5, 2.0, 5.0, 20.0}) {
      for (double b : {0.0, 0.5, 1.5, 3.0, 5.0}) {
        const Codebook cb = std::isinf(s2) ? Codebook::truncated_uniform(n) : Codebook::truncated_gaussian(s2, n);
        const double series = truncated_output_density(b, s2, n, k, v);
        const double conv = output_density(cb, k, v, b);
        const double rel = std::abs(series - conv) / conv;
        worst_rel = std::max(worst_rel, rel);
        note(o, rel <= 1e-8, "density sigma2=%g N=%g beta=%g", s2, n, b);
      }
    }
  }
  char buf[200];
  std::snprintf(buf, sizeof buf, "max |dI| = %.2e, max |dchi| = %.2e, density max rel diff = %.2e (125 points)",
                worst_mi, worst_chi, worst_rel);
  if (o.pass) o.detail = buf;
  return o;
}

// 7. secure fidelity independent of codebook shape
Outcome codebook_independence() {
  Outcome o;
  double worst = 0.0;
  for (double s : {4.0, 8.0, 12.0}) {
    const double g = secure_fidelity(security_params(s, 1e6, 0.9, Codebook::gaussian(1.0))).fidelity;
    for (double ratio : {0.1, 1.0, 10.0, 100.0}) {
      const double t = secure_fidelity(security_params(s, 1e6, 0.9, Codebook::truncated_gaussian(1.0, ratio))).fidelity;
      const double d = std::abs(t - g);
      worst = std::max(worst, std::isnan(d) ? 1.0 : d);
      note(o, d <= 1e-3, "S=%g N/sigma2=%g dF=%g", s, ratio, d);
    }
  }
  if (o.pass) o.detail = "max |dF_s| = " + std::to_string(worst);
  return o;
}

// 8. optimal squeezing against the stated stationary condition
Outcome optimal_squeezing() {
  Outcome o;
  std::string found;
  for (double eps : {0.05, 0.1, 0.2}) {
    auto f = [&](double s_db) {
      TeleportConfig c = matched_chain(s_db, 1e6, 0.0, 1.0);
      c.segment_loss(kEntanglementSegment) = eps;
      return run_chain(c).fidelity;
    };
    const opt::Maximum m = opt::scan_then_refine(f, 0.01, 40.0, 400, 1e-6);
    const double stated = db_from_squeeze_factor(std::acosh(1.0 / std::sqrt(eps)) / 2.0);
    char buf[120];
    std::snprintf(buf, sizeof buf, "%seps=%.2f: chain argmax %.3f dB, stated %.3f dB", found.empty() ? "" : "; ", eps,
                  m.x, stated);
    found += buf;
    if (std::abs(m.x - stated) > 0.05) o.pass = false;
  }
  o.detail = found;
  return o;
}

// 9. qualitative figure regions
Outcome figure_regions() {
  Outcome o;
  const auto dir = std::filesystem::temp_directory_path() / "cvtele_acceptance";
  ReproduceOptions opt;
  opt.out_dir = dir;
  const ReproduceReport a = reproduce(find_recipe("fig2a"), opt);
  const SweepResult& r2 = a.results.front();
  int hits2 = 0;
  for (std::size_t i = 0; i < r2.axis1.size(); ++i) {
    for (std::size_t j = 0; j < r2.axis2.size(); ++j) {
      if (std::abs(std::log10(r2.axis2[j]) - 1.0) < 1e-9 && r2.at(i, j) > 2.0 / 3.0) ++hits2;
    }
  }
  const ReproduceReport c = reproduce(find_recipe("fig3c"), opt);
  const SweepResult& r3 = c.results.front();
  int hits3 = 0;
  for (std::size_t i = 0; i < r3.axis1.size(); ++i) {
    for (std::size_t j = 0; j < r3.axis2.size(); ++j) {
      if (r3.axis1[i] <= -24.0 && r3.axis2[j] >= 300.0 && r3.at(i, j) > 0.5) ++hits3;
    }
  }
  std::filesystem::remove_all(dir);
  note(o, hits2 > 0, "fig2a: no point with F > 2/3 at T_ff = 10 K", 0.0);
  note(o, hits3 > 0, "fig3c: no point with F > 1/2 at T_ff >= 300 K, eta <= -24 dB", 0.0);
  if (o.pass) {
    o.detail = "fig2a: " + std::to_string(hits2) + " points with F > 2/3 at 10 K; fig3c: " + std::to_string(hits3) +
               " points with F > 1/2 at T >= 300 K, eta <= -24 dB";
  }
  return o;
}

}  // namespace

int main() {
  struct Criterion {
    int id;
    const char* name;
    double budget_s;  // 0: none stated
    std::function<Outcome()> run;
  };
  const std::vector<Criterion> criteria = {
      {1, "closed-form/chain equivalence", 5.0, chain_matches_closed_form},
      {2, "classical and no-cloning anchors", 0.0, classical_anchors},
      {3, "Gaussian threshold oracle", 30.0, gaussian_threshold_oracle},
      {4, "truncated-codebook limits", 0.0, truncated_limits},
      {5, "security anchors", 60.0, security_anchors},
      {6, "information-pipeline oracles", 120.0, information_oracles},
      {7, "codebook-shape independence of F_s", 0.0, codebook_independence},
      {8, "optimal-squeezing condition", 0.0, optimal_squeezing},
      {9, "qualitative figure regions", 0.0, figure_regions},
  };
  int failures = 0;
  for (const auto& c : criteria) {
    const auto start = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (c.budget_s > 0.0 && secs > c.budget_s) {
      o.pass = false;
      o.detail += " (runtime over " + std::to_string(static_cast<int>(c.budget_s)) + " s budget)";
    }
    if (!o.pass) ++failures;
    std::printf("%s criterion %d: %s [%.2f s] %s\n", o.pass ? "PASS" : "FAIL", c.id, c.name, secs, o.detail.c_str());
    std::fflush(stdout);
  }
  std::printf("%d of %zu criteria passed\n", static_cast<int>(criteria.size()) - failures, criteria.size());
  return failures == 0 ? 0 : 1;
}
