#pragma once

// Two-axis parameter sweeps over a Scenario.

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <exception>
#include <mutex>
#include <ostream>
#include <string>
#include <string_view>
#include <thread>
#include <vector>

#include "cvtele/error.hpp"
#include "cvtele/nocloning.hpp"
#include "cvtele/params.hpp"
#include "cvtele/security.hpp"
#include "cvtele/teleport.hpp"

namespace cvtele {

enum class AxisScale {
  linear,
  log,  // geometric spacing
  db    // values given in dB, spaced linearly, assigned as the power ratio 10^(x/10)
};

struct Axis {
  std::string name;
  double min = 0.0;
  double max = 1.0;
  int count = 2;
  AxisScale scale = AxisScale::linear;

  void validate() const {
    if (name.empty()) throw UsageError("axis needs a parameter name");
    if (count < 2) throw UsageError("axis '" + name + "' needs at least 2 points");
    if (!std::isfinite(min) || !std::isfinite(max)) throw UsageError("axis '" + name + "' range must be finite");
    if (scale == AxisScale::log && !(min > 0.0 && max > 0.0)) {
      throw UsageError("log axis '" + name + "' needs a positive range");
    }
  }

  std::vector<double> values() const {
    validate();
    std::vector<double> v(static_cast<std::size_t>(count));
    for (int i = 0; i < count; ++i) {
      const double t = static_cast<double>(i) / (count - 1);
      if (scale == AxisScale::log) {
        v[static_cast<std::size_t>(i)] = std::exp(std::log(min) + t * (std::log(max) - std::log(min)));
      } else {
        v[static_cast<std::size_t>(i)] = min + t * (max - min);
      }
    }
    v.front() = min;
    v.back() = max;
    return v;
  }

  // The value handed to Scenario::set for grid coordinate x.
  double assigned(double x) const { return scale == AxisScale::db ? std::pow(10.0, x / 10.0) : x; }
};

inline const char* to_string(AxisScale s) {
  switch (s) {
    case AxisScale::linear: return "linear";
    case AxisScale::log: return "log";
    case AxisScale::db: return "db";
  }
  return "?";
}

// NAME:MIN:MAX:COUNT[:linear|log|db]
inline Axis parse_axis(std::string_view text) {
  std::vector<std::string_view> parts;
  while (true) {
    const auto colon = text.find(':');
    parts.push_back(text.substr(0, colon));
    if (colon == std::string_view::npos) break;
    text.remove_prefix(colon + 1);
  }
  if (parts.size() != 4 && parts.size() != 5) {
    throw UsageError("axis must look like NAME:MIN:MAX:COUNT[:linear|log|db]");
  }
  Axis a;
  a.name = std::string(parts[0]);
  a.min = parse_number("axis min", parts[1]);
  a.max = parse_number("axis max", parts[2]);
  const double count = parse_number("axis count", parts[3]);
  if (count != std::floor(count) || count < 2 || count > 1e6) throw UsageError("axis count must be an integer >= 2");
  a.count = static_cast<int>(count);
  if (parts.size() == 5) {
    if (parts[4] == "linear") a.scale = AxisScale::linear;
    else if (parts[4] == "log") a.scale = AxisScale::log;
    else if (parts[4] == "db") a.scale = AxisScale::db;
    else throw UsageError("axis scale must be linear, log or db");
  }
  a.validate();
  return a;
}

enum class Quantity { fidelity, f_nc, mutual_information, holevo, secure_fidelity };

inline const char* to_string(Quantity q) {
  switch (q) {
    case Quantity::fidelity: return "fidelity";
    case Quantity::f_nc: return "f_nc";
    case Quantity::mutual_information: return "mutual_information";
    case Quantity::holevo: return "holevo";
    case Quantity::secure_fidelity: return "secure_fidelity";
  }
  return "?";
}

inline Quantity parse_quantity(std::string_view name) {
  for (Quantity q : {Quantity::fidelity, Quantity::f_nc, Quantity::mutual_information, Quantity::holevo,
                     Quantity::secure_fidelity}) {
    if (name == to_string(q)) return q;
  }
  throw UsageError("unknown quantity '" + std::string(name) +
                   "' (expected fidelity, f_nc, mutual_information, holevo, secure_fidelity)");
}

// Sentinels in secure_fidelity output where no crossing exists.
inline constexpr double kNeverSecure = -1.0;
inline constexpr double kAlwaysSecure = -2.0;

inline double secure_fidelity_value(const Scenario& s) {
  if (s.gain_infinite) return secure_fidelity_limit(s.chain.squeeze_factor);
  const SecureFidelity f = secure_fidelity(s.security());
  switch (f.classification) {
    case SecureClass::crossing: return f.fidelity;
    case SecureClass::always_secure: return kAlwaysSecure;
    case SecureClass::never_secure: return kNeverSecure;
  }
  return kNeverSecure;
}

inline double evaluate(Quantity q, const Scenario& s) {
  switch (q) {
    case Quantity::fidelity: return run_chain(s.resolved_chain()).fidelity;
    case Quantity::f_nc: return threshold(s.codebook(), s.cloner_options()).f_nc;
    case Quantity::mutual_information: return finite_parameter_point(s.security()).mutual_information;
    case Quantity::holevo: return finite_parameter_point(s.security()).holevo;
    case Quantity::secure_fidelity: return secure_fidelity_value(s);
  }
  throw UsageError("unhandled quantity");
}

struct SweepGrid {
  Axis axis1;
  Axis axis2;
  Quantity quantity = Quantity::fidelity;
  Scenario base;
};

struct SweepResult {
  std::string axis1_name;
  std::string axis2_name;
  std::string quantity_name;
  std::vector<double> axis1;
  std::vector<double> axis2;
  std::vector<double> values;  // row-major, axis1 outer

  double at(std::size_t i, std::size_t j) const { return values[i * axis2.size() + j]; }
};

inline unsigned default_threads() { return std::max(1u, std::thread::hardware_concurrency()); }

// Runs f(i) for i in [0, n) on `threads` workers pulling indices from a shared
// counter.  The first exception thrown by any worker is rethrown.
template <class F>
void parallel_for(std::size_t n, unsigned threads, F&& f) {
  threads = std::max(1u, std::min<unsigned>(threads, static_cast<unsigned>(std::max<std::size_t>(n, 1))));
  std::atomic<std::size_t> next{0};
  std::atomic<bool> failed{false};
  std::exception_ptr error;
  std::mutex error_mutex;
  auto worker = [&] {
    for (std::size_t i; !failed.load() && (i = next.fetch_add(1)) < n;) {
      try {
        f(i);
      } catch (...) {
        std::lock_guard lock(error_mutex);
        if (!error) error = std::current_exception();
        failed = true;
      }
    }
  };
  if (threads == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    pool.reserve(threads);
    for (unsigned t = 0; t < threads; ++t) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
  }
  if (error) std::rethrow_exception(error);
}

inline SweepResult run_sweep(const SweepGrid& grid, unsigned threads = default_threads()) {
  SweepResult r;
  r.axis1_name = grid.axis1.name;
  r.axis2_name = grid.axis2.name;
  r.quantity_name = to_string(grid.quantity);
  r.axis1 = grid.axis1.values();
  r.axis2 = grid.axis2.values();
  const std::size_t n2 = r.axis2.size();
  r.values.assign(r.axis1.size() * n2, 0.0);

  // Validate parameter names once, before spending time on the grid.
  {
    Scenario probe = grid.base;
    probe.set(grid.axis1.name, grid.axis1.assigned(r.axis1.front()));
    probe.set(grid.axis2.name, grid.axis2.assigned(r.axis2.front()));
  }

  parallel_for(r.values.size(), threads, [&](std::size_t idx) {
    Scenario s = grid.base;
    s.set(grid.axis1.name, grid.axis1.assigned(r.axis1[idx / n2]));
    s.set(grid.axis2.name, grid.axis2.assigned(r.axis2[idx % n2]));
    r.values[idx] = evaluate(grid.quantity, s);
  });
  return r;
}

inline std::string format_csv_number(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.9g", v);
  return buf;
}

// Header "axis1,axis2,quantity" using the parameter and quantity names.  No
// field needs quoting: names are identifiers and values are plain numbers.
inline void write_csv(std::ostream& os, const SweepResult& r) {
  os << r.axis1_name << ',' << r.axis2_name << ',' << r.quantity_name << '\n';
  for (std::size_t i = 0; i < r.axis1.size(); ++i) {
    for (std::size_t j = 0; j < r.axis2.size(); ++j) {
      os << format_csv_number(r.axis1[i]) << ',' << format_csv_number(r.axis2[j]) << ','
         << format_csv_number(r.at(i, j)) << '\n';
    }
  }
}

}  // namespace cvtele
