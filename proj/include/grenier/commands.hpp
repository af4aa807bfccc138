#pragma once

#include <charconv>
#include <cmath>
#include <filesystem>
#include <functional>
#include <limits>
#include <ostream>
#include <string>
#include <string_view>
#include <vector>

#include "grenier/config.hpp"
#include "grenier/dynamics.hpp"
#include "grenier/errors.hpp"
#include "grenier/experiments.hpp"
#include "grenier/io.hpp"
#include "grenier/phase.hpp"

namespace grenier {

namespace exit_code {
inline constexpr int ok = 0;
inline constexpr int blow_up = 1;
inline constexpr int config = 2;
}  // namespace exit_code

/// Exponent of the worst-case grid-mode growth exp(8 T c eps^2 / h^2) that
/// forward Euler adds to the dispersive term over a run of length T.
inline double dispersive_growth_exponent(const RunConfig& cfg) {
  const double h = cfg.L / static_cast<double>(cfg.n);
  return 8.0 * cfg.T * cfg.cfl_const * cfg.eps * cfg.eps / (h * h);
}

inline std::vector<double> parse_eps_list(std::string_view text) {
  std::vector<double> out;
  while (!text.empty()) {
    const auto comma = text.find(',');
    auto item = detail::trim(text.substr(0, comma));
    text = comma == std::string_view::npos ? std::string_view{} : text.substr(comma + 1);
    double x = 0;
    auto [ptr, ec] = std::from_chars(item.data(), item.data() + item.size(), x);
    if (item.empty() || ec != std::errc{} || ptr != item.data() + item.size())
      throw ConfigError("--eps: cannot parse '" + std::string(item) + "'");
    if (!(x > 0) || !std::isfinite(x)) throw ConfigError("--eps: values must be positive");
    out.push_back(x);
  }
  if (out.empty()) throw ConfigError("--eps: empty list");
  return out;
}

namespace detail {

inline std::filesystem::path prepare_output(const RunConfig& cfg) {
  std::filesystem::path dir(cfg.output_dir);
  std::filesystem::create_directories(dir);
  return dir;
}

inline void warn_if_unstable(const RunConfig& cfg, std::ostream& log) {
  const double g = dispersive_growth_exponent(cfg);
  if (g > 10.0)
    log << "warning: forward Euler may amplify grid-scale modes by up to exp(" << g
        << "); consider a smaller cfl_const\n";
}

inline void write_snapshot(const std::filesystem::path& dir, const SemiclassicalState& s,
                           const ScalarField& phi) {
  const std::string tag = "_T" + format_double(s.t) + ".csv";
  const auto rho = position_density(s);
  const auto j = current_density(s);
  ScalarField jnorm(s.grid());
  for (std::size_t k = 0; k < jnorm.size(); ++k) jnorm[k] = std::hypot(j.x[k], j.y[k]);

  auto put = [&](const ScalarField& f, const std::string& name) {
    io::write_atomic(dir / (name + tag), io::field_csv(f, s.t, name));
  };
  put(rho, "rho");
  put(jnorm, "jnorm");
  put(s.a.re, "a_re");
  put(s.a.im, "a_im");
  put(s.v.x, "v_x");
  put(s.v.y, "v_y");
  put(phi, "phi");
}

}  // namespace detail

/// Evolves the configured case to T, writing snapshots at t = 0 and t = T
/// and the constraint series as requested by `cfg.emit`.
inline SemiclassicalState cmd_run(const RunConfig& cfg, std::ostream& log) {
  const auto experiment = cfg.experiment();
  const auto ctrl = cfg.control();
  ctrl.validate();
  auto s0 = initial_condition(experiment, cfg.eps);
  const auto dir = detail::prepare_output(cfg);
  detail::warn_if_unstable(cfg, log);

  const bool fields = cfg.emit.contains(Emit::fields);
  const bool series = cfg.emit.contains(Emit::series);

  PhaseTracker phase(ScalarField(s0.grid()));
  std::vector<SeriesSample> samples;
  std::vector<Observer> observers{phase.observer()};
  if (series)
    observers.push_back({cfg.stride, [&](const StepReport& r) {
                           samples.push_back({r.step, r.state.t, r.ratios});
                         }});

  if (fields) detail::write_snapshot(dir, s0, phase.phase());
  auto final_state = evolve(s0, ctrl, cfg.T, observers);
  if (fields && cfg.T > 0) detail::write_snapshot(dir, final_state, phase.phase());
  if (series) io::write_atomic(dir / "constraints.csv", io::series_csv(samples));

  log << "run " << to_string(cfg.case_id) << " eps=" << format_double(cfg.eps)
      << " reached t=" << format_double(final_state.t) << '\n';
  return final_state;
}

/// Constraint series only.
inline std::vector<SeriesSample> cmd_observe(const RunConfig& cfg, std::ostream& log) {
  const auto ctrl = cfg.control();
  ctrl.validate();
  const auto experiment = cfg.experiment();
  initial_condition(experiment, cfg.eps);
  const auto dir = detail::prepare_output(cfg);
  detail::warn_if_unstable(cfg, log);
  auto samples = constraint_series(experiment, cfg.eps, cfg.T, ctrl, cfg.stride);
  io::write_atomic(dir / "constraints.csv", io::series_csv(samples));
  log << "observe: " << samples.size() << " samples written\n";
  return samples;
}

/// eps sweep against the eps = 0 reference; writes sweep.csv.
inline SweepResult cmd_sweep(const RunConfig& cfg, const std::vector<double>& eps_list,
                             std::ostream& log,
                             double fit_max_eps = std::numeric_limits<double>::infinity()) {
  const auto ctrl = cfg.control();
  ctrl.validate();
  const auto experiment = cfg.experiment();
  initial_condition(experiment, 0.0);
  if (eps_list.empty()) throw ConfigError("--eps: empty list");
  const auto dir = detail::prepare_output(cfg);
  for (double e : eps_list) {
    RunConfig probe = cfg;
    probe.eps = e;
    detail::warn_if_unstable(probe, log);
  }
  SweepOptions opts;
  opts.fit_max_eps = fit_max_eps;
  auto result = epsilon_sweep(experiment, eps_list, cfg.T, ctrl, opts);
  io::write_atomic(dir / "sweep.csv", io::sweep_csv(result));
  log << "sweep: slope_l1="
      << (result.slope_l1 ? format_double(*result.slope_l1) : std::string("n/a"))
      << " slope_l2="
      << (result.slope_l2 ? format_double(*result.slope_l2) : std::string("n/a")) << '\n';
  return result;
}

/// Runs `body`, mapping failures onto exit codes: 2 for configuration
/// errors, 1 for blow-up and any other runtime failure.
inline int guarded(const std::function<void()>& body, std::ostream& err) {
  try {
    body();
    return exit_code::ok;
  } catch (const ConfigError& e) {
    err << "configuration error: " << e.what() << '\n';
    return exit_code::config;
  } catch (const BlowUpError& e) {
    err << "error: " << e.what() << '\n';
    return exit_code::blow_up;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return exit_code::blow_up;
  }
}

}  // namespace grenier
