#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <future>
#include <limits>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "grenier/dynamics.hpp"
#include "grenier/errors.hpp"
#include "grenier/grid.hpp"
#include "grenier/state.hpp"

namespace grenier {

enum class CaseId { near_zero_current, nonzero_current, sign_changing };

inline std::string_view to_string(CaseId id) {
  switch (id) {
    case CaseId::near_zero_current: return "near_zero_current";
    case CaseId::nonzero_current: return "nonzero_current";
    case CaseId::sign_changing: return "sign_changing";
  }
  throw ConfigError("unknown case id");
}

inline CaseId case_from_string(std::string_view name) {
  for (auto id : {CaseId::near_zero_current, CaseId::nonzero_current, CaseId::sign_changing})
    if (name == to_string(id)) return id;
  throw ConfigError("unknown case id '" + std::string(name) + "'");
}

/// Initial data U0 = (a0, alpha f, alpha g) on a periodic square of side L.
struct ExperimentCase {
  CaseId id = CaseId::near_zero_current;
  double alpha = 1e-10;
  double L = 0.5;
  std::size_t n = 50;
  /// Distance of each Gaussian center from L/2 along x1 for sign_changing;
  /// empty means L/8.
  std::optional<double> sign_change_offset;

  double offset() const { return sign_change_offset.value_or(L / 8.0); }

  static double default_alpha(CaseId id) {
    return id == CaseId::near_zero_current ? 1e-10 : 1e-2;
  }

  static ExperimentCase defaults(CaseId id) {
    ExperimentCase c;
    c.id = id;
    c.alpha = default_alpha(id);
    return c;
  }
};

namespace detail {

inline double gaussian(double x, double y, double cx, double cy, double width) {
  const double dx = x - cx;
  const double dy = y - cy;
  return std::exp(-width * (dx * dx + dy * dy));
}

}  // namespace detail

/// Builds U0 on `g` at t = 0. `g` must have side c.L.
inline SemiclassicalState initial_condition(const ExperimentCase& c, const Grid& g, double eps) {
  if (g.side() != c.L || g.points() != c.n)
    throw ConfigError("grid does not match the experiment's L and n");
  const double mid = c.L / 2;

  ScalarField envelope(g);
  switch (c.id) {
    case CaseId::near_zero_current:
    case CaseId::nonzero_current:
      envelope = ScalarField::sample(
          g, [&](double x, double y) { return detail::gaussian(x, y, mid, mid, 80.0); });
      break;
    case CaseId::sign_changing: {
      const double off = c.offset();
      envelope = ScalarField::sample(g, [&](double x, double y) {
        return detail::gaussian(x, y, mid - off, mid, 320.0) -
               detail::gaussian(x, y, mid + off, mid, 320.0);
      });
      break;
    }
    default:
      throw ConfigError("unknown case id");
  }

  // a0 = envelope * (1 + i)
  ComplexField a(envelope, envelope);
  VectorField v(ScalarField::sample(g,
                                    [&](double x, double y) {
                                      return c.alpha * detail::gaussian(x, y, mid, mid, 80.0) *
                                             std::sin(10.0 * x);
                                    }),
                ScalarField::sample(g, [&](double x, double y) {
                  return c.alpha * detail::gaussian(x, y, mid, mid, 80.0) * std::cos(10.0 * x);
                }));
  return SemiclassicalState(std::move(a), std::move(v), 0.0, eps);
}

inline SemiclassicalState initial_condition(const ExperimentCase& c, double eps) {
  return initial_condition(c, make_grid(c.L, c.n), eps);
}

namespace detail {

inline void require_comparable(const SemiclassicalState& a, const SemiclassicalState& b) {
  if (!(a.grid() == b.grid())) throw ComparisonError("states live on different grids");
  const double scale = std::max({1.0, std::abs(a.t), std::abs(b.t)});
  if (std::abs(a.t - b.t) > 1e-12 * scale) throw ComparisonError("states are at different times");
}

}  // namespace detail

/// ||rho_eps - rho_0||_1 + ||J_eps - J_0||_1, the vector norm being the sum
/// of the component norms.
inline double indicator_l1(const SemiclassicalState& s_eps, const SemiclassicalState& s_0) {
  detail::require_comparable(s_eps, s_0);
  const auto rho_e = position_density(s_eps);
  const auto rho_0 = position_density(s_0);
  const auto j_e = current_density(s_eps);
  const auto j_0 = current_density(s_0);
  double sum = 0;
  for (std::size_t k = 0; k < rho_e.size(); ++k)
    sum += std::abs(rho_e[k] - rho_0[k]) + std::abs(j_e.x[k] - j_0.x[k]) +
           std::abs(j_e.y[k] - j_0.y[k]);
  return sum * s_eps.grid().cell_area();
}

/// ||a_eps - a_0||_2 + ||v_eps - v_0||_2.
inline double indicator_l2(const SemiclassicalState& s_eps, const SemiclassicalState& s_0) {
  detail::require_comparable(s_eps, s_0);
  double sa = 0;
  double sv = 0;
  for (std::size_t k = 0; k < s_eps.grid().size(); ++k) {
    const double dr = s_eps.a.re[k] - s_0.a.re[k];
    const double di = s_eps.a.im[k] - s_0.a.im[k];
    const double dx = s_eps.v.x[k] - s_0.v.x[k];
    const double dy = s_eps.v.y[k] - s_0.v.y[k];
    sa += dr * dr + di * di;
    sv += dx * dx + dy * dy;
  }
  const double w = s_eps.grid().cell_area();
  return std::sqrt(w * sa) + std::sqrt(w * sv);
}

/// Least-squares slope of log(y) against log(x). Empty with fewer than two
/// points or any non-positive value.
inline std::optional<double> fit_loglog_slope(std::span<const double> x,
                                              std::span<const double> y) {
  if (x.size() != y.size() || x.size() < 2) return std::nullopt;
  double mx = 0;
  double my = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (!(x[i] > 0) || !(y[i] > 0)) return std::nullopt;
    mx += std::log(x[i]);
    my += std::log(y[i]);
  }
  mx /= static_cast<double>(x.size());
  my /= static_cast<double>(x.size());
  double sxy = 0;
  double sxx = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double dx = std::log(x[i]) - mx;
    sxy += dx * (std::log(y[i]) - my);
    sxx += dx * dx;
  }
  if (sxx == 0) return std::nullopt;
  return sxy / sxx;
}

struct SweepResult {
  std::vector<double> eps_values;
  std::vector<double> l1_indicator;
  std::vector<double> l2_indicator;
  std::optional<double> slope_l1;
  std::optional<double> slope_l2;
  double T = 0;
};

struct SweepOptions {
  /// Only eps <= fit_max_eps enter the slope fit.
  double fit_max_eps = std::numeric_limits<double>::infinity();
  bool parallel = true;
};

/// Runs the eps = 0 reference and every eps in `eps_list` to time T, then
/// compares each against the reference.
inline SweepResult epsilon_sweep(const ExperimentCase& c, const std::vector<double>& eps_list,
                                 double T, const StepControl& ctrl, SweepOptions opts = {}) {
  if (eps_list.empty()) throw ConfigError("eps list must not be empty");
  for (double e : eps_list)
    if (!(e > 0) || !std::isfinite(e)) throw ConfigError("sweep eps values must be positive");

  const Grid g = make_grid(c.L, c.n);
  auto run = [&](double eps) {
    try {
      return evolve(initial_condition(c, g, eps), ctrl, T);
    } catch (const BlowUpError& e) {
      throw BlowUpError(e.step(), e.time(), "eps = " + std::to_string(eps));
    }
  };

  std::vector<SemiclassicalState> finals;
  finals.reserve(eps_list.size() + 1);
  if (opts.parallel) {
    std::vector<std::future<SemiclassicalState>> jobs;
    jobs.push_back(std::async(std::launch::async, run, 0.0));
    for (double e : eps_list) jobs.push_back(std::async(std::launch::async, run, e));
    for (auto& j : jobs) finals.push_back(j.get());
  } else {
    finals.push_back(run(0.0));
    for (double e : eps_list) finals.push_back(run(e));
  }

  SweepResult out;
  out.T = T;
  out.eps_values = eps_list;
  std::vector<double> fx, f1, f2;
  for (std::size_t i = 0; i < eps_list.size(); ++i) {
    out.l1_indicator.push_back(indicator_l1(finals[i + 1], finals[0]));
    out.l2_indicator.push_back(indicator_l2(finals[i + 1], finals[0]));
    if (eps_list[i] <= opts.fit_max_eps) {
      fx.push_back(eps_list[i]);
      f1.push_back(out.l1_indicator.back());
      f2.push_back(out.l2_indicator.back());
    }
  }
  out.slope_l1 = fit_loglog_slope(fx, f1);
  out.slope_l2 = fit_loglog_slope(fx, f2);
  return out;
}

struct SeriesSample {
  std::size_t step = 0;
  double t = 0;
  ConstraintRatios ratios;
};

/// (t, J1, J2, J3) every `stride` steps, plus the final step.
inline std::vector<SeriesSample> constraint_series(const ExperimentCase& c, double eps, double T,
                                                   const StepControl& ctrl, std::size_t stride) {
  if (stride < 1) throw ConfigError("stride must be >= 1");
  std::vector<SeriesSample> samples;
  Observer record{stride, [&](const StepReport& r) {
                    samples.push_back({r.step, r.state.t, r.ratios});
                  }};
  evolve(initial_condition(c, eps), ctrl, T, {record});
  return samples;
}

}  // namespace grenier
