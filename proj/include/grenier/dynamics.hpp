#pragma once

#include <array>
#include <cmath>
#include <concepts>
#include <cstddef>
#include <functional>
#include <vector>

#include "grenier/errors.hpp"
#include "grenier/grid.hpp"
#include "grenier/state.hpp"

namespace grenier {

/// Time derivative of (a, v). The sign is that of d/dt, i.e. minus the flux
/// operator F_h.
template <std::floating_point Real>
struct BasicTendency {
  BasicComplexField<Real> da;
  BasicVectorField<Real> dv;
};

using Tendency = BasicTendency<double>;

/// How the velocity is rescaled to restore the initial momentum.
enum class MomentumScaling {
  /// v_j *= (I3_0 - E_j) / V_j, where V_j = int |a|^2 v_j and
  /// E_j = eps int Im(conj(a) d_j a). Restores I3 exactly.
  exact,
  /// v_j *= I3_0 / (V_j + E_j). Exact only when E_j = 0.
  ratio,
};

struct StepControl {
  double cfl_const = 0.25;        // k = cfl_const * h^2
  double momentum_guard = 1e-8;   // absolute threshold below which a component is not projected
  bool project_mass = true;
  bool project_momentum = true;
  MomentumScaling momentum_scaling = MomentumScaling::exact;

  void validate() const {
    if (!(cfl_const > 0) || !std::isfinite(cfl_const)) throw ConfigError("cfl_const must be > 0");
    if (!(momentum_guard >= 0)) throw ConfigError("momentum_guard must be >= 0");
  }

  template <std::floating_point Real>
  Real time_step(const BasicGrid<Real>& g) const {
    return static_cast<Real>(cfl_const) * g.spacing() * g.spacing();
  }
};

/// Centered, inviscid discretization of
///   dv/dt = -(v.grad) v - grad |a|^2
///   da/dt = -v.grad a - a div(v) / 2 + i (eps/2) lap a
template <std::floating_point Real>
BasicTendency<Real> rhs(const BasicState<Real>& s) {
  const auto& g = s.grid();
  const std::size_t size = g.size();
  const auto& vx = s.v.x;
  const auto& vy = s.v.y;

  BasicTendency<Real> out{BasicComplexField<Real>(g), BasicVectorField<Real>(g)};

  const auto grad_rho = gradient(position_density(s));
  for (std::size_t c = 0; c < 2; ++c) {
    const auto dx = diff(s.v[c], 0);
    const auto dy = diff(s.v[c], 1);
    auto& dv = out.dv[c];
    for (std::size_t k = 0; k < size; ++k)
      dv[k] = -(vx[k] * dx[k] + vy[k] * dy[k]) - grad_rho[c][k];
  }

  const auto div_v = divergence(s.v);
  const Real half_eps = s.eps / Real(2);
  auto transport = [&](const BasicScalarField<Real>& part, BasicScalarField<Real>& dst) {
    const auto dx = diff(part, 0);
    const auto dy = diff(part, 1);
    for (std::size_t k = 0; k < size; ++k)
      dst[k] = -(vx[k] * dx[k] + vy[k] * dy[k]) - Real(0.5) * part[k] * div_v[k];
  };
  transport(s.a.re, out.da.re);
  transport(s.a.im, out.da.im);

  if (s.eps != Real(0)) {
    // i * (eps/2) * lap(a): (re, im) -> (-im, re)
    const auto lap = laplacian_c(s.a);
    for (std::size_t k = 0; k < size; ++k) {
      out.da.re[k] -= half_eps * lap.im[k];
      out.da.im[k] += half_eps * lap.re[k];
    }
  }
  return out;
}

/// Forward Euler: the pre-projection state U + k rhs(U) at t + k.
template <std::floating_point Real>
BasicState<Real> euler_step(const BasicState<Real>& s, Real k, std::size_t step_index = 0) {
  if (!(k > Real(0))) throw ConfigError("time step must be positive");
  const auto f = rhs(s);
  BasicState<Real> next = s;
  auto axpy = [k](BasicScalarField<Real>& y, const BasicScalarField<Real>& x) {
    for (std::size_t i = 0; i < y.size(); ++i) y[i] += k * x[i];
  };
  axpy(next.a.re, f.da.re);
  axpy(next.a.im, f.da.im);
  axpy(next.v.x, f.dv.x);
  axpy(next.v.y, f.dv.y);
  next.t = s.t + k;
  if (!next.finite()) throw BlowUpError(step_index, static_cast<double>(next.t), "non-finite field");
  return next;
}

/// Rescales a so that its mass equals `reference_mass`; v is untouched.
template <std::floating_point Real>
BasicState<Real> project_mass(const BasicState<Real>& s_half, Real reference_mass) {
  const Real m = mass(s_half);
  if (m == Real(0)) {
    if (reference_mass == Real(0)) return s_half;
    throw DegenerateProjectionError("cannot rescale a vanishing amplitude to positive mass");
  }
  const Real scale = std::sqrt(reference_mass / m);
  BasicState<Real> out = s_half;
  for (auto& x : out.a.re.values()) x *= scale;
  for (auto& x : out.a.im.values()) x *= scale;
  return out;
}

/// Splits momentum component `axis` into the velocity part int |a|^2 v_j
/// and the dispersive part eps int Im(conj(a) d_j a).
template <std::floating_point Real>
std::array<Real, 2> momentum_parts(const BasicState<Real>& s, std::size_t axis) {
  const auto& g = s.grid();
  BasicScalarField<Real> weighted(g);
  for (std::size_t k = 0; k < weighted.size(); ++k)
    weighted[k] = (s.a.re[k] * s.a.re[k] + s.a.im[k] * s.a.im[k]) * s.v[axis][k];
  Real dispersive = 0;
  if (s.eps != Real(0)) {
    const auto dre = diff(s.a.re, axis);
    const auto dim = diff(s.a.im, axis);
    BasicScalarField<Real> im_part(g);
    for (std::size_t k = 0; k < im_part.size(); ++k)
      im_part[k] = s.a.re[k] * dim[k] - s.a.im[k] * dre[k];
    dispersive = s.eps * integrate(im_part);
  }
  return {integrate(weighted), dispersive};
}

/// Per-component velocity rescaling toward `reference_momentum`. The
/// amplitude of `s` must already be mass-projected. A component is left
/// alone when the reference or the candidate momentum is smaller than
/// `guard` in magnitude; `skipped`, when given, records which.
template <std::floating_point Real>
BasicState<Real> project_momentum(const BasicState<Real>& s,
                                  const std::array<Real, 2>& reference_momentum, Real guard,
                                  MomentumScaling scaling = MomentumScaling::exact,
                                  std::array<bool, 2>* skipped = nullptr) {
  BasicState<Real> out = s;
  for (std::size_t c = 0; c < 2; ++c) {
    const auto [velocity_part, dispersive_part] = momentum_parts(s, c);
    const Real candidate = velocity_part + dispersive_part;
    const Real target = reference_momentum[c];
    bool skip = std::abs(target) < guard || std::abs(candidate) < guard;
    Real factor = 1;
    if (!skip) {
      if (scaling == MomentumScaling::ratio) {
        factor = target / candidate;
      } else if (std::abs(velocity_part) < guard) {
        skip = true;
      } else {
        factor = (target - dispersive_part) / velocity_part;
      }
    }
    if (!skip)
      for (auto& x : out.v[c].values()) x *= factor;
    if (skipped) (*skipped)[c] = skip;
  }
  return out;
}

/// One full step: Euler predictor, then mass and momentum projections.
template <std::floating_point Real>
BasicState<Real> advance(const BasicState<Real>& s, const StepControl& ctrl,
                         const BasicInvariants<Real>& reference, Real k,
                         std::size_t step_index = 0, std::array<bool, 2>* skipped = nullptr) {
  auto next = euler_step(s, k, step_index);
  if (ctrl.project_mass) next = project_mass(next, reference.i1);
  if (ctrl.project_momentum) {
    next = project_momentum(next, reference.i3, static_cast<Real>(ctrl.momentum_guard),
                            ctrl.momentum_scaling, skipped);
  } else if (skipped) {
    *skipped = {true, true};
  }
  return next;
}

template <std::floating_point Real>
BasicState<Real> advance(const BasicState<Real>& s, const StepControl& ctrl,
                         const BasicInvariants<Real>& reference) {
  return advance(s, ctrl, reference, ctrl.time_step(s.grid()));
}

template <std::floating_point Real>
struct BasicStepReport {
  std::size_t step;
  const BasicState<Real>& state;
  BasicConstraintRatios<Real> ratios;
  Real last_step;  // size of the step that produced `state`; 0 at step 0
};

using StepReport = BasicStepReport<double>;

/// Called at step 0, every `stride` steps, and at the final step.
template <std::floating_point Real>
struct BasicObserver {
  std::size_t stride = 1;
  std::function<void(const BasicStepReport<Real>&)> callback;
};

using Observer = BasicObserver<double>;

/// Steps from s0 until t = T. The last step is shortened to land on T.
template <std::floating_point Real>
BasicState<Real> evolve(const BasicState<Real>& s0, const StepControl& ctrl, Real final_time,
                        const std::vector<BasicObserver<Real>>& observers = {}) {
  ctrl.validate();
  if (!(final_time >= Real(0))) throw ConfigError("final time must be >= 0");
  if (!s0.finite()) throw BlowUpError(0, static_cast<double>(s0.t), "non-finite initial state");

  const auto reference = invariants(s0);
  const Real k_nominal = ctrl.time_step(s0.grid());
  const Real guard = static_cast<Real>(ctrl.momentum_guard);

  auto notify = [&](std::size_t step, const BasicState<Real>& s, Real k_last, bool last,
                    const std::array<bool, 2>& skipped) {
    bool due = false;
    for (const auto& o : observers) due = due || last || step % o.stride == 0;
    if (!due) return;
    auto ratios = constraint_ratios(invariants(s), reference, guard);
    ratios.j3_guarded = skipped;
    const BasicStepReport<Real> report{step, s, ratios, k_last};
    for (const auto& o : observers)
      if (last || step % o.stride == 0) o.callback(report);
  };

  for (const auto& o : observers)
    if (o.stride == 0) throw ConfigError("observer stride must be >= 1");

  BasicState<Real> s = s0;
  std::array<bool, 2> skipped{!ctrl.project_momentum, !ctrl.project_momentum};
  for (std::size_t c = 0; c < 2; ++c) skipped[c] = skipped[c] || std::abs(reference.i3[c]) < guard;

  const Real end = s0.t + final_time;
  notify(0, s, Real(0), final_time == Real(0), skipped);

  std::size_t step = 0;
  while (s.t < end) {
    Real k = k_nominal;
    const Real remaining = end - s.t;
    const bool last = remaining <= k * Real(1 + 1e-9);
    if (last) k = remaining;
    ++step;
    s = advance(s, ctrl, reference, k, step, &skipped);
    if (last) s.t = end;
    notify(step, s, k, last, skipped);
  }
  return s;
}

}  // namespace grenier
