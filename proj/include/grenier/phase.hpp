#pragma once

#include <cmath>
#include <concepts>
#include <optional>
#include <utility>

#include "grenier/dynamics.hpp"
#include "grenier/errors.hpp"
#include "grenier/grid.hpp"
#include "grenier/state.hpp"

namespace grenier {

/// Running phase phi(t), integrated from d(phi)/dt = -(|v|^2 / 2 + |a|^2).
template <std::floating_point Real>
struct BasicPhaseAccumulator {
  BasicScalarField<Real> phi;
  Real t = 0;
};

using PhaseAccumulator = BasicPhaseAccumulator<double>;

template <std::floating_point Real>
BasicPhaseAccumulator<Real> phase_init(BasicScalarField<Real> phi0, Real t0 = Real(0)) {
  if (!phi0.finite()) throw std::invalid_argument("initial phase must be finite");
  return {std::move(phi0), t0};
}

/// Left-endpoint update phi -= k (|v|^2 / 2 + |a|^2), evaluated at `s`.
template <std::floating_point Real>
BasicPhaseAccumulator<Real> phase_accumulate(BasicPhaseAccumulator<Real> acc,
                                             const BasicState<Real>& s, Real k) {
  detail::require_same_grid(acc.phi.grid(), s.grid());
  for (std::size_t i = 0; i < acc.phi.size(); ++i) {
    const Real vx = s.v.x[i];
    const Real vy = s.v.y[i];
    const Real rho = s.a.re[i] * s.a.re[i] + s.a.im[i] * s.a.im[i];
    acc.phi[i] -= k * (Real(0.5) * (vx * vx + vy * vy) + rho);
  }
  acc.t += k;
  return acc;
}

/// u = a exp(i phi / eps).
template <std::floating_point Real>
BasicComplexField<Real> wave_function(const BasicComplexField<Real>& a,
                                      const BasicScalarField<Real>& phi, Real eps) {
  if (!(eps > Real(0)))
    throw ReconstructionError("wave function reconstruction needs eps > 0");
  detail::require_same_grid(a.grid(), phi.grid());
  BasicComplexField<Real> u(a.grid());
  for (std::size_t k = 0; k < u.size(); ++k) {
    const Real c = std::cos(phi[k] / eps);
    const Real sn = std::sin(phi[k] / eps);
    u.re[k] = a.re[k] * c - a.im[k] * sn;
    u.im[k] = a.re[k] * sn + a.im[k] * c;
  }
  return u;
}

/// Observer that keeps a PhaseAccumulator in step with `evolve`.
///
/// Each report closes the interval [t_prev, t] with the integrand of the
/// previous state, so only one state is held at a time.
template <std::floating_point Real>
class BasicPhaseTracker {
 public:
  explicit BasicPhaseTracker(BasicScalarField<Real> phi0) : acc_(phase_init(std::move(phi0))) {}

  BasicObserver<Real> observer() {
    return {1, [this](const BasicStepReport<Real>& r) { on_step(r); }};
  }

  void on_step(const BasicStepReport<Real>& r) {
    if (previous_) acc_ = phase_accumulate(std::move(acc_), *previous_, r.last_step);
    acc_.t = r.state.t;
    previous_.emplace(r.state);
  }

  const BasicPhaseAccumulator<Real>& accumulator() const noexcept { return acc_; }
  const BasicScalarField<Real>& phase() const noexcept { return acc_.phi; }

 private:
  BasicPhaseAccumulator<Real> acc_;
  std::optional<BasicState<Real>> previous_;
};

using PhaseTracker = BasicPhaseTracker<double>;

}  // namespace grenier
