#pragma once

#include <array>
#include <cmath>
#include <concepts>
#include <limits>
#include <utility>

#include "grenier/errors.hpp"
#include "grenier/grid.hpp"

namespace grenier {

/// The unknown (a, v) at time t for a given semiclassical parameter eps.
///
/// eps = 0 turns the system into the symmetrized compressible Euler equations.
template <std::floating_point Real>
struct BasicState {
  BasicState(BasicComplexField<Real> amplitude, BasicVectorField<Real> velocity, Real time,
             Real epsilon)
      : a(std::move(amplitude)), v(std::move(velocity)), t(time), eps(epsilon) {
    detail::require_same_grid(a.grid(), v.grid());
    if (!(eps >= Real(0))) throw ConfigError("eps must be >= 0");
  }

  const BasicGrid<Real>& grid() const noexcept { return a.grid(); }
  bool finite() const { return a.finite() && v.finite() && std::isfinite(t); }

  friend bool operator==(const BasicState&, const BasicState&) = default;

  BasicComplexField<Real> a;
  BasicVectorField<Real> v;
  Real t;
  Real eps;
};

using SemiclassicalState = BasicState<double>;

/// Mass, energy and the two momentum components.
template <std::floating_point Real>
struct BasicInvariants {
  Real i1 = 0;
  Real i2 = 0;
  std::array<Real, 2> i3{};
};

using Invariants = BasicInvariants<double>;

/// I(current) / I(initial). A j3 component is NaN when the initial momentum
/// component is exactly zero; `j3_guarded` marks components whose
/// projection was skipped by the momentum guard.
template <std::floating_point Real>
struct BasicConstraintRatios {
  Real j1 = 1;
  Real j2 = 1;
  std::array<Real, 2> j3{Real(1), Real(1)};
  std::array<bool, 2> j3_guarded{false, false};
};

using ConstraintRatios = BasicConstraintRatios<double>;

template <std::floating_point Real>
BasicScalarField<Real> position_density(const BasicState<Real>& s) {
  BasicScalarField<Real> rho(s.grid());
  for (std::size_t k = 0; k < rho.size(); ++k)
    rho[k] = s.a.re[k] * s.a.re[k] + s.a.im[k] * s.a.im[k];
  return rho;
}

/// J = rho v + eps Im(conj(a) grad a).
template <std::floating_point Real>
BasicVectorField<Real> current_density(const BasicState<Real>& s) {
  const auto rho = position_density(s);
  BasicVectorField<Real> j(s.grid());
  for (std::size_t axis = 0; axis < 2; ++axis) {
    auto& out = j[axis];
    const auto& vel = s.v[axis];
    for (std::size_t k = 0; k < out.size(); ++k) out[k] = rho[k] * vel[k];
    if (s.eps != Real(0)) {
      const auto dre = diff(s.a.re, axis);
      const auto dim = diff(s.a.im, axis);
      for (std::size_t k = 0; k < out.size(); ++k)
        out[k] += s.eps * (s.a.re[k] * dim[k] - s.a.im[k] * dre[k]);
    }
  }
  return j;
}

template <std::floating_point Real>
Real mass(const BasicState<Real>& s) {
  return integrate(position_density(s));
}

template <std::floating_point Real>
std::array<Real, 2> momentum(const BasicState<Real>& s) {
  const auto j = current_density(s);
  return {integrate(j.x), integrate(j.y)};
}

/// Integral of |eps grad a + i a v|^2 + |a|^4, with the first term expanded
/// as (eps d a1 - a2 v)^2 + (eps d a2 + a1 v)^2 per axis.
template <std::floating_point Real>
Real energy(const BasicState<Real>& s) {
  const auto& a1 = s.a.re;
  const auto& a2 = s.a.im;
  BasicScalarField<Real> density(s.grid());
  for (std::size_t k = 0; k < density.size(); ++k) {
    const Real rho = a1[k] * a1[k] + a2[k] * a2[k];
    density[k] = rho * rho;
  }
  for (std::size_t axis = 0; axis < 2; ++axis) {
    const auto d1 = diff(a1, axis);
    const auto d2 = diff(a2, axis);
    const auto& vel = s.v[axis];
    for (std::size_t k = 0; k < density.size(); ++k) {
      const Real re = s.eps * d1[k] - a2[k] * vel[k];
      const Real im = s.eps * d2[k] + a1[k] * vel[k];
      density[k] += re * re + im * im;
    }
  }
  return integrate(density);
}

template <std::floating_point Real>
BasicInvariants<Real> invariants(const BasicState<Real>& s) {
  return {mass(s), energy(s), momentum(s)};
}

/// Ratios of `current` to `reference`; a momentum component is flagged
/// guarded when either invariant falls below `guard` in magnitude.
template <std::floating_point Real>
BasicConstraintRatios<Real> constraint_ratios(const BasicInvariants<Real>& current,
                                              const BasicInvariants<Real>& reference,
                                              Real guard = Real(0)) {
  constexpr Real nan = std::numeric_limits<Real>::quiet_NaN();
  BasicConstraintRatios<Real> r;
  r.j1 = reference.i1 != Real(0) ? current.i1 / reference.i1 : nan;
  r.j2 = reference.i2 != Real(0) ? current.i2 / reference.i2 : nan;
  for (std::size_t c = 0; c < 2; ++c) {
    r.j3[c] = reference.i3[c] != Real(0) ? current.i3[c] / reference.i3[c] : nan;
    r.j3_guarded[c] = std::abs(reference.i3[c]) < guard || std::abs(current.i3[c]) < guard;
  }
  return r;
}

}  // namespace grenier
