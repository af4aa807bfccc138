#pragma once

#include <cmath>
#include <concepts>
#include <cstddef>
#include <string>
#include <utility>
#include <vector>

#include "grenier/errors.hpp"

namespace grenier {

/// Uniform periodic square lattice of side L with n points per axis.
///
/// Sample (i, j) sits at x = (i h, j h); indices wrap modulo n. Storage is
/// row-major with the x index fastest, i.e. flat index i + n j.
template <std::floating_point Real>
class BasicGrid {
 public:
  BasicGrid(Real side, std::size_t points) : side_(side), n_(points) {
    if (!(side > Real(0)) || !std::isfinite(side))
      throw ConfigError("grid side L must be positive and finite");
    if (points < 4) throw ConfigError("grid needs n >= 4 points per axis");
    h_ = side_ / static_cast<Real>(n_);
  }

  Real side() const noexcept { return side_; }
  std::size_t points() const noexcept { return n_; }
  Real spacing() const noexcept { return h_; }
  std::size_t size() const noexcept { return n_ * n_; }
  Real cell_area() const noexcept { return h_ * h_; }

  Real coord(std::size_t i) const noexcept { return static_cast<Real>(i) * h_; }

  std::size_t index(std::size_t i, std::size_t j) const noexcept { return i + n_ * j; }

  std::size_t wrap(std::ptrdiff_t i) const noexcept {
    const auto n = static_cast<std::ptrdiff_t>(n_);
    return static_cast<std::size_t>(((i % n) + n) % n);
  }

  friend bool operator==(const BasicGrid& a, const BasicGrid& b) noexcept {
    return a.n_ == b.n_ && a.side_ == b.side_;
  }

 private:
  Real side_;
  std::size_t n_;
  Real h_;
};

template <std::floating_point Real>
BasicGrid<Real> make_grid(Real side, std::size_t points) {
  return BasicGrid<Real>(side, points);
}

namespace detail {

template <std::floating_point Real>
void require_same_grid(const BasicGrid<Real>& a, const BasicGrid<Real>& b) {
  if (!(a == b)) throw std::invalid_argument("fields live on different grids");
}

template <std::floating_point Real>
bool all_finite(const std::vector<Real>& v) {
  for (Real x : v)
    if (!std::isfinite(x)) return false;
  return true;
}

}  // namespace detail

template <std::floating_point Real>
class BasicScalarField {
 public:
  explicit BasicScalarField(const BasicGrid<Real>& g, Real fill = Real(0))
      : grid_(g), values_(g.size(), fill) {}

  BasicScalarField(const BasicGrid<Real>& g, std::vector<Real> values)
      : grid_(g), values_(std::move(values)) {
    if (values_.size() != grid_.size()) throw std::invalid_argument("scalar field size mismatch");
  }

  /// Samples f(x, y) at every grid point.
  template <class F>
  static BasicScalarField sample(const BasicGrid<Real>& g, F&& f) {
    BasicScalarField out(g);
    for (std::size_t j = 0; j < g.points(); ++j)
      for (std::size_t i = 0; i < g.points(); ++i) out(i, j) = f(g.coord(i), g.coord(j));
    return out;
  }

  const BasicGrid<Real>& grid() const noexcept { return grid_; }
  std::size_t size() const noexcept { return values_.size(); }

  Real& operator[](std::size_t k) { return values_[k]; }
  Real operator[](std::size_t k) const { return values_[k]; }
  Real& operator()(std::size_t i, std::size_t j) { return values_[grid_.index(i, j)]; }
  Real operator()(std::size_t i, std::size_t j) const { return values_[grid_.index(i, j)]; }

  const std::vector<Real>& values() const noexcept { return values_; }
  std::vector<Real>& values() noexcept { return values_; }

  bool finite() const { return detail::all_finite(values_); }

  friend bool operator==(const BasicScalarField&, const BasicScalarField&) = default;

 private:
  BasicGrid<Real> grid_;
  std::vector<Real> values_;
};

/// Complex samples stored as separate real and imaginary planes.
template <std::floating_point Real>
class BasicComplexField {
 public:
  explicit BasicComplexField(const BasicGrid<Real>& g) : re(g), im(g) {}
  BasicComplexField(BasicScalarField<Real> real_part, BasicScalarField<Real> imag_part)
      : re(std::move(real_part)), im(std::move(imag_part)) {
    detail::require_same_grid(re.grid(), im.grid());
  }

  const BasicGrid<Real>& grid() const noexcept { return re.grid(); }
  std::size_t size() const noexcept { return re.size(); }
  bool finite() const { return re.finite() && im.finite(); }

  friend bool operator==(const BasicComplexField&, const BasicComplexField&) = default;

  BasicScalarField<Real> re;
  BasicScalarField<Real> im;
};

template <std::floating_point Real>
class BasicVectorField {
 public:
  explicit BasicVectorField(const BasicGrid<Real>& g) : x(g), y(g) {}
  BasicVectorField(BasicScalarField<Real> comp_x, BasicScalarField<Real> comp_y)
      : x(std::move(comp_x)), y(std::move(comp_y)) {
    detail::require_same_grid(x.grid(), y.grid());
  }

  const BasicGrid<Real>& grid() const noexcept { return x.grid(); }
  std::size_t size() const noexcept { return x.size(); }
  bool finite() const { return x.finite() && y.finite(); }

  BasicScalarField<Real>& operator[](std::size_t axis) { return axis == 0 ? x : y; }
  const BasicScalarField<Real>& operator[](std::size_t axis) const { return axis == 0 ? x : y; }

  friend bool operator==(const BasicVectorField&, const BasicVectorField&) = default;

  BasicScalarField<Real> x;
  BasicScalarField<Real> y;
};

using Grid = BasicGrid<double>;
using ScalarField = BasicScalarField<double>;
using ComplexField = BasicComplexField<double>;
using VectorField = BasicVectorField<double>;

// ---------------------------------------------------------------------------
// Central differences on the periodic lattice.

/// Central difference (f(+1) - f(-1)) / 2h along `axis` (0 = x, 1 = y).
template <std::floating_point Real>
BasicScalarField<Real> diff(const BasicScalarField<Real>& f, std::size_t axis) {
  const auto& g = f.grid();
  const std::size_t n = g.points();
  const Real inv2h = Real(1) / (Real(2) * g.spacing());
  BasicScalarField<Real> out(g);
  for (std::size_t j = 0; j < n; ++j) {
    const std::size_t jp = j + 1 == n ? 0 : j + 1;
    const std::size_t jm = j == 0 ? n - 1 : j - 1;
    for (std::size_t i = 0; i < n; ++i) {
      const std::size_t ip = i + 1 == n ? 0 : i + 1;
      const std::size_t im = i == 0 ? n - 1 : i - 1;
      out(i, j) = axis == 0 ? (f(ip, j) - f(im, j)) * inv2h : (f(i, jp) - f(i, jm)) * inv2h;
    }
  }
  return out;
}

template <std::floating_point Real>
BasicVectorField<Real> gradient(const BasicScalarField<Real>& f) {
  return BasicVectorField<Real>(diff(f, 0), diff(f, 1));
}

template <std::floating_point Real>
BasicScalarField<Real> divergence(const BasicVectorField<Real>& w) {
  auto out = diff(w.x, 0);
  const auto dy = diff(w.y, 1);
  for (std::size_t k = 0; k < out.size(); ++k) out[k] += dy[k];
  return out;
}

/// Five-point Laplacian.
template <std::floating_point Real>
BasicScalarField<Real> laplacian(const BasicScalarField<Real>& f) {
  const auto& g = f.grid();
  const std::size_t n = g.points();
  const Real inv_h2 = Real(1) / (g.spacing() * g.spacing());
  BasicScalarField<Real> out(g);
  for (std::size_t j = 0; j < n; ++j) {
    const std::size_t jp = j + 1 == n ? 0 : j + 1;
    const std::size_t jm = j == 0 ? n - 1 : j - 1;
    for (std::size_t i = 0; i < n; ++i) {
      const std::size_t ip = i + 1 == n ? 0 : i + 1;
      const std::size_t im = i == 0 ? n - 1 : i - 1;
      out(i, j) = (f(ip, j) + f(im, j) + f(i, jp) + f(i, jm) - Real(4) * f(i, j)) * inv_h2;
    }
  }
  return out;
}

template <std::floating_point Real>
BasicComplexField<Real> laplacian_c(const BasicComplexField<Real>& f) {
  return BasicComplexField<Real>(laplacian(f.re), laplacian(f.im));
}

/// Rectangle rule h^2 * sum, accumulated in storage order.
template <std::floating_point Real>
Real integrate(const BasicScalarField<Real>& f) {
  Real sum = 0;
  for (Real x : f.values()) sum += x;
  return sum * f.grid().cell_area();
}

}  // namespace grenier
