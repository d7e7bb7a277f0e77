#ifndef BILINPDO_FIELD_HPP
#define BILINPDO_FIELD_HPP

#include <algorithm>
#include <cmath>
#include <complex>
#include <functional>
#include <stdexcept>
#include <vector>

#include "bilinpdo/fft.hpp"
#include "bilinpdo/grid.hpp"
#include "bilinpdo/reduction.hpp"

namespace bilinpdo {

enum class Space { physical, frequency };

/// Complex-valued sampled function on a GridSpec box. Frequency-space
/// samples are stored in ascending-k order (index i <-> k = i - N/2).
struct Field {
  GridSpec grid;
  Space space = Space::physical;
  std::vector<cplx> v;

  Field() = default;
  Field(const GridSpec& g, Space s) : grid(g), space(s), v(g.total(), cplx{}) {}

  std::size_t size() const { return v.size(); }
  cplx& operator[](std::size_t i) { return v[i]; }
  const cplx& operator[](std::size_t i) const { return v[i]; }
};

inline void require_same_grid(const Field& a, const Field& b) {
  if (a.grid != b.grid)
    throw std::invalid_argument("fields live on different grids");
}

inline void require_space(const Field& f, Space s) {
  if (f.space != s)
    throw std::invalid_argument(s == Space::physical
                                    ? "field must be in physical space"
                                    : "field must be in frequency space");
}

template <class Fn>
Field make_field(const GridSpec& g, Space s, Fn&& fn) {
  Field f(g, s);
  for (std::size_t i = 0; i < f.size(); ++i)
    f.v[i] = fn(s == Space::physical ? g.x_of(i) : g.xi_of(i));
  return f;
}

namespace detail {
// Parity sign (-1)^{sum of axis indices}; converts the standard FFT order
// into the centered lattice with the box origin at -T/2.
inline double center_sign(const GridSpec& g, std::size_t idx) {
  auto c = g.coords(idx);
  int s = 0;
  for (int a = 0; a < g.dim; ++a) s += c[a];
  return (s & 1) ? -1.0 : 1.0;
}
}  // namespace detail

/// Trapezoidal approximation of F f(xi) = \int e^{-i x.xi} f(x) dx on the
/// frequency lattice (scaled DFT).
inline Field dft(const Field& f) {
  require_space(f, Space::physical);
  Field out(f.grid, Space::frequency);
  const GridSpec& g = f.grid;
  out.v = f.v;
  for (std::size_t i = 0; i < out.v.size(); ++i)
    out.v[i] *= detail::center_sign(g, i);
  detail::fft_all(out.v, g.dim, g.pts, -1);
  double scale = std::pow(g.step(), g.dim);
  for (std::size_t i = 0; i < out.v.size(); ++i)
    out.v[i] *= scale * detail::center_sign(g, i);
  return out;
}

/// Inverse transform, carrying the (2*pi)^{-n} of the convention.
inline Field idft(const Field& F) {
  require_space(F, Space::frequency);
  Field out(F.grid, Space::physical);
  const GridSpec& g = F.grid;
  out.v = F.v;
  for (std::size_t i = 0; i < out.v.size(); ++i)
    out.v[i] *= detail::center_sign(g, i);
  detail::fft_all(out.v, g.dim, g.pts, +1);
  double scale = std::pow(1.0 / g.extent, g.dim);
  for (std::size_t i = 0; i < out.v.size(); ++i)
    out.v[i] *= scale * detail::center_sign(g, i);
  return out;
}

/// m(D) f = F^{-1}[ m . F f ]. Accepts a physical-space field.
template <class M>
Field multiplier_apply(const M& m, const Field& f) {
  require_space(f, Space::physical);
  Field F = dft(f);
  for (std::size_t i = 0; i < F.size(); ++i)
    F.v[i] *= cplx(m(F.grid.xi_of(i)));
  return idft(F);
}

/// Periodic convolution scaled by the quadrature weight, approximating
/// \int f(x-y) g(y) dy.
inline Field convolve(const Field& f, const Field& g) {
  require_same_grid(f, g);
  require_space(f, Space::physical);
  require_space(g, Space::physical);
  Field F = dft(f);
  Field G = dft(g);
  for (std::size_t i = 0; i < F.size(); ++i) F.v[i] *= G.v[i];
  return idft(F);
}

inline Field operator+(const Field& a, const Field& b) {
  require_same_grid(a, b);
  if (a.space != b.space) throw std::invalid_argument("space mismatch");
  Field r = a;
  for (std::size_t i = 0; i < r.size(); ++i) r.v[i] += b.v[i];
  return r;
}

inline Field operator-(const Field& a, const Field& b) {
  require_same_grid(a, b);
  if (a.space != b.space) throw std::invalid_argument("space mismatch");
  Field r = a;
  for (std::size_t i = 0; i < r.size(); ++i) r.v[i] -= b.v[i];
  return r;
}

inline Field operator*(cplx c, const Field& a) {
  Field r = a;
  for (auto& z : r.v) z *= c;
  return r;
}

/// Pointwise product of physical-space fields.
inline Field pointwise(const Field& a, const Field& b) {
  require_same_grid(a, b);
  Field r = a;
  for (std::size_t i = 0; i < r.size(); ++i) r.v[i] *= b.v[i];
  return r;
}

inline double max_abs(const Field& f) {
  double m = 0.0;
  for (const auto& z : f.v) m = std::max(m, std::abs(z));
  return m;
}

inline double max_abs_diff(const Field& a, const Field& b) {
  require_same_grid(a, b);
  double m = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i)
    m = std::max(m, std::abs(a.v[i] - b.v[i]));
  return m;
}

/// Riemann-sum L^2 norm (fixed-order compensated reduction).
inline double l2_norm(const Field& f) {
  Accum acc;
  for (const auto& z : f.v) acc.add(std::norm(z));
  double cell = std::pow(f.space == Space::physical ? f.grid.step()
                                                    : f.grid.freq_step(),
                         f.grid.dim);
  return std::sqrt(acc.value() * cell);
}

/// Reinterprets samples as living on a dilated box: g(x) = f(lambda x)
/// sampled on extent T/lambda. Sample values are unchanged.
inline Field dilate_reinterpret(const Field& f, double new_extent) {
  Field r = f;
  r.grid.extent = new_extent;
  return r;
}

}  // namespace bilinpdo

#endif
