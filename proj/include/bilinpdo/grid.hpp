#ifndef BILINPDO_GRID_HPP
#define BILINPDO_GRID_HPP

#include <array>
#include <cmath>
#include <complex>
#include <cstdint>
#include <numbers>
#include <stdexcept>
#include <string>

namespace bilinpdo {

using cplx = std::complex<double>;
inline constexpr double kPi = std::numbers::pi;
inline constexpr double kTwoPi = 2.0 * std::numbers::pi;

/// A point in R^n, n <= 2. Unused components stay zero.
using Point = std::array<double, 2>;

inline double norm2(const Point& p, int dim) {
  double s = 0.0;
  for (int a = 0; a < dim; ++a) s += p[a] * p[a];
  return std::sqrt(s);
}

/// Euclidean length of the concatenated pair (p, q) in R^{2n}.
inline double norm2_pair(const Point& p, const Point& q, int dim) {
  double s = 0.0;
  for (int a = 0; a < dim; ++a) s += p[a] * p[a] + q[a] * q[a];
  return std::sqrt(s);
}

inline bool is_pow2(int n) { return n > 0 && (n & (n - 1)) == 0; }

/// Uniform periodic sampling lattice on the box [-T/2, T/2)^dim with N
/// points per axis. The frequency lattice is {2*pi*k/T : -N/2 <= k < N/2}.
struct GridSpec {
  int dim = 1;
  double extent = 16.0;  // box edge length T
  int pts = 64;          // N per axis

  GridSpec() = default;
  GridSpec(int dim_, double extent_, int pts_)
      : dim(dim_), extent(extent_), pts(pts_) {
    validate();
  }

  void validate() const {
    if (dim != 1 && dim != 2)
      throw std::invalid_argument("GridSpec: dim must be 1 or 2");
    if (!(extent > 0.0))
      throw std::invalid_argument("GridSpec: extent must be positive");
    if (!is_pow2(pts) || pts < 8)
      throw std::invalid_argument("GridSpec: pts must be a power of two >= 8");
  }

  std::size_t total() const {
    std::size_t t = 1;
    for (int a = 0; a < dim; ++a) t *= static_cast<std::size_t>(pts);
    return t;
  }

  double step() const { return extent / pts; }          // sample spacing
  double freq_step() const { return kTwoPi / extent; }  // lattice spacing
  double nyquist() const { return kPi * pts / extent; } // max |xi| per axis

  bool integer_extent() const {
    return std::abs(extent - std::round(extent)) < 1e-12 && extent >= 1.0;
  }

  /// Decompose a flat index into per-axis indices (row-major).
  std::array<int, 2> coords(std::size_t idx) const {
    std::array<int, 2> c{0, 0};
    if (dim == 1) {
      c[0] = static_cast<int>(idx);
    } else {
      c[0] = static_cast<int>(idx / static_cast<std::size_t>(pts));
      c[1] = static_cast<int>(idx % static_cast<std::size_t>(pts));
    }
    return c;
  }

  std::size_t flat(const std::array<int, 2>& c) const {
    if (dim == 1) return static_cast<std::size_t>(c[0]);
    return static_cast<std::size_t>(c[0]) * pts + static_cast<std::size_t>(c[1]);
  }

  /// Physical coordinates of a sample.
  Point x_of(std::size_t idx) const {
    auto c = coords(idx);
    Point p{0.0, 0.0};
    for (int a = 0; a < dim; ++a) p[a] = -extent / 2 + c[a] * step();
    return p;
  }

  /// Frequency lattice point of a sample (ascending-k storage order).
  Point xi_of(std::size_t idx) const {
    auto c = coords(idx);
    Point p{0.0, 0.0};
    for (int a = 0; a < dim; ++a) p[a] = freq_step() * (c[a] - pts / 2);
    return p;
  }

  bool operator==(const GridSpec& o) const {
    return dim == o.dim && extent == o.extent && pts == o.pts;
  }
  bool operator!=(const GridSpec& o) const { return !(*this == o); }
};

}  // namespace bilinpdo

#endif
