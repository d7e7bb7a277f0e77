#ifndef BILINPDO_FFT_HPP
#define BILINPDO_FFT_HPP

#include <cmath>
#include <complex>
#include <numbers>
#include <stdexcept>
#include <vector>

namespace bilinpdo::detail {

/// In-place iterative radix-2 transform of a contiguous line.
/// sign = -1: sum_j a_j e^{-2*pi*i*jk/n}; sign = +1: conjugate kernel.
/// No scaling is applied. n must be a power of two.
inline void fft_pow2(std::complex<double>* a, int n, int sign) {
  if (n <= 1) return;
  if (n & (n - 1)) throw std::invalid_argument("fft_pow2: n not a power of two");
  // bit reversal
  for (int i = 1, j = 0; i < n; ++i) {
    int bit = n >> 1;
    for (; j & bit; bit >>= 1) j ^= bit;
    j ^= bit;
    if (i < j) std::swap(a[i], a[j]);
  }
  for (int len = 2; len <= n; len <<= 1) {
    double ang = sign * 2.0 * std::numbers::pi / len;
    for (int i = 0; i < n; i += len) {
      for (int k = 0; k < len / 2; ++k) {
        std::complex<double> w = std::polar(1.0, ang * k);
        std::complex<double> u = a[i + k];
        std::complex<double> v = a[i + k + len / 2] * w;
        a[i + k] = u + v;
        a[i + k + len / 2] = u - v;
      }
    }
  }
}

/// Transform along one axis of a row-major array with the given shape.
inline void fft_axis_shaped(std::vector<std::complex<double>>& a,
                            const std::vector<int>& shape, int axis,
                            int sign) {
  std::size_t total = a.size();
  int n = shape[axis];
  std::size_t stride = 1;
  for (std::size_t d = shape.size() - 1; static_cast<int>(d) > axis; --d)
    stride *= static_cast<std::size_t>(shape[d]);
  std::size_t block = stride * static_cast<std::size_t>(n);
  std::vector<std::complex<double>> line(static_cast<std::size_t>(n));
  for (std::size_t base = 0; base < total; base += block) {
    for (std::size_t off = 0; off < stride; ++off) {
      for (int j = 0; j < n; ++j) line[j] = a[base + off + j * stride];
      fft_pow2(line.data(), n, sign);
      for (int j = 0; j < n; ++j) a[base + off + j * stride] = line[j];
    }
  }
}

/// Transform along one axis of a row-major hypercube array with `ndims`
/// axes of length n each.
inline void fft_axis(std::vector<std::complex<double>>& a, int ndims, int n,
                     int axis, int sign) {
  std::vector<int> shape(static_cast<std::size_t>(ndims), n);
  fft_axis_shaped(a, shape, axis, sign);
}

/// Full transform of all `ndims` axes.
inline void fft_all(std::vector<std::complex<double>>& a, int ndims, int n,
                    int sign) {
  for (int axis = 0; axis < ndims; ++axis) fft_axis(a, ndims, n, axis, sign);
}

}  // namespace bilinpdo::detail

#endif
