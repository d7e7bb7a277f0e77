#ifndef BILINPDO_SLOPE_HPP
#define BILINPDO_SLOPE_HPP

#include <cmath>
#include <stdexcept>
#include <vector>

namespace bilinpdo {

/// Least-squares slope of y against x.
inline double fit_slope(const std::vector<double>& x,
                        const std::vector<double>& y) {
  if (x.size() != y.size() || x.size() < 2)
    throw std::invalid_argument("fit_slope: need >= 2 matched points");
  double n = static_cast<double>(x.size());
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sx += x[i];
    sy += y[i];
    sxx += x[i] * x[i];
    sxy += x[i] * y[i];
  }
  double den = n * sxx - sx * sx;
  if (den == 0.0) throw std::invalid_argument("fit_slope: degenerate x");
  return (n * sxy - sx * sy) / den;
}

/// Slope of log2(y) against log2(x); every y must be positive.
inline double fit_loglog_slope(const std::vector<double>& x,
                               const std::vector<double>& y) {
  std::vector<double> lx(x.size()), ly(y.size());
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (!(x[i] > 0.0) || !(y[i] > 0.0))
      throw std::invalid_argument("fit_loglog_slope: needs positive data");
    lx[i] = std::log2(x[i]);
    ly[i] = std::log2(y[i]);
  }
  return fit_slope(lx, ly);
}

}  // namespace bilinpdo

#endif
