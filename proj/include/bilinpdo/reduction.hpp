#ifndef BILINPDO_REDUCTION_HPP
#define BILINPDO_REDUCTION_HPP

#include <cmath>
#include <complex>

namespace bilinpdo {

/// Neumaier compensated accumulator. All norm and pairing reductions run
/// through this in a fixed lexicographic order, so totals are reproducible
/// independent of thread count.
class Accum {
 public:
  void add(double x) {
    double t = sum_ + x;
    if (std::abs(sum_) >= std::abs(x))
      comp_ += (sum_ - t) + x;
    else
      comp_ += (x - t) + sum_;
    sum_ = t;
  }
  double value() const { return sum_ + comp_; }

 private:
  double sum_ = 0.0;
  double comp_ = 0.0;
};

class CplxAccum {
 public:
  void add(std::complex<double> z) {
    re_.add(z.real());
    im_.add(z.imag());
  }
  std::complex<double> value() const { return {re_.value(), im_.value()}; }

 private:
  Accum re_, im_;
};

}  // namespace bilinpdo

#endif
