#pragma once

#include <cmath>

namespace sumlab {

// Neumaier-compensated accumulator. Long scans (horizons up to 1e9) add many
// small residuals to a large running sum; the compensation term recovers the
// low-order bits a plain += would drop.
class CompensatedSum {
 public:
  void add(double x) {
    const double t = sum_ + x;
    if (std::abs(sum_) >= std::abs(x)) {
      comp_ += (sum_ - t) + x;
    } else {
      comp_ += (x - t) + sum_;
    }
    sum_ = t;
  }

  double value() const { return sum_ + comp_; }

  void reset() {
    sum_ = 0.0;
    comp_ = 0.0;
  }

 private:
  double sum_ = 0.0;
  double comp_ = 0.0;
};

}  // namespace sumlab
