#ifndef PACEBENCH_MONOTONE_CUBIC_H_
#define PACEBENCH_MONOTONE_CUBIC_H_

#include <span>
#include <vector>

namespace pacebench {

// Shape-preserving piecewise cubic Hermite interpolant (Fritsch-Butland
// slopes). Interior slopes are the weighted harmonic mean of the adjacent
// secants, zero where the data has a local extremum or plateau. End slopes
// use the one-sided three-point estimate, clamped so the end intervals stay
// monotone. Two knots give the straight line.
//
// The interpolant is exact at the knots and stays within the range of the
// two knots bracketing any query.
class MonotoneCubic {
 public:
  // |xs| strictly increasing, at least two knots. Throws kDegenerateCurve.
  MonotoneCubic(std::vector<double> xs, std::vector<double> ys);

  // Throws kExtrapolation outside [x_min, x_max].
  double operator()(double x) const;

  double x_min() const { return xs_.front(); }
  double x_max() const { return xs_.back(); }
  std::span<const double> knots() const { return xs_; }
  std::span<const double> slopes() const { return slopes_; }

 private:
  std::vector<double> xs_;
  std::vector<double> ys_;
  std::vector<double> slopes_;
};

}  // namespace pacebench

#endif  // PACEBENCH_MONOTONE_CUBIC_H_
