#include "pacebench/monotone_cubic.h"

#include <algorithm>
#include <cmath>
#include <string>

#include "pacebench/error.h"

namespace pacebench {
namespace {

int Sign(double v) { return (v > 0.0) - (v < 0.0); }

// One-sided three-point end slope, kept monotone.
double EndSlope(double h0, double h1, double d0, double d1) {
  double s = ((2.0 * h0 + h1) * d0 - h0 * d1) / (h0 + h1);
  if (Sign(s) != Sign(d0)) {
    s = 0.0;
  } else if (Sign(d0) != Sign(d1) && std::abs(s) > 3.0 * std::abs(d0)) {
    s = 3.0 * d0;
  }
  return s;
}

}  // namespace

MonotoneCubic::MonotoneCubic(std::vector<double> xs, std::vector<double> ys)
    : xs_(std::move(xs)), ys_(std::move(ys)) {
  const size_t n = xs_.size();
  if (n < 2 || ys_.size() != n) {
    throw Error(ErrorCode::kDegenerateCurve,
                "interpolation needs at least 2 matching knots, got " + std::to_string(n));
  }
  for (size_t i = 0; i < n; ++i) {
    if (!std::isfinite(xs_[i]) || !std::isfinite(ys_[i])) {
      throw Error(ErrorCode::kDegenerateCurve, "non-finite knot");
    }
    if (i > 0 && !(xs_[i] > xs_[i - 1])) {
      throw Error(ErrorCode::kDegenerateCurve, "knots must be strictly increasing");
    }
  }

  std::vector<double> h(n - 1), delta(n - 1);
  for (size_t i = 0; i + 1 < n; ++i) {
    h[i] = xs_[i + 1] - xs_[i];
    delta[i] = (ys_[i + 1] - ys_[i]) / h[i];
  }

  slopes_.assign(n, 0.0);
  if (n == 2) {
    slopes_[0] = slopes_[1] = delta[0];
    return;
  }
  for (size_t k = 1; k + 1 < n; ++k) {
    const double d_prev = delta[k - 1];
    const double d_next = delta[k];
    if (Sign(d_prev) * Sign(d_next) <= 0) continue;  // extremum or plateau
    const double w1 = 2.0 * h[k] + h[k - 1];
    const double w2 = h[k] + 2.0 * h[k - 1];
    slopes_[k] = (w1 + w2) / (w1 / d_prev + w2 / d_next);
  }
  slopes_[0] = EndSlope(h[0], h[1], delta[0], delta[1]);
  slopes_[n - 1] = EndSlope(h[n - 2], h[n - 3], delta[n - 2], delta[n - 3]);
}

double MonotoneCubic::operator()(double x) const {
  const double span = xs_.back() - xs_.front();
  const double slack = 1e-12 * std::max(span, std::abs(xs_.back()));
  if (!(x >= xs_.front() - slack && x <= xs_.back() + slack)) {
    throw Error(ErrorCode::kExtrapolation,
                "refusing to extrapolate at " + std::to_string(x) + " outside [" +
                    std::to_string(xs_.front()) + ", " + std::to_string(xs_.back()) + "]");
  }
  x = std::clamp(x, xs_.front(), xs_.back());

  auto upper = std::upper_bound(xs_.begin(), xs_.end(), x);
  size_t i = static_cast<size_t>(upper - xs_.begin());
  i = std::clamp<size_t>(i, 1, xs_.size() - 1) - 1;

  const double h = xs_[i + 1] - xs_[i];
  const double t = (x - xs_[i]) / h;
  const double t2 = t * t;
  const double t3 = t2 * t;
  const double h00 = 2.0 * t3 - 3.0 * t2 + 1.0;
  const double h10 = t3 - 2.0 * t2 + t;
  const double h01 = -2.0 * t3 + 3.0 * t2;
  const double h11 = t3 - t2;
  return h00 * ys_[i] + h10 * h * slopes_[i] + h01 * ys_[i + 1] +
         h11 * h * slopes_[i + 1];
}

}  // namespace pacebench
