#ifndef PACEBENCH_FRAME_RATE_H_
#define PACEBENCH_FRAME_RATE_H_

#include <cstdint>
#include <string>
#include <string_view>

namespace pacebench {

// Frame rate as an exact ratio, e.g. 30000/1001.
struct FrameRate {
  int64_t num = 0;
  int64_t den = 1;

  double fps() const { return static_cast<double>(num) / static_cast<double>(den); }

  // "25" when den == 1, "30000/1001" otherwise.
  std::string ToString() const;

  // Accepts "n/d", "n:d" or a bare integer. Throws kInvalidRate.
  static FrameRate Parse(std::string_view text);

  friend bool operator==(const FrameRate&, const FrameRate&) = default;
};

// Seconds between consecutive frames, den / num. Throws kInvalidRate when
// either term is not positive.
double FrameInterval(int64_t fps_num, int64_t fps_den);
inline double FrameInterval(const FrameRate& rate) {
  return FrameInterval(rate.num, rate.den);
}

}  // namespace pacebench

#endif  // PACEBENCH_FRAME_RATE_H_
