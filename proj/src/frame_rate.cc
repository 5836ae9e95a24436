#include "pacebench/frame_rate.h"

#include <charconv>

#include "pacebench/error.h"

namespace pacebench {
namespace {

int64_t ParseTerm(std::string_view text, std::string_view whole) {
  int64_t value = 0;
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc() || ptr != text.data() + text.size() || text.empty()) {
    throw Error(ErrorCode::kInvalidRate,
                "malformed frame rate '" + std::string(whole) + "'");
  }
  return value;
}

}  // namespace

std::string FrameRate::ToString() const {
  if (den == 1) return std::to_string(num);
  return std::to_string(num) + "/" + std::to_string(den);
}

FrameRate FrameRate::Parse(std::string_view text) {
  FrameRate rate;
  const auto sep = text.find_first_of("/:");
  if (sep == std::string_view::npos) {
    rate.num = ParseTerm(text, text);
    rate.den = 1;
  } else {
    rate.num = ParseTerm(text.substr(0, sep), text);
    rate.den = ParseTerm(text.substr(sep + 1), text);
  }
  FrameInterval(rate.num, rate.den);  // validates
  return rate;
}

double FrameInterval(int64_t fps_num, int64_t fps_den) {
  if (fps_num <= 0 || fps_den <= 0) {
    throw Error(ErrorCode::kInvalidRate,
                "frame rate terms must be positive, got " +
                    std::to_string(fps_num) + "/" + std::to_string(fps_den));
  }
  return static_cast<double>(fps_den) / static_cast<double>(fps_num);
}

}  // namespace pacebench
