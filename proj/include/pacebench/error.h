#ifndef PACEBENCH_ERROR_H_
#define PACEBENCH_ERROR_H_

#include <stdexcept>
#include <string>
#include <string_view>

namespace pacebench {

// Failure classes. The CLI maps each class to a fixed exit status, so
// adding a code means updating ExitStatusFor() as well.
enum class ErrorCode {
  kInvalidGeometry,
  kParse,
  kTruncated,
  kValidation,
  kInvalidRate,
  kInvalidInput,
  kSinkClosed,
  kDeliveryAborted,
  kTemplate,
  kSpawn,
  kProcess,
  kEmptyGroup,
  kSchema,
  kRange,
  kDuplicatePoint,
  kInsufficientData,
  kDegenerateCurve,
  kNoOverlap,
  kExtrapolation,
  kConfig,
  kRankingUnavailable,
  kIo,
  kUsage,
};

std::string_view ErrorCodeName(ErrorCode code);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(message), code_(code) {}

  ErrorCode code() const { return code_; }

 private:
  ErrorCode code_;
};

// Exit statuses: 1 computation, 2 usage/config, 3 child process.
int ExitStatusFor(ErrorCode code);

}  // namespace pacebench

#endif  // PACEBENCH_ERROR_H_
