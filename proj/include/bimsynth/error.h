#ifndef BIMSYNTH_ERROR_H_
#define BIMSYNTH_ERROR_H_

#include <stdexcept>
#include <string>

namespace bimsynth {

enum class ErrorCode {
  kParse,
  kUnknownClass,
  kMissingFile,
  kDegenerateGeometry,
  kDegenerateConfiguration,
  kInvalidArgument,
  kEmptyCameraRig,
  kDimensionMismatch,
  kUnmatchedFiles,
  kAlreadyExists,
  kIo,
  kEmptyInput,
};

const char* error_code_name(ErrorCode code);

// All library failures surface as this exception; `code()` lets callers and
// tests distinguish failure kinds without parsing messages.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(message), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace bimsynth

#endif  // BIMSYNTH_ERROR_H_
