#pragma once

#include <stdexcept>
#include <string>

namespace morl {

enum class ErrorCode {
  InvalidArgument = 1,
  Parse = 2,
  Schema = 3,
  Io = 4,
  Domain = 5,
  Internal = 6,
};

/// Every failure raised by the library carries a category so the C layer can
/// translate it into a status code without string matching.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what) : std::runtime_error(what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

[[noreturn]] inline void fail(ErrorCode code, const std::string& what) { throw Error(code, what); }

}  // namespace morl
