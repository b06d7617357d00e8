#pragma once

#include <stdexcept>
#include <string>
#include <utility>

namespace zic {

enum class ErrorCode {
  InvalidArgument,
  Domain,
  DimensionMismatch,
  Parse,
  RankDeficient,
  AllZeroResponse,
  DatasetMismatch,
  Generation,
  Io,
  Internal,
};

/// Library-wide exception carrying a stable error code alongside the message.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, std::string msg)
      : std::runtime_error(std::move(msg)), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

[[noreturn]] inline void throw_error(ErrorCode code, const std::string& msg) {
  throw Error(code, msg);
}

const char* error_code_name(ErrorCode code) noexcept;

}  // namespace zic
