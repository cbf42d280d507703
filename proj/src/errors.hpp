#pragma once

#include <stdexcept>
#include <string>

namespace spinwig {

enum class ErrorCode {
  InvalidArgument = 1,
  Parse = 2,
  ZeroState = 3,
  NotConverged = 4,
  UnknownName = 5,
  GridMismatch = 6,
  UnderResolved = 7,
};

class Error : public std::runtime_error {
public:
  Error(ErrorCode code, const std::string &what)
      : std::runtime_error(what), code_(code) {}
  ErrorCode code() const noexcept { return code_; }

private:
  ErrorCode code_;
};

} // namespace spinwig
