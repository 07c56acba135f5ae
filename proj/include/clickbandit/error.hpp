#pragma once

#include <stdexcept>
#include <string>

namespace clickbandit {

enum class ErrorCode {
  kDomain,       // argument outside its mathematical domain
  kDimension,    // list / vector sizes disagree with the model
  kAmbiguous,    // optimal list is not unique as a set
  kState,        // call sequence violated (update before choose, ...)
  kConfig,       // malformed or invalid experiment config
  kSchema,       // CSV does not match the expected columns
  kIo,           // file could not be read or written
};

// All library failures are reported through this exception type; the C API
// translates the code into a status value.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

[[noreturn]] inline void fail(ErrorCode code, const std::string& what) {
  throw Error(code, what);
}

}  // namespace clickbandit
