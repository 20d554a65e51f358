#pragma once

#include <stdexcept>
#include <string>

namespace mpc {

// Broad failure classes; the CLI maps each onto an exit code.
enum class ErrorKind {
  invalid_argument,
  too_large,
  no_such_window,
  format,
  internal,
};

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

namespace detail {

[[noreturn]] inline void fail(ErrorKind kind, const std::string& what) {
  throw Error(kind, what);
}

inline void require(bool ok, const std::string& what) {
  if (!ok) fail(ErrorKind::invalid_argument, what);
}

}  // namespace detail
}  // namespace mpc
