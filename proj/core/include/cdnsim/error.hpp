#pragma once

#include <stdexcept>
#include <string>

namespace cdnsim {

/// Coarse failure category; the CLI maps these onto exit codes.
enum class ErrorKind {
  kInvalidInput,  // malformed files, bad parameters, constraint violations
  kInfeasible,    // well-formed request that cannot be satisfied (k > sites)
  kIo,            // file could not be read or written
};

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what) : std::runtime_error(what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

[[noreturn]] void throw_invalid(const std::string& what);
[[noreturn]] void throw_infeasible(const std::string& what);
[[noreturn]] void throw_io(const std::string& what);

}  // namespace cdnsim
