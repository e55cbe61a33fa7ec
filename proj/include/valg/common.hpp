#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

namespace valg {

// Execution policy for the data-parallel kernels. `serial` runs the reference
// implementation, `parallel` the OpenMP one; results are identical.
enum class Exec { serial, parallel };

class Error : public std::runtime_error {
 public:
  Error(std::string code, const std::string& message)
      : std::runtime_error(code + ": " + message), code_(std::move(code)) {}

  const std::string& code() const { return code_; }

 private:
  std::string code_;
};

[[noreturn]] inline void fail(const std::string& code, const std::string& message) {
  throw Error(code, message);
}

}  // namespace valg
