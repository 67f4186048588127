#pragma once

#include <stdexcept>
#include <string>

namespace tensoray {

// Configuration / validation problem. The CLI maps this to exit code 2.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// File I/O problem. The CLI maps this to exit code 3.
class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace tensoray
