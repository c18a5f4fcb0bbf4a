#pragma once

#include <stdexcept>
#include <string>

namespace egocap {

// Bad or inconsistent inputs (files, configs, argument ranges). CLI exit code 2.
struct InputError : std::runtime_error {
  explicit InputError(const std::string& msg) : std::runtime_error(msg) {}
};

// Non-finite values or failed numeric procedures. CLI exit code 3.
struct NumericError : std::runtime_error {
  explicit NumericError(const std::string& msg) : std::runtime_error(msg) {}
};

// Pixel or point outside the modeled field of view.
struct OutOfFovError : InputError {
  explicit OutOfFovError(const std::string& msg) : InputError(msg) {}
};

}  // namespace egocap
