#pragma once

#include <stdexcept>
#include <string>

namespace simeval {

/// Invalid configuration or arguments (bad parameter values, unknown preset, ...).
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Input data that cannot be used: missing files, inconsistent manifests, mismatched dimensions.
class DataError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A computation that is mathematically undefined for the given input (zero variance, ...).
class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace simeval
