#pragma once

#include <stdexcept>
#include <string>

namespace stable_euler {

// Precondition violations use std::invalid_argument; the types below carry
// numerical failures that callers may want to tell apart.

class QuadratureFailure : public std::runtime_error {
 public:
  explicit QuadratureFailure(const std::string& what) : std::runtime_error(what) {}
};

class CertificationFailure : public std::runtime_error {
 public:
  explicit CertificationFailure(const std::string& what) : std::runtime_error(what) {}
};

class NonConvergence : public std::runtime_error {
 public:
  explicit NonConvergence(const std::string& what) : std::runtime_error(what) {}
};

class MassDefectBreach : public std::runtime_error {
 public:
  explicit MassDefectBreach(const std::string& what) : std::runtime_error(what) {}
};

class GridMismatch : public std::runtime_error {
 public:
  explicit GridMismatch(const std::string& what) : std::runtime_error(what) {}
};

class DegenerateInput : public std::runtime_error {
 public:
  explicit DegenerateInput(const std::string& what) : std::runtime_error(what) {}
};

class ConfigError : public std::runtime_error {
 public:
  ConfigError(std::string key, const std::string& what)
      : std::runtime_error(key.empty() ? what : key + ": " + what), key_(std::move(key)) {}
  const std::string& key() const noexcept { return key_; }

 private:
  std::string key_;
};

}  // namespace stable_euler
