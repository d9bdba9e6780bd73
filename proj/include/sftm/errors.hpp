#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace sftm {

// Referential or unit-range breakage while building model objects
// (duplicate ids, unknown endpoints, negative units, ...).
class ModelError : public std::runtime_error {
public:
  explicit ModelError(const std::string& what) : std::runtime_error(what) {}
};

// Scenario-level inconsistency: carries the full list of problems so a
// caller can show them all at once instead of one per run.
class ScenarioError : public std::runtime_error {
public:
  ScenarioError(const std::string& what, std::vector<std::string> issues)
      : std::runtime_error(what), issues_(std::move(issues)) {}

  const std::vector<std::string>& issues() const noexcept { return issues_; }

private:
  std::vector<std::string> issues_;
};

// Malformed input file: syntax errors (with line/column context) or
// schema problems such as unknown fields and wrong value types.
class ParseError : public std::runtime_error {
public:
  explicit ParseError(const std::string& what) : std::runtime_error(what) {}
};

// Solver/validator configuration problem, e.g. a sensor modality with no
// entry in the per-modality link requirement table.
class ConfigError : public std::runtime_error {
public:
  explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

// Scenario generation refused or failed (contradictory parameters).
class GenError : public std::runtime_error {
public:
  explicit GenError(const std::string& what) : std::runtime_error(what) {}
};

// Exhaustive enumeration refused because the placement space exceeds the
// configured cap.
class ExplosionCapError : public std::runtime_error {
public:
  explicit ExplosionCapError(const std::string& what) : std::runtime_error(what) {}
};

} // namespace sftm
