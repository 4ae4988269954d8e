#pragma once

#include <chrono>
#include <deque>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace partact {

// Error taxonomy shared by the whole library.  Mathematical check failures
// are never exceptions; they are verdicts inside an AxiomReport.  Exceptions
// are reserved for inputs we cannot even evaluate.

/// Malformed or unresolvable input (bad table, dangling label, wrong shape).
struct SchemaError : std::runtime_error {
  explicit SchemaError(const std::string& what) : std::runtime_error(what) {}
};

/// API misuse: argument outside an operation's stated precondition.
struct ArgumentError : std::runtime_error {
  explicit ArgumentError(const std::string& what) : std::runtime_error(what) {}
};

/// Input is mathematically meaningful but outside the supported class
/// (e.g. a non-unital nonzero ideal where a multiplier inverse is needed).
struct UnsupportedCaseError : std::runtime_error {
  explicit UnsupportedCaseError(const std::string& what) : std::runtime_error(what) {}
};

/// A size guard tripped before the computation was attempted.
struct CapacityError : std::runtime_error {
  explicit CapacityError(const std::string& what) : std::runtime_error(what) {}
};

/// Exact integer arithmetic left the representable range.
struct OverflowError : std::runtime_error {
  explicit OverflowError(const std::string& what) : std::runtime_error(what) {}
};

/// A location where a check failed: the tuple of arrows/elements involved
/// plus a free-form detail (usually the two evaluated sides).
struct Witness {
  std::vector<std::string> where;
  std::string detail;
};

struct CheckResult {
  std::string name;
  bool pass = true;
  long long checked = 0;  // how many instances were swept
  std::vector<Witness> witnesses;
  std::string note;

  void fail(Witness w, size_t keep = 8) {
    pass = false;
    if (witnesses.size() < keep) witnesses.push_back(std::move(w));
  }
};

/// Aggregated verdicts for one verification pass.  `pass` of the whole
/// report means every check passed; witnesses pinpoint each failure.
/// Checks live in a deque so references from `add` stay valid while later
/// checks are appended.
struct AxiomReport {
  std::string subject;
  std::deque<CheckResult> checks;
  double wall_ms = 0.0;

  CheckResult& add(std::string name) {
    checks.emplace_back();
    checks.back().name = std::move(name);
    return checks.back();
  }

  bool passed() const {
    for (auto& c : checks)
      if (!c.pass) return false;
    return true;
  }

  const CheckResult* find(std::string_view name) const {
    for (auto& c : checks)
      if (c.name == name) return &c;
    return nullptr;
  }
};

class Stopwatch {
 public:
  Stopwatch() : _start(std::chrono::steady_clock::now()) {}
  double ms() const {
    auto d = std::chrono::steady_clock::now() - _start;
    return std::chrono::duration<double, std::milli>(d).count();
  }

 private:
  std::chrono::steady_clock::time_point _start;
};

inline std::string join(const std::vector<std::string>& parts, const std::string& sep) {
  std::string out;
  for (size_t i = 0; i < parts.size(); ++i) {
    if (i) out += sep;
    out += parts[i];
  }
  return out;
}

}  // namespace partact
