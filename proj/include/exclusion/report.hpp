#pragma once

#include <algorithm>
#include <iomanip>
#include <ostream>
#include <string>
#include <vector>

namespace exclusion {

struct CheckResult {
  std::string name;
  bool passed = true;
  double measured = 0.0;  // worst observed deviation / count, check dependent
  double bound = 0.0;     // threshold the measurement was held to
  std::string detail;
};

/// Ordered list of named pass/fail checks.
struct VerificationReport {
  std::vector<CheckResult> checks;

  bool passed() const {
    return std::all_of(checks.begin(), checks.end(), [](const CheckResult& c) { return c.passed; });
  }

  CheckResult& add(std::string name, bool passed, double measured = 0.0, double bound = 0.0,
                   std::string detail = {}) {
    checks.push_back({std::move(name), passed, measured, bound, std::move(detail)});
    return checks.back();
  }

  void append(const VerificationReport& other, const std::string& prefix = {}) {
    for (auto c : other.checks) {
      c.name = prefix + c.name;
      checks.push_back(std::move(c));
    }
  }

  std::vector<const CheckResult*> failures() const {
    std::vector<const CheckResult*> out;
    for (const auto& c : checks)
      if (!c.passed) out.push_back(&c);
    return out;
  }
};

inline void print_table(std::ostream& os, const VerificationReport& r) {
  std::size_t width = 5;
  for (const auto& c : r.checks) width = std::max(width, c.name.size());
  for (const auto& c : r.checks) {
    os << (c.passed ? "PASS  " : "FAIL  ") << std::left << std::setw(static_cast<int>(width)) << c.name
       << std::right << "  measured=" << std::setprecision(6) << c.measured << "  bound=" << c.bound;
    if (!c.detail.empty()) os << "  " << c.detail;
    os << '\n';
  }
}

}  // namespace exclusion
