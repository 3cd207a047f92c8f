#pragma once

#include <string>
#include <utility>
#include <vector>

namespace sqtsp {

/// Verdict of one named structural check on one instance.
struct Check {
  std::string name;
  bool passed = true;
  std::string witness;  // first counterexample, empty when passed

  friend bool operator==(const Check&, const Check&) = default;
};

/// Accumulates verdicts; repeated names are folded (a check fails if any
/// occurrence fails, and keeps the first witness).
class CheckList {
 public:
  void record(const std::string& name, bool ok, const std::string& witness = {}) {
    for (auto& c : checks_)
      if (c.name == name) {
        if (!ok && c.passed) {
          c.passed = false;
          c.witness = witness;
        }
        return;
      }
    checks_.push_back({name, ok, ok ? std::string() : witness});
  }

  void merge(const std::vector<Check>& other, const std::string& witness_prefix = {}) {
    for (const auto& c : other) record(c.name, c.passed, witness_prefix + c.witness);
  }

  bool all_passed() const {
    for (const auto& c : checks_)
      if (!c.passed) return false;
    return true;
  }

  const Check* find(const std::string& name) const {
    for (const auto& c : checks_)
      if (c.name == name) return &c;
    return nullptr;
  }

  const std::vector<Check>& items() const noexcept { return checks_; }
  std::vector<Check> release() && { return std::move(checks_); }

 private:
  std::vector<Check> checks_;
};

}  // namespace sqtsp
