#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace npcgm {

// One violated invariant; kind is a stable machine-readable tag.
struct Violation {
  std::string kind;
  std::string detail;
};

class Error : public std::runtime_error {
 public:
  Error(std::string kind, const std::string& detail)
      : std::runtime_error(kind + ": " + detail), kind_(std::move(kind)) {}

  const std::string& kind() const { return kind_; }

 private:
  std::string kind_;
};

// Input validation failure carrying every violation found, not just the first.
class ValidationError : public Error {
 public:
  explicit ValidationError(std::vector<Violation> violations)
      : Error(violations.empty() ? "Invalid" : violations.front().kind, join(violations)),
        violations_(std::move(violations)) {}

  const std::vector<Violation>& violations() const { return violations_; }

 private:
  static std::string join(const std::vector<Violation>& vs) {
    std::string s;
    for (const auto& v : vs) {
      if (!s.empty()) s += "; ";
      s += v.kind + " (" + v.detail + ")";
    }
    return s;
  }

  std::vector<Violation> violations_;
};

}  // namespace npcgm
