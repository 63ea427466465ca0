#pragma once

#include <string>
#include <vector>

namespace narrow {

// Clause-by-clause validation outcome. Violations are reported, not thrown;
// iteration everywhere is over sorted keys, so reports are deterministic and
// independent of input insertion order.
struct Violation {
  std::string clause;   // short tag, e.g. "coherence", "club", "clause4"
  std::string witness;  // human-readable witness data
};

struct ValidationReport {
  std::vector<Violation> violations;
  std::vector<std::string> notes;

  bool valid() const { return violations.empty(); }

  void add(std::string clause, std::string witness) {
    violations.push_back(Violation{std::move(clause), std::move(witness)});
  }
  void note(std::string text) { notes.push_back(std::move(text)); }

  std::size_t count(const std::string& clause) const {
    std::size_t n = 0;
    for (const auto& v : violations)
      if (v.clause == clause) ++n;
    return n;
  }

  std::string to_string() const {
    std::string out;
    for (const auto& n : notes) {
      out += "note ";
      out += n;
      out += '\n';
    }
    for (const auto& v : violations) {
      out += "violation ";
      out += v.clause;
      out += ' ';
      out += v.witness;
      out += '\n';
    }
    out += valid() ? "valid\n" : "invalid " + std::to_string(violations.size()) + "\n";
    return out;
  }
};

}  // namespace narrow
