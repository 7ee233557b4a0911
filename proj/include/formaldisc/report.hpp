#pragma once

#include <string>

namespace formaldisc {

/// Outcome of a verification check. A mismatch is data, not an exception:
/// the first counterexample is kept verbatim for the report.
struct CheckReport {
  std::string name;
  bool pass = true;
  long trials = 0;
  std::string first_counterexample;

  void fail(const std::string& witness) {
    if (pass) {
      pass = false;
      first_counterexample = witness;
    }
  }
  explicit operator bool() const { return pass; }
};

}  // namespace formaldisc
