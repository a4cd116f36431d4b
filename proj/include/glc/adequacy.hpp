#pragma once

// The stage-indexed relation between semantic elements and closed terms:
// an element of A at stage i is related to a closed term when the term
// evaluates to a value whose shape matches the element, recursively.
// Function types quantify over sampled related argument pairs; boxed types
// compare sections against the substituted body at stages up to i + 2.
//
// Every recursive call is instrumented with the lexicographic measure
// (box nesting of the type, stage, later-erased type size) so the
// termination argument is checked on every run, not assumed.

#include <optional>
#include <string>

#include "glc/denote.hpp"
#include "glc/eval.hpp"
#include "glc/syntax.hpp"

namespace glc {

struct RelStats {
  long calls = 0;        // recursive rel invocations
  long metric_checks = 0;  // parent/child measure comparisons
  long metric_violations = 0;
  std::string first_violation;
};

struct RelResult {
  bool related = false;
  std::string witness;  // first failing observation when unrelated
};

// Is the stage-i element a related to the closed elaborated term t at A?
// Throws EvalFailure when evaluation exceeds the budget or sticks, so an
// inconclusive run can never masquerade as a positive one.
RelResult rel(const TypePtr& A, int i, const Sem& a, const TermPtr& t,
              RelStats* stats = nullptr, long budget = kDefaultBudget);

struct AdequacyReport {
  bool pass = false;
  bool exact = false;  // no function/box sampling was involved
  std::string detail;  // witness on failure
  RelStats stats;
};

// Check that the denotation of t at stage i is related to t itself.
AdequacyReport check_fundamental(const TypePtr& A, const TermPtr& t, int i,
                                 long budget = kDefaultBudget);

// For closed Nat-typed terms: denotation equals the evaluated numeral.
AdequacyReport check_adequacy_nat(const TermPtr& t, int i,
                                  long budget = kDefaultBudget);

}  // namespace glc
