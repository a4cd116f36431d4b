#pragma once

// Small-step call-by-name operational semantics. A closed term decomposes
// into at most one evaluation context around a redex; step performs that
// unique contraction. eval iterates under a step budget, optionally keeping
// the whole trace.

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "glc/syntax.hpp"

namespace glc {

bool is_value(const TermPtr& t);

enum class FrameKind {
  SuccArg,
  ProjArg,
  AppFun,
  UnfoldArg,
  PrevBody,     // only for the empty-substitution form
  UnboxArg,
  LaterAppFun,
  LaterAppArg,  // only once the function side is a value
  AbortArg,
  CaseScrut,
  BoxSumBody,   // only for the empty-substitution form
  PrimLeft,
  PrimRight,    // only once the left side is a value
};

struct Frame {
  FrameKind kind;
  TermPtr host;  // original node; plugging replaces the focused child
};

struct Decomposition {
  enum class Kind { Value, Redex, Stuck } kind;
  std::vector<Frame> frames;  // outermost first
  TermPtr focus;              // the redex / stuck subterm
  std::string reason;         // why the focus is stuck
};

Decomposition decompose(const TermPtr& t);
TermPtr plug(const std::vector<Frame>& frames, TermPtr inner);

// Contract a redex (the focus of a Redex decomposition).
TermPtr contract(const TermPtr& redex);

struct StepResult {
  enum class Kind { Stepped, Value, Stuck } kind;
  TermPtr term;  // the stepped term, or the input for Value/Stuck
  std::string reason;
};

StepResult step(const TermPtr& t);

struct EvalResult {
  enum class Kind { Value, Budget, Stuck } kind;
  TermPtr term;  // final term reached
  long steps = 0;
  std::string reason;
  std::vector<TermPtr> trace;  // t0 .. tn when requested
};

inline constexpr long kDefaultBudget = 1000000;

EvalResult eval(const TermPtr& t, long budget = kDefaultBudget,
                bool keep_trace = false);

struct EvalFailure : std::runtime_error {
  bool out_of_budget;
  EvalFailure(bool budget, const std::string& msg)
      : std::runtime_error(msg), out_of_budget(budget) {}
};

// Force the first n elements of a closed guarded stream (fold of a pair of
// a numeral head and a later tail). Throws EvalFailure if evaluation runs
// out of budget or sticks.
std::vector<uint64_t> force_guarded_stream(const TermPtr& s, int n,
                                           long budget = kDefaultBudget);

// Same for a boxed stream: heads are read through unbox, tails by reboxing
// the previous tail.
std::vector<uint64_t> force_coinductive_stream(const TermPtr& s, int n,
                                               long budget = kDefaultBudget);

}  // namespace glc
