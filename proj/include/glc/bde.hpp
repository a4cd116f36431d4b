#pragma once

// Behavioural stream equations: little specs of the form
//
//   bde plus(2) { head = x1 + x2; tail = plus(z1, z2); }
//
// where, inside an equation for f of arity k, x<i> is the head of the i-th
// argument (a number), y<i> is the i-th argument stream delayed by one step,
// z<i> is its tail, rho(b) is the stream b, 0, 0, ..., and calls refer to f
// itself or to previously compiled equations. Each spec compiles to a
// guarded stream function, which can then be lifted to coinductive streams.

#include <stdexcept>
#include <string>
#include <vector>

#include "glc/parser.hpp"
#include "glc/syntax.hpp"

namespace glc {
namespace bde {

struct BTerm;
using BPtr = std::shared_ptr<const BTerm>;

struct BTerm {
  enum class K { X, Y, Z, Num, Add, Mul, Call } k{};
  int idx = 0;  // X/Y/Z argument index, 1-based
  uint64_t num = 0;
  std::string fname;  // Call target ("rho", the spec itself, or an earlier one)
  std::vector<BPtr> args;
  Loc loc;
};

struct BdeSpec {
  std::string name;
  int arity = 0;
  BPtr head, tail;
  Loc loc;
};

// Throws glc::ParseError on malformed input.
std::vector<BdeSpec> parse_bde_file(const std::string& text);

struct SpecError : std::runtime_error {
  Loc loc;
  SpecError(Loc l, const std::string& msg) : std::runtime_error(msg), loc(l) {}
};

struct Compiled {
  std::string name;
  int arity = 0;
  TypePtr type;     // StrG -> ... -> StrG
  TermPtr surface;  // readable fix-form
  TermPtr term;     // elaborated, evaluable
};

struct Registry {
  std::vector<Compiled> items;
  const Compiled* find(const std::string& name) const;
};

// Sort checking: heads are base-sorted over x-variables; tails are
// stream-sorted; argument indices stay within the arity; calls match the
// arity of their target. Throws SpecError with the offending location.
void validate(const BdeSpec& spec, const Registry& reg);

// Compile a validated spec against the registry (which must already contain
// everything the spec calls other than itself and rho).
Compiled compile_guarded(const BdeSpec& spec, const Registry& reg);

// Lift a guarded k-ary stream function to boxed streams by iterating the
// limit combinator. Returns an elaborated term of type #S1 -> ... -> #S.
TermPtr lift_Lk(const TermPtr& g, int k);

struct EqReport {
  bool ok = true;
  long comparisons = 0;
  std::string detail;  // first mismatch
};

// Check the spec's equations against its compiled form: heads are compared
// with plain machine arithmetic, tails by forcing `depth` elements of both
// the compiled function's tail and the direct translation of the tail
// equation, over every tuple of the given closed guarded sample streams.
EqReport check_equations(const BdeSpec& spec, const Compiled& self,
                         const Registry& reg, int depth,
                         const std::vector<TermPtr>& samples,
                         long budget);

// Built-in sample streams (constant streams, an increasing stream and an
// alternating one), for callers with no corpus at hand.
std::vector<TermPtr> default_samples();

}  // namespace bde
}  // namespace glc
