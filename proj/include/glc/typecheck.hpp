#pragma once

// Bidirectional type checking. Checking elaborates: lambda domains, fold
// recursive types, injection sum types and abort result types are recorded
// on the term, and fix is replaced by its fixed-point-combinator encoding,
// so every well-typed elaborated term can afterwards be re-inferred without
// an expected type (the property subject-reduction tests rely on).

#include <map>
#include <stdexcept>
#include <string>
#include <vector>

#include "glc/parser.hpp"
#include "glc/syntax.hpp"

namespace glc {

enum class ErrKind {
  Mismatch,
  NotAFunction,
  NotAProduct,
  NotASum,
  NotAMu,
  NotALater,
  NotABox,
  UnguardedMu,
  NonconstantContext,
  UnboundVariable,
  IllFormedType,
  CannotSynthesize,
  DuplicateDefinition,
  UnknownDefinition,
};

const char* err_kind_name(ErrKind k);  // kebab-case tag

struct TypeError : std::runtime_error {
  ErrKind kind;
  Loc loc;
  TypePtr expected;  // may be null
  TypePtr found;     // may be null
  TypeError(ErrKind k, Loc l, const std::string& msg, TypePtr exp = nullptr,
            TypePtr fnd = nullptr)
      : std::runtime_error(msg),
        kind(k),
        loc(l),
        expected(std::move(exp)),
        found(std::move(fnd)) {}

  // file:line:col: [kind] message
  std::string render(const std::string& file) const;
  // One-line machine-readable record with kind, location and the expected /
  // found types when present.
  std::string render_json(const std::string& file) const;
};

// Synthesize the type of t in ctx. Requires an elaborated term at positions
// where the syntax alone does not determine the type (unannotated lambda,
// fold, abort, injections and fix raise cannot-synthesize).
TypePtr infer(const TypingCtx& ctx, const TermPtr& t);

// Check t against expected, returning the elaborated term.
TermPtr check(const TypingCtx& ctx, const TermPtr& t, const TypePtr& expected);

// Replace every iota substitution list with the explicit identity list over
// the body's free variables (in first-occurrence order).
TermPtr expand_iota(const TermPtr& t);

// Replace free occurrences of defined names with their (closed, elaborated)
// bodies. Not substitution: iota lists are transparent, so a definition
// mentioned under box iota never ends up bound by the box.
TermPtr inline_defs(const TermPtr& t, const std::map<std::string, TermPtr>& env);

// Encode a recursive definition fix x. body at closed type A, where body has
// already been checked in ctx extended with x : |>A. The result applies the
// guarded fixed-point combinator at A and re-infers cleanly.
TermPtr elaborate_fix(const std::string& x, const TypePtr& A,
                      const TermPtr& checked_body);

struct CheckedDef {
  std::string name;
  TypePtr type;
  TermPtr term;  // elaborated, closed (earlier definitions inlined)
  Loc loc;
};

struct CheckedProgram {
  std::vector<CheckedDef> defs;
  const CheckedDef* find(const std::string& name) const;
};

CheckedProgram check_program(const Program& p);

}  // namespace glc
