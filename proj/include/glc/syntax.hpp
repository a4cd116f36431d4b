#pragma once

// Abstract syntax for the guarded lambda calculus: types, terms, typing
// contexts, capture-avoiding substitution and the syntactic predicates
// (guardedness, constancy, well-formedness, size metrics) everything else
// builds on.

#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

namespace glc {

struct Loc {
  int line = 0;  // 1-based; 0 means synthesized (no source position)
  int col = 0;
};

// ---------------------------------------------------------------------------
// Types
// ---------------------------------------------------------------------------

enum class TyTag { Var, Unit, Nat, Empty, Prod, Sum, Arrow, Mu, Later, Box };

struct Type;
using TypePtr = std::shared_ptr<const Type>;

struct Type {
  TyTag tag{};
  std::string name;  // Var name / Mu binder
  TypePtr a, b;      // children (a only for unary forms, a and b for binary)
  Loc loc{};
};

namespace ty {
TypePtr var(std::string n, Loc l = {});
TypePtr unit(Loc l = {});
TypePtr nat(Loc l = {});
TypePtr empty(Loc l = {});
TypePtr prod(TypePtr a, TypePtr b, Loc l = {});
TypePtr sum(TypePtr a, TypePtr b, Loc l = {});
TypePtr arrow(TypePtr a, TypePtr b, Loc l = {});
TypePtr mu(std::string n, TypePtr body, Loc l = {});
TypePtr later(TypePtr a, Loc l = {});
TypePtr box(TypePtr a, Loc l = {});
}  // namespace ty

std::set<std::string> free_type_vars(const TypePtr& A);

// Capture-avoiding substitution of B for the free variable v in A.
TypePtr subst_type(const TypePtr& A, const std::string& v, const TypePtr& B);

// Alpha-equivalence of types (mu binders renamed consistently).
bool type_equal(const TypePtr& A, const TypePtr& B);

// Every free occurrence of alpha in A sits beneath at least one Later node.
bool guarded_in(const std::string& alpha, const TypePtr& A);

// Every Later node in A sits beneath some Box node. A must be closed
// (throws std::invalid_argument otherwise).
bool is_constant(const TypePtr& A);

struct WfIssue {
  enum class Kind { UnboundVar, UnguardedMu, OpenBox } kind;
  std::string name;  // offending variable / binder
  Loc loc;
};

// First well-formedness violation of A under the set of bound type
// variables, or nullopt if A is well-formed.
std::optional<WfIssue> wf_issue(const std::set<std::string>& tvars,
                                const TypePtr& A);
bool wf_type(const std::set<std::string>& tvars, const TypePtr& A);

// Syntax-tree size where a Later subtree counts 0 in total.
long usize(const TypePtr& A);

// Box depth with min at products/sums/arrows (the documented metric).
long box_depth(const TypePtr& A);

// Box nesting depth: same recursion with max at products/sums/arrows.
// This is the variant that strictly decreases through the logical
// relation's clauses and is used for its termination assertions.
long box_nesting(const TypePtr& A);

// Conservative syntactic approximation of "total and inhabited":
// true only for types built from 1, Nat, products, sums, arrows, Later
// and mu of guarded polynomial bodies over such. A must be closed.
bool is_total_inhabited_syntactic(const TypePtr& A);

// For A = mu x. B, returns B[A/x].
TypePtr unfold_mu(const TypePtr& muA);

// ---------------------------------------------------------------------------
// Terms
// ---------------------------------------------------------------------------

enum class TmTag {
  Var,
  Unit,
  Zero,
  Succ,
  Pair,
  Proj,
  Lam,
  App,
  Fold,
  Unfold,
  Next,
  Prev,
  BoxI,
  Unbox,
  LaterApp,
  Inj,
  Case,
  Abort,
  BoxSum,
  Prim,
  Fix,  // surface sugar; replaced by its encoding during type checking
};

enum class PrimOp { Add, Mul };

struct Term;
using TermPtr = std::shared_ptr<const Term>;

struct SubstItem {
  std::string var;
  TermPtr rep;
};

struct Term {
  TmTag tag{};
  std::string x;  // Var name; Lam/Fix binder; Case left binder
  std::string y;  // Case right binder
  int idx = 1;    // Proj / Inj side (1 or 2)
  PrimOp op = PrimOp::Add;
  TermPtr a, b, c;            // children
  std::vector<SubstItem> su;  // Prev/BoxI/BoxSum substitution list
  bool iota = false;          // substitution list still written as iota
  TypePtr ann;  // Lam domain / Fold mu type / Inj sum type / Abort result,
                // filled in by elaboration
  Loc loc{};

  // Iterative teardown: deep spines (large numerals above all) would
  // otherwise overflow the stack through recursive shared_ptr destruction.
  ~Term();
};

namespace tm {
TermPtr var(std::string n, Loc l = {});
TermPtr unit(Loc l = {});
TermPtr zero(Loc l = {});
TermPtr succ(TermPtr t, Loc l = {});
TermPtr pair(TermPtr a, TermPtr b, Loc l = {});
TermPtr proj(int d, TermPtr t, Loc l = {});
TermPtr lam(std::string x, TermPtr body, TypePtr ann = nullptr, Loc l = {});
TermPtr app(TermPtr f, TermPtr a, Loc l = {});
TermPtr fold(TermPtr t, TypePtr ann = nullptr, Loc l = {});
TermPtr unfold(TermPtr t, Loc l = {});
TermPtr next(TermPtr t, Loc l = {});
TermPtr prev(std::vector<SubstItem> su, TermPtr body, Loc l = {});
TermPtr prev_iota(TermPtr body, Loc l = {});
TermPtr boxi(std::vector<SubstItem> su, TermPtr body, Loc l = {});
TermPtr box_iota(TermPtr body, Loc l = {});
TermPtr unbox(TermPtr t, Loc l = {});
TermPtr laterapp(TermPtr f, TermPtr a, Loc l = {});
TermPtr inj(int d, TermPtr t, TypePtr ann = nullptr, Loc l = {});
TermPtr case_(TermPtr s, std::string x, TermPtr b1, std::string y, TermPtr b2,
              Loc l = {});
TermPtr abort_(TermPtr t, TypePtr ann = nullptr, Loc l = {});
TermPtr boxsum(std::vector<SubstItem> su, TermPtr body, Loc l = {});
TermPtr boxsum_iota(TermPtr body, Loc l = {});
TermPtr prim(PrimOp op, TermPtr a, TermPtr b, Loc l = {});
TermPtr fix(std::string x, TermPtr body, Loc l = {});
}  // namespace tm

std::set<std::string> free_vars(const TermPtr& t);

// Free variables in order of first occurrence (used to expand iota).
std::vector<std::string> free_vars_ordered(const TermPtr& t);

// Simultaneous capture-avoiding substitution. Substituting into an
// iota-sugared prev/box first materializes the explicit substitution list
// over the body's free variables, so (prev iota. t)[u/x] becomes
// prev [x <- u, ...]. t.
TermPtr subst_term(const TermPtr& t,
                   const std::map<std::string, TermPtr>& s);

// Alpha-equivalence of terms; elaboration annotations are ignored.
bool term_equal(const TermPtr& a, const TermPtr& b);

bool is_numeral(const TermPtr& t);  // succ^n zero
std::optional<uint64_t> numeral_value(const TermPtr& t);
TermPtr numeral(uint64_t n);

long term_size(const TermPtr& t);

// base, base', base'', ... first name not in avoid.
std::string fresh_name(const std::string& base,
                       const std::set<std::string>& avoid);

// ---------------------------------------------------------------------------
// Typing contexts (ordered so denotation environments can align by position)
// ---------------------------------------------------------------------------

struct TypingCtx {
  std::vector<std::pair<std::string, TypePtr>> items;

  const TypePtr* lookup(const std::string& x) const;  // innermost binding
  TypingCtx extended(const std::string& x, TypePtr A) const;
  bool empty() const { return items.empty(); }
  size_t size() const { return items.size(); }
};

}  // namespace glc
