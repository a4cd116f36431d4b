#pragma once

// Finite-stage denotational semantics. A closed type denotes a family of
// sets indexed by stages 1, 2, 3, ... with restriction maps going down;
// a closed term of type A denotes, at stage i, an element of A's stage-i
// set. Functions carry one component per stage up to their arity; boxed
// values are global sections exposing one component per stage.

#include <functional>
#include <string>
#include <vector>

#include "glc/syntax.hpp"

namespace glc {

struct SemElem;
using Sem = std::shared_ptr<const SemElem>;

struct SemElem {
  enum class K { Unit, Nat, Pair, Inj, Fun, LaterZero, Later, Fold, Section };
  K k{};
  uint64_t nat = 0;
  int idx = 1;  // Inj side
  Sem a, b;     // Pair components / Inj payload / Later payload / Fold payload
  int arity = 0;
  // Fun: valid for stages 1..arity; app(j, x) applies the stage-j component.
  std::function<Sem(int, const Sem&)> fn;
  // Section: stage-j component of a global element (memoized).
  std::function<Sem(int)> sect;
};

namespace sem {
Sem unit_();
Sem nat_(uint64_t n);
Sem pair_(Sem a, Sem b);
Sem inj_(int d, Sem p);
Sem fun_(int arity, std::function<Sem(int, const Sem&)> f);
Sem later_zero();       // unique stage-1 element of a later type
Sem later_(Sem prior);  // stage i+1 element wrapping a stage-i element
Sem fold_(Sem p);
Sem section_(std::function<Sem(int)> f);  // memoizing
}  // namespace sem

// Restriction of a stage-i element of closed type A down to stage j <= i.
Sem restrict_to(const TypePtr& A, const Sem& a, int i, int j);

// Transport along the bijective restrictions of a constant closed type,
// in either direction.
Sem reindex_const(const TypePtr& A, const Sem& a, int from, int to);

// Denotation of a closed elaborated term at stage i >= 1.
Sem denote(const TermPtr& t, int i);

// Denotation in an environment: vals[k] is the stage-i element for
// ctx.items[k].
Sem denote_in(const TypingCtx& ctx, const std::vector<Sem>& vals,
              const TermPtr& t, int i);

struct SemVerdict {
  bool equal = false;
  // True when no function or boxed component had to be compared by
  // sampling, i.e. the comparison was a complete structural one.
  bool exact = false;
  std::string witness;  // first distinguishing observation when unequal
};

// Stage-i equality of two elements of A. Functions are compared on the
// deterministic sample inhabitants of their domain at every stage <= i;
// boxed values on stages up to i + 2.
SemVerdict sem_equal(const TypePtr& A, int i, const Sem& x, const Sem& y);

// True when equality at A is decided completely (no function or box
// components anywhere in A).
bool sem_equal_is_exact(const TypePtr& A);

std::string render_sem(const TypePtr& A, const Sem& a, int i);

// Deterministic closed, elaborated sample inhabitants of A (possibly none,
// e.g. for the empty type). Recursive types yield constant unrollings built
// with the fixed-point encoding.
std::vector<TermPtr> sample_terms(const TypePtr& A);

}  // namespace glc
