#include "glc/eval.hpp"

#include <sstream>

#include "glc/parser.hpp"

namespace glc {

bool is_value(const TermPtr& t) {
  if (!t) return false;
  switch (t->tag) {
    case TmTag::Unit:
    case TmTag::Zero:
    case TmTag::Lam:
    case TmTag::Next:
      return true;
    case TmTag::Succ:
      return is_numeral(t);
    case TmTag::Pair:
    case TmTag::Fold:
    case TmTag::Inj:
      return true;  // lazy constructors
    case TmTag::BoxI:
      return !t->iota;  // box sigma. t is a value for any explicit sigma
    default:
      return false;
  }
}

static std::map<std::string, TermPtr> su_map(const std::vector<SubstItem>& su) {
  std::map<std::string, TermPtr> m;
  for (auto& it : su) m[it.var] = it.rep;
  return m;
}

TermPtr contract(const TermPtr& t) {
  switch (t->tag) {
    case TmTag::Proj:
      return t->idx == 1 ? t->a->a : t->a->b;
    case TmTag::App:
      return subst_term(t->a->a, {{t->a->x, t->b}});
    case TmTag::Unfold:
      return t->a->a;
    case TmTag::Prev:
      if (!t->su.empty())
        return tm::prev({}, subst_term(t->a, su_map(t->su)), t->loc);
      return t->a->a;  // prev (next u) -> u
    case TmTag::Unbox:
      // unbox (box sigma. u) -> u[sigma] in a single step
      return subst_term(t->a->a, su_map(t->a->su));
    case TmTag::LaterApp:
      return tm::next(tm::app(t->a->a, t->b->a), t->loc);
    case TmTag::Case: {
      const TermPtr& scrut = t->a;
      if (scrut->idx == 1) return subst_term(t->b, {{t->x, scrut->a}});
      return subst_term(t->c, {{t->y, scrut->a}});
    }
    case TmTag::BoxSum: {
      if (!t->su.empty())
        return tm::boxsum({}, subst_term(t->a, su_map(t->su)), t->loc);
      // boxplus (in_d u) -> in_d (box u); the injection is re-annotated at
      // the sum-of-boxes type so elaborated terms stay re-inferable.
      const TermPtr& in = t->a;
      TypePtr ann;
      if (in->ann && in->ann->tag == TyTag::Sum)
        ann = ty::sum(ty::box(in->ann->a), ty::box(in->ann->b));
      return tm::inj(in->idx, tm::boxi({}, in->a), ann, t->loc);
    }
    case TmTag::Prim: {
      uint64_t m = *numeral_value(t->a), n = *numeral_value(t->b);
      return numeral(t->op == PrimOp::Add ? m + n : m * n);
    }
    default:
      throw std::logic_error("contract: not a redex");
  }
}

static void stuck(Decomposition& d, std::vector<Frame>& frames,
                  const TermPtr& focus, const std::string& why) {
  d.kind = Decomposition::Kind::Stuck;
  d.frames = std::move(frames);
  d.focus = focus;
  d.reason = why;
}

static void redex(Decomposition& d, std::vector<Frame>& frames,
                  const TermPtr& focus) {
  d.kind = Decomposition::Kind::Redex;
  d.frames = std::move(frames);
  d.focus = focus;
}

static void decompose_rec(const TermPtr& t, std::vector<Frame>& frames,
                          Decomposition& d) {
  if (is_value(t)) {
    d.kind = Decomposition::Kind::Value;
    d.frames.clear();
    d.focus = t;
    return;
  }
  auto descend = [&](FrameKind k, const TermPtr& child) {
    frames.push_back({k, t});
    decompose_rec(child, frames, d);
  };
  switch (t->tag) {
    case TmTag::Var:
      stuck(d, frames, t, "free variable '" + t->x + "'");
      return;
    case TmTag::Succ:
      if (is_value(t->a))
        stuck(d, frames, t, "succ applied to a non-numeral value");
      else
        descend(FrameKind::SuccArg, t->a);
      return;
    case TmTag::Proj:
      if (t->a->tag == TmTag::Pair)
        redex(d, frames, t);
      else if (is_value(t->a))
        stuck(d, frames, t, "projection from a non-pair value");
      else
        descend(FrameKind::ProjArg, t->a);
      return;
    case TmTag::App:
      if (t->a->tag == TmTag::Lam)
        redex(d, frames, t);
      else if (is_value(t->a))
        stuck(d, frames, t, "application of a non-function value");
      else
        descend(FrameKind::AppFun, t->a);
      return;
    case TmTag::Unfold:
      if (t->a->tag == TmTag::Fold)
        redex(d, frames, t);
      else if (is_value(t->a))
        stuck(d, frames, t, "unfold of a non-fold value");
      else
        descend(FrameKind::UnfoldArg, t->a);
      return;
    case TmTag::Prev:
      if (t->iota) {
        stuck(d, frames, t, "iota substitution was not expanded");
      } else if (!t->su.empty()) {
        redex(d, frames, t);
      } else if (t->a->tag == TmTag::Next) {
        redex(d, frames, t);
      } else if (is_value(t->a)) {
        stuck(d, frames, t, "prev of a non-next value");
      } else {
        descend(FrameKind::PrevBody, t->a);
      }
      return;
    case TmTag::Unbox:
      if (t->a->tag == TmTag::BoxI && !t->a->iota)
        redex(d, frames, t);
      else if (is_value(t->a))
        stuck(d, frames, t, "unbox of a non-box value");
      else
        descend(FrameKind::UnboxArg, t->a);
      return;
    case TmTag::LaterApp:
      if (!is_value(t->a)) {
        descend(FrameKind::LaterAppFun, t->a);
      } else if (t->a->tag != TmTag::Next) {
        stuck(d, frames, t, "later application of a non-next value");
      } else if (!is_value(t->b)) {
        descend(FrameKind::LaterAppArg, t->b);
      } else if (t->b->tag == TmTag::Next) {
        redex(d, frames, t);
      } else {
        stuck(d, frames, t, "later application to a non-next value");
      }
      return;
    case TmTag::Abort:
      if (is_value(t->a))
        stuck(d, frames, t, "abort of a value");
      else
        descend(FrameKind::AbortArg, t->a);
      return;
    case TmTag::Case:
      if (t->a->tag == TmTag::Inj)
        redex(d, frames, t);
      else if (is_value(t->a))
        stuck(d, frames, t, "case on a non-injection value");
      else
        descend(FrameKind::CaseScrut, t->a);
      return;
    case TmTag::BoxSum:
      if (t->iota) {
        stuck(d, frames, t, "iota substitution was not expanded");
      } else if (!t->su.empty()) {
        redex(d, frames, t);
      } else if (t->a->tag == TmTag::Inj) {
        redex(d, frames, t);
      } else if (is_value(t->a)) {
        stuck(d, frames, t, "boxplus of a non-injection value");
      } else {
        descend(FrameKind::BoxSumBody, t->a);
      }
      return;
    case TmTag::Prim:
      if (!is_value(t->a)) {
        descend(FrameKind::PrimLeft, t->a);
      } else if (!is_numeral(t->a)) {
        stuck(d, frames, t, "arithmetic on a non-numeral value");
      } else if (!is_value(t->b)) {
        descend(FrameKind::PrimRight, t->b);
      } else if (is_numeral(t->b)) {
        redex(d, frames, t);
      } else {
        stuck(d, frames, t, "arithmetic on a non-numeral value");
      }
      return;
    case TmTag::Fix:
      stuck(d, frames, t, "fix was not elaborated before evaluation");
      return;
    default:
      stuck(d, frames, t, "no evaluation rule applies");
      return;
  }
}

Decomposition decompose(const TermPtr& t) {
  Decomposition d;
  std::vector<Frame> frames;
  decompose_rec(t, frames, d);
  return d;
}

static TermPtr with_child(const Frame& f, const TermPtr& child) {
  auto n = std::make_shared<Term>(*f.host);
  switch (f.kind) {
    case FrameKind::SuccArg:
    case FrameKind::ProjArg:
    case FrameKind::AppFun:
    case FrameKind::UnfoldArg:
    case FrameKind::PrevBody:
    case FrameKind::UnboxArg:
    case FrameKind::LaterAppFun:
    case FrameKind::AbortArg:
    case FrameKind::CaseScrut:
    case FrameKind::BoxSumBody:
    case FrameKind::PrimLeft:
      n->a = child;
      break;
    case FrameKind::LaterAppArg:
    case FrameKind::PrimRight:
      n->b = child;
      break;
  }
  return n;
}

TermPtr plug(const std::vector<Frame>& frames, TermPtr inner) {
  for (auto it = frames.rbegin(); it != frames.rend(); ++it)
    inner = with_child(*it, inner);
  return inner;
}

StepResult step(const TermPtr& t) {
  Decomposition d = decompose(t);
  switch (d.kind) {
    case Decomposition::Kind::Value:
      return {StepResult::Kind::Value, t, ""};
    case Decomposition::Kind::Stuck:
      return {StepResult::Kind::Stuck, t, d.reason};
    case Decomposition::Kind::Redex:
      return {StepResult::Kind::Stepped, plug(d.frames, contract(d.focus)), ""};
  }
  return {StepResult::Kind::Stuck, t, "unreachable"};
}

EvalResult eval(const TermPtr& t, long budget, bool keep_trace) {
  EvalResult r;
  r.term = t;
  if (keep_trace) r.trace.push_back(t);
  TermPtr cur = t;
  for (;;) {
    StepResult s = step(cur);
    if (s.kind == StepResult::Kind::Value) {
      r.kind = EvalResult::Kind::Value;
      r.term = cur;
      return r;
    }
    if (s.kind == StepResult::Kind::Stuck) {
      r.kind = EvalResult::Kind::Stuck;
      r.term = cur;
      r.reason = s.reason;
      return r;
    }
    if (r.steps >= budget) {
      r.kind = EvalResult::Kind::Budget;
      r.term = cur;
      std::ostringstream os;
      os << "step budget of " << budget << " exhausted";
      r.reason = os.str();
      return r;
    }
    cur = s.term;
    ++r.steps;
    if (keep_trace) r.trace.push_back(cur);
  }
}

static TermPtr eval_or_throw(const TermPtr& t, long budget,
                             const char* what) {
  EvalResult r = eval(t, budget);
  if (r.kind == EvalResult::Kind::Budget)
    throw EvalFailure(true, std::string(what) + ": " + r.reason);
  if (r.kind == EvalResult::Kind::Stuck)
    throw EvalFailure(false, std::string(what) + ": stuck (" + r.reason +
                                 ") at " + pretty(r.term));
  return r.term;
}

static uint64_t numeral_or_throw(const TermPtr& v, const char* what) {
  if (auto n = numeral_value(v)) return *n;
  throw EvalFailure(false,
                    std::string(what) + ": expected a numeral, got " +
                        pretty(v));
}

std::vector<uint64_t> force_guarded_stream(const TermPtr& s, int n,
                                           long budget) {
  std::vector<uint64_t> out;
  TermPtr cur = s;
  for (int k = 0; k < n; ++k) {
    TermPtr v = eval_or_throw(cur, budget, "stream element");
    TermPtr headv = eval_or_throw(tm::proj(1, tm::unfold(v)), budget,
                                  "stream head");
    out.push_back(numeral_or_throw(headv, "stream head"));
    cur = tm::prev({}, tm::proj(2, tm::unfold(v)));
  }
  return out;
}

std::vector<uint64_t> force_coinductive_stream(const TermPtr& s, int n,
                                               long budget) {
  std::vector<uint64_t> out;
  TermPtr cur = s;
  for (int k = 0; k < n; ++k) {
    TermPtr v = eval_or_throw(cur, budget, "stream element");
    TermPtr headv = eval_or_throw(
        tm::proj(1, tm::unfold(tm::unbox(v))), budget, "stream head");
    out.push_back(numeral_or_throw(headv, "stream head"));
    // tail: box [x <- v]. prev [x <- x]. snd (unfold (unbox x))
    TermPtr inner = tm::prev({{"x", tm::var("x")}},
                             tm::proj(2, tm::unfold(tm::unbox(tm::var("x")))));
    cur = tm::boxi({{"x", v}}, inner);
  }
  return out;
}

}  // namespace glc
