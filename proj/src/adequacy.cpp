#include "glc/adequacy.hpp"

#include <sstream>
#include <tuple>

#include "glc/parser.hpp"

namespace glc {

namespace {

using Measure = std::tuple<long, int, long>;

Measure measure(const TypePtr& A, int i) {
  return {box_nesting(A), i, usize(A)};
}

struct RelCtx {
  RelStats* stats;
  long budget;
};

TermPtr eval_value(const RelCtx& cx, const TermPtr& t, const char* what) {
  EvalResult r = eval(t, cx.budget);
  if (r.kind == EvalResult::Kind::Budget)
    throw EvalFailure(true, std::string(what) + ": " + r.reason);
  if (r.kind == EvalResult::Kind::Stuck)
    throw EvalFailure(false, std::string(what) + ": stuck (" + r.reason + ")");
  return r.term;
}

std::string rel_rec(const TypePtr& A, int i, const Sem& a, const TermPtr& t,
                    const RelCtx& cx, const std::optional<Measure>& parent) {
  if (cx.stats) {
    ++cx.stats->calls;
    if (parent) {
      ++cx.stats->metric_checks;
      Measure m = measure(A, i);
      if (!(m < *parent)) {
        ++cx.stats->metric_violations;
        if (cx.stats->first_violation.empty()) {
          std::ostringstream os;
          os << "measure did not decrease at type " << pretty(A) << " stage "
             << i;
          cx.stats->first_violation = os.str();
        }
      }
    }
  }
  std::optional<Measure> here = measure(A, i);

  switch (A->tag) {
    case TyTag::Unit: {
      eval_value(cx, t, "unit");
      return "";
    }
    case TyTag::Empty:
      return "term of the empty type cannot be related to anything";
    case TyTag::Nat: {
      TermPtr v = eval_value(cx, t, "number");
      auto n = numeral_value(v);
      if (!n) return "evaluation did not produce a numeral: " + pretty(v);
      if (a->nat != *n) {
        std::ostringstream os;
        os << "denotation " << a->nat << " but evaluation gives " << *n;
        return os.str();
      }
      return "";
    }
    case TyTag::Prod: {
      TermPtr v = eval_value(cx, t, "pair");
      if (v->tag != TmTag::Pair)
        return "evaluation did not produce a pair: " + pretty(v);
      std::string r = rel_rec(A->a, i, a->a, v->a, cx, here);
      if (!r.empty()) return "first component: " + r;
      r = rel_rec(A->b, i, a->b, v->b, cx, here);
      if (!r.empty()) return "second component: " + r;
      return "";
    }
    case TyTag::Sum: {
      TermPtr v = eval_value(cx, t, "sum");
      if (v->tag != TmTag::Inj)
        return "evaluation did not produce an injection: " + pretty(v);
      if (v->idx != a->idx) {
        std::ostringstream os;
        os << "denotation picks in" << a->idx << " but evaluation gives in"
           << v->idx;
        return os.str();
      }
      std::string r =
          rel_rec(a->idx == 1 ? A->a : A->b, i, a->a, v->a, cx, here);
      if (!r.empty()) return "injection payload: " + r;
      return "";
    }
    case TyTag::Mu: {
      TermPtr v = eval_value(cx, t, "recursive value");
      if (v->tag != TmTag::Fold)
        return "evaluation did not produce a fold: " + pretty(v);
      std::string r = rel_rec(unfold_mu(A), i, a->a, v->a, cx, here);
      if (!r.empty()) return "under fold: " + r;
      return "";
    }
    case TyTag::Later: {
      TermPtr v = eval_value(cx, t, "later value");
      if (v->tag != TmTag::Next)
        return "evaluation did not produce a next: " + pretty(v);
      if (i == 1) return "";  // nothing to observe at the first stage
      std::string r = rel_rec(A->a, i - 1, a->a, v->a, cx, here);
      if (!r.empty()) return "one stage later: " + r;
      return "";
    }
    case TyTag::Arrow: {
      TermPtr v = eval_value(cx, t, "function");
      if (v->tag != TmTag::Lam)
        return "evaluation did not produce a lambda: " + pretty(v);
      auto samples = sample_terms(A->a);
      for (int j = 1; j <= i; ++j) {
        for (auto& u : samples) {
          Sem su = denote(u, j);
          Sem ra = a->fn(j, su);
          std::string r = rel_rec(A->b, j, ra, tm::app(v, u), cx, here);
          if (!r.empty()) {
            std::ostringstream os;
            os << "applied at stage " << j << " to " << pretty(u) << ": " << r;
            return os.str();
          }
        }
      }
      return "";
    }
    case TyTag::Box: {
      TermPtr v = eval_value(cx, t, "boxed value");
      if (v->tag != TmTag::BoxI)
        return "evaluation did not produce a box: " + pretty(v);
      // The body of a box value is closed once its substitution is applied.
      std::map<std::string, TermPtr> m;
      for (auto& it : v->su) m[it.var] = it.rep;
      TermPtr body = subst_term(v->a, m);
      for (int j = 1; j <= i + 2; ++j) {
        std::string r = rel_rec(A->a, j, a->sect(j), body, cx, here);
        if (!r.empty()) {
          std::ostringstream os;
          os << "boxed component at stage " << j << ": " << r;
          return os.str();
        }
      }
      return "";
    }
    case TyTag::Var:
      throw std::logic_error("rel: open type");
  }
  throw std::logic_error("rel: unhandled type");
}

}  // namespace

RelResult rel(const TypePtr& A, int i, const Sem& a, const TermPtr& t,
              RelStats* stats, long budget) {
  RelCtx cx{stats, budget};
  RelResult r;
  r.witness = rel_rec(A, i, a, t, cx, std::nullopt);
  r.related = r.witness.empty();
  return r;
}

AdequacyReport check_fundamental(const TypePtr& A, const TermPtr& t, int i,
                                 long budget) {
  AdequacyReport rep;
  rep.exact = sem_equal_is_exact(A);
  Sem a = denote(t, i);
  RelResult r = rel(A, i, a, t, &rep.stats, budget);
  rep.pass = r.related;
  rep.detail = r.witness;
  return rep;
}

AdequacyReport check_adequacy_nat(const TermPtr& t, int i, long budget) {
  AdequacyReport rep;
  rep.exact = true;
  Sem a = denote(t, i);
  EvalResult r = eval(t, budget);
  if (r.kind == EvalResult::Kind::Budget)
    throw EvalFailure(true, r.reason);
  if (r.kind == EvalResult::Kind::Stuck)
    throw EvalFailure(false, "stuck: " + r.reason);
  auto n = numeral_value(r.term);
  if (!n) {
    rep.pass = false;
    rep.detail = "evaluation did not produce a numeral: " + pretty(r.term);
    return rep;
  }
  rep.pass = (a->nat == *n);
  if (!rep.pass) {
    std::ostringstream os;
    os << "denotation " << a->nat << " but evaluation gives " << *n;
    rep.detail = os.str();
  }
  return rep;
}

}  // namespace glc
