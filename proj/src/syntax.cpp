#include "glc/syntax.hpp"

#include <algorithm>
#include <stdexcept>

namespace glc {

// ---------------------------------------------------------------------------
// Type constructors
// ---------------------------------------------------------------------------

namespace ty {

static TypePtr mk(TyTag tag, Loc l) {
  auto t = std::make_shared<Type>();
  const_cast<Type&>(*t).tag = tag;
  const_cast<Type&>(*t).loc = l;
  return t;
}

TypePtr var(std::string n, Loc l) {
  auto t = std::make_shared<Type>(Type{TyTag::Var, std::move(n), nullptr, nullptr, l});
  return t;
}
TypePtr unit(Loc l) { return mk(TyTag::Unit, l); }
TypePtr nat(Loc l) { return mk(TyTag::Nat, l); }
TypePtr empty(Loc l) { return mk(TyTag::Empty, l); }
TypePtr prod(TypePtr a, TypePtr b, Loc l) {
  return std::make_shared<Type>(Type{TyTag::Prod, "", std::move(a), std::move(b), l});
}
TypePtr sum(TypePtr a, TypePtr b, Loc l) {
  return std::make_shared<Type>(Type{TyTag::Sum, "", std::move(a), std::move(b), l});
}
TypePtr arrow(TypePtr a, TypePtr b, Loc l) {
  return std::make_shared<Type>(Type{TyTag::Arrow, "", std::move(a), std::move(b), l});
}
TypePtr mu(std::string n, TypePtr body, Loc l) {
  return std::make_shared<Type>(Type{TyTag::Mu, std::move(n), std::move(body), nullptr, l});
}
TypePtr later(TypePtr a, Loc l) {
  return std::make_shared<Type>(Type{TyTag::Later, "", std::move(a), nullptr, l});
}
TypePtr box(TypePtr a, Loc l) {
  return std::make_shared<Type>(Type{TyTag::Box, "", std::move(a), nullptr, l});
}

}  // namespace ty

// ---------------------------------------------------------------------------
// Type operations
// ---------------------------------------------------------------------------

static void ftv_rec(const TypePtr& A, std::set<std::string>& bound,
                    std::set<std::string>& out) {
  if (!A) return;
  switch (A->tag) {
    case TyTag::Var:
      if (!bound.count(A->name)) out.insert(A->name);
      return;
    case TyTag::Mu: {
      bool fresh = bound.insert(A->name).second;
      ftv_rec(A->a, bound, out);
      if (fresh) bound.erase(A->name);
      return;
    }
    default:
      ftv_rec(A->a, bound, out);
      ftv_rec(A->b, bound, out);
      return;
  }
}

std::set<std::string> free_type_vars(const TypePtr& A) {
  std::set<std::string> bound, out;
  ftv_rec(A, bound, out);
  return out;
}

std::string fresh_name(const std::string& base,
                       const std::set<std::string>& avoid) {
  std::string n = base;
  while (avoid.count(n)) n += '\'';
  return n;
}

TypePtr subst_type(const TypePtr& A, const std::string& v, const TypePtr& B) {
  if (!A) return A;
  switch (A->tag) {
    case TyTag::Var:
      return A->name == v ? B : A;
    case TyTag::Unit:
    case TyTag::Nat:
    case TyTag::Empty:
      return A;
    case TyTag::Mu: {
      if (A->name == v) return A;  // v shadowed
      auto fv_body = free_type_vars(A->a);
      if (!fv_body.count(v)) return A;
      std::string binder = A->name;
      TypePtr body = A->a;
      auto fv_rep = free_type_vars(B);
      if (fv_rep.count(binder)) {
        std::set<std::string> avoid = fv_rep;
        for (auto& n : fv_body) avoid.insert(n);
        avoid.insert(v);
        std::string nb = fresh_name(binder, avoid);
        body = subst_type(body, binder, ty::var(nb));
        binder = nb;
      }
      return ty::mu(binder, subst_type(body, v, B), A->loc);
    }
    case TyTag::Prod:
      return ty::prod(subst_type(A->a, v, B), subst_type(A->b, v, B), A->loc);
    case TyTag::Sum:
      return ty::sum(subst_type(A->a, v, B), subst_type(A->b, v, B), A->loc);
    case TyTag::Arrow:
      return ty::arrow(subst_type(A->a, v, B), subst_type(A->b, v, B), A->loc);
    case TyTag::Later:
      return ty::later(subst_type(A->a, v, B), A->loc);
    case TyTag::Box:
      return ty::box(subst_type(A->a, v, B), A->loc);
  }
  return A;
}

static bool ty_eq_rec(const TypePtr& A, const TypePtr& B,
                      std::vector<std::pair<std::string, std::string>>& env) {
  if (A.get() == B.get()) {
    // Shared subtree: only sound if no binder pairing renames anything in it,
    // so check the variable environment is the identity on its free vars.
    auto fv = free_type_vars(A);
    for (auto it = env.rbegin(); it != env.rend(); ++it)
      if (it->first != it->second && (fv.count(it->first) || fv.count(it->second)))
        goto slow;
    return true;
  }
slow:
  if (!A || !B) return A == B;
  if (A->tag != B->tag) return false;
  switch (A->tag) {
    case TyTag::Var: {
      for (auto it = env.rbegin(); it != env.rend(); ++it) {
        if (it->first == A->name || it->second == B->name)
          return it->first == A->name && it->second == B->name;
      }
      return A->name == B->name;
    }
    case TyTag::Unit:
    case TyTag::Nat:
    case TyTag::Empty:
      return true;
    case TyTag::Mu: {
      env.emplace_back(A->name, B->name);
      bool r = ty_eq_rec(A->a, B->a, env);
      env.pop_back();
      return r;
    }
    case TyTag::Prod:
    case TyTag::Sum:
    case TyTag::Arrow:
      return ty_eq_rec(A->a, B->a, env) && ty_eq_rec(A->b, B->b, env);
    case TyTag::Later:
    case TyTag::Box:
      return ty_eq_rec(A->a, B->a, env);
  }
  return false;
}

bool type_equal(const TypePtr& A, const TypePtr& B) {
  std::vector<std::pair<std::string, std::string>> env;
  return ty_eq_rec(A, B, env);
}

static bool guarded_rec(const std::string& alpha, const TypePtr& A) {
  if (!A) return true;
  switch (A->tag) {
    case TyTag::Var:
      return A->name != alpha;
    case TyTag::Unit:
    case TyTag::Nat:
    case TyTag::Empty:
      return true;
    case TyTag::Later:
      return true;  // everything below is guarded
    case TyTag::Mu:
      if (A->name == alpha) return true;  // shadowed
      return guarded_rec(alpha, A->a);
    case TyTag::Box:
      return guarded_rec(alpha, A->a);
    default:
      return guarded_rec(alpha, A->a) && guarded_rec(alpha, A->b);
  }
}

bool guarded_in(const std::string& alpha, const TypePtr& A) {
  return guarded_rec(alpha, A);
}

static bool no_naked_later(const TypePtr& A) {
  if (!A) return true;
  switch (A->tag) {
    case TyTag::Later:
      return false;
    case TyTag::Box:
      return true;  // Later below a Box is fine
    case TyTag::Var:
    case TyTag::Unit:
    case TyTag::Nat:
    case TyTag::Empty:
      return true;
    case TyTag::Mu:
      return no_naked_later(A->a);
    default:
      return no_naked_later(A->a) && no_naked_later(A->b);
  }
}

bool is_constant(const TypePtr& A) {
  if (!free_type_vars(A).empty())
    throw std::invalid_argument("is_constant: type must be closed");
  return no_naked_later(A);
}

static std::optional<WfIssue> wf_rec(std::set<std::string>& tvars,
                                     const TypePtr& A) {
  if (!A) return std::nullopt;
  switch (A->tag) {
    case TyTag::Var:
      if (!tvars.count(A->name))
        return WfIssue{WfIssue::Kind::UnboundVar, A->name, A->loc};
      return std::nullopt;
    case TyTag::Unit:
    case TyTag::Nat:
    case TyTag::Empty:
      return std::nullopt;
    case TyTag::Mu: {
      bool fresh = tvars.insert(A->name).second;
      auto r = wf_rec(tvars, A->a);
      if (fresh) tvars.erase(A->name);
      if (r) return r;
      if (!guarded_in(A->name, A->a))
        return WfIssue{WfIssue::Kind::UnguardedMu, A->name, A->loc};
      return std::nullopt;
    }
    case TyTag::Box: {
      if (!free_type_vars(A->a).empty())
        return WfIssue{WfIssue::Kind::OpenBox, "", A->loc};
      return wf_rec(tvars, A->a);
    }
    case TyTag::Later:
      return wf_rec(tvars, A->a);
    default: {
      auto r = wf_rec(tvars, A->a);
      if (r) return r;
      return wf_rec(tvars, A->b);
    }
  }
}

std::optional<WfIssue> wf_issue(const std::set<std::string>& tvars,
                                const TypePtr& A) {
  std::set<std::string> tv = tvars;
  return wf_rec(tv, A);
}

bool wf_type(const std::set<std::string>& tvars, const TypePtr& A) {
  return !wf_issue(tvars, A).has_value();
}

long usize(const TypePtr& A) {
  if (!A) return 0;
  switch (A->tag) {
    case TyTag::Later:
      return 0;  // the whole subtree under Later counts for nothing
    case TyTag::Var:
    case TyTag::Unit:
    case TyTag::Nat:
    case TyTag::Empty:
      return 1;
    case TyTag::Mu:
    case TyTag::Box:
      return 1 + usize(A->a);
    default:
      return 1 + usize(A->a) + usize(A->b);
  }
}

static long bd_rec(const TypePtr& A, bool use_max) {
  if (!A) return 0;
  switch (A->tag) {
    case TyTag::Var:
    case TyTag::Unit:
    case TyTag::Nat:
    case TyTag::Empty:
      return 0;
    case TyTag::Mu:
    case TyTag::Later:
      return bd_rec(A->a, use_max);
    case TyTag::Box:
      return 1 + bd_rec(A->a, use_max);
    default: {
      long l = bd_rec(A->a, use_max), r = bd_rec(A->b, use_max);
      return use_max ? std::max(l, r) : std::min(l, r);
    }
  }
}

long box_depth(const TypePtr& A) { return bd_rec(A, false); }
long box_nesting(const TypePtr& A) { return bd_rec(A, true); }

// alpha may appear only at strictly positive, guarded positions of polynomial
// shape; conservative on anything else.
static bool ti_closed(const TypePtr& A);

static bool ti_poly(const std::string& alpha, const TypePtr& A) {
  if (!A) return false;
  if (!free_type_vars(A).count(alpha)) return ti_closed(A);
  switch (A->tag) {
    case TyTag::Var:
      return A->name == alpha;
    case TyTag::Prod:
    case TyTag::Sum:
      return ti_poly(alpha, A->a) && ti_poly(alpha, A->b);
    case TyTag::Arrow:
      return !free_type_vars(A->a).count(alpha) && ti_closed(A->a) &&
             ti_poly(alpha, A->b);
    case TyTag::Later:
      return ti_poly(alpha, A->a);
    default:
      return false;  // nested mu over alpha, etc.: give up
  }
}

static bool ti_closed(const TypePtr& A) {
  if (!A) return false;
  switch (A->tag) {
    case TyTag::Unit:
    case TyTag::Nat:
      return true;
    case TyTag::Empty:
    case TyTag::Var:
    case TyTag::Box:
      return false;
    case TyTag::Prod:
    case TyTag::Sum:
      return ti_closed(A->a) && ti_closed(A->b);
    case TyTag::Arrow:
      return ti_closed(A->a) && ti_closed(A->b);
    case TyTag::Later:
      return ti_closed(A->a);
    case TyTag::Mu:
      return guarded_in(A->name, A->a) && ti_poly(A->name, A->a);
  }
  return false;
}

bool is_total_inhabited_syntactic(const TypePtr& A) {
  if (!free_type_vars(A).empty())
    throw std::invalid_argument("is_total_inhabited_syntactic: type must be closed");
  return ti_closed(A);
}

TypePtr unfold_mu(const TypePtr& muA) {
  if (!muA || muA->tag != TyTag::Mu)
    throw std::invalid_argument("unfold_mu: not a mu type");
  return subst_type(muA->a, muA->name, muA);
}

// ---------------------------------------------------------------------------
// Term constructors
// ---------------------------------------------------------------------------

Term::~Term() {
  std::vector<TermPtr> pending;
  auto grab = [&pending](TermPtr& p) {
    if (p && p.use_count() == 1) pending.push_back(std::move(p));
    p = nullptr;
  };
  grab(a);
  grab(b);
  grab(c);
  for (auto& it : su) grab(it.rep);
  while (!pending.empty()) {
    TermPtr t = std::move(pending.back());
    pending.pop_back();
    Term& m = const_cast<Term&>(*t);
    grab(m.a);
    grab(m.b);
    grab(m.c);
    for (auto& it : m.su) grab(it.rep);
    // t now has no owned children; dropping it recurses at most once.
  }
}

namespace tm {

static std::shared_ptr<Term> mk(TmTag tag, Loc l) {
  auto t = std::make_shared<Term>();
  t->tag = tag;
  t->loc = l;
  return t;
}

TermPtr var(std::string n, Loc l) {
  auto t = mk(TmTag::Var, l);
  t->x = std::move(n);
  return t;
}
TermPtr unit(Loc l) { return mk(TmTag::Unit, l); }
TermPtr zero(Loc l) { return mk(TmTag::Zero, l); }
TermPtr succ(TermPtr p, Loc l) {
  auto t = mk(TmTag::Succ, l);
  t->a = std::move(p);
  return t;
}
TermPtr pair(TermPtr a, TermPtr b, Loc l) {
  auto t = mk(TmTag::Pair, l);
  t->a = std::move(a);
  t->b = std::move(b);
  return t;
}
TermPtr proj(int d, TermPtr p, Loc l) {
  auto t = mk(TmTag::Proj, l);
  t->idx = d;
  t->a = std::move(p);
  return t;
}
TermPtr lam(std::string x, TermPtr body, TypePtr ann, Loc l) {
  auto t = mk(TmTag::Lam, l);
  t->x = std::move(x);
  t->a = std::move(body);
  t->ann = std::move(ann);
  return t;
}
TermPtr app(TermPtr f, TermPtr a, Loc l) {
  auto t = mk(TmTag::App, l);
  t->a = std::move(f);
  t->b = std::move(a);
  return t;
}
TermPtr fold(TermPtr p, TypePtr ann, Loc l) {
  auto t = mk(TmTag::Fold, l);
  t->a = std::move(p);
  t->ann = std::move(ann);
  return t;
}
TermPtr unfold(TermPtr p, Loc l) {
  auto t = mk(TmTag::Unfold, l);
  t->a = std::move(p);
  return t;
}
TermPtr next(TermPtr p, Loc l) {
  auto t = mk(TmTag::Next, l);
  t->a = std::move(p);
  return t;
}
TermPtr prev(std::vector<SubstItem> su, TermPtr body, Loc l) {
  auto t = mk(TmTag::Prev, l);
  t->su = std::move(su);
  t->a = std::move(body);
  return t;
}
TermPtr prev_iota(TermPtr body, Loc l) {
  auto t = mk(TmTag::Prev, l);
  t->iota = true;
  t->a = std::move(body);
  return t;
}
TermPtr boxi(std::vector<SubstItem> su, TermPtr body, Loc l) {
  auto t = mk(TmTag::BoxI, l);
  t->su = std::move(su);
  t->a = std::move(body);
  return t;
}
TermPtr box_iota(TermPtr body, Loc l) {
  auto t = mk(TmTag::BoxI, l);
  t->iota = true;
  t->a = std::move(body);
  return t;
}
TermPtr unbox(TermPtr p, Loc l) {
  auto t = mk(TmTag::Unbox, l);
  t->a = std::move(p);
  return t;
}
TermPtr laterapp(TermPtr f, TermPtr a, Loc l) {
  auto t = mk(TmTag::LaterApp, l);
  t->a = std::move(f);
  t->b = std::move(a);
  return t;
}
TermPtr inj(int d, TermPtr p, TypePtr ann, Loc l) {
  auto t = mk(TmTag::Inj, l);
  t->idx = d;
  t->a = std::move(p);
  t->ann = std::move(ann);
  return t;
}
TermPtr case_(TermPtr s, std::string x, TermPtr b1, std::string y, TermPtr b2,
              Loc l) {
  auto t = mk(TmTag::Case, l);
  t->a = std::move(s);
  t->x = std::move(x);
  t->b = std::move(b1);
  t->y = std::move(y);
  t->c = std::move(b2);
  return t;
}
TermPtr abort_(TermPtr p, TypePtr ann, Loc l) {
  auto t = mk(TmTag::Abort, l);
  t->a = std::move(p);
  t->ann = std::move(ann);
  return t;
}
TermPtr boxsum(std::vector<SubstItem> su, TermPtr body, Loc l) {
  auto t = mk(TmTag::BoxSum, l);
  t->su = std::move(su);
  t->a = std::move(body);
  return t;
}
TermPtr boxsum_iota(TermPtr body, Loc l) {
  auto t = mk(TmTag::BoxSum, l);
  t->iota = true;
  t->a = std::move(body);
  return t;
}
TermPtr prim(PrimOp op, TermPtr a, TermPtr b, Loc l) {
  auto t = mk(TmTag::Prim, l);
  t->op = op;
  t->a = std::move(a);
  t->b = std::move(b);
  return t;
}
TermPtr fix(std::string x, TermPtr body, Loc l) {
  auto t = mk(TmTag::Fix, l);
  t->x = std::move(x);
  t->a = std::move(body);
  return t;
}

}  // namespace tm

// ---------------------------------------------------------------------------
// Term operations
// ---------------------------------------------------------------------------

static bool binds_subst(TmTag tag) {
  return tag == TmTag::Prev || tag == TmTag::BoxI || tag == TmTag::BoxSum;
}

// Visit free variables in first-occurrence order.
static void fv_rec(const TermPtr& t, std::set<std::string>& bound,
                   std::set<std::string>& seen,
                   std::vector<std::string>& order) {
  if (!t) return;
  auto visit = [&](const std::string& n) {
    if (!bound.count(n) && seen.insert(n).second) order.push_back(n);
  };
  switch (t->tag) {
    case TmTag::Var:
      visit(t->x);
      return;
    case TmTag::Lam:
    case TmTag::Fix: {
      bool fresh = bound.insert(t->x).second;
      fv_rec(t->a, bound, seen, order);
      if (fresh) bound.erase(t->x);
      return;
    }
    case TmTag::Case: {
      fv_rec(t->a, bound, seen, order);
      bool f1 = bound.insert(t->x).second;
      fv_rec(t->b, bound, seen, order);
      if (f1) bound.erase(t->x);
      bool f2 = bound.insert(t->y).second;
      fv_rec(t->c, bound, seen, order);
      if (f2) bound.erase(t->y);
      return;
    }
    case TmTag::Prev:
    case TmTag::BoxI:
    case TmTag::BoxSum: {
      if (t->iota) {
        // iota stands for the identity substitution over the body's free
        // variables, so the node's free variables are exactly the body's.
        fv_rec(t->a, bound, seen, order);
        return;
      }
      for (auto& it : t->su) fv_rec(it.rep, bound, seen, order);
      // Body variables are bound by the substitution list; anything else
      // free in the body is simply not captured (and will fail typing).
      std::vector<std::string> newly;
      for (auto& it : t->su)
        if (bound.insert(it.var).second) newly.push_back(it.var);
      fv_rec(t->a, bound, seen, order);
      for (auto& n : newly) bound.erase(n);
      return;
    }
    default:
      fv_rec(t->a, bound, seen, order);
      fv_rec(t->b, bound, seen, order);
      fv_rec(t->c, bound, seen, order);
      return;
  }
}

std::vector<std::string> free_vars_ordered(const TermPtr& t) {
  std::set<std::string> bound, seen;
  std::vector<std::string> order;
  fv_rec(t, bound, seen, order);
  return order;
}

std::set<std::string> free_vars(const TermPtr& t) {
  auto v = free_vars_ordered(t);
  return std::set<std::string>(v.begin(), v.end());
}

using Subst = std::map<std::string, TermPtr>;

static TermPtr subst_rec(const TermPtr& t, const Subst& s);

// Clone t with fields patched; keeps annotation and location.
static std::shared_ptr<Term> clone(const TermPtr& t) {
  return std::make_shared<Term>(*t);
}

// Substitute under a single binder x (Lam/Fix/Case branch), renaming x if a
// replacement would capture it.
static TermPtr subst_under_binder(const std::string& x, const TermPtr& body,
                                  const Subst& s, std::string& out_name) {
  Subst inner;
  for (auto& [k, v] : s)
    if (k != x) inner.emplace(k, v);
  out_name = x;
  if (inner.empty()) return body;
  auto fvb = free_vars(body);
  bool capture = false;
  for (auto& [k, v] : inner) {
    if (!fvb.count(k)) continue;
    if (free_vars(v).count(x)) {
      capture = true;
      break;
    }
  }
  TermPtr b = body;
  if (capture) {
    std::set<std::string> avoid = fvb;
    for (auto& [k, v] : inner) {
      avoid.insert(k);
      for (auto& n : free_vars(v)) avoid.insert(n);
    }
    out_name = fresh_name(x, avoid);
    Subst ren{{x, tm::var(out_name)}};
    b = subst_rec(b, ren);
  }
  return subst_rec(b, inner);
}

// Substitute into an explicit-substitution node: replacements happen in the
// list's terms; body variables are bound by the list.
static TermPtr subst_subst_node(const TermPtr& t, const Subst& s) {
  std::vector<SubstItem> su;
  su.reserve(t->su.size());
  for (auto& it : t->su) su.push_back({it.var, subst_rec(it.rep, s)});

  Subst inner;
  std::set<std::string> binders;
  for (auto& it : t->su) binders.insert(it.var);
  for (auto& [k, v] : s)
    if (!binders.count(k)) inner.emplace(k, v);

  TermPtr body = t->a;
  if (!inner.empty()) {
    auto fvb = free_vars(body);
    bool relevant = false, capture = false;
    std::set<std::string> fv_reps_union;
    for (auto& [k, v] : inner) {
      if (!fvb.count(k)) continue;
      relevant = true;
      for (auto& n : free_vars(v)) fv_reps_union.insert(n);
    }
    if (relevant) {
      for (auto& b : binders)
        if (fv_reps_union.count(b)) capture = true;
      if (capture) {
        std::set<std::string> avoid = fvb;
        avoid.insert(fv_reps_union.begin(), fv_reps_union.end());
        for (auto& [k, v] : inner) avoid.insert(k);
        Subst ren;
        for (auto& it : su) {
          if (fv_reps_union.count(it.var)) {
            std::string nn = fresh_name(it.var, avoid);
            avoid.insert(nn);
            ren.emplace(it.var, tm::var(nn));
            it.var = nn;
          }
        }
        body = subst_rec(body, ren);
      }
      body = subst_rec(body, inner);
    }
  }

  auto c = clone(t);
  c->su = std::move(su);
  c->iota = false;
  c->a = body;
  return c;
}

static TermPtr subst_rec(const TermPtr& t, const Subst& s) {
  if (!t || s.empty()) return t;
  switch (t->tag) {
    case TmTag::Var: {
      auto it = s.find(t->x);
      return it == s.end() ? t : it->second;
    }
    case TmTag::Unit:
    case TmTag::Zero:
      return t;
    case TmTag::Lam:
    case TmTag::Fix: {
      std::string nn;
      TermPtr body = subst_under_binder(t->x, t->a, s, nn);
      if (body == t->a && nn == t->x) return t;
      auto c = clone(t);
      c->x = nn;
      c->a = body;
      return c;
    }
    case TmTag::Case: {
      TermPtr scrut = subst_rec(t->a, s);
      std::string nx, ny;
      TermPtr b1 = subst_under_binder(t->x, t->b, s, nx);
      TermPtr b2 = subst_under_binder(t->y, t->c, s, ny);
      if (scrut == t->a && b1 == t->b && b2 == t->c && nx == t->x && ny == t->y)
        return t;
      auto c = clone(t);
      c->a = scrut;
      c->b = b1;
      c->c = b2;
      c->x = nx;
      c->y = ny;
      return c;
    }
    case TmTag::Prev:
    case TmTag::BoxI:
    case TmTag::BoxSum: {
      if (t->iota) {
        // Materialize iota as the identity over the body's free variables
        // first; substitution then acts on the materialized list.
        auto vars = free_vars_ordered(t->a);
        std::vector<SubstItem> su;
        su.reserve(vars.size());
        for (auto& v : vars) su.push_back({v, tm::var(v)});
        auto c = clone(t);
        c->iota = false;
        c->su = std::move(su);
        return subst_subst_node(c, s);
      }
      return subst_subst_node(t, s);
    }
    default: {
      TermPtr a = subst_rec(t->a, s);
      TermPtr b = subst_rec(t->b, s);
      TermPtr cc = subst_rec(t->c, s);
      if (a == t->a && b == t->b && cc == t->c) return t;
      auto c = clone(t);
      c->a = a;
      c->b = b;
      c->c = cc;
      return c;
    }
  }
}

TermPtr subst_term(const TermPtr& t, const std::map<std::string, TermPtr>& s) {
  return subst_rec(t, s);
}

// Alpha-equivalence with an environment of paired binder names.
using NameEnv = std::vector<std::pair<std::string, std::string>>;

static bool var_eq(const std::string& a, const std::string& b,
                   const NameEnv& env) {
  for (auto it = env.rbegin(); it != env.rend(); ++it) {
    if (it->first == a || it->second == b)
      return it->first == a && it->second == b;
  }
  return a == b;
}

static bool tm_eq_rec(const TermPtr& a, const TermPtr& b, NameEnv& env) {
  if (!a || !b) return a == b;
  if (a->tag != b->tag) return false;
  switch (a->tag) {
    case TmTag::Var:
      return var_eq(a->x, b->x, env);
    case TmTag::Unit:
    case TmTag::Zero:
      return true;
    case TmTag::Proj:
    case TmTag::Inj:
      if (a->idx != b->idx) return false;
      return tm_eq_rec(a->a, b->a, env);
    case TmTag::Prim:
      if (a->op != b->op) return false;
      return tm_eq_rec(a->a, b->a, env) && tm_eq_rec(a->b, b->b, env);
    case TmTag::Lam:
    case TmTag::Fix: {
      env.emplace_back(a->x, b->x);
      bool r = tm_eq_rec(a->a, b->a, env);
      env.pop_back();
      return r;
    }
    case TmTag::Case: {
      if (!tm_eq_rec(a->a, b->a, env)) return false;
      env.emplace_back(a->x, b->x);
      bool r1 = tm_eq_rec(a->b, b->b, env);
      env.pop_back();
      if (!r1) return false;
      env.emplace_back(a->y, b->y);
      bool r2 = tm_eq_rec(a->c, b->c, env);
      env.pop_back();
      return r2;
    }
    case TmTag::Prev:
    case TmTag::BoxI:
    case TmTag::BoxSum: {
      if (a->iota != b->iota) return false;
      if (a->iota) return tm_eq_rec(a->a, b->a, env);
      if (a->su.size() != b->su.size()) return false;
      for (size_t i = 0; i < a->su.size(); ++i)
        if (!tm_eq_rec(a->su[i].rep, b->su[i].rep, env)) return false;
      size_t pushed = 0;
      for (size_t i = 0; i < a->su.size(); ++i, ++pushed)
        env.emplace_back(a->su[i].var, b->su[i].var);
      bool r = tm_eq_rec(a->a, b->a, env);
      env.resize(env.size() - pushed);
      return r;
    }
    default:
      return tm_eq_rec(a->a, b->a, env) && tm_eq_rec(a->b, b->b, env) &&
             tm_eq_rec(a->c, b->c, env);
  }
}

bool term_equal(const TermPtr& a, const TermPtr& b) {
  NameEnv env;
  return tm_eq_rec(a, b, env);
}

bool is_numeral(const TermPtr& t) {
  const Term* p = t.get();
  while (p && p->tag == TmTag::Succ) p = p->a.get();
  return p && p->tag == TmTag::Zero;
}

std::optional<uint64_t> numeral_value(const TermPtr& t) {
  uint64_t n = 0;
  const Term* p = t.get();
  while (p && p->tag == TmTag::Succ) {
    ++n;
    p = p->a.get();
  }
  if (p && p->tag == TmTag::Zero) return n;
  return std::nullopt;
}

TermPtr numeral(uint64_t n) {
  TermPtr t = tm::zero();
  for (uint64_t i = 0; i < n; ++i) t = tm::succ(t);
  return t;
}

long term_size(const TermPtr& t) {
  if (!t) return 0;
  long n = 1 + term_size(t->a) + term_size(t->b) + term_size(t->c);
  if (binds_subst(t->tag) && !t->iota)
    for (auto& it : t->su) n += term_size(it.rep);
  return n;
}

// ---------------------------------------------------------------------------
// Typing contexts
// ---------------------------------------------------------------------------

const TypePtr* TypingCtx::lookup(const std::string& x) const {
  for (auto it = items.rbegin(); it != items.rend(); ++it)
    if (it->first == x) return &it->second;
  return nullptr;
}

TypingCtx TypingCtx::extended(const std::string& x, TypePtr A) const {
  TypingCtx c = *this;
  c.items.emplace_back(x, std::move(A));
  return c;
}

}  // namespace glc
