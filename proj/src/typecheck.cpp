#include "glc/typecheck.hpp"

#include <sstream>

#include <json.hpp>

namespace glc {

const char* err_kind_name(ErrKind k) {
  switch (k) {
    case ErrKind::Mismatch: return "mismatch";
    case ErrKind::NotAFunction: return "not-a-function";
    case ErrKind::NotAProduct: return "not-a-product";
    case ErrKind::NotASum: return "not-a-sum";
    case ErrKind::NotAMu: return "not-a-mu";
    case ErrKind::NotALater: return "not-a-later";
    case ErrKind::NotABox: return "not-a-box";
    case ErrKind::UnguardedMu: return "unguarded-mu";
    case ErrKind::NonconstantContext: return "nonconstant-context";
    case ErrKind::UnboundVariable: return "unbound-variable";
    case ErrKind::IllFormedType: return "ill-formed-type";
    case ErrKind::CannotSynthesize: return "cannot-synthesize";
    case ErrKind::DuplicateDefinition: return "duplicate-definition";
    case ErrKind::UnknownDefinition: return "unknown-definition";
  }
  return "error";
}

std::string TypeError::render(const std::string& file) const {
  std::ostringstream os;
  os << file << ':' << loc.line << ':' << loc.col << ": ["
     << err_kind_name(kind) << "] " << what();
  return os.str();
}

std::string TypeError::render_json(const std::string& file) const {
  nlohmann::json j;
  j["kind"] = err_kind_name(kind);
  j["file"] = file;
  j["line"] = loc.line;
  j["col"] = loc.col;
  j["message"] = what();
  if (expected) j["expected"] = pretty(expected);
  if (found) j["found"] = pretty(found);
  return j.dump();
}

// ---------------------------------------------------------------------------
// iota expansion and definition inlining
// ---------------------------------------------------------------------------

static TermPtr rebuild3(const TermPtr& t, TermPtr a, TermPtr b, TermPtr c) {
  if (a == t->a && b == t->b && c == t->c) return t;
  auto n = std::make_shared<Term>(*t);
  n->a = std::move(a);
  n->b = std::move(b);
  n->c = std::move(c);
  return n;
}

TermPtr expand_iota(const TermPtr& t) {
  if (!t) return t;
  switch (t->tag) {
    case TmTag::Prev:
    case TmTag::BoxI:
    case TmTag::BoxSum: {
      TermPtr body = expand_iota(t->a);
      auto n = std::make_shared<Term>(*t);
      n->a = body;
      if (t->iota) {
        auto vars = free_vars_ordered(body);
        std::vector<SubstItem> su;
        su.reserve(vars.size());
        for (auto& v : vars) su.push_back({v, tm::var(v)});
        n->su = std::move(su);
        n->iota = false;
      } else {
        for (auto& it : n->su) it.rep = expand_iota(it.rep);
      }
      return n;
    }
    default:
      return rebuild3(t, expand_iota(t->a), expand_iota(t->b),
                      expand_iota(t->c));
  }
}

static TermPtr inline_rec(const TermPtr& t,
                          const std::map<std::string, TermPtr>& env,
                          std::set<std::string>& bound) {
  if (!t) return t;
  switch (t->tag) {
    case TmTag::Var: {
      if (bound.count(t->x)) return t;
      auto it = env.find(t->x);
      return it == env.end() ? t : it->second;
    }
    case TmTag::Lam:
    case TmTag::Fix: {
      bool fresh = bound.insert(t->x).second;
      TermPtr body = inline_rec(t->a, env, bound);
      if (fresh) bound.erase(t->x);
      return rebuild3(t, body, t->b, t->c);
    }
    case TmTag::Case: {
      TermPtr scrut = inline_rec(t->a, env, bound);
      bool f1 = bound.insert(t->x).second;
      TermPtr b1 = inline_rec(t->b, env, bound);
      if (f1) bound.erase(t->x);
      bool f2 = bound.insert(t->y).second;
      TermPtr b2 = inline_rec(t->c, env, bound);
      if (f2) bound.erase(t->y);
      return rebuild3(t, scrut, b1, b2);
    }
    case TmTag::Prev:
    case TmTag::BoxI:
    case TmTag::BoxSum: {
      if (t->iota) {
        // iota is transparent to inlining: its eventual binders are the free
        // variables left after definitions are resolved away.
        TermPtr body = inline_rec(t->a, env, bound);
        if (body == t->a) return t;
        auto n = std::make_shared<Term>(*t);
        n->a = body;
        return n;
      }
      auto n = std::make_shared<Term>(*t);
      bool changed = false;
      for (auto& it : n->su) {
        TermPtr r = inline_rec(it.rep, env, bound);
        changed |= (r != it.rep);
        it.rep = r;
      }
      std::vector<std::string> newly;
      for (auto& it : t->su)
        if (bound.insert(it.var).second) newly.push_back(it.var);
      TermPtr body = inline_rec(t->a, env, bound);
      for (auto& v : newly) bound.erase(v);
      changed |= (body != t->a);
      n->a = body;
      return changed ? TermPtr(n) : t;
    }
    default:
      return rebuild3(t, inline_rec(t->a, env, bound),
                      inline_rec(t->b, env, bound),
                      inline_rec(t->c, env, bound));
  }
}

TermPtr inline_defs(const TermPtr& t,
                    const std::map<std::string, TermPtr>& env) {
  std::set<std::string> bound;
  return inline_rec(t, env, bound);
}

// ---------------------------------------------------------------------------
// The fixed-point encoding
// ---------------------------------------------------------------------------

// fix x. body at type A becomes an application of the guarded fixed-point
// combinator: with W = mu w. (|>w -> A),
//   h = \y : |>W. f ((next (\u : W. unfold u) <*> y) <*> next y)
//   fix = h (next (fold h))
// where f = \x : |>A. body. One unfolding step later, h (next (fold h))
// reduces to f (next (h (next (fold h)))), which is the defining equation.
TermPtr elaborate_fix(const std::string& x, const TypePtr& A,
                      const TermPtr& checked_body) {
  auto W = ty::mu("w", ty::arrow(ty::later(ty::var("w")), A));
  auto unf = tm::lam("u", tm::unfold(tm::var("u")), W);
  auto f = tm::lam(x, checked_body, ty::later(A));
  std::set<std::string> avoid = free_vars(checked_body);
  avoid.insert(x);
  std::string yn = fresh_name("y", avoid);
  auto arg = tm::laterapp(tm::laterapp(tm::next(unf), tm::var(yn)),
                          tm::next(tm::var(yn)));
  auto h = tm::lam(yn, tm::app(f, arg), ty::later(W));
  return tm::app(h, tm::next(tm::fold(h, W)));
}

// ---------------------------------------------------------------------------
// Bidirectional checking
// ---------------------------------------------------------------------------

namespace {

struct Checker {
  // --- error helpers ---

  [[noreturn]] static void fail(ErrKind k, Loc l, const std::string& msg,
                                TypePtr exp = nullptr, TypePtr fnd = nullptr) {
    throw TypeError(k, l, msg, std::move(exp), std::move(fnd));
  }

  [[noreturn]] static void mismatch(Loc l, const TypePtr& exp,
                                    const TypePtr& fnd,
                                    const std::string& what) {
    std::ostringstream os;
    os << what << ": expected " << pretty(exp);
    if (fnd) os << ", found " << pretty(fnd);
    fail(ErrKind::Mismatch, l, os.str(), exp, fnd);
  }

  // --- substitution lists ---

  // Type each replacement in the enclosing context, insist the type is
  // constant, and build the context the body is checked in (exactly the
  // listed variables, nothing else).
  TypingCtx subst_ctx(const TypingCtx& ctx, const TermPtr& t,
                      std::vector<TypePtr>* rep_types = nullptr) {
    TypingCtx inner;
    for (auto& it : t->su) {
      auto [A, rep] = synth(ctx, it.rep);
      (void)rep;
      if (!is_constant(A)) {
        std::ostringstream os;
        os << "substitution binds " << it.var << " to a term of type "
           << pretty(A)
           << ", which is not constant (a later outside any box)";
        fail(ErrKind::NonconstantContext, it.rep ? it.rep->loc : t->loc,
             os.str(), nullptr, A);
      }
      inner.items.emplace_back(it.var, A);
      if (rep_types) rep_types->push_back(A);
    }
    return inner;
  }

  // Substitution list with elaborated replacement terms.
  std::vector<SubstItem> elab_su(const TypingCtx& ctx, const TermPtr& t) {
    std::vector<SubstItem> su;
    su.reserve(t->su.size());
    for (auto& it : t->su) {
      auto [A, rep] = synth(ctx, it.rep);
      (void)A;
      su.push_back({it.var, rep});
    }
    return su;
  }

  [[noreturn]] void iota_unexpanded(const TermPtr& t) {
    (void)t;
    throw std::logic_error("iota substitution reached the checker unexpanded");
  }

  // --- synthesis ---

  std::pair<TypePtr, TermPtr> synth(const TypingCtx& ctx, const TermPtr& t) {
    switch (t->tag) {
      case TmTag::Var: {
        if (const TypePtr* A = ctx.lookup(t->x)) return {*A, t};
        fail(ErrKind::UnboundVariable, t->loc,
             "variable '" + t->x + "' is not bound here");
      }
      case TmTag::Unit:
        return {ty::unit(), t};
      case TmTag::Zero:
        return {ty::nat(), t};
      case TmTag::Succ: {
        TermPtr a = checkt(ctx, t->a, ty::nat());
        return {ty::nat(), rebuild3(t, a, nullptr, nullptr)};
      }
      case TmTag::Prim: {
        TermPtr a = checkt(ctx, t->a, ty::nat());
        TermPtr b = checkt(ctx, t->b, ty::nat());
        return {ty::nat(), rebuild3(t, a, b, nullptr)};
      }
      case TmTag::Pair: {
        auto [A, a] = synth(ctx, t->a);
        auto [B, b] = synth(ctx, t->b);
        return {ty::prod(A, B), rebuild3(t, a, b, nullptr)};
      }
      case TmTag::Proj: {
        auto [P, a] = synth(ctx, t->a);
        if (P->tag != TyTag::Prod)
          fail(ErrKind::NotAProduct, t->loc,
               "projection from a non-product of type " + pretty(P), nullptr,
               P);
        return {t->idx == 1 ? P->a : P->b, rebuild3(t, a, nullptr, nullptr)};
      }
      case TmTag::Lam: {
        if (!t->ann)
          fail(ErrKind::CannotSynthesize, t->loc,
               "cannot synthesize the type of a bare lambda; an expected "
               "type is required");
        auto [B, body] = synth(ctx.extended(t->x, t->ann), t->a);
        return {ty::arrow(t->ann, B), rebuild3(t, body, nullptr, nullptr)};
      }
      case TmTag::App: {
        auto [F, f] = synth(ctx, t->a);
        if (F->tag != TyTag::Arrow)
          fail(ErrKind::NotAFunction, t->loc,
               "application of a non-function of type " + pretty(F), nullptr,
               F);
        TermPtr a = checkt(ctx, t->b, F->a);
        return {F->b, rebuild3(t, f, a, nullptr)};
      }
      case TmTag::Fold: {
        if (!t->ann)
          fail(ErrKind::CannotSynthesize, t->loc,
               "cannot synthesize the type of fold; an expected type is "
               "required");
        TermPtr a = checkt(ctx, t->a, unfold_mu(t->ann));
        return {t->ann, rebuild3(t, a, nullptr, nullptr)};
      }
      case TmTag::Unfold: {
        auto [M, a] = synth(ctx, t->a);
        if (M->tag != TyTag::Mu)
          fail(ErrKind::NotAMu, t->loc,
               "unfold of a non-recursive type " + pretty(M), nullptr, M);
        return {unfold_mu(M), rebuild3(t, a, nullptr, nullptr)};
      }
      case TmTag::Next: {
        auto [A, a] = synth(ctx, t->a);
        return {ty::later(A), rebuild3(t, a, nullptr, nullptr)};
      }
      case TmTag::LaterApp: {
        auto [F, f] = synth(ctx, t->a);
        if (F->tag != TyTag::Later)
          fail(ErrKind::NotALater, t->loc,
               "later application needs a later function, found " + pretty(F),
               nullptr, F);
        if (F->a->tag != TyTag::Arrow)
          fail(ErrKind::NotAFunction, t->loc,
               "later application of a non-function of type " + pretty(F),
               nullptr, F);
        TermPtr a = checkt(ctx, t->b, ty::later(F->a->a));
        return {ty::later(F->a->b), rebuild3(t, f, a, nullptr)};
      }
      case TmTag::Prev: {
        if (t->iota) iota_unexpanded(t);
        TypingCtx inner = subst_ctx(ctx, t);
        auto su = elab_su(ctx, t);
        auto [L, body] = synth(inner, t->a);
        if (L->tag != TyTag::Later)
          fail(ErrKind::NotALater, t->loc,
               "prev needs a later-typed body, found " + pretty(L), nullptr,
               L);
        auto n = std::make_shared<Term>(*t);
        n->su = std::move(su);
        n->a = body;
        return {L->a, n};
      }
      case TmTag::BoxI: {
        if (t->iota) iota_unexpanded(t);
        TypingCtx inner = subst_ctx(ctx, t);
        auto su = elab_su(ctx, t);
        auto [A, body] = synth(inner, t->a);
        auto n = std::make_shared<Term>(*t);
        n->su = std::move(su);
        n->a = body;
        return {ty::box(A), n};
      }
      case TmTag::Unbox: {
        auto [B, a] = synth(ctx, t->a);
        if (B->tag != TyTag::Box)
          fail(ErrKind::NotABox, t->loc,
               "unbox of a non-box of type " + pretty(B), nullptr, B);
        return {B->a, rebuild3(t, a, nullptr, nullptr)};
      }
      case TmTag::BoxSum: {
        if (t->iota) iota_unexpanded(t);
        TypingCtx inner = subst_ctx(ctx, t);
        auto su = elab_su(ctx, t);
        auto [S, body] = synth(inner, t->a);
        if (S->tag != TyTag::Sum)
          fail(ErrKind::NotASum, t->loc,
               "boxplus needs a sum-typed body, found " + pretty(S), nullptr,
               S);
        auto n = std::make_shared<Term>(*t);
        n->su = std::move(su);
        n->a = body;
        return {ty::sum(ty::box(S->a), ty::box(S->b)), n};
      }
      case TmTag::Inj: {
        if (!t->ann)
          fail(ErrKind::CannotSynthesize, t->loc,
               "cannot synthesize the type of an injection; an expected type "
               "is required");
        TermPtr a =
            checkt(ctx, t->a, t->idx == 1 ? t->ann->a : t->ann->b);
        return {t->ann, rebuild3(t, a, nullptr, nullptr)};
      }
      case TmTag::Case: {
        auto [S, scrut] = synth(ctx, t->a);
        if (S->tag != TyTag::Sum)
          fail(ErrKind::NotASum, t->loc,
               "case scrutinee has non-sum type " + pretty(S), nullptr, S);
        auto [C1, b1] = synth(ctx.extended(t->x, S->a), t->b);
        auto [C2, b2] = synth(ctx.extended(t->y, S->b), t->c);
        if (!type_equal(C1, C2))
          mismatch(t->loc, C1, C2, "case branches disagree");
        return {C1, rebuild3(t, scrut, b1, b2)};
      }
      case TmTag::Abort: {
        if (!t->ann)
          fail(ErrKind::CannotSynthesize, t->loc,
               "cannot synthesize the type of abort; an expected type is "
               "required");
        TermPtr a = checkt(ctx, t->a, ty::empty());
        return {t->ann, rebuild3(t, a, nullptr, nullptr)};
      }
      case TmTag::Fix:
        fail(ErrKind::CannotSynthesize, t->loc,
             "cannot synthesize the type of fix; an expected type is "
             "required");
    }
    throw std::logic_error("synth: unhandled term");
  }

  // --- checking ---

  TermPtr checkt(const TypingCtx& ctx, const TermPtr& t,
                 const TypePtr& expect) {
    switch (t->tag) {
      case TmTag::Lam: {
        if (expect->tag != TyTag::Arrow)
          mismatch(t->loc, expect, nullptr, "lambda constructs a function");
        if (t->ann && !type_equal(t->ann, expect->a))
          mismatch(t->loc, expect->a, t->ann, "lambda domain annotation");
        TermPtr body = checkt(ctx.extended(t->x, expect->a), t->a, expect->b);
        auto n = std::make_shared<Term>(*t);
        n->a = body;
        n->ann = expect->a;
        return n;
      }
      case TmTag::Fix: {
        TermPtr body =
            checkt(ctx.extended(t->x, ty::later(expect)), t->a, expect);
        return elaborate_fix(t->x, expect, body);
      }
      case TmTag::Pair: {
        if (expect->tag != TyTag::Prod)
          return synth_against(ctx, t, expect, "pair constructs a product");
        TermPtr a = checkt(ctx, t->a, expect->a);
        TermPtr b = checkt(ctx, t->b, expect->b);
        return rebuild3(t, a, b, nullptr);
      }
      case TmTag::Fold: {
        if (expect->tag != TyTag::Mu)
          mismatch(t->loc, expect, t->ann,
                   "fold constructs a recursive type");
        TermPtr a = checkt(ctx, t->a, unfold_mu(expect));
        auto n = std::make_shared<Term>(*t);
        n->a = a;
        n->ann = expect;
        return n;
      }
      case TmTag::Next: {
        if (expect->tag != TyTag::Later)
          return synth_against(ctx, t, expect, "next constructs a later value");
        TermPtr a = checkt(ctx, t->a, expect->a);
        return rebuild3(t, a, nullptr, nullptr);
      }
      case TmTag::Inj: {
        if (expect->tag != TyTag::Sum)
          mismatch(t->loc, expect, t->ann, "injection constructs a sum");
        TermPtr a = checkt(ctx, t->a, t->idx == 1 ? expect->a : expect->b);
        auto n = std::make_shared<Term>(*t);
        n->a = a;
        n->ann = expect;
        return n;
      }
      case TmTag::Case: {
        auto [S, scrut] = synth(ctx, t->a);
        if (S->tag != TyTag::Sum)
          fail(ErrKind::NotASum, t->loc,
               "case scrutinee has non-sum type " + pretty(S), nullptr, S);
        TermPtr b1 = checkt(ctx.extended(t->x, S->a), t->b, expect);
        TermPtr b2 = checkt(ctx.extended(t->y, S->b), t->c, expect);
        return rebuild3(t, scrut, b1, b2);
      }
      case TmTag::Abort: {
        TermPtr a = checkt(ctx, t->a, ty::empty());
        auto n = std::make_shared<Term>(*t);
        n->a = a;
        n->ann = expect;
        return n;
      }
      case TmTag::Prev: {
        if (t->iota) iota_unexpanded(t);
        TypingCtx inner = subst_ctx(ctx, t);
        auto su = elab_su(ctx, t);
        TermPtr body = checkt(inner, t->a, ty::later(expect));
        auto n = std::make_shared<Term>(*t);
        n->su = std::move(su);
        n->a = body;
        return n;
      }
      case TmTag::BoxI: {
        if (expect->tag != TyTag::Box)
          return synth_against(ctx, t, expect, "box constructs a boxed value");
        if (t->iota) iota_unexpanded(t);
        TypingCtx inner = subst_ctx(ctx, t);
        auto su = elab_su(ctx, t);
        TermPtr body = checkt(inner, t->a, expect->a);
        auto n = std::make_shared<Term>(*t);
        n->su = std::move(su);
        n->a = body;
        return n;
      }
      case TmTag::BoxSum: {
        if (expect->tag != TyTag::Sum || expect->a->tag != TyTag::Box ||
            expect->b->tag != TyTag::Box)
          return synth_against(ctx, t, expect,
                               "boxplus constructs a sum of boxes");
        if (t->iota) iota_unexpanded(t);
        TypingCtx inner = subst_ctx(ctx, t);
        auto su = elab_su(ctx, t);
        TermPtr body =
            checkt(inner, t->a, ty::sum(expect->a->a, expect->b->a));
        auto n = std::make_shared<Term>(*t);
        n->su = std::move(su);
        n->a = body;
        return n;
      }
      case TmTag::Succ: {
        if (expect->tag != TyTag::Nat)
          return synth_against(ctx, t, expect,
                               "succ constructs a natural number");
        TermPtr a = checkt(ctx, t->a, expect);
        return rebuild3(t, a, nullptr, nullptr);
      }
      case TmTag::Prim: {
        if (expect->tag != TyTag::Nat)
          return synth_against(ctx, t, expect,
                               "arithmetic produces a natural number");
        TermPtr a = checkt(ctx, t->a, expect);
        TermPtr b = checkt(ctx, t->b, expect);
        return rebuild3(t, a, b, nullptr);
      }
      default:
        return synth_against(ctx, t, expect, "term");
    }
  }

  TermPtr synth_against(const TypingCtx& ctx, const TermPtr& t,
                        const TypePtr& expect, const std::string& what) {
    auto [A, e] = synth(ctx, t);
    if (!type_equal(A, expect)) mismatch(t->loc, expect, A, what);
    return e;
  }
};

}  // namespace

TypePtr infer(const TypingCtx& ctx, const TermPtr& t) {
  Checker c;
  return c.synth(ctx, t).first;
}

TermPtr check(const TypingCtx& ctx, const TermPtr& t, const TypePtr& expected) {
  Checker c;
  return c.checkt(ctx, t, expected);
}

// ---------------------------------------------------------------------------
// Whole programs
// ---------------------------------------------------------------------------

const CheckedDef* CheckedProgram::find(const std::string& name) const {
  for (auto& d : defs)
    if (d.name == name) return &d;
  return nullptr;
}

static void require_wf(const TypePtr& A, Loc at, const std::string& where) {
  if (auto issue = wf_issue({}, A)) {
    switch (issue->kind) {
      case WfIssue::Kind::UnboundVar:
        throw TypeError(ErrKind::IllFormedType, issue->loc,
                        where + ": unbound type variable '" + issue->name +
                            "'");
      case WfIssue::Kind::UnguardedMu:
        throw TypeError(ErrKind::UnguardedMu, issue->loc,
                        where + ": recursive type variable '" + issue->name +
                            "' must only occur under a later");
      case WfIssue::Kind::OpenBox:
        throw TypeError(ErrKind::IllFormedType, issue->loc,
                        where + ": boxed types must be closed");
    }
  }
  (void)at;
}

CheckedProgram check_program(const Program& p) {
  CheckedProgram out;
  std::map<std::string, TermPtr> env;
  for (auto& [name, A] : p.aliases)
    require_wf(A, A ? A->loc : Loc{}, "type alias " + name);
  for (auto& d : p.defs) {
    require_wf(d.type, d.loc, "definition " + d.name);
    TermPtr body = inline_defs(d.body, env);
    body = expand_iota(body);
    TermPtr el = check(TypingCtx{}, body, d.type);
    out.defs.push_back({d.name, d.type, el, d.loc});
    env[d.name] = el;
  }
  return out;
}

}  // namespace glc
