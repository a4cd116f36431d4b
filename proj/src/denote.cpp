#include "glc/denote.hpp"

#include <map>
#include <sstream>
#include <stdexcept>

#include "glc/parser.hpp"
#include "glc/typecheck.hpp"

namespace glc {

namespace sem {

static std::shared_ptr<SemElem> mk(SemElem::K k) {
  auto e = std::make_shared<SemElem>();
  e->k = k;
  return e;
}

Sem unit_() { return mk(SemElem::K::Unit); }
Sem nat_(uint64_t n) {
  auto e = mk(SemElem::K::Nat);
  e->nat = n;
  return e;
}
Sem pair_(Sem a, Sem b) {
  auto e = mk(SemElem::K::Pair);
  e->a = std::move(a);
  e->b = std::move(b);
  return e;
}
Sem inj_(int d, Sem p) {
  auto e = mk(SemElem::K::Inj);
  e->idx = d;
  e->a = std::move(p);
  return e;
}
Sem fun_(int arity, std::function<Sem(int, const Sem&)> f) {
  auto e = mk(SemElem::K::Fun);
  e->arity = arity;
  e->fn = std::move(f);
  return e;
}
Sem later_zero() { return mk(SemElem::K::LaterZero); }
Sem later_(Sem prior) {
  auto e = mk(SemElem::K::Later);
  e->a = std::move(prior);
  return e;
}
Sem fold_(Sem p) {
  auto e = mk(SemElem::K::Fold);
  e->a = std::move(p);
  return e;
}
Sem section_(std::function<Sem(int)> f) {
  auto memo = std::make_shared<std::map<int, Sem>>();
  auto e = mk(SemElem::K::Section);
  e->sect = [memo, f = std::move(f)](int j) -> Sem {
    auto it = memo->find(j);
    if (it != memo->end()) return it->second;
    Sem r = f(j);
    memo->emplace(j, r);
    return r;
  };
  return e;
}

}  // namespace sem

static void expect_kind(const Sem& a, SemElem::K k, const char* what) {
  if (!a || a->k != k)
    throw std::logic_error(std::string("semantic element is not a ") + what);
}

// ---------------------------------------------------------------------------
// Restriction and transport
// ---------------------------------------------------------------------------

Sem restrict_to(const TypePtr& A, const Sem& a, int i, int j) {
  if (j == i) return a;
  if (j > i || j < 1) throw std::logic_error("restrict_to: bad stages");
  switch (A->tag) {
    case TyTag::Unit:
    case TyTag::Nat:
    case TyTag::Empty:
      return a;
    case TyTag::Prod:
      expect_kind(a, SemElem::K::Pair, "pair");
      return sem::pair_(restrict_to(A->a, a->a, i, j),
                        restrict_to(A->b, a->b, i, j));
    case TyTag::Sum:
      expect_kind(a, SemElem::K::Inj, "injection");
      return sem::inj_(a->idx, restrict_to(a->idx == 1 ? A->a : A->b, a->a,
                                           i, j));
    case TyTag::Arrow: {
      // Truncation: keep the components at stages 1..j.
      expect_kind(a, SemElem::K::Fun, "function");
      return sem::fun_(j, a->fn);
    }
    case TyTag::Later: {
      if (j == 1) return sem::later_zero();
      expect_kind(a, SemElem::K::Later, "later element");
      return sem::later_(restrict_to(A->a, a->a, i - 1, j - 1));
    }
    case TyTag::Box:
      return a;  // global sections restrict to themselves
    case TyTag::Mu: {
      expect_kind(a, SemElem::K::Fold, "fold element");
      return sem::fold_(restrict_to(unfold_mu(A), a->a, i, j));
    }
    case TyTag::Var:
      throw std::logic_error("restrict_to: open type");
  }
  throw std::logic_error("restrict_to: unhandled type");
}

Sem reindex_const(const TypePtr& A, const Sem& a, int from, int to) {
  if (from == to) return a;
  switch (A->tag) {
    case TyTag::Unit:
    case TyTag::Nat:
    case TyTag::Empty:
      return a;
    case TyTag::Box:
      return a;
    case TyTag::Prod:
      return sem::pair_(reindex_const(A->a, a->a, from, to),
                        reindex_const(A->b, a->b, from, to));
    case TyTag::Sum:
      return sem::inj_(a->idx, reindex_const(a->idx == 1 ? A->a : A->b, a->a,
                                             from, to));
    case TyTag::Arrow: {
      expect_kind(a, SemElem::K::Fun, "function");
      TypePtr D = A->a, C = A->b;
      Sem base = a;
      return sem::fun_(to, [D, C, base, from](int j, const Sem& v) -> Sem {
        int jj = j <= base->arity ? j : base->arity;
        Sem vv = reindex_const(D, v, j, jj);
        Sem r = base->fn(jj, vv);
        return reindex_const(C, r, jj, j);
      });
    }
    case TyTag::Mu: {
      // A constant recursive type cannot actually use its variable (any use
      // would need a bare later), so unfolding just strips the binder.
      expect_kind(a, SemElem::K::Fold, "fold element");
      return sem::fold_(reindex_const(unfold_mu(A), a->a, from, to));
    }
    case TyTag::Later:
      throw std::logic_error("reindex_const: type is not constant");
    case TyTag::Var:
      throw std::logic_error("reindex_const: open type");
  }
  throw std::logic_error("reindex_const: unhandled type");
}

// ---------------------------------------------------------------------------
// Denotation
// ---------------------------------------------------------------------------

namespace {

struct DEnv {
  TypingCtx ctx;
  std::vector<Sem> vals;

  DEnv restricted(int i, int j) const {
    if (i == j) return *this;
    DEnv out;
    out.ctx = ctx;
    out.vals.reserve(vals.size());
    for (size_t k = 0; k < vals.size(); ++k)
      out.vals.push_back(restrict_to(ctx.items[k].second, vals[k], i, j));
    return out;
  }

  DEnv extended(const std::string& x, TypePtr A, Sem v) const {
    DEnv out = *this;
    out.ctx.items.emplace_back(x, std::move(A));
    out.vals.push_back(std::move(v));
    return out;
  }

  Sem lookup(const std::string& x) const {
    for (size_t k = vals.size(); k-- > 0;)
      if (ctx.items[k].first == x) return vals[k];
    throw std::logic_error("denote: unbound variable " + x);
  }
};

Sem den(const DEnv& env, const TermPtr& t, int i);

// Build the environment a substitution list denotes: each replacement is
// evaluated in the outer environment; its (constant) type lets it be carried
// to any other stage later.
DEnv su_env(const DEnv& env, const TermPtr& t, int i) {
  DEnv inner;
  for (auto& it : t->su) {
    TypePtr A = infer(env.ctx, it.rep);
    inner.ctx.items.emplace_back(it.var, A);
    inner.vals.push_back(den(env, it.rep, i));
  }
  return inner;
}

DEnv reindex_env(const DEnv& env, int from, int to) {
  DEnv out;
  out.ctx = env.ctx;
  out.vals.reserve(env.vals.size());
  for (size_t k = 0; k < env.vals.size(); ++k)
    out.vals.push_back(
        reindex_const(env.ctx.items[k].second, env.vals[k], from, to));
  return out;
}

Sem den(const DEnv& env, const TermPtr& t, int i) {
  switch (t->tag) {
    case TmTag::Var:
      return env.lookup(t->x);
    case TmTag::Unit:
      return sem::unit_();
    case TmTag::Zero:
      return sem::nat_(0);
    case TmTag::Succ: {
      Sem n = den(env, t->a, i);
      return sem::nat_(n->nat + 1);
    }
    case TmTag::Prim: {
      Sem m = den(env, t->a, i), n = den(env, t->b, i);
      return sem::nat_(t->op == PrimOp::Add ? m->nat + n->nat
                                            : m->nat * n->nat);
    }
    case TmTag::Pair:
      return sem::pair_(den(env, t->a, i), den(env, t->b, i));
    case TmTag::Proj: {
      Sem p = den(env, t->a, i);
      expect_kind(p, SemElem::K::Pair, "pair");
      return t->idx == 1 ? p->a : p->b;
    }
    case TmTag::Lam: {
      if (!t->ann) throw std::logic_error("denote: unannotated lambda");
      DEnv captured = env;
      TermPtr body = t->a;
      std::string x = t->x;
      TypePtr D = t->ann;
      return sem::fun_(i, [captured, body, x, D, i](int j, const Sem& v) {
        DEnv inner = captured.restricted(i, j).extended(x, D, v);
        return den(inner, body, j);
      });
    }
    case TmTag::App: {
      Sem f = den(env, t->a, i);
      expect_kind(f, SemElem::K::Fun, "function");
      Sem x = den(env, t->b, i);
      return f->fn(i, x);
    }
    case TmTag::Fold:
      return sem::fold_(den(env, t->a, i));
    case TmTag::Unfold: {
      Sem p = den(env, t->a, i);
      expect_kind(p, SemElem::K::Fold, "fold element");
      return p->a;
    }
    case TmTag::Next: {
      if (i == 1) return sem::later_zero();
      return sem::later_(den(env.restricted(i, i - 1), t->a, i - 1));
    }
    case TmTag::LaterApp: {
      if (i == 1) return sem::later_zero();
      Sem f = den(env, t->a, i);
      Sem x = den(env, t->b, i);
      expect_kind(f, SemElem::K::Later, "later element");
      expect_kind(x, SemElem::K::Later, "later element");
      expect_kind(f->a, SemElem::K::Fun, "function");
      return sem::later_(f->a->fn(i - 1, x->a));
    }
    case TmTag::Prev: {
      if (t->iota) throw std::logic_error("denote: iota not expanded");
      // The body lives one stage up; its constant environment transports.
      DEnv inner = su_env(env, t, i);
      Sem r = den(reindex_env(inner, i, i + 1), t->a, i + 1);
      expect_kind(r, SemElem::K::Later, "later element");
      return r->a;
    }
    case TmTag::BoxI: {
      if (t->iota) throw std::logic_error("denote: iota not expanded");
      DEnv inner = su_env(env, t, i);
      TermPtr body = t->a;
      return sem::section_([inner, body, i](int j) {
        return den(reindex_env(inner, i, j), body, j);
      });
    }
    case TmTag::Unbox: {
      Sem s = den(env, t->a, i);
      expect_kind(s, SemElem::K::Section, "boxed value");
      return s->sect(i);
    }
    case TmTag::BoxSum: {
      if (t->iota) throw std::logic_error("denote: iota not expanded");
      DEnv inner = su_env(env, t, i);
      TermPtr body = t->a;
      // In a constant environment the branch taken does not depend on the
      // stage, so probe it once and build a section of the payload.
      Sem probe = den(reindex_env(inner, i, 1), body, 1);
      expect_kind(probe, SemElem::K::Inj, "injection");
      int d = probe->idx;
      Sem payload = sem::section_([inner, body, i, d](int j) {
        Sem s = den(reindex_env(inner, i, j), body, j);
        expect_kind(s, SemElem::K::Inj, "injection");
        if (s->idx != d)
          throw std::logic_error(
              "boxplus: branch varies across stages in a constant context");
        return s->a;
      });
      return sem::inj_(d, payload);
    }
    case TmTag::Inj:
      return sem::inj_(t->idx, den(env, t->a, i));
    case TmTag::Case: {
      Sem s = den(env, t->a, i);
      expect_kind(s, SemElem::K::Inj, "injection");
      TypePtr S = infer(env.ctx, t->a);
      if (s->idx == 1)
        return den(env.extended(t->x, S->a, s->a), t->b, i);
      return den(env.extended(t->y, S->b, s->a), t->c, i);
    }
    case TmTag::Abort:
      throw std::logic_error("denote: abort reached (empty type inhabited?)");
    case TmTag::Fix:
      throw std::logic_error("denote: fix not elaborated");
  }
  throw std::logic_error("denote: unhandled term");
}

}  // namespace

Sem denote(const TermPtr& t, int i) {
  if (i < 1) throw std::invalid_argument("denote: stage must be >= 1");
  DEnv env;
  return den(env, t, i);
}

Sem denote_in(const TypingCtx& ctx, const std::vector<Sem>& vals,
              const TermPtr& t, int i) {
  if (i < 1) throw std::invalid_argument("denote: stage must be >= 1");
  DEnv env{ctx, vals};
  return den(env, t, i);
}

// ---------------------------------------------------------------------------
// Sample inhabitants
// ---------------------------------------------------------------------------

namespace {

// Build an unelaborated canonical inhabitant; variant selects between a few
// distinct ones. Returns null when no canonical term is available.
TermPtr canon(const TypePtr& A, int variant);

// Inhabitant of B[mu/alpha] in a context with z : |>(mu alpha. B), used for
// the body of a canonical recursive value. Occurrences of alpha must sit
// directly under a later (guardedness gives us that for the cases we accept).
TermPtr canon_fill(const TypePtr& B, const std::string& alpha,
                   const std::string& z, int variant) {
  auto free_in = [&](const TypePtr& T) {
    return free_type_vars(T).count(alpha) > 0;
  };
  if (!free_in(B)) return canon(B, variant);
  switch (B->tag) {
    case TyTag::Later:
      if (B->a->tag == TyTag::Var && B->a->name == alpha) return tm::var(z);
      return nullptr;  // alpha nested deeper than one later: give up
    case TyTag::Prod: {
      TermPtr a = canon_fill(B->a, alpha, z, variant);
      TermPtr b = canon_fill(B->b, alpha, z, variant);
      return (a && b) ? tm::pair(a, b) : nullptr;
    }
    case TyTag::Sum: {
      // Prefer the side without the variable; otherwise recurse left.
      if (!free_in(B->a)) {
        TermPtr a = canon(B->a, variant);
        if (a) return tm::inj(1, a);
      }
      if (!free_in(B->b)) {
        TermPtr b = canon(B->b, variant);
        if (b) return tm::inj(2, b);
      }
      if (TermPtr a = canon_fill(B->a, alpha, z, variant)) return tm::inj(1, a);
      if (TermPtr b = canon_fill(B->b, alpha, z, variant)) return tm::inj(2, b);
      return nullptr;
    }
    case TyTag::Arrow: {
      if (free_in(B->a)) return nullptr;
      TermPtr body = canon_fill(B->b, alpha, z, variant);
      return body ? tm::lam("u_", body) : nullptr;
    }
    default:
      return nullptr;
  }
}

TermPtr canon(const TypePtr& A, int variant) {
  switch (A->tag) {
    case TyTag::Unit:
      return tm::unit();
    case TyTag::Nat:
      return numeral(static_cast<uint64_t>(variant));
    case TyTag::Empty:
      return nullptr;
    case TyTag::Prod: {
      TermPtr a = canon(A->a, variant), b = canon(A->b, variant);
      return (a && b) ? tm::pair(a, b) : nullptr;
    }
    case TyTag::Sum: {
      if (variant == 0) {
        if (TermPtr a = canon(A->a, 0)) return tm::inj(1, a);
        if (TermPtr b = canon(A->b, 0)) return tm::inj(2, b);
        return nullptr;
      }
      if (TermPtr b = canon(A->b, variant - 1)) return tm::inj(2, b);
      if (TermPtr a = canon(A->a, variant)) return tm::inj(1, a);
      return nullptr;
    }
    case TyTag::Arrow: {
      if (variant == 1 && type_equal(A->a, A->b)) return tm::lam("x_", tm::var("x_"));
      if (variant == 2 && A->a->tag == TyTag::Nat && A->b->tag == TyTag::Nat)
        return tm::lam("x_", tm::succ(tm::var("x_")));
      TermPtr body = canon(A->b, variant);
      return body ? tm::lam("x_", body) : nullptr;
    }
    case TyTag::Later: {
      TermPtr a = canon(A->a, variant);
      return a ? tm::next(a) : nullptr;
    }
    case TyTag::Box: {
      TermPtr a = canon(A->a, variant);
      return a ? tm::boxi({}, a) : nullptr;
    }
    case TyTag::Mu: {
      TermPtr body = canon_fill(A->a, A->name, "z_", variant);
      return body ? tm::fix("z_", tm::fold(body)) : nullptr;
    }
    case TyTag::Var:
      return nullptr;
  }
  return nullptr;
}

}  // namespace

std::vector<TermPtr> sample_terms(const TypePtr& A) {
  std::vector<TermPtr> out;
  for (int v = 0; v < 3; ++v) {
    TermPtr t = canon(A, v);
    if (!t) continue;
    bool dup = false;
    for (auto& prev : out)
      if (term_equal(prev, t)) dup = true;
    if (dup) continue;
    out.push_back(check(TypingCtx{}, t, A));
  }
  return out;
}

// ---------------------------------------------------------------------------
// Equality and rendering
// ---------------------------------------------------------------------------

bool sem_equal_is_exact(const TypePtr& A) {
  if (!A) return true;
  if (A->tag == TyTag::Arrow || A->tag == TyTag::Box) return false;
  return sem_equal_is_exact(A->a) && sem_equal_is_exact(A->b);
}

namespace {

// Returns an empty string when equal, otherwise a witness description.
std::string eq_rec(const TypePtr& A, int i, const Sem& x, const Sem& y) {
  switch (A->tag) {
    case TyTag::Unit:
    case TyTag::Empty:
      return "";
    case TyTag::Nat: {
      if (x->nat == y->nat) return "";
      std::ostringstream os;
      os << "numbers differ: " << x->nat << " vs " << y->nat;
      return os.str();
    }
    case TyTag::Prod: {
      std::string r = eq_rec(A->a, i, x->a, y->a);
      if (!r.empty()) return "first component: " + r;
      r = eq_rec(A->b, i, x->b, y->b);
      if (!r.empty()) return "second component: " + r;
      return "";
    }
    case TyTag::Sum: {
      if (x->idx != y->idx) {
        std::ostringstream os;
        os << "injection tags differ: in" << x->idx << " vs in" << y->idx;
        return os.str();
      }
      std::string r =
          eq_rec(x->idx == 1 ? A->a : A->b, i, x->a, y->a);
      if (!r.empty()) return "injection payload: " + r;
      return "";
    }
    case TyTag::Mu: {
      std::string r = eq_rec(unfold_mu(A), i, x->a, y->a);
      if (!r.empty()) return "under fold: " + r;
      return "";
    }
    case TyTag::Later: {
      if (i == 1) return "";
      std::string r = eq_rec(A->a, i - 1, x->a, y->a);
      if (!r.empty()) return "one stage later: " + r;
      return "";
    }
    case TyTag::Arrow: {
      auto samples = sample_terms(A->a);
      for (int j = 1; j <= i; ++j) {
        for (auto& u : samples) {
          Sem su = denote(u, j);
          std::string r = eq_rec(A->b, j, x->fn(j, su), y->fn(j, su));
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
      for (int j = 1; j <= i + 2; ++j) {
        std::string r = eq_rec(A->a, j, x->sect(j), y->sect(j));
        if (!r.empty()) {
          std::ostringstream os;
          os << "boxed component at stage " << j << ": " << r;
          return os.str();
        }
      }
      return "";
    }
    case TyTag::Var:
      throw std::logic_error("sem_equal: open type");
  }
  throw std::logic_error("sem_equal: unhandled type");
}

}  // namespace

SemVerdict sem_equal(const TypePtr& A, int i, const Sem& x, const Sem& y) {
  SemVerdict v;
  v.exact = sem_equal_is_exact(A);
  v.witness = eq_rec(A, i, x, y);
  v.equal = v.witness.empty();
  return v;
}

namespace {

bool needs_parens(const std::string& s) {
  return s.find(' ') != std::string::npos;
}

std::string render_rec(const TypePtr& A, const Sem& a, int i);

// Streams of the shape mu alpha. H * |>alpha render as a flat tuple of the
// i heads visible at stage i.
bool stream_like(const TypePtr& A) {
  return A->tag == TyTag::Mu && A->a->tag == TyTag::Prod &&
         A->a->b->tag == TyTag::Later && A->a->b->a->tag == TyTag::Var &&
         A->a->b->a->name == A->name;
}

std::string render_rec(const TypePtr& A, const Sem& a, int i) {
  switch (A->tag) {
    case TyTag::Unit:
      return "()";
    case TyTag::Nat: {
      std::ostringstream os;
      os << a->nat;
      return os.str();
    }
    case TyTag::Empty:
      return "<empty>";
    case TyTag::Prod:
      return "(" + render_rec(A->a, a->a, i) + ", " +
             render_rec(A->b, a->b, i) + ")";
    case TyTag::Sum: {
      std::string p = render_rec(a->idx == 1 ? A->a : A->b, a->a, i);
      std::string head = a->idx == 1 ? "in1 " : "in2 ";
      return head + (needs_parens(p) ? "(" + p + ")" : p);
    }
    case TyTag::Arrow: {
      std::ostringstream os;
      os << "<fun@" << a->arity << ">";
      return os.str();
    }
    case TyTag::Later: {
      if (i == 1) return "later ?";
      std::string p = render_rec(A->a, a->a, i - 1);
      return "later " + (needs_parens(p) ? "(" + p + ")" : p);
    }
    case TyTag::Box: {
      std::string p = render_rec(A->a, a->sect(i), i);
      return "box " + (needs_parens(p) ? "(" + p + ")" : p);
    }
    case TyTag::Mu: {
      if (stream_like(A)) {
        TypePtr H = A->a->a;
        std::ostringstream os;
        os << '(';
        Sem cur = a;
        for (int j = i; j >= 1; --j) {
          os << render_rec(H, cur->a->a, j);
          if (j > 1) {
            os << ", ";
            cur = cur->a->b->a;  // through the pair and the later wrapper
          }
        }
        os << ')';
        return os.str();
      }
      std::string p = render_rec(unfold_mu(A), a->a, i);
      return "fold " + (needs_parens(p) ? "(" + p + ")" : p);
    }
    case TyTag::Var:
      return "<open>";
  }
  return "<?>";
}

}  // namespace

std::string render_sem(const TypePtr& A, const Sem& a, int i) {
  return render_rec(A, a, i);
}

}  // namespace glc
