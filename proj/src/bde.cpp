#include "glc/bde.hpp"

#include <cctype>
#include <functional>
#include <map>
#include <sstream>

#include "glc/eval.hpp"
#include "glc/typecheck.hpp"

namespace glc {
namespace bde {

const Compiled* Registry::find(const std::string& name) const {
  for (auto& c : items)
    if (c.name == name) return &c;
  return nullptr;
}

// ---------------------------------------------------------------------------
// Parsing
// ---------------------------------------------------------------------------

namespace {

struct BTok {
  enum class K { Ident, Num, LParen, RParen, LBrace, RBrace, Comma, Semi, Eq,
                 Plus, Star, End } k;
  std::string text;
  uint64_t num = 0;
  Loc loc;
};

std::vector<BTok> blex(const std::string& src) {
  std::vector<BTok> out;
  size_t i = 0, n = src.size();
  int line = 1, col = 1;
  auto adv = [&](size_t k) {
    for (size_t j = 0; j < k && i < n; ++j, ++i) {
      if (src[i] == '\n') { ++line; col = 1; } else { ++col; }
    }
  };
  while (i < n) {
    char c = src[i];
    if (c == ' ' || c == '\t' || c == '\r' || c == '\n') { adv(1); continue; }
    if (c == '-' && i + 1 < n && src[i + 1] == '-') {
      while (i < n && src[i] != '\n') adv(1);
      continue;
    }
    Loc l{line, col};
    if (std::isdigit(static_cast<unsigned char>(c))) {
      uint64_t v = 0;
      size_t j = i;
      while (j < n && std::isdigit(static_cast<unsigned char>(src[j]))) {
        v = v * 10 + static_cast<uint64_t>(src[j] - '0');
        if (v > 1000000)
          throw ParseError(l, "numeric literal too large (limit 1000000)");
        ++j;
      }
      out.push_back({BTok::K::Num, src.substr(i, j - i), v, l});
      adv(j - i);
      continue;
    }
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      size_t j = i;
      while (j < n && (std::isalnum(static_cast<unsigned char>(src[j])) ||
                       src[j] == '_'))
        ++j;
      out.push_back({BTok::K::Ident, src.substr(i, j - i), 0, l});
      adv(j - i);
      continue;
    }
    switch (c) {
      case '(': out.push_back({BTok::K::LParen, "(", 0, l}); adv(1); break;
      case ')': out.push_back({BTok::K::RParen, ")", 0, l}); adv(1); break;
      case '{': out.push_back({BTok::K::LBrace, "{", 0, l}); adv(1); break;
      case '}': out.push_back({BTok::K::RBrace, "}", 0, l}); adv(1); break;
      case ',': out.push_back({BTok::K::Comma, ",", 0, l}); adv(1); break;
      case ';': out.push_back({BTok::K::Semi, ";", 0, l}); adv(1); break;
      case '=': out.push_back({BTok::K::Eq, "=", 0, l}); adv(1); break;
      case '+': out.push_back({BTok::K::Plus, "+", 0, l}); adv(1); break;
      case '*': out.push_back({BTok::K::Star, "*", 0, l}); adv(1); break;
      default: {
        std::ostringstream os;
        os << "unexpected character '" << c << "'";
        throw ParseError(l, os.str());
      }
    }
  }
  out.push_back({BTok::K::End, "", 0, Loc{line, col}});
  return out;
}

BPtr mkb(BTerm::K k, Loc l) {
  auto b = std::make_shared<BTerm>();
  const_cast<BTerm&>(*b).k = k;
  const_cast<BTerm&>(*b).loc = l;
  return b;
}

struct BParser {
  std::vector<BTok> toks;
  size_t pos = 0;

  const BTok& peek() const { return toks[pos]; }
  const BTok& next() { return toks[pos < toks.size() - 1 ? pos++ : pos]; }
  BTok expect(BTok::K k, const std::string& what) {
    if (peek().k != k)
      throw ParseError(peek().loc, "expected " + what + ", found '" +
                                       (peek().k == BTok::K::End ? "end of input"
                                                                 : peek().text) +
                                       "'");
    return next();
  }

  // x<i>/y<i>/z<i> are argument variables; anything else is a call.
  BPtr atom() {
    const BTok& t = peek();
    if (t.k == BTok::K::Num) {
      next();
      auto b = std::make_shared<BTerm>();
      b->k = BTerm::K::Num;
      b->num = t.num;
      b->loc = t.loc;
      return b;
    }
    if (t.k == BTok::K::LParen) {
      next();
      BPtr inner = add();
      expect(BTok::K::RParen, "')'");
      return inner;
    }
    if (t.k == BTok::K::Ident) {
      next();
      const std::string& w = t.text;
      if (w.size() >= 2 && (w[0] == 'x' || w[0] == 'y' || w[0] == 'z')) {
        bool digits = true;
        for (size_t j = 1; j < w.size(); ++j)
          if (!std::isdigit(static_cast<unsigned char>(w[j]))) digits = false;
        if (digits) {
          auto b = std::make_shared<BTerm>();
          b->k = w[0] == 'x' ? BTerm::K::X
                             : (w[0] == 'y' ? BTerm::K::Y : BTerm::K::Z);
          b->idx = std::stoi(w.substr(1));
          b->loc = t.loc;
          return b;
        }
      }
      auto b = std::make_shared<BTerm>();
      b->k = BTerm::K::Call;
      b->fname = w;
      b->loc = t.loc;
      expect(BTok::K::LParen, "'(' after call target");
      if (peek().k != BTok::K::RParen) {
        for (;;) {
          b->args.push_back(add());
          if (peek().k == BTok::K::Comma) {
            next();
            continue;
          }
          break;
        }
      }
      expect(BTok::K::RParen, "')'");
      return b;
    }
    throw ParseError(t.loc, "expected an equation term");
  }

  BPtr mul() {
    BPtr t = atom();
    while (peek().k == BTok::K::Star) {
      Loc l = next().loc;
      auto b = std::const_pointer_cast<BTerm>(mkb(BTerm::K::Mul, l));
      b->args = {t, atom()};
      t = b;
    }
    return t;
  }
  BPtr add() {
    BPtr t = mul();
    while (peek().k == BTok::K::Plus) {
      Loc l = next().loc;
      auto b = std::const_pointer_cast<BTerm>(mkb(BTerm::K::Add, l));
      b->args = {t, mul()};
      t = b;
    }
    return t;
  }

  std::vector<BdeSpec> file() {
    std::vector<BdeSpec> out;
    while (peek().k != BTok::K::End) {
      BTok kw = expect(BTok::K::Ident, "'bde'");
      if (kw.text != "bde")
        throw ParseError(kw.loc, "expected 'bde', found '" + kw.text + "'");
      BdeSpec s;
      s.loc = kw.loc;
      s.name = expect(BTok::K::Ident, "equation name").text;
      expect(BTok::K::LParen, "'('");
      BTok ar = expect(BTok::K::Num, "arity");
      if (ar.num > 8) throw ParseError(ar.loc, "arity too large (limit 8)");
      s.arity = static_cast<int>(ar.num);
      expect(BTok::K::RParen, "')'");
      expect(BTok::K::LBrace, "'{'");
      // The grammar is rigid: a head clause, then a tail clause.
      auto clause = [&](const char* want) {
        BTok which = expect(BTok::K::Ident, want);
        if (which.text != want)
          throw ParseError(which.loc, std::string("expected '") + want +
                                          "', found '" + which.text + "'");
        expect(BTok::K::Eq, "'='");
        BPtr t = add();
        expect(BTok::K::Semi, "';'");
        return t;
      };
      s.head = clause("head");
      s.tail = clause("tail");
      expect(BTok::K::RBrace, "'}'");
      out.push_back(std::move(s));
    }
    return out;
  }
};

}  // namespace

std::vector<BdeSpec> parse_bde_file(const std::string& text) {
  BParser p{blex(text)};
  return p.file();
}

// ---------------------------------------------------------------------------
// Sort checking
// ---------------------------------------------------------------------------

namespace {

enum class Sort { Base, Stream };

Sort sort_of(const BPtr& t, const BdeSpec& spec, const Registry& reg) {
  switch (t->k) {
    case BTerm::K::Num:
      return Sort::Base;
    case BTerm::K::X:
      if (t->idx < 1 || t->idx > spec.arity)
        throw SpecError(t->loc, "argument index out of range: x" +
                                    std::to_string(t->idx));
      return Sort::Base;
    case BTerm::K::Y:
    case BTerm::K::Z:
      if (t->idx < 1 || t->idx > spec.arity)
        throw SpecError(t->loc,
                        "argument index out of range: " +
                            std::string(t->k == BTerm::K::Y ? "y" : "z") +
                            std::to_string(t->idx));
      return Sort::Stream;
    case BTerm::K::Add:
    case BTerm::K::Mul:
      for (auto& a : t->args)
        if (sort_of(a, spec, reg) != Sort::Base)
          throw SpecError(a->loc,
                          "arithmetic expects number-sorted operands; wrap "
                          "streams with head access or use rho for numbers");
      return Sort::Base;
    case BTerm::K::Call: {
      if (t->fname == "rho") {
        if (t->args.size() != 1)
          throw SpecError(t->loc, "rho takes exactly one number argument");
        if (sort_of(t->args[0], spec, reg) != Sort::Base)
          throw SpecError(t->args[0]->loc,
                          "rho expects a number-sorted argument");
        return Sort::Stream;
      }
      int want;
      if (t->fname == spec.name) {
        want = spec.arity;
      } else if (const Compiled* c = reg.find(t->fname)) {
        want = c->arity;
      } else {
        throw SpecError(t->loc, "unknown equation '" + t->fname + "'");
      }
      if (static_cast<int>(t->args.size()) != want) {
        std::ostringstream os;
        os << t->fname << " takes " << want << " stream argument(s), given "
           << t->args.size();
        throw SpecError(t->loc, os.str());
      }
      for (auto& a : t->args)
        if (sort_of(a, spec, reg) != Sort::Stream) {
          std::ostringstream os;
          os << "call to " << t->fname
             << " expects stream-sorted arguments; use rho(...) to promote a "
                "number";
          throw SpecError(a->loc, os.str());
        }
      return Sort::Stream;
    }
  }
  throw std::logic_error("sort_of: unhandled equation term");
}

void forbid_in_head(const BPtr& t, const BdeSpec& spec) {
  switch (t->k) {
    case BTerm::K::Y:
    case BTerm::K::Z:
      throw SpecError(t->loc,
                      "heads may only mention x-variables, numbers and "
                      "arithmetic");
    case BTerm::K::Call:
      throw SpecError(t->loc, "heads may not contain calls");
    default:
      for (auto& a : t->args) forbid_in_head(a, spec);
  }
}

}  // namespace

void validate(const BdeSpec& spec, const Registry& reg) {
  forbid_in_head(spec.head, spec);
  if (sort_of(spec.head, spec, reg) != Sort::Base)
    throw SpecError(spec.head->loc, "the head must be number-sorted");
  if (sort_of(spec.tail, spec, reg) != Sort::Stream)
    throw SpecError(spec.tail->loc,
                    "the tail must be stream-sorted; use rho(...) to promote "
                    "a number");
}

// ---------------------------------------------------------------------------
// Compilation
// ---------------------------------------------------------------------------

namespace {

TypePtr str_g() {
  return ty::mu("a", ty::prod(ty::nat(), ty::later(ty::var("a"))));
}

TypePtr fun_type(int k) {
  TypePtr T = str_g();
  for (int i = 0; i < k; ++i) T = ty::arrow(str_g(), T);
  return T;
}

TermPtr head_of(const TermPtr& s) {
  return tm::proj(1, tm::unfold(s));
}
TermPtr tail_of(const TermPtr& s) {
  return tm::proj(2, tm::unfold(s));
}

std::string arg_name(int i) { return "s" + std::to_string(i); }

// rho as a term: \n. fold <n, next (fix z. fold <0, z>)>
TermPtr rho_surface() {
  TermPtr zeros = tm::fix("z", tm::fold(tm::pair(numeral(0), tm::var("z"))));
  return tm::lam("n",
                 tm::fold(tm::pair(tm::var("n"), tm::next(zeros))));
}

// Elaborated rho, usable anywhere (its fixed point has been rewritten away).
TermPtr rho_term() {
  static const TermPtr t =
      check(TypingCtx{}, rho_surface(), ty::arrow(ty::nat(), str_g()));
  return t;
}

// Direct (head) translation of a base term: numbers now.
TermPtr trans_base_now(const BPtr& t) {
  switch (t->k) {
    case BTerm::K::Num:
      return numeral(t->num);
    case BTerm::K::X:
      return head_of(tm::var(arg_name(t->idx)));
    case BTerm::K::Add:
      return tm::prim(PrimOp::Add, trans_base_now(t->args[0]),
                      trans_base_now(t->args[1]));
    case BTerm::K::Mul:
      return tm::prim(PrimOp::Mul, trans_base_now(t->args[0]),
                      trans_base_now(t->args[1]));
    default:
      throw std::logic_error("trans_base_now: not a base term");
  }
}

// Delayed translation of a base term, producing |>Nat.
TermPtr trans_base_later(const BPtr& t) {
  switch (t->k) {
    case BTerm::K::Num:
      return tm::next(numeral(t->num));
    case BTerm::K::X:
      return tm::next(head_of(tm::var(arg_name(t->idx))));
    case BTerm::K::Add:
    case BTerm::K::Mul: {
      PrimOp op = t->k == BTerm::K::Add ? PrimOp::Add : PrimOp::Mul;
      TermPtr opf = tm::lam(
          "p",
          tm::lam("q", tm::prim(op, tm::var("p"), tm::var("q")), ty::nat()),
          ty::nat());
      return tm::laterapp(
          tm::laterapp(tm::next(opf), trans_base_later(t->args[0])),
          trans_base_later(t->args[1]));
    }
    default:
      throw std::logic_error("trans_base_later: not a base term");
  }
}

// Delayed translation of a stream term, producing |>StrG. The recursion
// variable F stands for the delayed function being defined.
TermPtr trans_stream_later(const BPtr& t, const BdeSpec& spec,
                           const Registry& reg, const std::string& F) {
  switch (t->k) {
    case BTerm::K::Y:
      return tm::next(tm::var(arg_name(t->idx)));
    case BTerm::K::Z:
      return tail_of(tm::var(arg_name(t->idx)));
    case BTerm::K::Call: {
      if (t->fname == "rho")
        return tm::laterapp(tm::next(rho_term()),
                            trans_base_later(t->args[0]));
      TermPtr f;
      if (t->fname == spec.name) {
        f = tm::var(F);
      } else {
        // Embed the elaborated form: it contains no surface fixed points,
        // so it can be typed in any position.
        const Compiled* c = reg.find(t->fname);
        f = tm::next(c->term);
      }
      for (auto& a : t->args)
        f = tm::laterapp(f, trans_stream_later(a, spec, reg, F));
      return f;
    }
    default:
      throw std::logic_error("trans_stream_later: not a stream term");
  }
}

}  // namespace

Compiled compile_guarded(const BdeSpec& spec, const Registry& reg) {
  validate(spec, reg);
  std::string F = "go";
  TermPtr head = trans_base_now(spec.head);
  TermPtr tail = trans_stream_later(spec.tail, spec, reg, F);
  TermPtr body = tm::fold(tm::pair(head, tail));
  for (int i = spec.arity; i >= 1; --i) body = tm::lam(arg_name(i), body);
  TermPtr surface = tm::fix(F, body);
  TypePtr T = fun_type(spec.arity);
  Compiled out;
  out.name = spec.name;
  out.arity = spec.arity;
  out.type = T;
  out.surface = surface;
  out.term = check(TypingCtx{}, surface, T);
  return out;
}

TermPtr lift_Lk(const TermPtr& g, int k) {
  TypePtr T = infer(TypingCtx{}, g);
  // Expected lifted type: box each argument and the result.
  std::function<TypePtr(const TypePtr&, int)> boxed = [&](const TypePtr& cur,
                                                          int m) -> TypePtr {
    if (m == 0) return ty::box(cur);
    if (cur->tag != TyTag::Arrow)
      throw std::invalid_argument("lift_Lk: arity exceeds the function type");
    return ty::arrow(ty::box(cur->a), boxed(cur->b, m - 1));
  };
  std::function<TermPtr(TermPtr, TypePtr, int)> build =
      [&](TermPtr e, TypePtr cur, int m) -> TermPtr {
    if (m == 0) return e;
    TypePtr A = cur->a, rest = cur->b;
    // The one-argument limit combinator at this level:
    //   \f. \x. box [fb <- f, xb <- x]. (unbox fb) (unbox xb)
    TermPtr limc = tm::lam(
        "f_",
        tm::lam("x_",
                tm::boxi({{"fb", tm::var("f_")}, {"xb", tm::var("x_")}},
                         tm::app(tm::unbox(tm::var("fb")),
                                 tm::unbox(tm::var("xb")))),
                ty::box(A)),
        ty::box(cur));
    std::string xn = "a" + std::to_string(k - m + 1);
    TermPtr inner = build(tm::app(tm::app(limc, e), tm::var(xn)), rest, m - 1);
    return tm::lam(xn, inner, ty::box(A));
  };
  TermPtr built = build(tm::boxi({}, g), T, k);
  return check(TypingCtx{}, built, boxed(T, k));
}

// ---------------------------------------------------------------------------
// Equation checking
// ---------------------------------------------------------------------------

namespace {

uint64_t interp_base(const BPtr& t, const std::vector<uint64_t>& heads) {
  switch (t->k) {
    case BTerm::K::Num:
      return t->num;
    case BTerm::K::X:
      return heads[static_cast<size_t>(t->idx - 1)];
    case BTerm::K::Add:
      return interp_base(t->args[0], heads) + interp_base(t->args[1], heads);
    case BTerm::K::Mul:
      return interp_base(t->args[0], heads) * interp_base(t->args[1], heads);
    default:
      throw std::logic_error("interp_base: not a base term");
  }
}

// Direct term translation of equation terms over actual argument streams:
// the right-hand sides the compiled function's behaviour is compared to.
TermPtr subst_stream(const BPtr& t, const std::vector<TermPtr>& args,
                     const Compiled& self, const Registry& reg);

TermPtr subst_base(const BPtr& t, const std::vector<TermPtr>& args) {
  switch (t->k) {
    case BTerm::K::Num:
      return numeral(t->num);
    case BTerm::K::X:
      return head_of(args[static_cast<size_t>(t->idx - 1)]);
    case BTerm::K::Add:
      return tm::prim(PrimOp::Add, subst_base(t->args[0], args),
                      subst_base(t->args[1], args));
    case BTerm::K::Mul:
      return tm::prim(PrimOp::Mul, subst_base(t->args[0], args),
                      subst_base(t->args[1], args));
    default:
      throw std::logic_error("subst_base: not a base term");
  }
}

TermPtr subst_stream(const BPtr& t, const std::vector<TermPtr>& args,
                     const Compiled& self, const Registry& reg) {
  switch (t->k) {
    case BTerm::K::Y:
      return args[static_cast<size_t>(t->idx - 1)];
    case BTerm::K::Z:
      return tm::prev({}, tail_of(args[static_cast<size_t>(t->idx - 1)]));
    case BTerm::K::Call: {
      if (t->fname == "rho")
        return tm::app(rho_term(), subst_base(t->args[0], args));
      TermPtr f = t->fname == self.name ? self.term
                                        : reg.find(t->fname)->term;
      for (auto& a : t->args) f = tm::app(f, subst_stream(a, args, self, reg));
      return f;
    }
    default:
      throw std::logic_error("subst_stream: not a stream term");
  }
}

void tuples_rec(const std::vector<TermPtr>& samples, int k,
                std::vector<TermPtr>& cur,
                std::vector<std::vector<TermPtr>>& out, size_t cap) {
  if (out.size() >= cap) return;
  if (k == 0) {
    out.push_back(cur);
    return;
  }
  for (auto& s : samples) {
    cur.push_back(s);
    tuples_rec(samples, k - 1, cur, out, cap);
    cur.pop_back();
  }
}

}  // namespace

std::vector<TermPtr> default_samples() {
  std::vector<TermPtr> out;
  auto S = str_g();
  auto elab = [&](const TermPtr& t) { return check(TypingCtx{}, t, S); };
  // Constant streams of 1 and 2.
  for (uint64_t c : {1, 2})
    out.push_back(
        elab(tm::fix("z", tm::fold(tm::pair(numeral(c), tm::var("z"))))));
  // 0, 1, 2, 3, ...: elaborate the generator first so the application of
  // the encoded fixed point synthesizes.
  TermPtr counting_fn = check(
      TypingCtx{},
      tm::fix("g", tm::lam("n", tm::fold(tm::pair(
                                    tm::var("n"),
                                    tm::laterapp(tm::var("g"),
                                                 tm::next(tm::prim(
                                                     PrimOp::Add, tm::var("n"),
                                                     numeral(1)))))))),
      ty::arrow(ty::nat(), S));
  out.push_back(elab(tm::app(counting_fn, numeral(0))));
  // 1, 0, 1, 0, ...
  out.push_back(elab(tm::fix(
      "s", tm::fold(tm::pair(numeral(1),
                             tm::next(tm::fold(tm::pair(numeral(0),
                                                        tm::var("s")))))))));
  return out;
}

EqReport check_equations(const BdeSpec& spec, const Compiled& self,
                         const Registry& reg, int depth,
                         const std::vector<TermPtr>& samples, long budget) {
  EqReport rep;
  std::vector<std::vector<TermPtr>> tuples;
  std::vector<TermPtr> cur;
  tuples_rec(samples, spec.arity, cur, tuples, 16);
  for (size_t ti = 0; ti < tuples.size(); ++ti) {
    auto& args = tuples[ti];
    TermPtr applied = self.term;
    for (auto& a : args) applied = tm::app(applied, a);

    // Head equation.
    std::vector<uint64_t> heads;
    for (auto& a : args) {
      EvalResult r = eval(head_of(a), budget);
      if (r.kind != EvalResult::Kind::Value)
        throw EvalFailure(r.kind == EvalResult::Kind::Budget,
                          "sample head: " + r.reason);
      heads.push_back(*numeral_value(r.term));
    }
    uint64_t want_head = interp_base(spec.head, heads);
    EvalResult hr = eval(head_of(applied), budget);
    if (hr.kind != EvalResult::Kind::Value)
      throw EvalFailure(hr.kind == EvalResult::Kind::Budget,
                        "compiled head: " + hr.reason);
    uint64_t got_head = *numeral_value(hr.term);
    ++rep.comparisons;
    if (got_head != want_head) {
      std::ostringstream os;
      os << spec.name << ": head mismatch on tuple " << ti << ": expected "
         << want_head << ", got " << got_head;
      rep.ok = false;
      rep.detail = os.str();
      return rep;
    }

    // Tail equation, compared element by element to the given depth.
    TermPtr lhs = tm::prev({}, tail_of(applied));
    TermPtr rhs = subst_stream(spec.tail, args, self, reg);
    auto lv = force_guarded_stream(lhs, depth, budget);
    auto rv = force_guarded_stream(rhs, depth, budget);
    for (int e = 0; e < depth; ++e) {
      ++rep.comparisons;
      if (lv[static_cast<size_t>(e)] != rv[static_cast<size_t>(e)]) {
        std::ostringstream os;
        os << spec.name << ": tail mismatch on tuple " << ti << " element "
           << e << ": compiled gives " << lv[static_cast<size_t>(e)]
           << ", equation gives " << rv[static_cast<size_t>(e)];
        rep.ok = false;
        rep.detail = os.str();
        return rep;
      }
    }
  }
  return rep;
}

}  // namespace bde
}  // namespace glc
