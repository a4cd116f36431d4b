#include "glc/parser.hpp"

#include <cctype>
#include <map>
#include <sstream>

namespace glc {

const RawDef* Program::find(const std::string& name) const {
  for (auto& d : defs)
    if (d.name == name) return &d;
  return nullptr;
}

// ---------------------------------------------------------------------------
// Lexer
// ---------------------------------------------------------------------------

enum class Tok {
  Ident,
  Num,
  KwType,
  KwDef,
  KwMu,
  KwNat,
  KwZero,
  KwSucc,
  KwFst,
  KwSnd,
  KwFold,
  KwUnfold,
  KwNext,
  KwPrev,
  KwBox,
  KwUnbox,
  KwBoxplus,
  KwIn1,
  KwIn2,
  KwCase,
  KwOf,
  KwAbort,
  KwFix,
  KwIota,
  LParen,
  RParen,
  LBrack,
  RBrack,
  Lt,
  Gt,
  Comma,
  Dot,
  Semi,
  Colon,
  Eq,
  Backslash,
  Plus,
  Star,
  Arrow,      // ->
  LaterTy,    // |>
  Hash,       // #
  LaterApp,   // <*>
  LArrow,     // <-
  End,
};

struct Token {
  Tok kind;
  std::string text;
  uint64_t num = 0;
  Loc loc;
};

static const std::map<std::string, Tok> kKeywords = {
    {"type", Tok::KwType},   {"def", Tok::KwDef},       {"mu", Tok::KwMu},
    {"Nat", Tok::KwNat},     {"succ", Tok::KwSucc},     {"fst", Tok::KwFst},
    {"snd", Tok::KwSnd},     {"fold", Tok::KwFold},     {"unfold", Tok::KwUnfold},
    {"next", Tok::KwNext},   {"prev", Tok::KwPrev},     {"box", Tok::KwBox},
    {"unbox", Tok::KwUnbox}, {"boxplus", Tok::KwBoxplus}, {"in1", Tok::KwIn1},
    {"in2", Tok::KwIn2},     {"case", Tok::KwCase},     {"of", Tok::KwOf},
    {"abort", Tok::KwAbort}, {"fix", Tok::KwFix},       {"iota", Tok::KwIota},
    {"zero", Tok::KwZero},
};

static std::vector<Token> lex(const std::string& src) {
  std::vector<Token> out;
  size_t i = 0, n = src.size();
  int line = 1, col = 1;
  auto loc = [&]() { return Loc{line, col}; };
  auto advance = [&](size_t k) {
    for (size_t j = 0; j < k && i < n; ++j, ++i) {
      if (src[i] == '\n') {
        ++line;
        col = 1;
      } else {
        ++col;
      }
    }
  };
  while (i < n) {
    char c = src[i];
    if (c == ' ' || c == '\t' || c == '\r' || c == '\n') {
      advance(1);
      continue;
    }
    if (c == '-' && i + 1 < n && src[i + 1] == '-') {
      while (i < n && src[i] != '\n') advance(1);
      continue;
    }
    Loc l = loc();
    if (std::isdigit(static_cast<unsigned char>(c))) {
      uint64_t v = 0;
      size_t j = i;
      while (j < n && std::isdigit(static_cast<unsigned char>(src[j]))) {
        v = v * 10 + static_cast<uint64_t>(src[j] - '0');
        if (v > 1000000)
          throw ParseError(l, "numeric literal too large (limit 1000000)");
        ++j;
      }
      out.push_back({Tok::Num, src.substr(i, j - i), v, l});
      advance(j - i);
      continue;
    }
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      size_t j = i;
      while (j < n && (std::isalnum(static_cast<unsigned char>(src[j])) ||
                       src[j] == '_' || src[j] == '\''))
        ++j;
      std::string word = src.substr(i, j - i);
      auto it = kKeywords.find(word);
      out.push_back({it == kKeywords.end() ? Tok::Ident : it->second, word, 0, l});
      advance(j - i);
      continue;
    }
    switch (c) {
      case '(': out.push_back({Tok::LParen, "(", 0, l}); advance(1); break;
      case ')': out.push_back({Tok::RParen, ")", 0, l}); advance(1); break;
      case '[': out.push_back({Tok::LBrack, "[", 0, l}); advance(1); break;
      case ']': out.push_back({Tok::RBrack, "]", 0, l}); advance(1); break;
      case ',': out.push_back({Tok::Comma, ",", 0, l}); advance(1); break;
      case '.': out.push_back({Tok::Dot, ".", 0, l}); advance(1); break;
      case ';': out.push_back({Tok::Semi, ";", 0, l}); advance(1); break;
      case ':': out.push_back({Tok::Colon, ":", 0, l}); advance(1); break;
      case '=': out.push_back({Tok::Eq, "=", 0, l}); advance(1); break;
      case '\\': out.push_back({Tok::Backslash, "\\", 0, l}); advance(1); break;
      case '+': out.push_back({Tok::Plus, "+", 0, l}); advance(1); break;
      case '*': out.push_back({Tok::Star, "*", 0, l}); advance(1); break;
      case '#': out.push_back({Tok::Hash, "#", 0, l}); advance(1); break;
      case '>': out.push_back({Tok::Gt, ">", 0, l}); advance(1); break;
      case '<':
        if (i + 2 < n && src[i + 1] == '*' && src[i + 2] == '>') {
          out.push_back({Tok::LaterApp, "<*>", 0, l});
          advance(3);
        } else if (i + 1 < n && src[i + 1] == '-') {
          out.push_back({Tok::LArrow, "<-", 0, l});
          advance(2);
        } else {
          out.push_back({Tok::Lt, "<", 0, l});
          advance(1);
        }
        break;
      case '-':
        if (i + 1 < n && src[i + 1] == '>') {
          out.push_back({Tok::Arrow, "->", 0, l});
          advance(2);
        } else {
          throw ParseError(l, "unexpected character '-'");
        }
        break;
      case '|':
        if (i + 1 < n && src[i + 1] == '>') {
          out.push_back({Tok::LaterTy, "|>", 0, l});
          advance(2);
        } else {
          throw ParseError(l, "unexpected character '|'");
        }
        break;
      default: {
        std::ostringstream os;
        os << "unexpected character '" << c << "'";
        throw ParseError(l, os.str());
      }
    }
  }
  out.push_back({Tok::End, "", 0, loc()});
  return out;
}

// ---------------------------------------------------------------------------
// Parser
// ---------------------------------------------------------------------------

namespace {

class Parser {
 public:
  explicit Parser(const std::string& src) : toks_(lex(src)) {}

  Program program() {
    Program p;
    std::set<std::string> names;
    while (peek().kind != Tok::End) {
      if (peek().kind == Tok::KwType) {
        Loc l = next().loc;
        Token id = expect(Tok::Ident, "type alias name");
        if (!names.insert(id.text).second)
          throw ParseError(id.loc, "duplicate name '" + id.text + "'");
        expect(Tok::Eq, "'='");
        TypePtr t = type();
        expect(Tok::Semi, "';'");
        aliases_.emplace(id.text, t);
        p.aliases.emplace_back(id.text, t);
        (void)l;
      } else if (peek().kind == Tok::KwDef) {
        Loc l = next().loc;
        Token id = expect(Tok::Ident, "definition name");
        if (!names.insert(id.text).second)
          throw ParseError(id.loc, "duplicate name '" + id.text + "'");
        expect(Tok::Colon, "':'");
        TypePtr t = type();
        expect(Tok::Eq, "'='");
        TermPtr b = term();
        expect(Tok::Semi, "';'");
        p.defs.push_back({id.text, t, b, l});
      } else {
        throw ParseError(peek().loc, "expected 'type' or 'def', found " +
                                         describe(peek()));
      }
    }
    return p;
  }

  TypePtr type_only() {
    TypePtr t = type();
    expect(Tok::End, "end of input");
    return t;
  }

  TermPtr term_only() {
    TermPtr t = term();
    expect(Tok::End, "end of input");
    return t;
  }

 private:
  std::vector<Token> toks_;
  size_t pos_ = 0;
  std::map<std::string, TypePtr> aliases_;
  std::set<std::string> tyvars_;

  const Token& peek(size_t k = 0) const {
    size_t i = pos_ + k;
    return i < toks_.size() ? toks_[i] : toks_.back();
  }
  const Token& next() { return toks_[pos_ < toks_.size() - 1 ? pos_++ : pos_]; }
  Token expect(Tok k, const std::string& what) {
    if (peek().kind != k)
      throw ParseError(peek().loc,
                       "expected " + what + ", found " + describe(peek()));
    return next();
  }
  static std::string describe(const Token& t) {
    if (t.kind == Tok::End) return "end of input";
    return "'" + t.text + "'";
  }

  // --- types: -> (right) over + over * over unary |>/#/mu over atoms ---

  TypePtr type() {
    TypePtr t = type_sum();
    if (peek().kind == Tok::Arrow) {
      Loc l = next().loc;
      return ty::arrow(t, type(), l);
    }
    return t;
  }
  TypePtr type_sum() {
    TypePtr t = type_prod();
    while (peek().kind == Tok::Plus) {
      Loc l = next().loc;
      t = ty::sum(t, type_prod(), l);
    }
    return t;
  }
  TypePtr type_prod() {
    TypePtr t = type_unary();
    while (peek().kind == Tok::Star) {
      Loc l = next().loc;
      t = ty::prod(t, type_unary(), l);
    }
    return t;
  }
  TypePtr type_unary() {
    switch (peek().kind) {
      case Tok::LaterTy: {
        Loc l = next().loc;
        return ty::later(type_unary(), l);
      }
      case Tok::Hash: {
        Loc l = next().loc;
        return ty::box(type_unary(), l);
      }
      case Tok::KwMu: {
        Loc l = next().loc;
        Token id = expect(Tok::Ident, "type variable");
        expect(Tok::Dot, "'.'");
        bool fresh = tyvars_.insert(id.text).second;
        TypePtr body = type();  // mu extends as far right as possible
        if (fresh) tyvars_.erase(id.text);
        return ty::mu(id.text, body, l);
      }
      default:
        return type_atom();
    }
  }
  TypePtr type_atom() {
    const Token& t = peek();
    switch (t.kind) {
      case Tok::KwNat:
        next();
        return ty::nat(t.loc);
      case Tok::Num:
        if (t.num == 1) {
          next();
          return ty::unit(t.loc);
        }
        if (t.num == 0) {
          next();
          return ty::empty(t.loc);
        }
        throw ParseError(t.loc, "expected a type, found numeral '" + t.text +
                                    "' (only 0 and 1 name types)");
      case Tok::Ident: {
        next();
        if (tyvars_.count(t.text)) return ty::var(t.text, t.loc);
        auto it = aliases_.find(t.text);
        if (it != aliases_.end()) return it->second;
        throw ParseError(t.loc, "unknown type name '" + t.text + "'");
      }
      case Tok::LParen: {
        next();
        TypePtr inner = type();
        expect(Tok::RParen, "')'");
        return inner;
      }
      default:
        throw ParseError(t.loc, "expected a type, found " + describe(t));
    }
  }

  // --- terms ---

  bool starts_prefix_form(Tok k) const {
    switch (k) {
      case Tok::Backslash:
      case Tok::KwFix:
      case Tok::KwCase:
      case Tok::KwSucc:
      case Tok::KwFst:
      case Tok::KwSnd:
      case Tok::KwFold:
      case Tok::KwUnfold:
      case Tok::KwNext:
      case Tok::KwPrev:
      case Tok::KwBox:
      case Tok::KwUnbox:
      case Tok::KwBoxplus:
      case Tok::KwIn1:
      case Tok::KwIn2:
      case Tok::KwAbort:
        return true;
      default:
        return false;
    }
  }
  bool starts_atom(Tok k) const {
    return k == Tok::Ident || k == Tok::Num || k == Tok::KwZero ||
           k == Tok::LParen || k == Tok::Lt;
  }

  TermPtr term() {
    const Token& t = peek();
    switch (t.kind) {
      case Tok::Backslash: {
        Loc l = next().loc;
        Token id = expect(Tok::Ident, "binder");
        expect(Tok::Dot, "'.'");
        return tm::lam(id.text, term(), nullptr, l);
      }
      case Tok::KwFix: {
        Loc l = next().loc;
        Token id = expect(Tok::Ident, "binder");
        expect(Tok::Dot, "'.'");
        return tm::fix(id.text, term(), l);
      }
      case Tok::KwCase: {
        Loc l = next().loc;
        TermPtr scrut = term();
        expect(Tok::KwOf, "'of'");
        Token x = expect(Tok::Ident, "binder");
        expect(Tok::Dot, "'.'");
        TermPtr b1 = term();
        expect(Tok::Semi, "';'");
        Token y = expect(Tok::Ident, "binder");
        expect(Tok::Dot, "'.'");
        TermPtr b2 = term();
        return tm::case_(scrut, x.text, b1, y.text, b2, l);
      }
      case Tok::KwSucc: {
        Loc l = next().loc;
        return tm::succ(term(), l);
      }
      case Tok::KwFst: {
        Loc l = next().loc;
        return tm::proj(1, term(), l);
      }
      case Tok::KwSnd: {
        Loc l = next().loc;
        return tm::proj(2, term(), l);
      }
      case Tok::KwFold: {
        Loc l = next().loc;
        return tm::fold(term(), nullptr, l);
      }
      case Tok::KwUnfold: {
        Loc l = next().loc;
        return tm::unfold(term(), l);
      }
      case Tok::KwNext: {
        Loc l = next().loc;
        return tm::next(term(), l);
      }
      case Tok::KwUnbox: {
        Loc l = next().loc;
        return tm::unbox(term(), l);
      }
      case Tok::KwAbort: {
        Loc l = next().loc;
        return tm::abort_(term(), nullptr, l);
      }
      case Tok::KwIn1: {
        Loc l = next().loc;
        return tm::inj(1, term(), nullptr, l);
      }
      case Tok::KwIn2: {
        Loc l = next().loc;
        return tm::inj(2, term(), nullptr, l);
      }
      case Tok::KwPrev:
        return subst_form(TmTag::Prev);
      case Tok::KwBox:
        return subst_form(TmTag::BoxI);
      case Tok::KwBoxplus:
        return subst_form(TmTag::BoxSum);
      default:
        return term_add();
    }
  }

  TermPtr subst_form(TmTag tag) {
    Loc l = next().loc;
    bool iota = false;
    std::vector<SubstItem> su;
    if (peek().kind == Tok::KwIota) {
      next();
      expect(Tok::Dot, "'.'");
      iota = true;
    } else if (peek().kind == Tok::LBrack) {
      next();
      if (peek().kind != Tok::RBrack) {
        for (;;) {
          Token id = expect(Tok::Ident, "variable");
          expect(Tok::LArrow, "'<-'");
          su.push_back({id.text, term()});
          if (peek().kind == Tok::Comma) {
            next();
            continue;
          }
          break;
        }
      }
      expect(Tok::RBrack, "']'");
      expect(Tok::Dot, "'.'");
    }
    // With no bracket and no iota the substitution list is empty: the body
    // must already be closed (e.g. "prev t", "box t").
    TermPtr body = term();
    switch (tag) {
      case TmTag::Prev:
        return iota ? tm::prev_iota(body, l) : tm::prev(std::move(su), body, l);
      case TmTag::BoxI:
        return iota ? tm::box_iota(body, l) : tm::boxi(std::move(su), body, l);
      default:
        return iota ? tm::boxsum_iota(body, l)
                    : tm::boxsum(std::move(su), body, l);
    }
  }

  // Infix ladder: + looser than * looser than <*> looser than application.
  // A prefix form may appear as the final right operand of an infix chain.
  TermPtr term_add() {
    TermPtr t = term_mul();
    while (peek().kind == Tok::Plus) {
      Loc l = next().loc;
      if (starts_prefix_form(peek().kind))
        return tm::prim(PrimOp::Add, t, term(), l);
      t = tm::prim(PrimOp::Add, t, term_mul(), l);
    }
    return t;
  }
  TermPtr term_mul() {
    TermPtr t = term_lapp();
    while (peek().kind == Tok::Star) {
      Loc l = next().loc;
      if (starts_prefix_form(peek().kind))
        return tm::prim(PrimOp::Mul, t, term(), l);
      t = tm::prim(PrimOp::Mul, t, term_lapp(), l);
    }
    return t;
  }
  TermPtr term_lapp() {
    TermPtr t = term_app();
    while (peek().kind == Tok::LaterApp) {
      Loc l = next().loc;
      if (starts_prefix_form(peek().kind))
        return tm::laterapp(t, term(), l);
      t = tm::laterapp(t, term_app(), l);
    }
    return t;
  }
  TermPtr term_app() {
    TermPtr t = term_atom();
    while (starts_atom(peek().kind)) {
      Loc l = peek().loc;
      t = tm::app(t, term_atom(), l);
    }
    return t;
  }
  TermPtr term_atom() {
    const Token& t = peek();
    switch (t.kind) {
      case Tok::Ident:
        next();
        return tm::var(t.text, t.loc);
      case Tok::KwZero:
        next();
        return tm::zero(t.loc);
      case Tok::Num: {
        next();
        return numeral(t.num);
      }
      case Tok::LParen: {
        Loc l = next().loc;
        if (peek().kind == Tok::RParen) {
          next();
          return tm::unit(l);
        }
        TermPtr inner = term();
        expect(Tok::RParen, "')'");
        return inner;
      }
      case Tok::Lt: {
        Loc l = next().loc;
        TermPtr a = term();
        expect(Tok::Comma, "','");
        TermPtr b = term();
        expect(Tok::Gt, "'>'");
        return tm::pair(a, b, l);
      }
      default:
        throw ParseError(t.loc, "expected a term, found " + describe(t));
    }
  }
};

}  // namespace

Program parse_program(const std::string& src) {
  Parser p(src);
  return p.program();
}

TypePtr parse_type(const std::string& src) {
  Parser p(src);
  return p.type_only();
}

TermPtr parse_term(const std::string& src) {
  Parser p(src);
  return p.term_only();
}

// ---------------------------------------------------------------------------
// Pretty printing
// ---------------------------------------------------------------------------

// Type levels: 0 arrow, 1 sum, 2 product, 3 unary/atom.
static void pp_type(std::ostringstream& os, const TypePtr& A, int level) {
  if (!A) {
    os << "<null>";
    return;
  }
  auto paren = [&](int mine, auto body) {
    if (mine < level) {
      os << '(';
      body();
      os << ')';
    } else {
      body();
    }
  };
  switch (A->tag) {
    case TyTag::Var:
      os << A->name;
      return;
    case TyTag::Unit:
      os << '1';
      return;
    case TyTag::Nat:
      os << "Nat";
      return;
    case TyTag::Empty:
      os << '0';
      return;
    case TyTag::Arrow:
      paren(0, [&] {
        pp_type(os, A->a, 1);
        os << " -> ";
        pp_type(os, A->b, 0);
      });
      return;
    case TyTag::Sum:
      paren(1, [&] {
        pp_type(os, A->a, 1);
        os << " + ";
        pp_type(os, A->b, 2);
      });
      return;
    case TyTag::Prod:
      paren(2, [&] {
        pp_type(os, A->a, 2);
        os << " * ";
        pp_type(os, A->b, 3);
      });
      return;
    case TyTag::Later:
      paren(3, [&] {
        os << "|>";
        pp_type(os, A->a, 3);
      });
      return;
    case TyTag::Box:
      paren(3, [&] {
        os << '#';
        pp_type(os, A->a, 3);
      });
      return;
    case TyTag::Mu:
      // Binder forms reach as far right as possible; parenthesize unless
      // we're already at top level.
      paren(0, [&] {
        os << "mu " << A->name << ". ";
        pp_type(os, A->a, 0);
      });
      return;
  }
}

std::string pretty(const TypePtr& A) {
  std::ostringstream os;
  pp_type(os, A, 0);
  return os.str();
}

// Term levels: 0 top (binders, prefix forms), 1 add, 2 mul, 3 later-app,
// 4 application, 5 atom.
static void pp_term(std::ostringstream& os, const TermPtr& t, int level,
                    bool sugar) {
  if (!t) {
    os << "<null>";
    return;
  }
  auto paren = [&](int mine, auto body) {
    if (mine < level) {
      os << '(';
      body();
      os << ')';
    } else {
      body();
    }
  };
  auto prefix = [&](const char* kw) {
    paren(0, [&] {
      os << kw << ' ';
      pp_term(os, t->a, 0, sugar);
    });
  };
  auto subst_head = [&](const char* kw) {
    paren(0, [&] {
      os << kw;
      if (t->iota) {
        os << " iota. ";
      } else if (!t->su.empty()) {
        os << " [";
        for (size_t i = 0; i < t->su.size(); ++i) {
          if (i) os << ", ";
          os << t->su[i].var << " <- ";
          pp_term(os, t->su[i].rep, 0, sugar);
        }
        os << "]. ";
      } else {
        os << ' ';
      }
      pp_term(os, t->a, 0, sugar);
    });
  };
  if (sugar) {
    if (auto n = numeral_value(t)) {
      os << *n;
      return;
    }
  }
  switch (t->tag) {
    case TmTag::Var:
      os << t->x;
      return;
    case TmTag::Unit:
      os << "()";
      return;
    case TmTag::Zero:
      os << (sugar ? "0" : "zero");
      return;
    case TmTag::Succ:
      prefix("succ");
      return;
    case TmTag::Pair:
      os << '<';
      pp_term(os, t->a, 0, sugar);
      os << ", ";
      pp_term(os, t->b, 0, sugar);
      os << '>';
      return;
    case TmTag::Proj:
      prefix(t->idx == 1 ? "fst" : "snd");
      return;
    case TmTag::Lam:
      paren(0, [&] {
        os << '\\' << t->x << ". ";
        pp_term(os, t->a, 0, sugar);
      });
      return;
    case TmTag::Fix:
      paren(0, [&] {
        os << "fix " << t->x << ". ";
        pp_term(os, t->a, 0, sugar);
      });
      return;
    case TmTag::App:
      paren(4, [&] {
        pp_term(os, t->a, 4, sugar);
        os << ' ';
        pp_term(os, t->b, 5, sugar);
      });
      return;
    case TmTag::Fold:
      prefix("fold");
      return;
    case TmTag::Unfold:
      prefix("unfold");
      return;
    case TmTag::Next:
      prefix("next");
      return;
    case TmTag::Unbox:
      prefix("unbox");
      return;
    case TmTag::Abort:
      prefix("abort");
      return;
    case TmTag::Inj:
      prefix(t->idx == 1 ? "in1" : "in2");
      return;
    case TmTag::Prev:
      subst_head("prev");
      return;
    case TmTag::BoxI:
      subst_head("box");
      return;
    case TmTag::BoxSum:
      subst_head("boxplus");
      return;
    case TmTag::LaterApp:
      paren(3, [&] {
        pp_term(os, t->a, 3, sugar);
        os << " <*> ";
        pp_term(os, t->b, 4, sugar);
      });
      return;
    case TmTag::Prim:
      if (t->op == PrimOp::Add) {
        paren(1, [&] {
          pp_term(os, t->a, 1, sugar);
          os << " + ";
          pp_term(os, t->b, 2, sugar);
        });
      } else {
        paren(2, [&] {
          pp_term(os, t->a, 2, sugar);
          os << " * ";
          pp_term(os, t->b, 3, sugar);
        });
      }
      return;
    case TmTag::Case:
      paren(0, [&] {
        os << "case ";
        pp_term(os, t->a, 1, sugar);
        os << " of " << t->x << ". ";
        pp_term(os, t->b, 0, sugar);
        os << " ; " << t->y << ". ";
        pp_term(os, t->c, 0, sugar);
      });
      return;
  }
}

std::string pretty(const TermPtr& t, bool sugar_numerals) {
  std::ostringstream os;
  pp_term(os, t, 0, sugar_numerals);
  return os.str();
}

}  // namespace glc
