#include <doctest.h>

#include <functional>

#include "gen.hpp"
#include "glc/parser.hpp"
#include "glc/prelude.hpp"
#include "glc/typecheck.hpp"

using namespace glc;

namespace {

TypePtr str_g() {
  return ty::mu("a", ty::prod(ty::nat(), ty::later(ty::var("a"))));
}

ErrKind kind_of(const std::string& extra_def) {
  std::string src = std::string(prelude_source()) + "\n" + extra_def + "\n";
  try {
    check_program(parse_program(src));
  } catch (const TypeError& e) {
    return e.kind;
  }
  throw std::logic_error("expected a type error from: " + extra_def);
}

}  // namespace

TEST_CASE("the corpus checks at its declared types") {
  const CheckedProgram& p = prelude_checked();
  CHECK(type_equal(p.find("nats")->type, str_g()));
  CHECK(type_equal(p.find("cons")->type,
                   ty::arrow(ty::nat(),
                             ty::arrow(ty::later(str_g()), str_g()))));
  CHECK(type_equal(p.find("boxnats")->type, ty::box(str_g())));
  CHECK(type_equal(p.find("secondnats")->type, ty::nat()));
  CHECK(type_equal(p.find("lim")->type,
                   ty::arrow(ty::box(ty::arrow(str_g(), str_g())),
                             ty::arrow(ty::box(str_g()), ty::box(str_g())))));
}

TEST_CASE("elaborated definitions synthesize their declared types") {
  // After elaboration every definition is closed, annotation-complete and
  // fixed-point free, so plain synthesis must reproduce the declared type.
  for (const CheckedDef& d : prelude_checked().defs) {
    CAPTURE(d.name);
    CHECK(type_equal(infer(TypingCtx{}, d.term), d.type));
  }
}

TEST_CASE("negative: argument order") {
  CHECK(kind_of("def bad : StrG = interleave (next toggle) toggle;") ==
        ErrKind::Mismatch);
}

TEST_CASE("negative: nonconstant context under a box") {
  // s : StrG is not of constant type, so it cannot cross the box boundary
  // through the identity substitution.
  CHECK(kind_of("def bad : StrG -> #Nat = \\s. box iota. hdg s;") ==
        ErrKind::NonconstantContext);
  // Same for prev.
  CHECK(kind_of("def bad : |>StrG -> StrG = \\s. prev iota. s;") ==
        ErrKind::NonconstantContext);
  // Replacement terms of constant type are fine even under iota.
  CHECK_NOTHROW(check_program(parse_program(std::string(prelude_source()) +
                                            "\ndef ok : #Nat -> #Nat = "
                                            "\\b. box iota. unbox b;\n")));
}

TEST_CASE("negative: shape errors") {
  CHECK(kind_of("def bad : Nat = 1 2;") == ErrKind::NotAFunction);
  CHECK(kind_of("def bad : Nat = fst 3;") == ErrKind::NotAProduct);
  CHECK(kind_of("def bad : Nat = unfold 3;") == ErrKind::NotAMu);
  CHECK(kind_of("def bad : Nat = unbox 3;") == ErrKind::NotABox);
  // In synthesis position the body of prev must already be delayed.
  CHECK(kind_of("def bad : Nat = fst <prev 3, 0>;") == ErrKind::NotALater);
  CHECK(kind_of("def bad : Nat = y;") == ErrKind::UnboundVariable);
  CHECK(kind_of("def bad : Nat = case 1 of x. x ; y. y;") ==
        ErrKind::NotASum);
}

TEST_CASE("negative: ill-formed declared types") {
  CHECK(kind_of("def bad : mu a. a = fold 0;") == ErrKind::UnguardedMu);
  CHECK(kind_of("def bad : mu a. #a = fold 0;") == ErrKind::IllFormedType);
}

TEST_CASE("negative: unannotated positions cannot synthesize") {
  CHECK(kind_of("def bad : Nat = (fix x. x) 0;") == ErrKind::CannotSynthesize);
  CHECK(kind_of("def bad : Nat = (\\x. x) 0;") == ErrKind::CannotSynthesize);
}

TEST_CASE("fixed points are encoded with the guarded combinator") {
  // fix z. fold <0, z> elaborates to a term with no Fix node that still
  // checks (and synthesizes) at the recursive stream type.
  TermPtr t = parse_term("fix z. fold <0, z>");
  TermPtr el = check(TypingCtx{}, t, str_g());
  std::function<bool(const TermPtr&)> has_fix = [&](const TermPtr& u) {
    if (!u) return false;
    if (u->tag == TmTag::Fix) return true;
    for (auto& it : u->su)
      if (has_fix(it.rep)) return true;
    return has_fix(u->a) || has_fix(u->b) || has_fix(u->c);
  };
  CHECK_FALSE(has_fix(el));
  CHECK(type_equal(infer(TypingCtx{}, el), str_g()));
}

TEST_CASE("iota expansion is the identity list over free variables") {
  TermPtr t = parse_term("box iota. f x");
  TermPtr e = expand_iota(t);
  REQUIRE(e->tag == TmTag::BoxI);
  CHECK_FALSE(e->iota);
  REQUIRE(e->su.size() == 2);
  CHECK(e->su[0].var == "f");  // first-occurrence order
  CHECK(e->su[1].var == "x");
  CHECK(term_equal(e->su[0].rep, tm::var("f")));
}

TEST_CASE("definition inlining does not capture under iota") {
  // tlg has a nonconstant type; mentioning it under box iota must refer to
  // the global definition rather than becoming a bound occurrence, or the
  // corpus definition of tl would be rejected.
  const CheckedProgram& p = prelude_checked();
  CHECK(type_equal(p.find("tl")->type,
                   ty::arrow(ty::box(str_g()), ty::box(str_g()))));
}

TEST_CASE("checking is stable under re-checking") {
  for (const CheckedDef& d : prelude_checked().defs) {
    CAPTURE(d.name);
    TermPtr again = check(TypingCtx{}, d.term, d.type);
    CHECK(term_equal(again, d.term));
  }
}

TEST_CASE("generated terms check at their generation type") {
  gen::Rng g(0x7ee51001);
  int made = 0;
  for (int k = 0; k < 300; ++k) {
    TypePtr T = gen::gen_type(g, 1 + g.pick(3));
    TermPtr t = gen::gen_term(g, TypingCtx{}, T, 2 + g.pick(5));
    CAPTURE(pretty(t));
    CAPTURE(pretty(T));
    TermPtr el = check(TypingCtx{}, t, T);
    CHECK(type_equal(infer(TypingCtx{}, el), T));
    ++made;
  }
  CHECK(made == 300);
}

TEST_CASE("diagnostics render with location and kind") {
  try {
    check_program(parse_program("def bad : Nat = 1 2;"));
    FAIL("expected a type error");
  } catch (const TypeError& e) {
    std::string r = e.render("t.gl");
    CHECK(r.find("t.gl:1:") == 0);
    CHECK(r.find("[not-a-function]") != std::string::npos);
    std::string j = e.render_json("t.gl");
    CHECK(j.find("\"kind\"") != std::string::npos);
    CHECK(j.find("not-a-function") != std::string::npos);
  }
}
