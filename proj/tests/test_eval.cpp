#include <doctest.h>

#include "gen.hpp"
#include "glc/eval.hpp"
#include "glc/parser.hpp"
#include "glc/prelude.hpp"
#include "glc/typecheck.hpp"

using namespace glc;

namespace {

// Collect the steps of a closed term as pretty strings, self-capped.
std::vector<TermPtr> run_trace(const TermPtr& t, long budget = 1000) {
  EvalResult r = eval(t, budget, true);
  REQUIRE(r.kind == EvalResult::Kind::Value);
  return r.trace;
}

}  // namespace

TEST_CASE("values") {
  CHECK(is_value(numeral(3)));
  CHECK(is_value(tm::unit()));
  CHECK(is_value(tm::lam("x", tm::var("x"))));
  CHECK(is_value(tm::next(tm::app(tm::var("f"), tm::var("x")))));
  CHECK(is_value(tm::fold(tm::var("t"))));
  CHECK(is_value(tm::pair(tm::var("a"), tm::var("b"))));
  CHECK(is_value(tm::inj(1, tm::var("a"))));
  CHECK(is_value(tm::boxi({}, tm::var("t"))));
  CHECK(is_value(tm::boxi({{"x", tm::zero()}}, tm::var("x"))));
  CHECK_FALSE(is_value(tm::box_iota(tm::var("t"))));  // sugar, not a value
  CHECK_FALSE(is_value(tm::succ(tm::prim(PrimOp::Add, numeral(1),
                                         numeral(1)))));
  CHECK_FALSE(is_value(tm::app(tm::lam("x", tm::var("x")), tm::zero())));
}

TEST_CASE("pinned step sequences") {
  SUBCASE("prev applies its substitution, then cancels next") {
    TermPtr t = parse_term("prev [x <- succ zero]. next x");
    auto tr = run_trace(t);
    REQUIRE(tr.size() == 3);
    CHECK(term_equal(tr[1], parse_term("prev next succ zero")));
    CHECK(term_equal(tr[2], numeral(1)));
  }
  SUBCASE("unbox substitutes into the body in one step") {
    TermPtr t = parse_term("unbox (box [y <- zero]. succ y)");
    auto tr = run_trace(t);
    REQUIRE(tr.size() == 2);
    CHECK(term_equal(tr[1], numeral(1)));
  }
  SUBCASE("case picks a branch without evaluating the payload") {
    TermPtr t = parse_term("case in1 (0 + 0) of x. x ; y. 1");
    auto tr = run_trace(t);
    // One step to enter the branch, one to finish the addition.
    REQUIRE(tr.size() == 3);
    CHECK(term_equal(tr[1], parse_term("0 + 0")));
    CHECK(term_equal(tr[2], numeral(0)));
  }
  SUBCASE("beta") {
    auto tr = run_trace(parse_term("(\\x. x + 1) 2"));
    REQUIRE(tr.size() == 3);
    CHECK(term_equal(tr[1], parse_term("2 + 1")));
    CHECK(term_equal(tr[2], numeral(3)));
  }
  SUBCASE("later application pairs two delays") {
    // Prefix forms are maximal-right, so the left operand needs parens.
    auto tr = run_trace(parse_term("(next (\\x. x)) <*> next 0"));
    REQUIRE(tr.size() == 2);
    CHECK(term_equal(tr[1], parse_term("next ((\\x. x) 0)")));
  }
  SUBCASE("sum commutes with box") {
    auto tr = run_trace(parse_term("boxplus (in1 zero)"));
    REQUIRE(tr.size() == 2);
    CHECK(term_equal(tr[1], parse_term("in1 box zero")));
  }
  SUBCASE("arithmetic is left to right") {
    auto tr = run_trace(parse_term("(1 + 2) * (3 + 4)"));
    REQUIRE(tr.size() == 4);
    CHECK(term_equal(tr[1], parse_term("3 * (3 + 4)")));
    CHECK(term_equal(tr[2], parse_term("3 * 7")));
    CHECK(term_equal(tr[3], numeral(21)));
  }
}

TEST_CASE("stuck terms and budgets") {
  Decomposition d = decompose(parse_term("fst 0"));
  CHECK(d.kind == Decomposition::Kind::Stuck);
  CHECK_FALSE(d.reason.empty());

  EvalResult r = eval(parse_term("fst 0"), 100);
  CHECK(r.kind == EvalResult::Kind::Stuck);

  // The untyped self-application loops; the budget must stop it.
  EvalResult loop = eval(parse_term("(\\x. x x) (\\x. x x)"), 100);
  CHECK(loop.kind == EvalResult::Kind::Budget);
  CHECK(loop.steps == 100);

  CHECK_THROWS_AS(
      (void)force_guarded_stream(prelude_checked().find("nats")->term, 1000,
                                 50),
      EvalFailure);
}

TEST_CASE("trace bookkeeping") {
  TermPtr t = parse_term("(1 + 1) + (1 + 1)");
  EvalResult r = eval(t, 100, true);
  REQUIRE(r.kind == EvalResult::Kind::Value);
  CHECK(r.trace.size() == static_cast<size_t>(r.steps) + 1);
  CHECK(term_equal(r.trace.front(), t));
  CHECK(term_equal(r.trace.back(), r.term));
  CHECK(term_equal(r.term, numeral(4)));
}

TEST_CASE("unique decomposition on generated programs") {
  gen::Rng g(0xdec09001);
  // Intro-headed terms are already weak values, so many samples finish in
  // zero steps; keep sampling until enough real reductions were observed.
  int nonvalues = 0;
  for (int k = 0; k < 2000 && nonvalues < 320; ++k) {
    TypePtr T = gen::gen_type(g, 1 + g.pick(3));
    TermPtr t = gen::gen_checked(g, T, 2 + g.pick(5));
    // Walk the whole reduction, checking agreement at every step.
    for (long guard = 0; guard < 300; ++guard) {
      int n = gen::count_redexes(t);
      Decomposition d = decompose(t);
      if (is_value(t)) {
        CHECK(n == 0);
        CHECK(d.kind == Decomposition::Kind::Value);
        break;
      }
      ++nonvalues;
      CAPTURE(pretty(t));
      CHECK(n == 1);
      REQUIRE(d.kind == Decomposition::Kind::Redex);
      StepResult s = step(t);
      REQUIRE(s.kind == StepResult::Kind::Stepped);
      t = s.term;
    }
  }
  CHECK(nonvalues >= 320);
}

TEST_CASE("subject reduction on generated programs") {
  gen::Rng g(0x5bbc7002);
  for (int k = 0; k < 120; ++k) {
    TypePtr T = gen::gen_type(g, 1 + g.pick(3));
    TermPtr t = gen::gen_checked(g, T, 2 + g.pick(5));
    for (long guard = 0; guard < 200 && !is_value(t); ++guard) {
      StepResult s = step(t);
      REQUIRE(s.kind == StepResult::Kind::Stepped);
      t = s.term;
      CAPTURE(pretty(t));
      CHECK(type_equal(infer(TypingCtx{}, t), T));
    }
  }
}

TEST_CASE("guarded stream prefixes match the oracles") {
  const CheckedProgram& p = prelude_checked();
  CHECK(force_guarded_stream(p.find("nats")->term, 12) ==
        gen::oracle_nats(12));
  CHECK(force_guarded_stream(p.find("toggle")->term, 8) ==
        gen::oracle_toggle(8));
  std::vector<uint64_t> folds =
      force_guarded_stream(p.find("paperfolds")->term, 16);
  CHECK(folds == gen::oracle_paperfolds(16));
  CHECK(folds == std::vector<uint64_t>{1, 1, 0, 1, 1, 0, 0, 1, 1, 1, 0, 0, 1,
                                       0, 0, 1});
  CHECK(force_guarded_stream(p.find("zerosg")->term, 6) ==
        std::vector<uint64_t>(6, 0));
  CHECK(force_guarded_stream(p.find("every2ndnats")->term, 16) ==
        gen::oracle_every2nd(gen::oracle_nats(32), 16));
}

TEST_CASE("boxed stream prefixes") {
  const CheckedProgram& p = prelude_checked();
  CHECK(force_coinductive_stream(p.find("boxnats")->term, 10) ==
        gen::oracle_nats(10));
  CHECK(force_coinductive_stream(p.find("boxfolds")->term, 16) ==
        gen::oracle_paperfolds(16));
}

TEST_CASE("stream arithmetic evaluates pointwise and by convolution") {
  const CheckedProgram& p = prelude_checked();
  TermPtr plusg = p.find("plusg")->term;
  TermPtr timesg = p.find("timesg")->term;
  TermPtr nats = p.find("nats")->term;
  TermPtr toggle = p.find("toggle")->term;

  TermPtr s1 = tm::app(tm::app(plusg, nats), toggle);
  CHECK(force_guarded_stream(s1, 8) ==
        gen::oracle_pointwise_sum(gen::oracle_nats(8), gen::oracle_toggle(8),
                                  8));

  TermPtr s2 = tm::app(tm::app(timesg, toggle), nats);
  std::vector<uint64_t> got = force_guarded_stream(s2, 8, 10000000);
  CHECK(got == gen::oracle_convolution(gen::oracle_toggle(8),
                                       gen::oracle_nats(8), 8));
  CHECK(got == std::vector<uint64_t>{0, 1, 2, 4, 6, 9, 12, 16});
}

TEST_CASE("closed arithmetic probes") {
  const CheckedProgram& p = prelude_checked();
  EvalResult r = eval(p.find("headsum")->term);
  REQUIRE(r.kind == EvalResult::Kind::Value);
  CHECK(term_equal(r.term, numeral(2)));
  EvalResult s = eval(p.find("secondnats")->term);
  REQUIRE(s.kind == EvalResult::Kind::Value);
  CHECK(term_equal(s.term, numeral(1)));
}
