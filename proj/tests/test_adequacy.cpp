#include <doctest.h>

#include "gen.hpp"
#include "glc/adequacy.hpp"
#include "glc/eval.hpp"
#include "glc/parser.hpp"
#include "glc/prelude.hpp"
#include "glc/typecheck.hpp"

using namespace glc;

namespace {
TypePtr str_g() {
  return ty::mu("a", ty::prod(ty::nat(), ty::later(ty::var("a"))));
}
}  // namespace

TEST_CASE("every corpus definition is related to its denotation") {
  for (const CheckedDef& d : prelude_checked().defs) {
    for (int i = 1; i <= 3; ++i) {
      CAPTURE(d.name);
      CAPTURE(i);
      AdequacyReport r = check_fundamental(d.type, d.term, i, 10000000);
      CHECK(r.pass);
      if (!r.pass) MESSAGE(r.detail);
    }
  }
}

TEST_CASE("exactness is decided by the type") {
  const CheckedProgram& p = prelude_checked();
  AdequacyReport n = check_fundamental(ty::nat(), p.find("headsum")->term, 2);
  CHECK(n.pass);
  CHECK(n.exact);

  AdequacyReport s = check_fundamental(str_g(), p.find("nats")->term, 3);
  CHECK(s.pass);
  CHECK(s.exact);

  AdequacyReport b =
      check_fundamental(p.find("boxtoggle")->type, p.find("boxtoggle")->term, 2);
  CHECK(b.pass);
  CHECK_FALSE(b.exact);

  AdequacyReport f = check_fundamental(p.find("hdg")->type,
                                       p.find("hdg")->term, 2);
  CHECK(f.pass);
  CHECK_FALSE(f.exact);
}

TEST_CASE("nat adequacy: denotation equals the evaluated numeral") {
  gen::Rng g(0xade90001);
  for (int k = 0; k < 40; ++k) {
    TermPtr t = gen::gen_checked(g, ty::nat(), 2 + g.pick(5));
    for (int i = 1; i <= 4; ++i) {
      AdequacyReport r = check_adequacy_nat(t, i);
      CAPTURE(pretty(t));
      CHECK(r.pass);
      CHECK(r.exact);
    }
  }
}

TEST_CASE("the relation distinguishes unrelated pairs") {
  // Pair the denotation of one numeral with a different term.
  Sem three = denote(numeral(3), 2);
  RelResult bad = rel(ty::nat(), 2, three, numeral(4));
  CHECK_FALSE(bad.related);
  CHECK_FALSE(bad.witness.empty());

  RelResult good = rel(ty::nat(), 2, three, numeral(3));
  CHECK(good.related);

  // Mismatched stream heads are found under the fold.
  const CheckedProgram& p = prelude_checked();
  Sem toggle2 = denote(p.find("toggle")->term, 2);
  RelResult sbad = rel(str_g(), 2, toggle2, p.find("nats")->term);
  CHECK_FALSE(sbad.related);
}

TEST_CASE("an inconclusive run raises instead of passing") {
  const CheckedProgram& p = prelude_checked();
  CHECK_THROWS_AS(
      (void)rel(str_g(), 3, denote(p.find("paperfolds")->term, 3),
                p.find("paperfolds")->term, nullptr, 10),
      EvalFailure);
}

TEST_CASE("the instrumented measure never increases") {
  RelStats total;
  for (const CheckedDef& d : prelude_checked().defs) {
    RelStats st;
    AdequacyReport r = check_fundamental(d.type, d.term, 3, 10000000);
    // check_fundamental aggregates its own stats; fold them in.
    total.calls += r.stats.calls;
    total.metric_checks += r.stats.metric_checks;
    total.metric_violations += r.stats.metric_violations;
    if (r.stats.metric_violations && total.first_violation.empty())
      total.first_violation = r.stats.first_violation;
    (void)st;
  }
  CHECK(total.calls > 1000);
  CHECK(total.metric_checks > 1000);
  CHECK(total.metric_violations == 0);
  if (total.metric_violations) MESSAGE(total.first_violation);
}
