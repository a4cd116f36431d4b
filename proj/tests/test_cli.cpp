#include <doctest.h>

#include <sys/wait.h>

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <string>

// GLC_BIN is injected by the build: the path of the command-line driver.

namespace {

struct RunResult {
  int code = -1;
  std::string out, err;
};

std::string slurp(const std::string& path) {
  std::ifstream in(path);
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

RunResult run(const std::string& args, const std::string& env = "") {
  static int serial = 0;
  std::string base = "/tmp/glc_cli_" + std::to_string(++serial);
  std::string cmd = env + (env.empty() ? "" : " ") + GLC_BIN + " " + args +
                    " > " + base + ".out 2> " + base + ".err";
  int st = std::system(cmd.c_str());
  RunResult r;
  r.code = WIFEXITED(st) ? WEXITSTATUS(st) : -1;
  r.out = slurp(base + ".out");
  r.err = slurp(base + ".err");
  std::remove((base + ".out").c_str());
  std::remove((base + ".err").c_str());
  return r;
}

std::string write_temp(const std::string& name, const std::string& text) {
  std::string path = "/tmp/" + name;
  std::ofstream(path) << text;
  return path;
}

}  // namespace

TEST_CASE("golden outputs") {
  RunResult take = run("take prelude --term paperfolds --n 8");
  CHECK(take.code == 0);
  CHECK(take.out == "1 1 0 1 1 0 0 1\n");
  CHECK(take.err.empty());

  RunResult ev = run("eval prelude --term secondnats");
  CHECK(ev.code == 0);
  CHECK(ev.out == "succ zero\n");
  CHECK(ev.err.empty());

  RunResult den = run("denote prelude --term nats");
  CHECK(den.code == 0);
  CHECK(den.out == "(0, 1, 2)\n");
  CHECK(den.err.empty());
}

TEST_CASE("check is quiet on success") {
  RunResult r = run("check prelude");
  CHECK(r.code == 0);
  CHECK(r.out.empty());
  CHECK(r.err.empty());
}

TEST_CASE("more stream prefixes through the driver") {
  RunResult r = run("take prelude --term boxnats --n 6");
  CHECK(r.code == 0);
  CHECK(r.out == "0 1 2 3 4 5\n");

  RunResult e2 = run("take prelude --term every2ndnats --n 5");
  CHECK(e2.out == "0 2 4 6 8\n");

  RunResult bad = run("take prelude --term hdg --n 3");
  CHECK(bad.code == 1);
  CHECK(bad.err.find("stream-typed") != std::string::npos);
}

TEST_CASE("denote stages") {
  RunResult r1 = run("denote prelude --term nats --index 1");
  CHECK(r1.out == "(0)\n");
  RunResult r5 = run("denote prelude --term nats --index 5");
  CHECK(r5.out == "(0, 1, 2, 3, 4)\n");
}

TEST_CASE("adequacy verdicts") {
  RunResult exact = run("adequacy prelude --term nats --index 3");
  CHECK(exact.code == 0);
  CHECK(exact.out == "pass exact\n");
  CHECK(exact.err.empty());

  RunResult sampled = run("adequacy prelude --term boxtoggle --index 2");
  CHECK(sampled.code == 0);
  CHECK(sampled.out == "pass sampled\n");
}

TEST_CASE("trace output") {
  RunResult r = run("eval prelude --term headsum --trace");
  CHECK(r.code == 0);
  CHECK(r.out.find("0: ") == 0);
  CHECK(r.out.find("\n1: ") != std::string::npos);
  // The final line is still the plain value.
  CHECK(r.out.rfind("succ succ zero\n") == r.out.size() - 15);
}

TEST_CASE("parse failures exit 2 with a located diagnostic") {
  std::string p = write_temp("cli_parse_err.gl", "def x : Nat = ;\n");
  RunResult r = run("check " + p);
  CHECK(r.code == 2);
  CHECK(r.out.empty());
  CHECK(r.err.find(p + ":1:") == 0);
  CHECK(r.err.find("[parse]") != std::string::npos);

  RunResult missing = run("check /tmp/glc_no_such_file.gl");
  CHECK(missing.code == 2);
}

TEST_CASE("type failures exit 1 with human and machine lines") {
  std::string p = write_temp("cli_type_err.gl", "def x : Nat = 1 2;\n");
  RunResult r = run("check " + p);
  CHECK(r.code == 1);
  CHECK(r.err.find("[not-a-function]") != std::string::npos);
  CHECK(r.err.find("\"kind\"") != std::string::npos);

  RunResult unk = run("eval prelude --term nosuch");
  CHECK(unk.code == 1);
  CHECK(unk.err.find("unknown-definition") != std::string::npos);
}

TEST_CASE("budgets exit 3, from the flag or the environment") {
  RunResult flag = run("eval prelude --term secondnats --steps 5");
  CHECK(flag.code == 3);
  CHECK_FALSE(flag.err.empty());

  RunResult env = run("eval prelude --term secondnats", "GLC_BUDGET=5");
  CHECK(env.code == 3);

  // An explicit flag overrides the environment.
  RunResult both = run("eval prelude --term secondnats --steps 100000",
                       "GLC_BUDGET=5");
  CHECK(both.code == 0);
}

TEST_CASE("evaluation without checking can stick, exiting 4") {
  std::string p = write_temp("cli_stuck.gl", "def x : Nat = fst 0;\n");
  RunResult r = run("eval " + p + " --term x --no-typecheck");
  CHECK(r.code == 4);
  CHECK(r.err.find("stuck") != std::string::npos);

  // The same file fails type checking without the flag.
  RunResult checked = run("eval " + p + " --term x");
  CHECK(checked.code == 1);
}

TEST_CASE("bde driving") {
  std::string ok = write_temp(
      "cli_ok.bde",
      "bde zeros(0) { head = 0; tail = zeros(); }\n"
      "bde plus(2) { head = x1 + x2; tail = plus(z1, z2); }\n");
  RunResult r = run("bde " + ok + " --check-depth 4");
  CHECK(r.code == 0);
  CHECK(r.out.find("plus: ok") != std::string::npos);
  CHECK(r.err.empty());

  RunResult emit = run("bde " + ok + " --emit");
  CHECK(emit.code == 0);
  CHECK(emit.out.find("zeros = fix") != std::string::npos);

  std::string bad = write_temp(
      "cli_bad.bde", "bde f(1) { head = x1; tail = f(x1); }\n");
  RunResult s = run("bde " + bad);
  CHECK(s.code == 1);
  CHECK(s.err.find("[sort]") != std::string::npos);

  std::string mangled = write_temp("cli_mangled.bde", "bde f(1) {");
  RunResult m = run("bde " + mangled);
  CHECK(m.code == 2);
}
