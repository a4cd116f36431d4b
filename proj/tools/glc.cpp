// Command-line driver: check, evaluate, force stream prefixes, denote,
// compare denotation against evaluation, and compile stream equations.
//
// Exit codes: 0 success, 1 type/usage error, 2 parse or input error,
// 3 step budget exhausted, 4 property or equation failure.

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "glc/adequacy.hpp"
#include "glc/bde.hpp"
#include "glc/denote.hpp"
#include "glc/eval.hpp"
#include "glc/parser.hpp"
#include "glc/prelude.hpp"
#include "glc/typecheck.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitType = 1;
constexpr int kExitParse = 2;
constexpr int kExitBudget = 3;
constexpr int kExitProperty = 4;

long budget_from_env() {
  const char* e = std::getenv("GLC_BUDGET");
  if (!e) return glc::kDefaultBudget;
  char* end = nullptr;
  long v = std::strtol(e, &end, 10);
  if (end == e || *end != '\0' || v <= 0) return glc::kDefaultBudget;
  return v;
}

struct Input {
  std::string name;  // for diagnostics
  std::string text;
};

Input read_input(const std::string& file) {
  if (file == "prelude") return {"prelude", glc::prelude_source()};
  std::ifstream in(file);
  if (!in) throw std::runtime_error("cannot open '" + file + "'");
  std::ostringstream os;
  os << in.rdbuf();
  return {file, os.str()};
}

void report_parse(const Input& in, const glc::ParseError& e) {
  std::cerr << in.name << ':' << e.loc.line << ':' << e.loc.col
            << ": [parse] " << e.what() << '\n';
}

void report_type(const Input& in, const glc::TypeError& e) {
  std::cerr << e.render(in.name) << '\n';
  std::cerr << e.render_json(in.name) << '\n';
}

const glc::CheckedDef* find_def(const glc::CheckedProgram& p,
                                const Input& in, const std::string& name) {
  const glc::CheckedDef* d = p.find(name);
  if (!d)
    std::cerr << in.name << ":0:0: [unknown-definition] no definition named '"
              << name << "'\n";
  return d;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"guarded stream calculus tool"};
  app.require_subcommand(1);

  std::string file, term_name;
  long steps = -1;
  int take_n = 8;
  int index = 3;
  bool trace = false;
  bool no_typecheck = false;
  bool emit = false;
  int check_depth = -1;

  auto add_file = [&](CLI::App* c) {
    c->add_option("file", file, "program file, or 'prelude' for the built-in corpus")
        ->required();
  };

  CLI::App* c_check = app.add_subcommand("check", "parse and type-check a program");
  add_file(c_check);

  CLI::App* c_eval = app.add_subcommand("eval", "evaluate a definition to a value");
  add_file(c_eval);
  c_eval->add_option("--term", term_name, "definition to evaluate")->required();
  c_eval->add_option("--steps", steps, "step budget for this run");
  c_eval->add_flag("--trace", trace, "print each intermediate term");
  c_eval->add_flag("--no-typecheck", no_typecheck,
                   "skip type checking (evaluation may get stuck)");

  CLI::App* c_take = app.add_subcommand("take", "force the first n elements of a stream");
  add_file(c_take);
  c_take->add_option("--term", term_name, "stream definition")->required();
  c_take->add_option("--n", take_n, "number of elements")->required();
  c_take->add_option("--steps", steps, "step budget per element");

  CLI::App* c_den = app.add_subcommand("denote", "print the staged denotation of a definition");
  add_file(c_den);
  c_den->add_option("--term", term_name, "definition to denote")->required();
  c_den->add_option("--index", index, "stage (default 3)");

  CLI::App* c_adeq = app.add_subcommand(
      "adequacy", "compare the denotation of a definition with its evaluation");
  add_file(c_adeq);
  c_adeq->add_option("--term", term_name, "definition to compare")->required();
  c_adeq->add_option("--index", index, "stage (default 3)");

  CLI::App* c_bde = app.add_subcommand("bde", "compile stream equations");
  add_file(c_bde);
  c_bde->add_flag("--emit", emit, "print the compiled guarded functions");
  c_bde->add_option("--check-depth", check_depth,
                    "check the equations on sample streams to this depth");

  CLI11_PARSE(app, argc, argv);
  long budget = steps > 0 ? steps : budget_from_env();

  Input in;
  try {
    in = read_input(file);
  } catch (const std::runtime_error& e) {
    std::cerr << e.what() << '\n';
    return kExitParse;
  }

  // --- bde works on its own file format ---
  if (c_bde->parsed()) {
    try {
      auto specs = glc::bde::parse_bde_file(in.text);
      glc::bde::Registry reg;
      for (auto& s : specs) {
        glc::bde::Compiled c = glc::bde::compile_guarded(s, reg);
        if (emit)
          std::cout << c.name << " = " << glc::pretty(c.surface) << '\n';
        reg.items.push_back(std::move(c));
      }
      if (check_depth > 0) {
        std::vector<glc::TermPtr> samples;
        const glc::CheckedProgram& prog = glc::prelude_checked();
        for (const char* n : {"nats", "toggle", "paperfolds"})
          samples.push_back(prog.find(n)->term);
        for (size_t k = 0; k < specs.size(); ++k) {
          glc::bde::EqReport r = glc::bde::check_equations(
              specs[k], reg.items[k], reg, check_depth, samples, budget);
          if (!r.ok) {
            std::cerr << r.detail << '\n';
            return kExitProperty;
          }
          std::cout << specs[k].name << ": ok (" << r.comparisons
                    << " comparisons)\n";
        }
      }
      return kExitOk;
    } catch (const glc::ParseError& e) {
      report_parse(in, e);
      return kExitParse;
    } catch (const glc::bde::SpecError& e) {
      std::cerr << in.name << ':' << e.loc.line << ':' << e.loc.col
                << ": [sort] " << e.what() << '\n';
      return kExitType;
    } catch (const glc::EvalFailure& e) {
      std::cerr << e.what() << '\n';
      return e.out_of_budget ? kExitBudget : kExitProperty;
    }
  }

  // --- everything else parses a program first ---
  glc::Program prog;
  try {
    prog = glc::parse_program(in.text);
  } catch (const glc::ParseError& e) {
    report_parse(in, e);
    return kExitParse;
  }

  if (c_eval->parsed() && no_typecheck) {
    // Resolve definitions and sugar without checking; evaluation may stick.
    std::map<std::string, glc::TermPtr> env;
    glc::TermPtr target;
    for (auto& d : prog.defs) {
      glc::TermPtr body = glc::expand_iota(glc::inline_defs(d.body, env));
      env[d.name] = body;
      if (d.name == term_name) target = body;
    }
    if (!target) {
      std::cerr << in.name << ":0:0: [unknown-definition] no definition named '"
                << term_name << "'\n";
      return kExitType;
    }
    glc::EvalResult r = glc::eval(target, budget, trace);
    if (trace)
      for (size_t k = 0; k < r.trace.size(); ++k)
        std::cout << k << ": " << glc::pretty(r.trace[k], false) << '\n';
    if (r.kind == glc::EvalResult::Kind::Budget) {
      std::cerr << r.reason << '\n';
      return kExitBudget;
    }
    if (r.kind == glc::EvalResult::Kind::Stuck) {
      std::cerr << "stuck: " << r.reason << '\n';
      return kExitProperty;
    }
    std::cout << glc::pretty(r.term, false) << '\n';
    return kExitOk;
  }

  glc::CheckedProgram checked;
  try {
    checked = glc::check_program(prog);
  } catch (const glc::TypeError& e) {
    report_type(in, e);
    return kExitType;
  }

  if (c_check->parsed()) return kExitOk;

  const glc::CheckedDef* def = find_def(checked, in, term_name);
  if (!def) return kExitType;

  try {
    if (c_eval->parsed()) {
      glc::EvalResult r = glc::eval(def->term, budget, trace);
      if (trace)
        for (size_t k = 0; k < r.trace.size(); ++k)
          std::cout << k << ": " << glc::pretty(r.trace[k], false) << '\n';
      if (r.kind == glc::EvalResult::Kind::Budget) {
        std::cerr << r.reason << '\n';
        return kExitBudget;
      }
      if (r.kind == glc::EvalResult::Kind::Stuck) {
        std::cerr << "stuck: " << r.reason << '\n';
        return kExitProperty;
      }
      std::cout << glc::pretty(r.term, false) << '\n';
      return kExitOk;
    }

    if (c_take->parsed()) {
      std::vector<uint64_t> xs;
      if (def->type->tag == glc::TyTag::Mu) {
        xs = glc::force_guarded_stream(def->term, take_n, budget);
      } else if (def->type->tag == glc::TyTag::Box &&
                 def->type->a->tag == glc::TyTag::Mu) {
        xs = glc::force_coinductive_stream(def->term, take_n, budget);
      } else {
        std::cerr << in.name << ":0:0: [mismatch] take requires a "
                     "stream-typed definition, but '"
                  << term_name << "' has type " << glc::pretty(def->type)
                  << '\n';
        return kExitType;
      }
      for (size_t k = 0; k < xs.size(); ++k)
        std::cout << (k ? " " : "") << xs[k];
      std::cout << '\n';
      return kExitOk;
    }

    if (c_den->parsed()) {
      if (index < 1) {
        std::cerr << "index must be at least 1\n";
        return kExitType;
      }
      glc::Sem a = glc::denote(def->term, index);
      std::cout << glc::render_sem(def->type, a, index) << '\n';
      return kExitOk;
    }

    if (c_adeq->parsed()) {
      if (index < 1) {
        std::cerr << "index must be at least 1\n";
        return kExitType;
      }
      glc::AdequacyReport rep =
          glc::check_fundamental(def->type, def->term, index, budget);
      if (rep.pass) {
        std::cout << "pass " << (rep.exact ? "exact" : "sampled") << '\n';
        return kExitOk;
      }
      std::cout << "fail " << (rep.exact ? "exact" : "sampled") << ": "
                << rep.detail << '\n';
      return kExitProperty;
    }
  } catch (const glc::EvalFailure& e) {
    std::cerr << e.what() << '\n';
    return e.out_of_budget ? kExitBudget : kExitProperty;
  } catch (const glc::TypeError& e) {
    report_type(in, e);
    return kExitType;
  }

  return kExitOk;
}
