#pragma once

// Surface syntax: lexer, parser and pretty-printer. Programs are sequences
// of type aliases and definitions; aliases are expanded during parsing, so
// the AST only ever holds structural types.

#include <stdexcept>
#include <string>
#include <vector>

#include "glc/syntax.hpp"

namespace glc {

struct ParseError : std::runtime_error {
  Loc loc;
  ParseError(Loc l, const std::string& msg)
      : std::runtime_error(msg), loc(l) {}
};

struct RawDef {
  std::string name;
  TypePtr type;
  TermPtr body;
  Loc loc;
};

struct Program {
  std::vector<std::pair<std::string, TypePtr>> aliases;  // expanded
  std::vector<RawDef> defs;
  const RawDef* find(const std::string& name) const;
};

Program parse_program(const std::string& src);

// Standalone entry points used by tests and tooling; input must be a single
// type / term followed by end of input.
TypePtr parse_type(const std::string& src);
TermPtr parse_term(const std::string& src);

// Pretty printing. With sugar on, numerals print in decimal; with it off
// they print as applications of the successor constructor.
std::string pretty(const TypePtr& A);
std::string pretty(const TermPtr& t, bool sugar_numerals = true);

}  // namespace glc
