#pragma once

// The built-in corpus program, embedded at build time from
// assets/prelude.gl. Parsed and checked once, on first use.

#include "glc/typecheck.hpp"

namespace glc {

const char* prelude_source();
const Program& prelude_program();
const CheckedProgram& prelude_checked();

}  // namespace glc
