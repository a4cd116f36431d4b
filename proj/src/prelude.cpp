#include "glc/prelude.hpp"

// Generated from assets/prelude.gl by the build.
extern const char glc_prelude_text[];

namespace glc {

const char* prelude_source() { return glc_prelude_text; }

const Program& prelude_program() {
  static const Program p = parse_program(glc_prelude_text);
  return p;
}

const CheckedProgram& prelude_checked() {
  static const CheckedProgram c = check_program(prelude_program());
  return c;
}

}  // namespace glc
