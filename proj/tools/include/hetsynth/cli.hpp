#pragma once

#include <iosfwd>

namespace hetsynth {

/// Entry point of the `hetsynth` tool.
///
///   synth <spec> [--fsm-out <path>]
///   check <spec>
///   run <scenario> [--max-steps N] [--trace <path>] [--render] [--seed N]
///
/// Returns 0 on success, 1 when a specification is unrealizable or invalid or
/// a mission does not complete, and 2 on usage errors.
int cli_main(int argc, const char* const argv[], std::ostream& out, std::ostream& err);

}  // namespace hetsynth
