#pragma once

namespace shipctl::cli {

// Subcommands: stabilize | track | reference | verify.
// Exit codes: 0 success, 1 runtime/verification failure, 2 usage error.
int run(int argc, const char* const* argv);

}  // namespace shipctl::cli
