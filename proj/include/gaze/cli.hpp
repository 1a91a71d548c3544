#pragma once

#include <string>
#include <vector>

namespace gaze::cli {

// Entry point behind the gazernn binary. Subcommands: synth, prep, train,
// eval, predict, gradcheck, render. Returns 0 on success, 1 on validation
// errors, 2 on I/O errors. Diagnostics go to stderr; outputs go to files.
int run(int argc, const char* const* argv);
int run(const std::vector<std::string>& args);  // args without the program name

}  // namespace gaze::cli
