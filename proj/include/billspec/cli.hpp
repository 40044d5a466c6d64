#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace billspec {

/// Runs one subcommand (trace, rotation, periodic, weyl, robin, spectrum,
/// remainder). Returns 0 on success, 2 on usage or configuration errors and
/// 3 on numerical errors.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);
int run(int argc, char** argv);

}  // namespace billspec
