#pragma once

#include <string>
#include <vector>

namespace cipherpipe {

/// Entry point behind the cipherpipe binary, callable from tests.
/// `args` excludes the program name. Returns the process exit status:
/// 0 on success, 1 on runtime failure, 2 on usage errors.
int run_cli(const std::vector<std::string>& args);

} // namespace cipherpipe
