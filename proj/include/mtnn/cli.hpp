#pragma once

#include <string>
#include <vector>

namespace mtnn {

/// Entry point shared by the binary and the tests. Subcommands: gen-data,
/// build-trees, ground-truth, train, eval, bench, mds, attention.
/// Returns 0 on success, 1 on usage errors, 2 on data errors.
int run_cli(const std::vector<std::string>& args);

}  // namespace mtnn
