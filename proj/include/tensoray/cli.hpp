#pragma once

#include <string>
#include <vector>

namespace tensoray::cli {

// Exit codes: 0 ok, 1 range-test fail, 2 config error, 3 I/O error.
int run(const std::vector<std::string>& args);

}  // namespace tensoray::cli
