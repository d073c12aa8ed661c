// CLI entry point, callable in-process for tests.
#pragma once

#include <string>
#include <vector>

namespace linf {
int run_cli(const std::vector<std::string>& args, std::string& out, std::string& err);
}
