#include <linf/cli.hpp>

namespace linf {
int run_cli(const std::vector<std::string>&, std::string&, std::string&) { return 2; }
}
