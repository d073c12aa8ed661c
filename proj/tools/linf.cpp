#include <linf/cli.hpp>

#include <iostream>

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  std::string out, err;
  const int code = linf::run_cli(args, out, err);
  std::cout << out;
  std::cerr << err;
  return code;
}
