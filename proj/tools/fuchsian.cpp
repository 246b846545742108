#include "fuchsian/cli.hpp"

int main(int argc, char** argv) {
  return fuchsian::cli::run(std::vector<std::string>(argv + 1, argv + argc));
}
