#include <iostream>
#include <string>
#include <vector>

#include "acceptance.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> only(argv + 1, argv + argc);
  try {
    return magnus::acceptance::run_all(std::cout, only) == 0 ? 0 : 1;
  } catch (const std::exception& e) {
    std::cerr << "acceptance: " << e.what() << '\n';
    return 2;
  }
}
