#include <cstdlib>
#include <iostream>

#include "spinfact/verify.hpp"

int main() {
  const spinfact::AcceptanceReport report = spinfact::run_acceptance(0, std::cout);
  return report.all_passed() ? EXIT_SUCCESS : EXIT_FAILURE;
}
