// one line per criterion; nonzero exit if any fails. No arguments runs A1..A9.
#include <iostream>

#include "trigfront/acceptance.hpp"

int main(int argc, char** argv) {
  std::vector<trigfront::CriterionResult> results;
  if (argc < 2) {
    results = trigfront::verify(trigfront::VerifyLevel::full);
  } else {
    for (int i = 1; i < argc; ++i) results.push_back(trigfront::run_criterion(argv[i]));
  }
  bool ok = true;
  for (const auto& r : results) {
    std::cout << trigfront::report_line(r) << "\n";
    if (!r.passed) std::cout << r.details.dump() << "\n";
    ok = ok && r.passed;
  }
  return ok ? 0 : 1;
}
