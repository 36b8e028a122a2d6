// Acceptance criteria: one PASS/FAIL line per criterion; nonzero exit on any failure.
#include <cstdlib>
#include <iostream>
#include <string>

#include "csf/acceptance.hpp"

int main(int argc, char** argv) {
    double tol = 1.0;
    if (argc > 1) tol = std::stod(argv[1]);
    csf::acceptance::Suite suite(tol);
    auto results = suite.run_all(&std::cout);
    int failed = 0;
    for (const auto& r : results) failed += r.passed ? 0 : 1;
    std::cout << (results.size() - failed) << "/" << results.size() << " criteria passed" << std::endl;
    return failed == 0 ? EXIT_SUCCESS : EXIT_FAILURE;
}
