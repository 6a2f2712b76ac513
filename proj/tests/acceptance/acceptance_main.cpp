// Prints one PASS/FAIL line per acceptance criterion; exits nonzero if any fail.
#include "catenoid/acceptance.hpp"

#include <iostream>

int main() {
    const auto results = catenoid::run_acceptance();
    std::cout << catenoid::format_acceptance(results, true);
    return catenoid::all_passed(results) ? 0 : 1;
}
