#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace wulffcli {

struct SuiteResult {
    std::string name;
    bool pass = false;
    std::string detail;
};

// Runs the library property suites. `only` filters by suite name (empty =
// all). `kappa_skew` is a fault-injection hook: it multiplies kappa on the
// system-under-test side of the round-trip and scaling identities, so a
// nonzero relative perturbation must trip those suites.
std::vector<SuiteResult> run_verify_suites(const std::vector<std::string>& only,
                                           double kappa_skew, std::uint64_t seed);

}  // namespace wulffcli
