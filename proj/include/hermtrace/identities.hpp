#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "hermtrace/combinatorics.hpp"

namespace hermtrace {

struct IdentityCheck {
    std::string name;
    bool passed = true;
    double worst = 0;       // largest residual seen
    double tolerance = 0;
    int cases = 0;
    std::string first_failure;  // empty when passed
};

struct IdentityReport {
    std::vector<IdentityCheck> checks;
    [[nodiscard]] bool passed() const;
    /// JSON with stable key order.
    [[nodiscard]] std::string to_json() const;
};

struct IdentityOptions {
    int s_max = 12;
    int trials = 10;
    std::uint64_t seed = 1;
};

/// Runs the combinatorial identity suite and, for trials > 0, randomized
/// polylogarithm and factorization checks. The Eulerian table is a
/// parameter so that a corrupted table can be shown to fail.
IdentityReport run_identities(const IdentityOptions& opt, const EulerianTable& table = eulerian_table());

}  // namespace hermtrace
