#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "hermtrace/matrix_model.hpp"
#include "hermtrace/scattering.hpp"
#include "hermtrace/types.hpp"

namespace hermtrace {

/// Periodic orbit as a cyclic vertex sequence in its lexicographically
/// smallest rotation. Reversed orbits are distinct.
struct Orbit {
    std::vector<int> vertices;
    int repetition = 1;

    [[nodiscard]] int length() const { return static_cast<int>(vertices.size()); }
    friend bool operator==(const Orbit&, const Orbit&) = default;
};

struct OrbitSet {
    GraphKind kind = GraphKind::I;
    int max_len = 0;
    std::vector<Orbit> orbits;
};

struct EnumerationBudget {
    int max_len = 14;
    std::size_t max_count = 1'000'000;
};

/// Smallest rotation of a cyclic sequence.
std::vector<int> canonical_rotation(std::span<const int> cycle);
/// False when the cycle is q^r for some shorter q and r >= 2.
bool is_primitive(std::span<const int> cycle);

/// All primitive orbits up to max_len, each once, ordered by length and then
/// lexicographically. ResourceError beyond the budget.
OrbitSet enumerate_primitive_orbits(const AssociatedGraphs& graphs, GraphKind kind, int max_len,
                                    const EnumerationBudget& budget = {});

/// prod_k H_{v_{k+1} v_k}.
Complex orbit_weight_I(const HermitianMatrix& h, const Orbit& p);

/// sum over primitive p with n_p | s of n_p W_p^{s / n_p}. Needs a G_I set
/// enumerated to length >= s.
Complex trace_from_orbits(const HermitianMatrix& h, int s, const OrbitSet& orbits);

/// Orbit form of the Approach I oscillating part restricted to 1 <= r n_p <= max_total_len.
/// Equals the polylog form without its s = 0 term.
double osc_I_orbits(const HermitianMatrix& h, double lambda, double epsilon, const OrbitSet& orbits,
                    int max_total_len, Mode mode);

/// prod_k sigma^(v_k)_{v_{k+1}, v_{k-1}} at lambda.
Complex orbit_weight_II(const ScatteringSystem& sys, Complex lambda, const Orbit& p);

/// (1/pi) Im sum_p sum_{r n_p <= max_total_len} W_p(lambda + i eps)^r / r.
double osc_II_orbits(const ScatteringSystem& sys, double lambda, double epsilon, const OrbitSet& orbits,
                     int max_total_len);

}  // namespace hermtrace
