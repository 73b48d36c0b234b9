#include "hermtrace/orbits.hpp"

#include <algorithm>
#include <optional>

#include "hermtrace/combinatorics.hpp"
#include "hermtrace/errors.hpp"
#include "hermtrace/kahan.hpp"

namespace hermtrace {

std::vector<int> canonical_rotation(std::span<const int> cycle) {
    std::vector<int> best(cycle.begin(), cycle.end());
    const std::size_t n = cycle.size();
    std::vector<int> rot(n);
    for (std::size_t k = 1; k < n; ++k) {
        for (std::size_t i = 0; i < n; ++i) rot[i] = cycle[(i + k) % n];
        if (rot < best) best = rot;
    }
    return best;
}

bool is_primitive(std::span<const int> cycle) {
    const std::size_t n = cycle.size();
    for (std::size_t d = 1; d < n; ++d) {
        if (n % d != 0) continue;
        bool periodic = true;
        for (std::size_t i = 0; i + d < n && periodic; ++i) periodic = cycle[i] == cycle[i + d];
        if (periodic) return false;
    }
    return true;
}

namespace {

bool is_canonical(const std::vector<int>& cycle) {
    const std::size_t n = cycle.size();
    for (std::size_t k = 1; k < n; ++k) {
        for (std::size_t i = 0; i < n; ++i) {
            const int a = cycle[(i + k) % n], b = cycle[i];
            if (a < b) return false;
            if (a > b) break;
        }
    }
    return true;
}

struct Search {
    const std::vector<std::vector<int>>& adj;
    int max_len;
    std::size_t max_count;
    std::vector<int> path;
    std::vector<Orbit> found;

    void extend(int start) {
        const int last = path.back();
        if (adj[last][start] && is_canonical(path) && is_primitive(path)) {
            if (found.size() >= max_count) {
                throw ResourceError("enumerate_primitive_orbits: more than " + std::to_string(max_count) +
                                    " primitive orbits");
            }
            found.push_back({path, 1});
        }
        if (static_cast<int>(path.size()) == max_len) return;
        const int n = static_cast<int>(adj.size());
        for (int w = start; w < n; ++w) {
            if (!adj[last][w]) continue;
            path.push_back(w);
            extend(start);
            path.pop_back();
        }
    }
};

}  // namespace

OrbitSet enumerate_primitive_orbits(const AssociatedGraphs& graphs, GraphKind kind, int max_len,
                                    const EnumerationBudget& budget) {
    if (max_len < 1) throw ArgumentError("enumerate_primitive_orbits: max_len must be >= 1");
    if (max_len > budget.max_len) {
        throw ResourceError("enumerate_primitive_orbits: max_len " + std::to_string(max_len) + " exceeds budget " +
                            std::to_string(budget.max_len));
    }
    const auto& adj = kind == GraphKind::I ? graphs.adjacency_I : graphs.adjacency_II;
    Search search{adj, max_len, budget.max_count, {}, {}};
    for (int v = 0; v < graphs.n; ++v) {
        search.path = {v};
        search.extend(v);
    }
    std::stable_sort(search.found.begin(), search.found.end(), [](const Orbit& a, const Orbit& b) {
        if (a.length() != b.length()) return a.length() < b.length();
        return a.vertices < b.vertices;
    });
    return {kind, max_len, std::move(search.found)};
}

Complex orbit_weight_I(const HermitianMatrix& h, const Orbit& p) {
    Complex w(1, 0);
    const int n = p.length();
    for (int k = 0; k < n; ++k) {
        const int from = p.vertices[k], to = p.vertices[(k + 1) % n];
        const Complex x = h(to, from);
        if (x == Complex(0, 0)) throw Error("orbit_weight_I: orbit uses a missing edge");
        w *= x;
    }
    return w;
}

Complex trace_from_orbits(const HermitianMatrix& h, int s, const OrbitSet& orbits) {
    if (orbits.kind != GraphKind::I) throw ArgumentError("trace_from_orbits: need orbits on G_I");
    if (s < 1) throw ArgumentError("trace_from_orbits: s must be >= 1");
    if (orbits.max_len < s) {
        throw ArgumentError("trace_from_orbits: orbits enumerated to length " + std::to_string(orbits.max_len) +
                            " < " + std::to_string(s));
    }
    KahanSum<Complex> acc;
    for (const auto& p : orbits.orbits) {
        const int np = p.length();
        if (s % np != 0) continue;
        acc += static_cast<double>(np) * std::pow(orbit_weight_I(h, p), s / np);
    }
    return acc.value();
}

double osc_I_orbits(const HermitianMatrix& h, double lambda, double epsilon, const OrbitSet& orbits,
                    int max_total_len, Mode mode) {
    if (!(epsilon > 0)) throw ArgumentError("osc_I_orbits: epsilon must be positive");
    if (orbits.kind != GraphKind::I) throw ArgumentError("osc_I_orbits: need orbits on G_I");
    const Complex z = std::exp(Complex(-epsilon, lambda));
    std::vector<Complex> weight(max_total_len + 1);
    Complex phase(1, 0);
    for (int s = 1; s <= max_total_len; ++s) {
        phase *= Complex(0, -1);
        weight[s] = phase * (mode == Mode::Counting ? polylog_neg_normalized(s - 1, z) / static_cast<double>(s)
                                                    : polylog_neg_normalized(s, z));
    }
    KahanSum<Complex> acc;
    for (const auto& p : orbits.orbits) {
        const int np = p.length();
        const Complex w = orbit_weight_I(h, p);
        Complex wr(1, 0);
        for (int r = 1; r * np <= max_total_len; ++r) {
            wr *= w;
            acc += static_cast<double>(np) * wr * weight[r * np];
        }
    }
    const Complex v = acc.value();
    return (mode == Mode::Counting ? v.imag() : v.real()) / kPi;
}

namespace {

class ScatteringCache {
public:
    ScatteringCache(const ScatteringSystem& sys, Complex lambda) : sys_(sys), lambda_(lambda), cache_(sys.matrix().n()) {}

    Complex amplitude(int v, int out, int in) {
        auto& slot = cache_.at(v);
        if (!slot) slot = sys_.vertex_scattering(v, lambda_).matrix;
        const auto& g = sys_.graph().graphs;
        const int row = g.neighbor_slot(v, out), col = g.neighbor_slot(v, in);
        if (row < 0 || col < 0) throw Error("orbit_weight_II: orbit uses a missing edge");
        return (*slot)(row, col);
    }

private:
    const ScatteringSystem& sys_;
    Complex lambda_;
    std::vector<std::optional<CMatrix>> cache_;
};

Complex weight_II(ScatteringCache& cache, const Orbit& p) {
    const int n = p.length();
    if (n < 2) throw ArgumentError("orbit_weight_II: orbits on G_II have length >= 2");
    Complex w(1, 0);
    for (int k = 0; k < n; ++k) {
        const int v = p.vertices[k];
        const int next = p.vertices[(k + 1) % n];
        const int prev = p.vertices[(k + n - 1) % n];
        w *= cache.amplitude(v, next, prev);
    }
    return w;
}

}  // namespace

Complex orbit_weight_II(const ScatteringSystem& sys, Complex lambda, const Orbit& p) {
    ScatteringCache cache(sys, lambda);
    return weight_II(cache, p);
}

double osc_II_orbits(const ScatteringSystem& sys, double lambda, double epsilon, const OrbitSet& orbits,
                     int max_total_len) {
    if (!(epsilon > 0)) throw ArgumentError("osc_II_orbits: epsilon must be positive");
    if (orbits.kind != GraphKind::II) throw ArgumentError("osc_II_orbits: need orbits on G_II");
    ScatteringCache cache(sys, Complex(lambda, epsilon));
    KahanSum<Complex> acc;
    for (const auto& p : orbits.orbits) {
        const int np = p.length();
        const Complex w = weight_II(cache, p);
        Complex wr(1, 0);
        for (int r = 1; r * np <= max_total_len; ++r) {
            wr *= w;
            acc += wr / static_cast<double>(r);
        }
    }
    return acc.value().imag() / kPi;
}

}  // namespace hermtrace
