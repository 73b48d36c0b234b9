#include "hermtrace/matrix_model.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <sstream>

#include <json.hpp>

#include "hermtrace/errors.hpp"

namespace hermtrace {

// ---------------------------------------------------------------------------
// HermitianMatrix

HermitianMatrix HermitianMatrix::from_dense(const CMatrix& m, double tol) {
    if (m.rows() < 1 || m.rows() != m.cols()) {
        throw ArgumentError("HermitianMatrix: need a nonempty square matrix");
    }
    const double scale = std::max(1.0, m.cwiseAbs().maxCoeff());
    double worst = 0;
    Eigen::Index wi = 0, wj = 0;
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
        for (Eigen::Index j = i; j < m.cols(); ++j) {
            const double dev = std::abs(m(i, j) - std::conj(m(j, i)));
            if (dev > worst) {
                worst = dev;
                wi = i;
                wj = j;
            }
        }
    }
    if (!std::isfinite(worst) || worst > tol * scale) {
        std::ostringstream os;
        os << "hermiticity violation " << worst << " at (" << wi << "," << wj << ")";
        throw ArgumentError(os.str());
    }
    CMatrix sym = 0.5 * (m + m.adjoint());
    for (Eigen::Index i = 0; i < sym.rows(); ++i) sym(i, i) = Complex(sym(i, i).real(), 0.0);
    return HermitianMatrix(std::move(sym));
}

HermitianMatrix HermitianMatrix::diagonal(std::span<const double> values) {
    CMatrix m = CMatrix::Zero(static_cast<Eigen::Index>(values.size()),
                              static_cast<Eigen::Index>(values.size()));
    for (std::size_t i = 0; i < values.size(); ++i) m(i, i) = values[i];
    return from_dense(m);
}

HermitianMatrix HermitianMatrix::zero(int n) { return from_dense(CMatrix::Zero(n, n)); }

HermitianMatrix HermitianMatrix::scaled(double c) const { return HermitianMatrix(m_ * c); }

// ---------------------------------------------------------------------------
// I/O

HermitianMatrix load_matrix(std::string_view json_text) {
    nlohmann::json doc;
    try {
        doc = nlohmann::json::parse(json_text);
    } catch (const nlohmann::json::parse_error& e) {
        throw ParseError(std::string("matrix file: ") + e.what());
    }
    if (!doc.is_object() || !doc.contains("n") || !doc.contains("entries")) {
        throw ParseError("matrix file: expected object with keys \"n\" and \"entries\"");
    }
    if (!doc["n"].is_number_integer() || doc["n"].get<long long>() < 1) {
        throw ParseError("matrix file: \"n\" must be a positive integer");
    }
    const auto n = doc["n"].get<long long>();
    const auto& entries = doc["entries"];
    if (!entries.is_array()) throw ParseError("matrix file: \"entries\" must be an array");

    CMatrix m = CMatrix::Zero(n, n);
    std::vector<char> seen(static_cast<std::size_t>(n * n), 0);
    for (const auto& e : entries) {
        if (!e.is_array() || (e.size() != 4 && e.size() != 3)) {
            throw ParseError("matrix file: each entry must be [i, j, re, im]");
        }
        if (!e[0].is_number_integer() || !e[1].is_number_integer() || !e[2].is_number() ||
            (e.size() == 4 && !e[3].is_number())) {
            throw ParseError("matrix file: malformed entry " + e.dump());
        }
        const auto i = e[0].get<long long>();
        const auto j = e[1].get<long long>();
        if (i < 0 || j < 0 || i >= n || j >= n) {
            throw ParseError("matrix file: index out of range for n = " + std::to_string(n) + " in " + e.dump());
        }
        auto& flag = seen[static_cast<std::size_t>(i * n + j)];
        if (flag) throw ParseError("matrix file: duplicate entry (" + std::to_string(i) + "," + std::to_string(j) + ")");
        flag = 1;
        m(i, j) = Complex(e[2].get<double>(), e.size() == 4 ? e[3].get<double>() : 0.0);
    }
    for (long long i = 0; i < n; ++i) {
        for (long long j = 0; j < n; ++j) {
            const bool has_ij = seen[static_cast<std::size_t>(i * n + j)] != 0;
            const bool has_ji = seen[static_cast<std::size_t>(j * n + i)] != 0;
            if (has_ij && !has_ji) m(j, i) = std::conj(m(i, j));
        }
    }
    try {
        return HermitianMatrix::from_dense(m);
    } catch (const ArgumentError& e) {
        throw ParseError(std::string("matrix file: ") + e.what());
    }
}

HermitianMatrix load_matrix_file(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open matrix file " + path.string());
    std::ostringstream os;
    os << in.rdbuf();
    return load_matrix(os.str());
}

std::string dump_matrix(const HermitianMatrix& h) {
    nlohmann::json doc;
    doc["n"] = h.n();
    auto entries = nlohmann::json::array();
    for (int i = 0; i < h.n(); ++i) {
        for (int j = i; j < h.n(); ++j) {
            const Complex v = h(i, j);
            if (v != Complex(0, 0)) entries.push_back({i, j, v.real(), v.imag()});
        }
    }
    doc["entries"] = std::move(entries);
    return doc.dump();
}

std::string eigenvalues_csv(std::span<const double> eigenvalues) {
    std::string out;
    char buf[64];
    for (double v : eigenvalues) {
        std::snprintf(buf, sizeof buf, "%.17g\n", v);
        out += buf;
    }
    return out;
}

// ---------------------------------------------------------------------------
// Eigensolver

namespace {

struct JacobiResult {
    RVector values;
    RMatrix vectors;
};

JacobiResult cyclic_jacobi(RMatrix a, int sweep_budget) {
    const Eigen::Index n = a.rows();
    RMatrix v = RMatrix::Identity(n, n);
    const double scale = std::max(a.norm(), std::numeric_limits<double>::min());
    auto off_norm = [&] {
        double s = 0;
        for (Eigen::Index p = 0; p < n; ++p)
            for (Eigen::Index q = p + 1; q < n; ++q) s += 2 * a(p, q) * a(p, q);
        return std::sqrt(s);
    };
    int sweep = 0;
    for (; sweep < sweep_budget; ++sweep) {
        if (off_norm() <= 1e-15 * scale) break;
        for (Eigen::Index p = 0; p < n - 1; ++p) {
            for (Eigen::Index q = p + 1; q < n; ++q) {
                const double apq = a(p, q);
                if (std::abs(apq) <= 1e-300) continue;
                const double theta = (a(q, q) - a(p, p)) / (2 * apq);
                const double t = (theta >= 0 ? 1.0 : -1.0) / (std::abs(theta) + std::sqrt(theta * theta + 1));
                const double c = 1 / std::sqrt(t * t + 1);
                const double s = t * c;
                for (Eigen::Index k = 0; k < n; ++k) {
                    const double akp = a(k, p), akq = a(k, q);
                    a(k, p) = c * akp - s * akq;
                    a(k, q) = s * akp + c * akq;
                }
                for (Eigen::Index k = 0; k < n; ++k) {
                    const double apk = a(p, k), aqk = a(q, k);
                    a(p, k) = c * apk - s * aqk;
                    a(q, k) = s * apk + c * aqk;
                }
                for (Eigen::Index k = 0; k < n; ++k) {
                    const double vkp = v(k, p), vkq = v(k, q);
                    v(k, p) = c * vkp - s * vkq;
                    v(k, q) = s * vkp + c * vkq;
                }
            }
        }
    }
    if (sweep == sweep_budget && off_norm() > 1e-15 * scale) {
        std::ostringstream os;
        os << "eig_hermitian: no convergence after " << sweep_budget << " sweeps, off-diagonal norm "
           << off_norm();
        throw ConvergenceError(os.str());
    }
    return {a.diagonal(), v};
}

}  // namespace

EigenDecomposition eig_hermitian_vectors(const HermitianMatrix& h) {
    const int n = h.n();
    RMatrix emb(2 * n, 2 * n);
    const RMatrix re = h.entries().real();
    const RMatrix im = h.entries().imag();
    emb.topLeftCorner(n, n) = re;
    emb.topRightCorner(n, n) = -im;
    emb.bottomLeftCorner(n, n) = im;
    emb.bottomRightCorner(n, n) = re;

    const auto jac = cyclic_jacobi(std::move(emb), 30 * std::max(n, 1));

    std::vector<int> order(2 * n);
    for (int i = 0; i < 2 * n; ++i) order[i] = i;
    std::sort(order.begin(), order.end(), [&](int a, int b) { return jac.values[a] < jac.values[b]; });

    const double pair_tol = 1e-8 * std::max(h.norm(), 1.0);
    EigenDecomposition dec;
    dec.values.resize(n);
    dec.vectors.resize(n, n);
    for (int j = 0; j < n; ++j) {
        const int a = order[2 * j], b = order[2 * j + 1];
        if (std::abs(jac.values[a] - jac.values[b]) > pair_tol) {
            throw ConvergenceError("eig_hermitian: embedded spectrum is not paired");
        }
        dec.values[j] = 0.5 * (jac.values[a] + jac.values[b]);
        CVector x(n);
        for (int i = 0; i < n; ++i) x(i) = Complex(jac.vectors(i, a), jac.vectors(i + n, a));
        dec.vectors.col(j) = x / x.norm();
    }
    return dec;
}

std::vector<double> eig_hermitian(const HermitianMatrix& h) { return eig_hermitian_vectors(h).values; }

double eigen_residual(const HermitianMatrix& h, const EigenDecomposition& dec) {
    double worst = 0;
    for (std::size_t j = 0; j < dec.values.size(); ++j) {
        const CVector x = dec.vectors.col(static_cast<Eigen::Index>(j));
        worst = std::max(worst, (h.entries() * x - dec.values[j] * x).norm());
    }
    return worst / std::max(h.norm(), 1.0);
}

int counting_exact(std::span<const double> sorted_eigenvalues, double lambda) {
    return static_cast<int>(std::upper_bound(sorted_eigenvalues.begin(), sorted_eigenvalues.end(), lambda) -
                            sorted_eigenvalues.begin());
}

double gap_from_eigenvalues(std::span<const double> sorted_eigenvalues) {
    if (sorted_eigenvalues.empty()) return kPi;
    return std::min(kPi - sorted_eigenvalues.back(), sorted_eigenvalues.front() + kPi);
}

double gap(const HermitianMatrix& h) {
    const auto eigs = eig_hermitian(h);
    return gap_from_eigenvalues(eigs);
}

RescaleResult rescale_to_window(const HermitianMatrix& h, double target_gap) {
    if (!(target_gap > 0 && target_gap < kPi)) throw ArgumentError("rescale_to_window: target gap must lie in (0, pi)");
    const auto eigs = eig_hermitian(h);
    const double rho = std::max(std::abs(eigs.front()), std::abs(eigs.back()));
    if (rho == 0) return {h, 1.0, true};
    const double c = (kPi - target_gap) / rho;
    return {h.scaled(c), c, false};
}

// ---------------------------------------------------------------------------
// Traces

std::vector<long double> trace_powers_ld(const HermitianMatrix& h, int s_max) {
    if (s_max < 0) throw ArgumentError("trace_powers: s_max must be >= 0");
    using CLD = Eigen::Matrix<ComplexLD, Eigen::Dynamic, Eigen::Dynamic>;
    const int n = h.n();
    const CLD hl = h.entries().cast<ComplexLD>();
    CLD power = CLD::Identity(n, n);
    std::vector<long double> out(static_cast<std::size_t>(s_max) + 1);
    out[0] = n;
    const long double fro = std::max<long double>(h.norm(), 1.0L);
    long double bound = n;
    for (int s = 1; s <= s_max; ++s) {
        power = hl * power;
        const ComplexLD tr = power.trace();
        bound *= fro;
        if (std::abs(tr.imag()) > 1e-10L * std::max<long double>(1.0L, bound)) {
            throw Error("trace_powers: imaginary leakage in tr H^" + std::to_string(s));
        }
        out[s] = tr.real();
    }
    return out;
}

std::vector<Complex> trace_powers(const HermitianMatrix& h, int s_max) {
    const auto ld = trace_powers_ld(h, s_max);
    std::vector<Complex> out(ld.size());
    for (std::size_t s = 0; s < ld.size(); ++s) out[s] = Complex(static_cast<double>(ld[s]), 0.0);
    return out;
}

// ---------------------------------------------------------------------------
// Graphs

int AssociatedGraphs::edge_index(int head, int tail) const {
    if (head < 0 || tail < 0 || head >= n || tail >= n) return -1;
    return edge_lookup[static_cast<std::size_t>(head) * n + tail];
}

int AssociatedGraphs::neighbor_slot(int v, int w) const {
    const auto& nb = neighborhoods.at(v);
    const auto it = std::lower_bound(nb.begin(), nb.end(), w);
    if (it == nb.end() || *it != w) return -1;
    return static_cast<int>(it - nb.begin());
}

GraphData build_graphs(const HermitianMatrix& h, double zero_threshold) {
    if (zero_threshold < 0) throw ArgumentError("build_graphs: zero_threshold must be >= 0");
    const int n = h.n();
    GraphData out;
    auto& g = out.graphs;
    g.n = n;
    g.adjacency_I.assign(n, std::vector<int>(n, 0));
    g.adjacency_II.assign(n, std::vector<int>(n, 0));
    g.neighborhoods.assign(n, {});
    g.degrees.assign(n, 0);
    g.edge_lookup.assign(static_cast<std::size_t>(n) * n, -1);
    out.phases.h = RMatrix::Zero(n, n);
    out.phases.gamma = RMatrix::Zero(n, n);
    out.gershgorin.centers.resize(n);
    out.gershgorin.radii.assign(n, 0.0);

    auto retained = [&](int v, int w) {
        const double a = std::abs(h(v, w));
        return zero_threshold == 0 ? a != 0.0 : a > zero_threshold;
    };

    for (int v = 0; v < n; ++v) {
        out.gershgorin.centers[v] = h.diag(v);
        for (int w = 0; w < n; ++w) {
            if (!retained(v, w)) continue;
            g.adjacency_I[v][w] = 1;
            if (v == w) continue;
            g.adjacency_II[v][w] = 1;
            g.neighborhoods[v].push_back(w);
            const Complex hvw = h(v, w);
            const double mag = std::abs(hvw);
            out.phases.h(v, w) = mag;
            double gamma;
            if (hvw.imag() == 0.0 && hvw.real() < 0.0) {
                gamma = (v >= w) ? kPi / 2 : -kPi / 2;
            } else {
                gamma = 0.5 * std::arg(hvw);
            }
            out.phases.gamma(v, w) = gamma;
            out.gershgorin.radii[v] += mag;
        }
        g.degrees[v] = static_cast<int>(g.neighborhoods[v].size());
    }

    for (int v = 0; v < n; ++v) {
        for (int w : g.neighborhoods[v]) {
            g.edge_lookup[static_cast<std::size_t>(v) * n + w] = static_cast<int>(g.directed_edges.size());
            g.directed_edges.push_back({v, w});
        }
    }
    g.reverse.resize(g.directed_edges.size());
    for (std::size_t e = 0; e < g.directed_edges.size(); ++e) {
        const auto [head, tail] = g.directed_edges[e];
        g.reverse[e] = g.edge_index(tail, head);
    }
    g.edge_count = static_cast<int>(g.directed_edges.size() / 2);
    return out;
}

}  // namespace hermtrace
