#include <pybind11/complex.h>
#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <sstream>

#include "hermtrace/cli.hpp"
#include "hermtrace/errors.hpp"
#include "hermtrace/identities.hpp"
#include "hermtrace/orbits.hpp"
#include "hermtrace/scattering.hpp"
#include "hermtrace/trace_one.hpp"
#include "hermtrace/walks.hpp"

namespace py = pybind11;
using namespace hermtrace;

namespace {

HermitianMatrix to_matrix(const CMatrix& m) { return HermitianMatrix::from_dense(m); }

py::dict counting_dict(const CountingResult& r) {
    py::dict d;
    d["lambda"] = r.lambdas;
    d["smooth"] = r.smooth;
    d["oscillating"] = r.oscillating;
    d["total"] = r.total;
    d["method"] = r.method;
    return d;
}

Mode parse_mode(const std::string& mode) {
    if (mode == "counting") return Mode::Counting;
    if (mode == "density") return Mode::Density;
    throw ArgumentError("mode must be 'counting' or 'density'");
}

}  // namespace

PYBIND11_MODULE(_hermtrace, m) {
    m.doc() = "Trace formulas for the eigenvalue counting function of Hermitian matrices";

    auto base = py::register_exception<Error>(m, "Error", PyExc_RuntimeError);
    py::register_exception<ArgumentError>(m, "ArgumentError", base.ptr());
    py::register_exception<ParseError>(m, "ParseError", base.ptr());
    py::register_exception<ConfigError>(m, "ConfigError", base.ptr());
    py::register_exception<DomainError>(m, "DomainError", base.ptr());
    py::register_exception<SingularityError>(m, "SingularityError", base.ptr());
    py::register_exception<ConvergenceError>(m, "ConvergenceError", base.ptr());
    py::register_exception<ResourceError>(m, "ResourceError", base.ptr());
    py::register_exception<StructureError>(m, "StructureError", base.ptr());

    m.def(
        "eigenvalues", [](const CMatrix& h) { return eig_hermitian(to_matrix(h)); }, py::arg("matrix"),
        "Sorted eigenvalues of a Hermitian matrix.");

    m.def(
        "load_matrix", [](const std::string& text) { return load_matrix(text).entries(); }, py::arg("json_text"),
        "Dense matrix from the JSON entry-list format.");

    m.def(
        "count_i",
        [](const CMatrix& h, const std::vector<double>& lambdas, double epsilon, const std::string& method,
           const std::string& mode, int threads) {
            const MethodI mi = method == "polylog" ? MethodI::Polylog : MethodI::DoubleSum;
            if (method != "polylog" && method != "doublesum") throw ArgumentError("method must be doublesum|polylog");
            return counting_dict(
                count_grid_I(to_matrix(h), lambdas, CutoffPolicy::minimal(epsilon), mi, parse_mode(mode), threads));
        },
        py::arg("matrix"), py::arg("lambdas"), py::arg("epsilon") = 0.1, py::arg("method") = "doublesum",
        py::arg("mode") = "counting", py::arg("threads") = 1,
        "Counting function or density from Eulerian/polylog weights with minimal cutoffs.");

    m.def(
        "count_ii",
        [](const CMatrix& h, const std::vector<double>& lambdas, double epsilon, const std::string& method, int n_max,
           int threads) {
            const OscMethodII mi = method == "tracesum" ? OscMethodII::TraceSum : OscMethodII::Eigenphase;
            if (method != "tracesum" && method != "eigenphase") throw ArgumentError("method must be eigenphase|tracesum");
            return counting_dict(count_grid_II(ScatteringSystem(to_matrix(h)), lambdas, epsilon, mi, n_max, threads));
        },
        py::arg("matrix"), py::arg("lambdas"), py::arg("epsilon") = 1e-4, py::arg("method") = "eigenphase",
        py::arg("n_max") = 0, py::arg("threads") = 1, "Counting function from the directed-edge unitary.");

    m.def(
        "scattering_matrix", [](const CMatrix& h, Complex lambda) { return ScatteringSystem(to_matrix(h)).assemble(lambda).matrix; },
        py::arg("matrix"), py::arg("lambda_"), "The 2E x 2E directed-edge operator S(lambda).");

    m.def(
        "spectral_det",
        [](const CMatrix& h, Complex lambda, Complex z) { return ScatteringSystem(to_matrix(h)).spectral_det(lambda, z); },
        py::arg("matrix"), py::arg("lambda_"), py::arg("z") = Complex(1, 0), "det(I - z S(lambda)).");

    m.def(
        "factorization_residual",
        [](const CMatrix& h, Complex lambda) { return ScatteringSystem(to_matrix(h)).factorization_residual(lambda); },
        py::arg("matrix"), py::arg("lambda_"));

    m.def(
        "primitive_orbits",
        [](const CMatrix& h, const std::string& graph, int max_len) {
            if (graph != "i" && graph != "ii") throw ArgumentError("graph must be 'i' or 'ii'");
            const auto set = enumerate_primitive_orbits(build_graphs(to_matrix(h)).graphs,
                                                        graph == "i" ? GraphKind::I : GraphKind::II, max_len);
            std::vector<std::vector<int>> out;
            for (const auto& p : set.orbits) out.push_back(p.vertices);
            return out;
        },
        py::arg("matrix"), py::arg("graph") = "ii", py::arg("max_len") = 6,
        "Primitive periodic orbits in canonical rotation, ordered by length.");

    m.def(
        "walk",
        [](const CMatrix& h, double lambda, int start, int steps, const std::string& type) {
            const ScatteringSystem sys(to_matrix(h));
            if (type == "quantum") return quantum_walk(sys, lambda, start, steps);
            if (type == "classical") return classical_walk(sys, lambda, start, steps);
            throw ArgumentError("type must be 'quantum' or 'classical'");
        },
        py::arg("matrix"), py::arg("lambda_"), py::arg("start") = 0, py::arg("steps") = 100,
        py::arg("type") = "quantum", "Edge probabilities after each step.");

    m.def(
        "anderson_roots",
        [](const std::vector<double>& diagonal, double lo, double hi, int steps) {
            return anderson_roots(JacobiChain{diagonal}, lo, hi, steps).roots;
        },
        py::arg("diagonal"), py::arg("lo"), py::arg("hi"), py::arg("steps") = 20000,
        "Roots of the transfer-product secular function of a unit-hopping chain.");

    m.def(
        "semicircle", [](double lambda, int n_max) { return semicircle_counting(lambda, n_max); }, py::arg("lambda_"),
        py::arg("n_max") = 200);
    m.def("semicircle_exact", &semicircle_exact, py::arg("lambda_"));

    m.def(
        "figure1",
        [](int steps) {
            const auto d = figure1_data(steps);
            py::dict out;
            out["lambda"] = d.lambdas;
            out["exact"] = d.exact;
            for (std::size_t i = 0; i < Figure1Data::n_values.size(); ++i)
                out[py::str("n_max_" + std::to_string(Figure1Data::n_values[i]))] = d.curves[i];
            return out;
        },
        py::arg("steps") = 600);

    m.def(
        "identities",
        [](int s_max, int trials, std::uint64_t seed) {
            IdentityOptions opt;
            opt.s_max = s_max;
            opt.trials = trials;
            opt.seed = seed;
            return run_identities(opt).to_json();
        },
        py::arg("s_max") = 12, py::arg("trials") = 10, py::arg("seed") = 1, "Identity suite report as JSON text.");

    m.def(
        "run_cli",
        [](const std::vector<std::string>& args) {
            std::ostringstream out, err;
            const int code = run_cli(args, out, err);
            return py::make_tuple(code, out.str(), err.str());
        },
        py::arg("args"), "Runs the command line; returns (exit_code, stdout, stderr).");
}
