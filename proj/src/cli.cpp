#include "hermtrace/cli.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

#include <CLI11.hpp>

#include "hermtrace/combinatorics.hpp"
#include "hermtrace/errors.hpp"
#include "hermtrace/identities.hpp"
#include "hermtrace/matrix_model.hpp"
#include "hermtrace/orbits.hpp"
#include "hermtrace/scattering.hpp"
#include "hermtrace/trace_one.hpp"
#include "hermtrace/walks.hpp"

namespace hermtrace {

std::vector<double> Grid::points() const {
    if (steps < 1) throw ArgumentError("grid: steps must be >= 1");
    if (steps == 1) return {lo};
    std::vector<double> out(steps);
    for (int k = 0; k < steps; ++k) out[k] = lo + (hi - lo) * k / (steps - 1);
    return out;
}

Grid parse_grid(const std::string& text) {
    Grid g;
    char tail = 0;
    if (std::sscanf(text.c_str(), "%lf:%lf:%d%c", &g.lo, &g.hi, &g.steps, &tail) != 3) {
        throw ArgumentError("grid: expected lo:hi:steps, got '" + text + "'");
    }
    if (g.steps < 1) throw ArgumentError("grid: empty grid '" + text + "'");
    if (!(g.hi >= g.lo)) throw ArgumentError("grid: need lo <= hi in '" + text + "'");
    return g;
}

std::string csv_number(double x) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.12g", x);
    return buf;
}

double Figure1Data::max_deviation(int curve, double margin) const {
    double worst = 0;
    for (std::size_t k = 0; k < lambdas.size(); ++k) {
        const bool far = std::all_of(eigenvalues.begin(), eigenvalues.end(),
                                     [&](double e) { return std::abs(lambdas[k] - e) > margin; });
        if (far) worst = std::max(worst, std::abs(curves.at(curve)[k] - exact[k]));
    }
    return worst;
}

Figure1Data figure1_data(int steps, int threads) {
    if (steps < 1) throw ArgumentError("figure1: steps must be >= 1");
    Figure1Data d;
    d.eigenvalues = {-1.6, -1.4, 0.1, 2.8};
    const auto h = HermitianMatrix::diagonal(d.eigenvalues);
    d.lambdas.resize(steps);
    for (int k = 0; k < steps; ++k) d.lambdas[k] = -kPi + 2 * kPi * (k + 0.5) / steps;
    for (double l : d.lambdas) d.exact.push_back(counting_exact(d.eigenvalues, l));
    for (std::size_t c = 0; c < Figure1Data::n_values.size(); ++c) {
        const auto policy = CutoffPolicy::minimal(1.0 / Figure1Data::n_values[c]);
        d.curves[c] = count_grid_I(h, d.lambdas, policy, MethodI::DoubleSum, Mode::Counting, threads).total;
    }
    return d;
}

std::string figure1_csv(const Figure1Data& d) {
    std::ostringstream os;
    os << "lambda,exact";
    for (int n : Figure1Data::n_values) os << ",n_max_" << n;
    os << '\n';
    for (std::size_t k = 0; k < d.lambdas.size(); ++k) {
        os << csv_number(d.lambdas[k]) << ',' << csv_number(d.exact[k]);
        for (const auto& c : d.curves) os << ',' << csv_number(c[k]);
        os << '\n';
    }
    return os.str();
}

std::vector<SemicircleRow> semicircle_rows(int n_max, int steps) {
    if (n_max < 0) throw ArgumentError("semicircle: n_max must be >= 0");
    if (steps < 1) throw ArgumentError("semicircle: steps must be >= 1");
    std::vector<SemicircleRow> rows(steps + 1);
    for (int k = 0; k <= steps; ++k) {
        auto& r = rows[k];
        r.lambda = kPi * (2 * k - steps) / steps;
        r.fourier_bessel = semicircle_counting(r.lambda, n_max);
        r.closed_form = semicircle_exact(r.lambda);
        r.abs_error = std::abs(r.fourier_bessel - r.closed_form);
    }
    return rows;
}

std::string semicircle_csv(const std::vector<SemicircleRow>& rows) {
    std::ostringstream os;
    os << "lambda,fourier_bessel,closed_form,abs_error\n";
    for (const auto& r : rows) {
        os << csv_number(r.lambda) << ',' << csv_number(r.fourier_bessel) << ',' << csv_number(r.closed_form) << ','
           << csv_number(r.abs_error) << '\n';
    }
    return os.str();
}

namespace {

struct Globals {
    std::string matrix;
    std::string output = "-";
    int threads = 1;
    std::uint64_t seed = 1;
};

struct CountArgs {
    std::string approach = "i";
    std::string grid = "-3:3:121";
    std::optional<double> epsilon;
    std::optional<int> n_max;
    std::optional<int> s_max;
    std::string mode = "counting";
    std::string method;
    bool with_exact = false;
};

struct Zeta2Args {
    double lambda_re = 0, lambda_im = 0, z_re = 1, z_im = 0;
};

struct OrbitArgs {
    std::string graph = "i";
    int max_len = 6;
    double lambda = 0;
    double epsilon = 0;
    std::size_t max_count = EnumerationBudget{}.max_count;
};

struct WalkArgs {
    std::string type = "quantum";
    double lambda = 0;
    int steps = 100;
    int start = 0;
    int chain = 0;
};

struct AndersonArgs {
    int n = 8;
    std::string dist = "cauchy";
    double mu = 0;
    std::string scan;
};

struct SemicircleArgs {
    int n_max = 200;
    int steps = 400;
};

struct IdentityArgs {
    int s_max = 12;
    int trials = 10;
    std::string inject_fault;
};

struct Figure1Args {
    int steps = 600;
};

HermitianMatrix require_matrix(const Globals& g) {
    if (g.matrix.empty()) throw ArgumentError("--matrix is required for this subcommand");
    return load_matrix_file(g.matrix);
}

std::string row(std::initializer_list<double> values) {
    std::string out;
    for (double v : values) {
        if (!out.empty()) out += ',';
        out += csv_number(v);
    }
    return out + '\n';
}

std::string cmd_eig(const Globals& g) { return eigenvalues_csv(eig_hermitian(require_matrix(g))); }

std::string cmd_count(const Globals& g, const CountArgs& a, std::ostream& err) {
    const auto h = require_matrix(g);
    const Mode mode = a.mode == "density" ? Mode::Density : Mode::Counting;
    if (a.with_exact && mode != Mode::Counting) throw ArgumentError("count: --with-exact needs --mode counting");
    auto lambdas = parse_grid(a.grid).points();
    const auto eigen = eig_hermitian(h);

    if (a.with_exact) {
        for (auto& l : lambdas) {
            const bool on_eigenvalue = std::any_of(eigen.begin(), eigen.end(), [&](double e) {
                return std::abs(l - e) <= 1e-12 * std::max(1.0, std::abs(e));
            });
            if (on_eigenvalue) {
                err << "note: grid point " << csv_number(l) << " lies on an eigenvalue; nudged by 1e-9\n";
                l += 1e-9;
            }
        }
    }

    CountingResult res;
    if (a.approach == "i") {
        const double eps = a.epsilon.value_or(0.1);
        auto policy = CutoffPolicy::minimal(eps);
        if (a.n_max) policy.n_max = *a.n_max;
        if (a.s_max) policy.s_max = *a.s_max;
        policy.validate();
        const double rho = eigen.empty() ? 0.0 : std::max(std::abs(eigen.front()), std::abs(eigen.back()));
        if (rho >= kPi) err << "warning: spectrum outside (-pi, pi); approach i output is periodized\n";
        const MethodI method = a.method == "polylog" ? MethodI::Polylog : MethodI::DoubleSum;
        if (!a.method.empty() && a.method != "polylog" && a.method != "doublesum") {
            throw ArgumentError("count: approach i methods are doublesum|polylog");
        }
        res = count_grid_I(h, lambdas, policy, method, mode, g.threads);
    } else {
        if (mode != Mode::Counting) throw ArgumentError("count: approach ii provides the counting mode only");
        if (a.s_max) throw ArgumentError("count: --s-max applies to approach i only");
        if (!a.method.empty() && a.method != "eigenphase" && a.method != "tracesum") {
            throw ArgumentError("count: approach ii methods are eigenphase|tracesum");
        }
        const OscMethodII method = a.method == "tracesum" ? OscMethodII::TraceSum : OscMethodII::Eigenphase;
        const ScatteringSystem sys(h);
        res = count_grid_II(sys, lambdas, a.epsilon.value_or(1e-4), method, a.n_max.value_or(0), g.threads);
    }

    std::ostringstream os;
    os << "lambda,smooth,oscillating,total" << (a.with_exact ? ",exact" : "") << '\n';
    for (std::size_t k = 0; k < res.lambdas.size(); ++k) {
        os << csv_number(res.lambdas[k]) << ',' << csv_number(res.smooth[k]) << ',' << csv_number(res.oscillating[k])
           << ',' << csv_number(res.total[k]);
        if (a.with_exact) os << ',' << counting_exact(eigen, res.lambdas[k]);
        os << '\n';
    }
    return os.str();
}

std::string cmd_zeta2(const Globals& g, const Zeta2Args& a) {
    const ScatteringSystem sys(require_matrix(g));
    const Complex lambda(a.lambda_re, a.lambda_im), z(a.z_re, a.z_im);
    const Complex det = sys.spectral_det(lambda, z);
    return "lambda_re,lambda_im,z_re,z_im,det_re,det_im,factorization_residual\n" +
           row({a.lambda_re, a.lambda_im, a.z_re, a.z_im, det.real(), det.imag(), sys.factorization_residual(lambda)});
}

std::string cmd_orbits(const Globals& g, const OrbitArgs& a) {
    const auto h = require_matrix(g);
    const GraphKind kind = a.graph == "ii" ? GraphKind::II : GraphKind::I;
    std::optional<ScatteringSystem> sys;
    if (kind == GraphKind::II) sys.emplace(h);
    const auto graphs = sys ? sys->graph().graphs : build_graphs(h).graphs;
    EnumerationBudget budget;
    budget.max_count = a.max_count;
    const auto set = enumerate_primitive_orbits(graphs, kind, a.max_len, budget);
    std::ostringstream os;
    os << "orbit,length,weight_re,weight_im\n";
    for (const auto& p : set.orbits) {
        const Complex w = kind == GraphKind::I ? orbit_weight_I(h, p)
                                               : orbit_weight_II(*sys, Complex(a.lambda, a.epsilon), p);
        for (std::size_t i = 0; i < p.vertices.size(); ++i) os << (i ? "-" : "") << p.vertices[i];
        os << ',' << p.length() << ',' << csv_number(w.real()) << ',' << csv_number(w.imag()) << '\n';
    }
    return os.str();
}

std::string cmd_walk(const Globals& g, const WalkArgs& a) {
    HermitianMatrix h = HermitianMatrix::zero(1);
    if (a.chain > 0) {
        if (!g.matrix.empty()) throw ArgumentError("walk: --chain and --matrix are exclusive");
        h = JacobiChain{std::vector<double>(a.chain, 0.0)}.to_matrix();
    } else {
        h = require_matrix(g);
    }
    const ScatteringSystem sys(h);
    const auto history = a.type == "classical" ? classical_walk(sys, a.lambda, a.start, a.steps)
                                               : quantum_walk(sys, a.lambda, a.start, a.steps);
    std::ostringstream os;
    os << "step,edge,probability\n";
    for (std::size_t n = 0; n < history.size(); ++n)
        for (std::size_t e = 0; e < history[n].size(); ++e)
            if (history[n][e] > 1e-12) os << n << ',' << e << ',' << csv_number(history[n][e]) << '\n';
    return os.str();
}

std::string cmd_anderson(const Globals& g, const AndersonArgs& a) {
    if (a.n < 2) throw ArgumentError("anderson: --n must be >= 2");
    const auto chain = random_cauchy_chain(a.n, a.mu, g.seed);
    Grid scan;
    if (a.scan.empty()) {
        const auto [lo, hi] = std::minmax_element(chain.diagonal.begin(), chain.diagonal.end());
        scan = {*lo - 3, *hi + 3, 20000};
    } else {
        scan = parse_grid(a.scan);
    }
    if (scan.steps < 2 || !(scan.hi > scan.lo)) throw ArgumentError("anderson: scan needs lo < hi and steps >= 2");
    const auto result = anderson_roots(chain, scan.lo, scan.hi, scan.steps);
    std::ostringstream os;
    os << "kind,lambda,value\n";
    for (double d : chain.diagonal) os << "diagonal,," << csv_number(d) << '\n';
    for (std::size_t k = 0; k < result.lambdas.size(); ++k)
        os << "scan," << csv_number(result.lambdas[k]) << ',' << csv_number(result.values[k]) << '\n';
    for (double r : result.roots) os << "root," << csv_number(r) << ',' << csv_number(anderson_secular_real(chain, r)) << '\n';
    return os.str();
}

std::string cmd_identities(const Globals& g, const IdentityArgs& a, bool& passed, std::ostream& err) {
    IdentityOptions opt;
    opt.s_max = a.s_max;
    opt.trials = a.trials;
    opt.seed = g.seed;
    auto table = eulerian_table();
    if (!a.inject_fault.empty()) {
        int s = 0, k = 0;
        char tail = 0;
        if (std::sscanf(a.inject_fault.c_str(), "%d:%d%c", &s, &k, &tail) != 2 || s < 1 || k < 0 || k > s ||
            s > table.max_order()) {
            throw ArgumentError("identities: --inject-fault expects S:K with 0 <= K <= S");
        }
        table = table.with_perturbed(s, k, BigInt(1));
        err << "note: Eulerian entry A(" << s << "," << k << ") perturbed by +1\n";
    }
    const auto report = run_identities(opt, table);
    passed = report.passed();
    for (const auto& c : report.checks)
        if (!c.passed) err << "FAIL " << c.name << " at " << c.first_failure << '\n';
    return report.to_json() + '\n';
}

void write_output(const Globals& g, const std::string& text, std::ostream& out) {
    if (g.output == "-") {
        out << text;
        return;
    }
    std::ofstream file(g.output, std::ios::binary);
    if (!file) throw std::ios_base::failure("cannot open output file '" + g.output + "'");
    file << text;
    if (!file) throw std::ios_base::failure("write failed for '" + g.output + "'");
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Eigenvalue counting through trace formulas", "hermtrace"};
    app.require_subcommand(1);
    app.fallthrough();

    Globals g;
    app.add_option("--matrix", g.matrix, "Matrix JSON file");
    app.add_option("-o,--output", g.output, "Output path, - for stdout");
    app.add_option("--threads", g.threads, "Worker threads for grid evaluation")->check(CLI::Range(1, 256));
    app.add_option("--seed", g.seed, "Random seed");

    auto* eig = app.add_subcommand("eig", "Eigenvalues of the matrix");

    CountArgs count;
    auto* count_cmd = app.add_subcommand("count", "Counting function or density on a grid");
    count_cmd->add_option("--approach", count.approach)->check(CLI::IsMember({"i", "ii"}));
    count_cmd->add_option("--grid", count.grid, "lo:hi:steps");
    count_cmd->add_option("--epsilon", count.epsilon);
    count_cmd->add_option("--n-max", count.n_max);
    count_cmd->add_option("--s-max", count.s_max);
    count_cmd->add_option("--mode", count.mode)->check(CLI::IsMember({"counting", "density"}));
    count_cmd->add_option("--method", count.method, "doublesum|polylog (i), eigenphase|tracesum (ii)");
    count_cmd->add_flag("--with-exact", count.with_exact, "Append the exact staircase");

    Zeta2Args zeta;
    auto* zeta_cmd = app.add_subcommand("zeta2", "Spectral determinant det(I - z S(lambda))");
    zeta_cmd->add_option("--lambda-re", zeta.lambda_re);
    zeta_cmd->add_option("--lambda-im", zeta.lambda_im);
    zeta_cmd->add_option("--z-re", zeta.z_re);
    zeta_cmd->add_option("--z-im", zeta.z_im);

    OrbitArgs orbit;
    auto* orbit_cmd = app.add_subcommand("orbits", "Primitive periodic orbits and their weights");
    orbit_cmd->add_option("--graph", orbit.graph)->check(CLI::IsMember({"i", "ii"}));
    orbit_cmd->add_option("--max-len", orbit.max_len);
    orbit_cmd->add_option("--lambda", orbit.lambda);
    orbit_cmd->add_option("--epsilon", orbit.epsilon);
    orbit_cmd->add_option("--max-count", orbit.max_count);

    WalkArgs walk;
    auto* walk_cmd = app.add_subcommand("walk", "Quantum or classical walk on directed edges");
    walk_cmd->add_option("--type", walk.type)->check(CLI::IsMember({"quantum", "classical"}));
    walk_cmd->add_option("--lambda", walk.lambda);
    walk_cmd->add_option("--steps", walk.steps);
    walk_cmd->add_option("--start", walk.start, "Start directed edge index");
    walk_cmd->add_option("--chain", walk.chain, "Use a clean chain of this length instead of --matrix");

    AndersonArgs anderson;
    auto* anderson_cmd = app.add_subcommand("anderson", "Secular scan of a random chain");
    anderson_cmd->add_option("--n", anderson.n);
    anderson_cmd->add_option("--dist", anderson.dist)->check(CLI::IsMember({"cauchy"}));
    anderson_cmd->add_option("--mu", anderson.mu);
    anderson_cmd->add_option("--scan", anderson.scan, "lo:hi:steps");

    SemicircleArgs semi;
    auto* semi_cmd = app.add_subcommand("semicircle", "Fourier-Bessel semicircle counting function");
    semi_cmd->add_option("--n-max", semi.n_max);
    semi_cmd->add_option("--steps", semi.steps);

    IdentityArgs ident;
    auto* ident_cmd = app.add_subcommand("identities", "Identity suite as JSON");
    ident_cmd->add_option("--s-max", ident.s_max);
    ident_cmd->add_option("--trials", ident.trials);
    ident_cmd->add_option("--inject-fault", ident.inject_fault, "S:K, perturb one Eulerian entry");

    Figure1Args fig;
    auto* fig_cmd = app.add_subcommand("figure1", "Staircase and five approximations for diag(-1.6,-1.4,0.1,2.8)");
    fig_cmd->add_option("--steps", fig.steps);

    try {
        std::vector<std::string> reversed(args.rbegin(), args.rend());
        app.parse(reversed);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return kExitOk;
    } catch (const CLI::CallForAllHelp&) {
        out << app.help("", CLI::AppFormatMode::All);
        return kExitOk;
    } catch (const CLI::ParseError& e) {
        err << "usage error: " << e.what() << '\n';
        return kExitUsage;
    }

    try {
        std::string text;
        int code = kExitOk;
        if (*eig) text = cmd_eig(g);
        else if (*count_cmd) text = cmd_count(g, count, err);
        else if (*zeta_cmd) text = cmd_zeta2(g, zeta);
        else if (*orbit_cmd) text = cmd_orbits(g, orbit);
        else if (*walk_cmd) text = cmd_walk(g, walk);
        else if (*anderson_cmd) text = cmd_anderson(g, anderson);
        else if (*semi_cmd) text = semicircle_csv(semicircle_rows(semi.n_max, semi.steps));
        else if (*fig_cmd) text = figure1_csv(figure1_data(fig.steps, g.threads));
        else if (*ident_cmd) {
            bool passed = true;
            text = cmd_identities(g, ident, passed, err);
            if (!passed) code = kExitNumeric;
        }
        write_output(g, text, out);
        return code;
    } catch (const ArgumentError& e) {
        err << "usage error: " << e.what() << '\n';
        return kExitUsage;
    } catch (const ConfigError& e) {
        err << "usage error: " << e.what() << '\n';
        return kExitUsage;
    } catch (const ParseError& e) {
        err << "parse error: " << e.what() << '\n';
        return kExitParse;
    } catch (const std::ios_base::failure& e) {
        err << "i/o error: " << e.what() << '\n';
        return kExitParse;
    } catch (const Error& e) {
        err << "numeric error: " << e.what() << '\n';
        return kExitNumeric;
    }
}

}  // namespace hermtrace
