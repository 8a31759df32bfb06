#include "qroot/harness.hpp"

#include "qroot/circulant_pde.hpp"
#include "qroot/newton_solver.hpp"
#include "qroot/physics_apps.hpp"
#include "qroot/root_dissect.hpp"
#include "qroot/serialize.hpp"

#include <spdlog/spdlog.h>

#include <algorithm>
#include <chrono>
#include <cstdlib>
#include <ctime>
#include <fstream>
#include <iomanip>
#include <mutex>
#include <numbers>
#include <random>
#include <sstream>

namespace qroot {

using nlohmann::json;
namespace fs = std::filesystem;

namespace {

const std::vector<std::pair<Command, std::string>> kCommands = {
    {Command::Dissect, "dissect"},   {Command::Newton, "newton"},     {Command::Lm, "lm"},
    {Command::Linear, "linear"},     {Command::Circulant, "circulant"}, {Command::Poisson, "poisson"},
    {Command::Masses, "masses"},     {Command::Dynamics, "dynamics"}, {Command::Lyapunov, "lyapunov"},
    {Command::Scaling, "scaling"}};

std::string read_file(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    if (!in) throw ConfigError(p.string() + ": cannot open file");
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

template <typename T> T field(const json& j, const std::string& key, const T& fallback, const std::string& origin) {
    if (!j.contains(key)) return fallback;
    try {
        return j.at(key).get<T>();
    } catch (const json::exception& e) {
        throw ConfigError(origin + ": field '" + key + "': " + e.what());
    }
}

// Replaces each top-level "<name>_path" entry by the parsed file under "<name>".
json resolve_paths(json input, const fs::path& base_dir) {
    if (!input.is_object()) return input;
    json out = json::object();
    for (const auto& [key, value] : input.items()) {
        constexpr std::string_view suffix = "_path";
        if (key.size() > suffix.size() && key.ends_with(suffix) && value.is_string()) {
            fs::path p = value.get<std::string>();
            if (p.is_relative()) p = base_dir / p;
            out[key.substr(0, key.size() - suffix.size())] = load_json_file(p);
        } else {
            out[key] = value;
        }
    }
    return out;
}

RVector to_vector(const json& j) {
    const auto v = j.get<std::vector<double>>();
    return Eigen::Map<const RVector>(v.data(), static_cast<Index>(v.size()));
}

RMatrix to_matrix(const json& j) {
    if (!j.is_array() || j.empty()) throw ConfigError("matrix must be a non-empty array of rows");
    RMatrix m(static_cast<Index>(j.size()), static_cast<Index>(j.front().size()));
    for (Index r = 0; r < m.rows(); ++r) {
        const auto row = j[static_cast<std::size_t>(r)].get<std::vector<double>>();
        if (static_cast<Index>(row.size()) != m.cols()) throw ConfigError("matrix rows differ in length");
        for (Index c = 0; c < m.cols(); ++c) m(r, c) = row[static_cast<std::size_t>(c)];
    }
    return m;
}

json vec_json(const RVector& v) { return std::vector<double>(v.data(), v.data() + v.size()); }

IterateTrace trace_of(const SolveReport& r) {
    IterateTrace t;
    t.iterates = r.iterates;
    t.residuals = r.residuals;
    t.halted = r.halted;
    t.domain_escape = r.domain_escape;
    return t;
}

// Input parsing runs inside this guard so schema problems surface as ConfigError.
template <typename Fn> auto parse_input(const std::string& what, Fn&& fn) {
    try {
        return fn();
    } catch (const ConfigError& e) {
        throw ConfigError("input." + what + ": " + e.what());
    } catch (const json::exception& e) {
        throw ConfigError("input." + what + ": " + e.what());
    } catch (const PreconditionError& e) {
        throw ConfigError("input." + what + ": " + e.what());
    }
}

class Artifacts {
public:
    Artifacts(const ExperimentConfig& cfg, json resolved) : dir_(cfg.out_dir), resolved_(std::move(resolved)) {
        fs::create_directories(dir_);
    }

    void text(const std::string& name, const std::string& body) {
        std::ofstream out(dir_ / name, std::ios::binary);
        out << body;
        if (!out) throw std::runtime_error("cannot write " + (dir_ / name).string());
        files_.push_back(dir_ / name);
        spdlog::debug("wrote {}", (dir_ / name).string());
    }

    void report(const std::string& name, json body, const CostLedger& ledger) {
        body["config"] = resolved_;
        body["ledger_totals"] = to_json(ledger);
        text(name, body.dump(2) + "\n");
    }

    template <typename Writer> void csv(const std::string& name, Writer&& w) {
        std::ostringstream os;
        w(os);
        const std::string body = os.str();
        text(name, body);
    }

    json& resolved() { return resolved_; }
    const std::vector<fs::path>& files() const { return files_; }

private:
    fs::path dir_;
    json resolved_;
    std::vector<fs::path> files_;
};

double eps_or(const ExperimentConfig& c, const json& input, double fallback) {
    if (c.eps) return *c.eps;
    return field<double>(input, "eps", fallback, "input");
}

NewtonConfig newton_settings(const ExperimentConfig& c, const json& input, json defaults) {
    if (input.contains("newton")) defaults.update(input.at("newton"));
    NewtonConfig cfg = parse_input("newton", [&] { return newton_config_from_json(defaults); });
    if (c.eps) cfg.eps = *c.eps;
    return cfg;
}

json newton_json(const NewtonConfig& c) {
    return {{"T", c.T},           {"eps", c.eps},
            {"Lambda", c.Lambda}, {"M_grad", c.M_grad},
            {"strategy", to_string(c.strategy)}, {"pseudo_inverse", c.pseudo_inverse},
            {"delta", c.delta}};
}

int run_dissect(const ExperimentConfig& c, Artifacts& out) {
    const json& in = c.input;
    const auto f = parse_input("function", [&] { return multivariate_from_json(in.at("function")); });
    const auto grid = parse_input("grid", [&] { return grid_from_json(in.at("grid")); });
    const double eps = eps_or(c, in, kDefaultDissectEps);
    const double zero_tol = field<double>(in, "zero_tol", kDefaultZeroTol, "input");
    out.resolved()["eps"] = eps;
    out.resolved()["zero_tol"] = zero_tol;

    const auto q = dissect(grid, f, eps, zero_tol, split_seed(c.seed, 0));
    const auto cl = classical_scan(grid, f, zero_tol);
    spdlog::info("dissect: {} points, verdict {}", grid.n(), to_string(q.verdict));
    out.report("dissect.json", {{"verdict", to_string(q.verdict)}, {"quantum", to_json(q)}, {"classical", to_json(cl)}},
               q.cost);
    return 0;
}

int run_solver(const ExperimentConfig& c, Artifacts& out, bool lm) {
    const json& in = c.input;
    const auto F = parse_input("family", [&] { return family_from_json(in.at("family")); });
    const RVector x0 = in.contains("x0") ? parse_input("x0", [&] { return to_vector(in.at("x0")); })
                                        : default_initial_state(F.n(), split_seed(c.seed, 0));
    NewtonConfig cfg = newton_settings(c, in, json::object());
    const double lambda = lm ? field<double>(in, "lambda", 1e-2, "input") : 0.0;
    out.resolved()["newton"] = newton_json(cfg);
    out.resolved()["x0"] = vec_json(x0);
    if (lm) out.resolved()["lambda"] = lambda;

    const SolveReport r = lm ? solve_lm(F, x0, lambda, cfg) : solve(F, x0, cfg);
    const int T = cfg.T > 0 ? cfg.T : default_iterations(cfg.eps);
    const IterateTrace cl = lm ? classical_lm(F, x0, lambda, T) : classical_newton(F, x0, T);
    const std::string stem = lm ? "lm" : "newton";
    spdlog::info("{}: n = {}, iterations {}, residual {:.3e}", stem, F.n(), r.iterations, r.residual);
    out.report(stem + ".json", {{"report", to_json(r)}, {"classical_residuals", cl.residuals}}, r.total_cost);
    out.csv(stem + "_iterates.csv", [&](std::ostream& os) { write_iterates_csv(os, trace_of(r)); });
    out.csv(stem + "_classical_iterates.csv", [&](std::ostream& os) { write_iterates_csv(os, cl); });
    if (r.halted) {
        out.report("error.json", {{"module", "newton_solver"}, {"error", r.message}}, r.total_cost);
        return kExitNumericalError;
    }
    return 0;
}

int run_linear(const ExperimentConfig& c, Artifacts& out) {
    const json& in = c.input;
    RMatrix A;
    RVector rhs;
    RVector x0;
    if (in.contains("A")) {
        A = parse_input("A", [&] { return to_matrix(in.at("A")); });
        rhs = parse_input("b", [&] { return to_vector(in.at("b")); });
        if (rhs.size() != A.rows() || A.rows() != A.cols()) throw ConfigError("input.A: square system expected");
        x0 = in.contains("x0") ? parse_input("x0", [&] { return to_vector(in.at("x0")); })
                               : RVector(RVector::Zero(A.rows()));
    } else {
        const auto n = field<Index>(in, "n", 16, "input");
        RVector root;
        const FunctionFamily G = random_linear_system(n, split_seed(c.seed, 0), &root);
        A = G.a.front();
        rhs = -G.c;
        x0 = default_initial_state(n, split_seed(c.seed, 1));
        out.resolved()["generated"] = {{"A", json::array()}, {"b", vec_json(rhs)}};
        for (Index r = 0; r < n; ++r) out.resolved()["generated"]["A"].push_back(vec_json(A.row(r).transpose()));
    }
    const FunctionFamily F = parse_input("A", [&] { return linear_system(A, rhs); });
    NewtonConfig cfg = newton_settings(c, in, {{"T", 2}, {"eps", 1e-10}});
    out.resolved()["newton"] = newton_json(cfg);
    out.resolved()["x0"] = vec_json(x0);

    const SolveReport r = solve(F, x0, cfg);
    spdlog::info("linear: n = {}, residual {:.3e}", F.n(), r.residual);
    out.report("linear.json", {{"report", to_json(r)}}, r.total_cost);
    out.csv("linear_iterates.csv", [&](std::ostream& os) { write_iterates_csv(os, trace_of(r)); });
    if (r.halted) {
        out.report("error.json", {{"module", "newton_solver"}, {"error", r.message}}, r.total_cost);
        return kExitNumericalError;
    }
    return 0;
}

int run_circulant(const ExperimentConfig& c, Artifacts& out) {
    const json& spec = c.input.contains("circulant") ? c.input.at("circulant") : c.input;
    const CirculantSpec s = parse_input("circulant", [&] { return circulant_from_json(spec); });
    const CVector lambda = circulant_eigenvalues(s);
    const BlockEncoding u = circulant_encode(s);
    json eig = json::array();
    for (Index k = 0; k < lambda.size(); ++k) eig.push_back({lambda(k).real(), lambda(k).imag()});
    out.report("circulant.json",
               {{"n", s.n()}, {"eigenvalues", eig}, {"alpha", u.alpha}, {"eps", u.eps}, {"ancillas", u.ancillas}},
               u.cost);
    out.csv("circulant_eigenvalues.csv", [&](std::ostream& os) {
        os << "k,re,im\n" << std::setprecision(17);
        for (Index k = 0; k < lambda.size(); ++k) os << k << ',' << lambda(k).real() << ',' << lambda(k).imag() << '\n';
    });
    return 0;
}

int run_poisson(const ExperimentConfig& c, Artifacts& out) {
    const json& in = c.input;
    const auto order = field<int>(in, "order", 1, "input");
    RVector g;
    if (in.contains("rhs")) {
        g = parse_input("rhs", [&] { return to_vector(in.at("rhs")); });
    } else {
        const auto n = field<Index>(in, "n", 64, "input");
        const auto mode = field<int>(in, "mode", 1, "input");
        g.resize(n);
        for (Index i = 0; i < n; ++i) g(i) = std::sin(2.0 * std::numbers::pi * mode * double(i) / double(n));
    }
    const double dx = field<double>(in, "dx", 1.0 / double(g.size()), "input");
    const double eps = eps_or(c, in, 1e-8);
    out.resolved()["order"] = order;
    out.resolved()["dx"] = dx;
    out.resolved()["eps"] = eps;
    out.resolved()["rhs"] = vec_json(g);

    const PoissonResult r = poisson_periodic_solve(g, dx, order, eps);
    spdlog::info("poisson: n = {}, kappa {:.3e}", r.report.n, r.report.kappa);
    out.report("poisson.json", {{"report", to_json(r.report)}, {"u", vec_json(r.u)}}, r.report.cost);
    out.csv("poisson.csv", [&](std::ostream& os) { write_poisson_csv(os, {r.report}); });
    out.csv("poisson_solution.csv", [&](std::ostream& os) {
        os << "i,u\n" << std::setprecision(17);
        for (Index i = 0; i < r.u.size(); ++i) os << i << ',' << r.u(i) << '\n';
    });
    return 0;
}

int run_masses(const ExperimentConfig& c, Artifacts& out) {
    const json& in = c.input;
    const MassChainSpec s = parse_input("chain", [&] { return chain_from_json(in.at("chain")); });
    const RVector x0 = in.contains("x0") ? parse_input("x0", [&] { return to_vector(in.at("x0")); })
                                        : default_initial_state(s.n(), split_seed(c.seed, 0));
    const long shots = field<long>(in, "shots", 0, "input");
    NewtonConfig cfg =
        newton_settings(c, in, {{"strategy", "GeneralDiagF"}, {"pseudo_inverse", true}, {"eps", 1e-8}, {"T", 6}});
    out.resolved()["newton"] = newton_json(cfg);
    out.resolved()["x0"] = vec_json(x0);
    out.resolved()["shots"] = shots;

    const SolveReport r = solve(build_equilibrium_system(s), x0, cfg);
    json body = {{"report", to_json(r)}};
    CostLedger ledger = r.total_cost;
    if (!r.halted) {
        const EnergyEstimate e = equilibrium_energy(encode_initial_state(r.x), s, shots, split_seed(c.seed, 1));
        body["energy"] = {{"value", e.value}, {"amplitudes", e.amplitudes}, {"scales", e.scales},
                          {"cost", to_json(e.cost)}, {"direct", potential_energy(s, r.x)}};
        ledger += e.cost;
    }
    out.report("masses.json", body, ledger);
    out.csv("masses_iterates.csv", [&](std::ostream& os) { write_iterates_csv(os, trace_of(r)); });
    if (r.halted) {
        out.report("error.json", {{"module", "newton_solver"}, {"error", r.message}}, r.total_cost);
        return kExitNumericalError;
    }
    return 0;
}

int run_dynamics(const ExperimentConfig& c, Artifacts& out) {
    const json& in = c.input;
    const MassChainSpec s = parse_input("chain", [&] { return chain_from_json(in.at("chain")); });
    const TimeGrid g = parse_input("grid", [&] { return grid_spec_from_json(in.at("grid")); });
    const RVector x0 = parse_input("x0", [&] { return to_vector(in.at("x0")); });
    const RVector v0 = in.contains("v0") ? parse_input("v0", [&] { return to_vector(in.at("v0")); })
                                        : RVector(RVector::Zero(s.n()));
    const int iterations = field<int>(in, "newton_iterations", 20, "input");
    const RMatrix traj = solve_dynamics(s, g, x0, v0, iterations);
    out.report("dynamics.json",
               {{"steps", g.N()}, {"final", vec_json(traj.bottomRows(1).transpose())}, {"solver", "classical_newton"}},
               CostLedger{});
    out.csv("dynamics_trajectory.csv", [&](std::ostream& os) { write_trajectory_csv(os, traj, g.step); });
    return 0;
}

int run_lyapunov(const ExperimentConfig& c, Artifacts& out) {
    const json& in = c.input;
    FirstOrderSystem sys;
    if (in.contains("chain"))
        sys.G = parse_input("chain", [&] { return first_order_chain(chain_from_json(in.at("chain"))); });
    else
        sys.G = parse_input("system", [&] { return family_from_json(in.at("system")); });
    const RVector x0 = parse_input("x0", [&] { return to_vector(in.at("x0")); });
    const RVector xb = parse_input("x0_bar", [&] { return to_vector(in.at("x0_bar")); });
    const double step = field<double>(in, "step", 1e-2, "input");
    LyapunovConfig lc = parse_input("lyapunov", [&] { return lyapunov_config_from_json(in.value("lyapunov", json::object())); });
    if (!in.contains("lyapunov") || !in.at("lyapunov").contains("seed")) lc.seed = split_seed(c.seed, 0);
    TrajectoryOptions opt;
    const auto solver = field<std::string>(in, "solver", "classical", "input");
    if (solver == "quantum") opt.solver = TrajectorySolver::Quantum;
    else if (solver != "classical") throw ConfigError("input.solver: expected 'classical' or 'quantum'");
    opt.newton = newton_settings(c, in, {{"T", 4}, {"eps", 1e-10}});
    out.resolved()["step"] = step;
    out.resolved()["solver"] = solver;
    out.resolved()["lyapunov"] = {{"interval_steps", lc.interval_steps}, {"intervals", lc.intervals},
                                  {"renormalize", lc.renormalize},       {"shots", lc.shots},
                                  {"seed", lc.seed}};
    if (opt.solver == TrajectorySolver::Quantum) out.resolved()["newton"] = newton_json(opt.newton);

    const LyapunovReport r = lyapunov_estimate(sys, x0, xb, step, lc, opt);
    spdlog::info("lyapunov: lambda = {:.6f} over {} intervals", r.lambda, r.completed_intervals);
    out.report("lyapunov.json", {{"report", to_json(r)}}, CostLedger{});
    out.csv("lyapunov_separations.csv", [&](std::ostream& os) {
        os << "k,d\n" << std::setprecision(17);
        for (std::size_t k = 0; k < r.d.size(); ++k) os << k + 1 << ',' << r.d[k] << '\n';
    });
    if (r.diverged) {
        out.report("error.json", {{"module", "physics_apps"}, {"error", "estimate diverged: a trajectory solve halted or a separation readout was not positive"}}, CostLedger{});
        return kExitNumericalError;
    }
    return 0;
}

int run_scaling(const ExperimentConfig& c, Artifacts& out) {
    if (c.suite.empty()) throw ConfigError("scaling: no suite given");
    const auto suites = registered_suites();
    if (std::find(suites.begin(), suites.end(), c.suite) == suites.end())
        throw ConfigError("scaling: unregistered suite '" + c.suite + "'");
    const auto sizes = c.sizes.empty() ? default_sizes(c.suite) : c.sizes;
    const double eps = c.eps ? *c.eps : (c.suite == "dissect-logn" ? kDefaultDissectEps : 1e-6);
    out.resolved()["sizes"] = sizes;
    out.resolved()["eps"] = eps;

    const ScalingResult r = scaling_suite(c.suite, sizes, c.repetitions, c.seed, eps);
    spdlog::info("scaling {}: fit {} with R^2 = {:.6f}", r.suite, r.fit.form, r.fit.r_squared);
    json rows = json::array();
    for (const auto& row : r.rows) rows.push_back({{"n", row.n}, {"repetition", row.repetition}, {"cost", row.cost}});
    json body = {{"suite", r.suite},
                 {"metric", r.metric},
                 {"rows", rows},
                 {"fit",
                  {{"form", r.fit.form},
                   {"coefficients", r.fit.coefficients},
                   {"r_squared", r.fit.r_squared},
                   {"max_residual", r.fit.max_residual}}},
                 {"summary", r.summary}};
    out.report("scaling_" + r.suite + ".json", body, CostLedger{});
    out.csv("scaling_" + r.suite + ".csv", [&](std::ostream& os) { write_scaling_csv(os, r); });
    return 0;
}

std::string utc_timestamp() {
    const auto now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    std::tm tm{};
    gmtime_r(&now, &tm);
    std::ostringstream os;
    os << std::put_time(&tm, "%Y-%m-%dT%H:%M:%SZ");
    return os.str();
}

void write_meta(const ExperimentConfig& c, const RunResult& r) {
    json files = json::array();
    for (const auto& p : r.artifacts) files.push_back(p.filename().string());
    const json meta = {{"timestamp", utc_timestamp()},
                       {"command", to_string(c.command)},
                       {"out", c.out_dir.string()},
                       {"status", r.status},
                       {"message", r.message},
                       {"artifacts", files}};
    fs::create_directories(c.out_dir);
    std::ofstream(c.out_dir / "meta.json") << meta.dump(2) << '\n';
}

}  // namespace

std::string to_string(Command c) {
    for (const auto& [k, name] : kCommands)
        if (k == c) return name;
    return "unknown";
}

Command command_from_string(const std::string& s) {
    for (const auto& [k, name] : kCommands)
        if (name == s) return k;
    throw ConfigError("unknown command '" + s + "'");
}

json ExperimentConfig::to_json() const {
    json j = {{"command", qroot::to_string(command)}, {"seed", seed},   {"input", input},
              {"suite", suite},                       {"sizes", sizes}, {"repetitions", repetitions}};
    j["eps"] = eps ? json(*eps) : json(nullptr);
    return j;
}

json parse_json_text(const std::string& text, const std::string& origin) {
    if (text.find_first_not_of(" \t\r\n") == std::string::npos) throw ConfigError(origin + ": empty document");
    try {
        return json::parse(text);
    } catch (const json::parse_error& e) {
        const auto upto = std::min<std::size_t>(e.byte > 0 ? e.byte - 1 : 0, text.size());
        const auto line = 1 + std::count(text.begin(), text.begin() + static_cast<std::ptrdiff_t>(upto), '\n');
        const auto nl = text.rfind('\n', upto > 0 ? upto - 1 : 0);
        const auto col = nl == std::string::npos || upto == 0 ? upto + 1 : upto - nl;
        throw ConfigError(origin + ":" + std::to_string(line) + ":" + std::to_string(col) + ": " + e.what());
    }
}

json load_json_file(const fs::path& path) {
    if (!fs::exists(path)) throw ConfigError(path.string() + ": file not found");
    return parse_json_text(read_file(path), path.string());
}

ExperimentConfig config_from_json(const json& j, const fs::path& base_dir) {
    if (!j.is_object()) throw ConfigError("config: top level must be an object");
    const std::string origin = "config";
    ExperimentConfig c;
    c.command = command_from_string(field<std::string>(j, "command", "", origin));
    c.seed = field<std::uint64_t>(j, "seed", c.seed, origin);
    if (j.contains("eps")) c.eps = field<double>(j, "eps", 0.0, origin);
    c.out_dir = field<std::string>(j, "out", c.out_dir.string(), origin);
    c.suite = field<std::string>(j, "suite", "", origin);
    c.sizes = field<std::vector<long>>(j, "sizes", {}, origin);
    c.repetitions = field<int>(j, "repetitions", 1, origin);
    if (c.repetitions < 1) throw ConfigError("config: field 'repetitions' must be positive");
    if (c.eps && !(*c.eps > 0.0)) throw ConfigError("config: field 'eps' must be positive");
    if (j.contains("input_path")) {
        fs::path p = field<std::string>(j, "input_path", "", origin);
        if (p.is_relative()) p = base_dir / p;
        c.input = resolve_paths(load_json_file(p), p.parent_path());
    } else if (j.contains("input")) {
        c.input = resolve_paths(j.at("input"), base_dir);
    }
    if (!c.input.is_object()) throw ConfigError("config: field 'input' must be an object");
    return c;
}

std::uint64_t split_seed(std::uint64_t seed, std::uint64_t task) {
    // splitmix64 on the (seed, task) pair
    std::uint64_t z = seed + 0x9e3779b97f4a7c15ULL * (task + 1);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

FunctionFamily random_linear_system(Index n, std::uint64_t seed, RVector* root) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    const RMatrix A = 0.5 * RMatrix::Identity(n, n) +
                      RMatrix::NullaryExpr(n, n, [&] { return 0.4 * u(rng) / std::sqrt(double(n)); });
    const RVector x = RVector::NullaryExpr(n, [&] { return 0.3 * u(rng); });
    if (root) *root = x;
    return linear_system(A, A * x);
}

FunctionFamily random_shared_quadratic(Index n, std::uint64_t seed, RVector* root, RVector* start) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    const RVector x = RVector::NullaryExpr(n, [&] { return 0.3 * u(rng); });
    const RMatrix a1 = 0.5 * RMatrix::Identity(n, n) +
                       RMatrix::NullaryExpr(n, n, [&] { return 0.05 * u(rng) / std::sqrt(double(n)); });
    const RMatrix a2 = RMatrix::NullaryExpr(n, n, [&] { return 0.1 * u(rng) / double(n); });
    const RVector x0 = x + RVector::NullaryExpr(n, [&] { return 0.05 * u(rng); });
    if (root) *root = x;
    if (start) *start = x0;
    return sum_of_powers({a1, a2}, -(a1 * x + a2 * x.array().square().matrix()), true);
}

std::vector<std::string> registered_suites() {
    return {"dissect-logn", "newton", "circulant-depth", "laplacian-kappa", "projector-constant"};
}

std::vector<long> default_sizes(const std::string& suite) {
    if (suite == "dissect-logn") return {16, 32, 64, 128, 256, 512, 1024, 2048, 4096};
    if (suite == "newton") return {4, 8, 16, 32};
    if (suite == "circulant-depth") return {4, 8, 16, 32, 64, 128, 256, 512, 1024};
    if (suite == "laplacian-kappa") return {16, 32, 64};
    if (suite == "projector-constant") return {4, 8, 16, 32, 64, 128};
    throw ConfigError("scaling: unregistered suite '" + suite + "'");
}

ScalingResult scaling_suite(const std::string& name, const std::vector<long>& sizes, int repetitions,
                            std::uint64_t seed, double eps) {
    const auto suites = registered_suites();
    if (std::find(suites.begin(), suites.end(), name) == suites.end())
        throw ConfigError("scaling: unregistered suite '" + name + "'");
    if (sizes.empty()) throw ConfigError("scaling: empty size list");
    ScalingResult out;
    out.suite = name;
    out.summary = json::object();
    std::vector<double> xs, ys;
    auto add = [&](long n, int rep, double cost) {
        out.rows.push_back({n, rep, cost});
        xs.push_back(double(n));
        ys.push_back(cost);
    };
    std::uint64_t task = 0;

    if (name == "dissect-logn") {
        out.metric = "modeled_depth";
        MultivariatePolynomial f;
        f.terms = {{-0.35, {1}}, {0.2, {2}}, {1.0, {3}}};
        json classical = json::array();
        for (long n : sizes) {
            const SampleGrid grid = SampleGrid::uniform(-0.5, 0.5, n);
            for (int rep = 0; rep < repetitions; ++rep)
                add(n, rep, dissect(grid, f, eps, kDefaultZeroTol, split_seed(seed, task++)).cost.modeled_depth);
            classical.push_back({{"n", n}, {"cost", classical_scan(grid, f).cost.modeled_depth}});
            spdlog::debug("dissect-logn: n = {} done", n);
        }
        out.fit = fit_log_quadratic(xs, ys);
        out.summary = {{"classical", classical}};
    } else if (name == "newton") {
        out.metric = "first_step_depth_ratio";
        int halted = 0;
        for (long n : sizes) {
            for (int rep = 0; rep < repetitions; ++rep) {
                RVector x0;
                const FunctionFamily F = random_shared_quadratic(n, split_seed(seed, task++), nullptr, &x0);
                NewtonConfig cfg;
                cfg.eps = eps;
                cfg.T = 1;
                const SolveReport r = solve(F, x0, cfg);
                if (r.halted) {
                    ++halted;
                    spdlog::warn("newton suite: n = {} halted: {}", n, r.message);
                    continue;
                }
                add(n, rep, step_cost_ratio(r, 0, n));
            }
            spdlog::debug("newton: n = {} done", n);
        }
        out.fit = fit_power_law(xs, ys);
        out.summary = {{"exponent", out.fit.coefficients[1]}, {"halted", halted}};
    } else if (name == "circulant-depth") {
        out.metric = "modeled_depth";
        const StencilSpec s = fd_coefficients(1);
        for (long n : sizes)
            for (int rep = 0; rep < repetitions; ++rep) add(n, rep, circulant_encode(stencil_circulant(s, n)).cost.modeled_depth);
        out.fit = fit_log(xs, ys);
    } else if (name == "laplacian-kappa") {
        out.metric = "kappa";
        std::vector<Index> ns(sizes.begin(), sizes.end());
        for (const auto& [n, kappa] : laplacian_condition_numbers(ns, 1))
            for (int rep = 0; rep < repetitions; ++rep) add(long(n), rep, kappa);
        out.fit = least_squares(xs, ys, {[](double v) { return v * v; }}, "c*n^2");
        const double c = out.fit.coefficients[0];
        double lo = 1e300, hi = 0.0;
        for (std::size_t i = 0; i < xs.size(); ++i) {
            lo = std::min(lo, ys[i] / (c * xs[i] * xs[i]));
            hi = std::max(hi, ys[i] / (c * xs[i] * xs[i]));
        }
        out.summary = {{"ratio_min", lo}, {"ratio_max", hi}, {"power_law_exponent", fit_power_law(xs, ys).coefficients[1]}};
    } else {
        out.metric = "modeled_depth";
        for (long n : sizes)
            for (int rep = 0; rep < repetitions; ++rep) add(n, rep, projector(0, 16).cost.modeled_depth);
        out.fit = fit_log(xs, ys);
    }
    if (xs.empty()) throw PreconditionError("scaling: every run in suite '" + name + "' halted");
    return out;
}

void write_scaling_csv(std::ostream& os, const ScalingResult& r) {
    os << "n,repetition," << r.metric << '\n' << std::setprecision(17);
    for (const auto& row : r.rows) os << row.n << ',' << row.repetition << ',' << row.cost << '\n';
}

RunResult run(const ExperimentConfig& config) {
    static std::once_flag logging;
    std::call_once(logging, configure_logging);
    RunResult result;
    try {
        Artifacts out(config, config.to_json());
        spdlog::info("running {} (seed {})", to_string(config.command), config.seed);
        switch (config.command) {
            case Command::Dissect: result.status = run_dissect(config, out); break;
            case Command::Newton: result.status = run_solver(config, out, false); break;
            case Command::Lm: result.status = run_solver(config, out, true); break;
            case Command::Linear: result.status = run_linear(config, out); break;
            case Command::Circulant: result.status = run_circulant(config, out); break;
            case Command::Poisson: result.status = run_poisson(config, out); break;
            case Command::Masses: result.status = run_masses(config, out); break;
            case Command::Dynamics: result.status = run_dynamics(config, out); break;
            case Command::Lyapunov: result.status = run_lyapunov(config, out); break;
            case Command::Scaling: result.status = run_scaling(config, out); break;
        }
        result.artifacts = out.files();
        if (result.status != 0) result.message = "numerical failure; see error.json";
    } catch (const ConfigError& e) {
        result.status = kExitConfigError;
        result.message = e.what();
        spdlog::error("{}", result.message);
    } catch (const PreconditionError& e) {
        result.status = kExitNumericalError;
        result.message = e.what();
        spdlog::error("{}", result.message);
        const json payload = {{"error", e.what()}, {"measured", e.measured()}, {"config", config.to_json()}};
        fs::create_directories(config.out_dir);
        std::ofstream(config.out_dir / "error.json") << payload.dump(2) << '\n';
        result.artifacts.push_back(config.out_dir / "error.json");
    } catch (const json::exception& e) {
        result.status = kExitConfigError;
        result.message = std::string("input: ") + e.what();
        spdlog::error("{}", result.message);
    } catch (const std::exception& e) {
        result.status = 1;
        result.message = e.what();
        spdlog::error("{}", result.message);
    }
    write_meta(config, result);
    return result;
}

void configure_logging() {
    const char* env = std::getenv("QROOT_LOG");
    auto level = spdlog::level::warn;
    if (env && *env) {
        level = spdlog::level::from_str(env);
        if (level == spdlog::level::off && std::string(env) != "off") {
            spdlog::set_level(spdlog::level::warn);
            spdlog::warn("QROOT_LOG: unknown level '{}', using warn", env);
            return;
        }
    }
    spdlog::set_level(level);
}

}  // namespace qroot
