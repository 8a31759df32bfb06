#include "qroot/physics_apps.hpp"

#include <cmath>
#include <iomanip>
#include <ostream>
#include <random>

namespace qroot {

void MassChainSpec::validate() const {
    if (n() < 2) throw PreconditionError("chain: at least two masses required", double(n()));
    if (K() < 1) throw PreconditionError("chain: at least one spring coefficient required");
    if ((masses.array() <= 0.0).any()) throw PreconditionError("chain: masses must be positive");
}

int TimeGrid::N() const { return static_cast<int>(std::lround(horizon / step)); }

void TimeGrid::validate() const {
    if (!(step > 0.0)) throw PreconditionError("time grid: step must be positive", step);
    if (!(horizon > 0.0)) throw PreconditionError("time grid: horizon must be positive", horizon);
    if (std::abs(N() * step - horizon) > 1e-9 * horizon)
        throw PreconditionError("time grid: horizon is not a multiple of the step", horizon);
    if (order < 1) throw PreconditionError("time grid: stencil order must be positive", order);
    if (N() < 2 * order) throw PreconditionError("time grid: stencil wider than horizon", N());
}

namespace {

/// Rows select d_i = x_{i+1} - x_i (forward) or d_{i-1} = x_i - x_{i-1} (backward).
RMatrix difference_rows(Index n, bool forward) {
    RMatrix d = RMatrix::Zero(n, n);
    for (Index i = 0; i < n; ++i) {
        if (forward) {
            d(i, (i + 1) % n) += 1.0;
            d(i, i) -= 1.0;
        } else {
            d(i, i) += 1.0;
            d(i, (i + n - 1) % n) -= 1.0;
        }
    }
    return d;
}

/// Places an n×n block at (row, col) of a zero rows×cols matrix.
RMatrix embed(const RMatrix& block, Index rows, Index cols, Index row, Index col) {
    RMatrix m = RMatrix::Zero(rows, cols);
    m.block(row, col, block.rows(), block.cols()) = block;
    return m;
}

RVector chain_force(const MassChainSpec& spec, const RVector& x) {
    const Index n = spec.n();
    RVector f = RVector::Zero(n);
    for (Index i = 0; i < n; ++i) {
        const double fwd = x((i + 1) % n) - x(i), back = x(i) - x((i + n - 1) % n);
        for (int p = 1; p <= spec.K(); ++p) f(i) += spec.k(p - 1) * (std::pow(fwd, p) - std::pow(back, p));
    }
    return f;
}

}  // namespace

FunctionFamily build_equilibrium_system(const MassChainSpec& spec) {
    spec.validate();
    const Index n = spec.n();
    FunctionFamily F;
    F.kind = FamilyKind::PowerOfSums;
    F.w = RMatrix::Zero(n, 2 * spec.K());
    for (int p = 1; p <= spec.K(); ++p) {
        F.a.push_back(difference_rows(n, true));
        F.a.push_back(difference_rows(n, false));
        F.p.push_back(p);
        F.p.push_back(p);
        F.w.col(2 * (p - 1)).setConstant(spec.k(p - 1));
        F.w.col(2 * (p - 1) + 1).setConstant(-spec.k(p - 1));
    }
    F.c = RVector::Zero(n);
    F.validate();
    return F;
}

double potential_energy(const MassChainSpec& spec, const RVector& x) {
    spec.validate();
    const Index n = spec.n();
    double v = 0.0;
    for (Index i = 0; i < n; ++i) {
        const double d = x((i + 1) % n) - x(i);
        for (int p = 1; p <= spec.K(); ++p) v += spec.k(p - 1) / (p + 1) * std::pow(d, p + 1);
    }
    return v;
}

EnergyEstimate equilibrium_energy(const BlockEncoding& x_enc, const MassChainSpec& spec, long shots,
                                  std::uint64_t seed) {
    spec.validate();
    const Index n = spec.n();
    if (x_enc.rows() != n) throw PreconditionError("equilibrium_energy: encoding size differs from n");
    const int q = log2_exact(n);

    CirculantSpec diff;
    diff.c = CVector::Zero(n);
    diff.c(0) = -1.0;
    diff.c(1) += 1.0;
    const BlockEncoding D = circulant_encode(diff);
    const BlockEncoding H = hadamard_gate(q);
    const BlockEncoding dcol = product(D, product(x_enc, H));
    const BlockEncoding dd = from_column_diag(CVector(dcol.block().col(0)), dcol.cost);
    const double s = D.alpha * x_enc.alpha * std::sqrt(double(n));

    std::mt19937_64 rng(seed);
    EnergyEstimate out;
    BlockEncoding power = dd;
    for (int p = 1; p <= spec.K(); ++p) {
        power = product(power, dd);
        // ⟨u|diag(d/s)^{p+1}|u⟩ by a Hadamard test on the uniform state.
        const CVector u = CVector::Constant(n, 1.0 / std::sqrt(double(n)));
        const double exact = (u.adjoint() * power.block() * u)(0, 0).real();
        if (std::abs(exact) > 1.0 + 1e-12) throw PreconditionError("equilibrium_energy: overlap above 1", exact);
        double amp = exact;
        if (shots > 0) {
            std::binomial_distribution<long> bin(shots, std::clamp(0.5 * (1.0 + exact), 0.0, 1.0));
            amp = 2.0 * double(bin(rng)) / double(shots) - 1.0;
        }
        const double scale = double(n) * std::pow(s, p + 1);
        out.amplitudes.push_back(amp);
        out.scales.push_back(scale);
        out.value += spec.k(p - 1) / (p + 1) * amp * scale;
        out.cost += power.cost;
        out.cost.state_prep_queries += 2;
        out.cost.modeled_depth += 2 * q + 2;
    }
    return out;
}

FunctionFamily build_dynamics_system(const MassChainSpec& spec, const TimeGrid& grid, const RVector& x_init,
                                     const RVector& v_init) {
    spec.validate();
    grid.validate();
    const Index n = spec.n();
    if (x_init.size() != n || v_init.size() != n) throw PreconditionError("dynamics: initial data length differs from n");
    const int N = grid.N();
    const Index dim = n * N;
    const double dt = grid.step;
    const StencilSpec st = fd_coefficients(grid.order);
    auto at = [n](int m, Index i) { return (m - 1) * n + i; };
    const RVector inv_m = spec.masses.cwiseInverse();

    FunctionFamily F;
    F.kind = FamilyKind::PowerOfSums;
    F.c = RVector::Zero(dim);
    RMatrix lin = RMatrix::Zero(dim, dim);

    const RVector a0 = chain_force(spec, x_init).cwiseProduct(inv_m);
    for (Index i = 0; i < n; ++i) {
        lin(at(1, i), at(1, i)) = 1.0;
        F.c(at(1, i)) = -(x_init(i) + dt * v_init(i) + 0.5 * dt * dt * a0(i));
    }
    for (int m = 1; m < N; ++m)
        for (Index i = 0; i < n; ++i) {
            const Index row = at(m + 1, i);
            for (int j = -grid.order; j <= grid.order; ++j) {
                const int t = m + j;
                if (t > N) continue;
                if (t == 0) F.c(row) += st.r(j) * x_init(i);
                else if (t > 0) lin(row, at(t, i)) += st.r(j);
            }
        }

    std::vector<RMatrix> fwd_layers(static_cast<std::size_t>(spec.K()), RMatrix::Zero(dim, dim));
    std::vector<RMatrix> back_layers = fwd_layers;
    const RMatrix df = difference_rows(n, true), db = difference_rows(n, false);
    for (int m = 1; m < N; ++m) {
        const Index r0 = at(m + 1, 0), c0 = at(m, 0);
        for (int p = 1; p <= spec.K(); ++p) {
            fwd_layers[p - 1].block(r0, c0, n, n) = df;
            back_layers[p - 1].block(r0, c0, n, n) = db;
        }
    }
    // Row weights carry -(Δ²/M_i)·k_p, zero on the start block.
    RVector row_scale = RVector::Zero(dim);
    for (int m = 1; m < N; ++m)
        for (Index i = 0; i < n; ++i) row_scale(at(m + 1, i)) = dt * dt * inv_m(i);

    // The p = 1 force is linear and folds into the stencil layer.
    lin -= spec.k(0) * row_scale.asDiagonal() * (fwd_layers[0] - back_layers[0]);
    F.a.push_back(lin);
    F.p.push_back(1);
    std::vector<RVector> wcols{RVector::Ones(dim)};
    for (int p = 2; p <= spec.K(); ++p) {
        F.a.push_back(fwd_layers[p - 1]);
        F.a.push_back(back_layers[p - 1]);
        F.p.push_back(p);
        F.p.push_back(p);
        wcols.push_back(-spec.k(p - 1) * row_scale);
        wcols.push_back(spec.k(p - 1) * row_scale);
    }
    F.w.resize(dim, static_cast<Index>(wcols.size()));
    for (std::size_t l = 0; l < wcols.size(); ++l) F.w.col(static_cast<Index>(l)) = wcols[l];
    F.validate();
    return F;
}

RMatrix solve_dynamics(const MassChainSpec& spec, const TimeGrid& grid, const RVector& x_init, const RVector& v_init,
                       int newton_iterations) {
    const FunctionFamily F = build_dynamics_system(spec, grid, x_init, v_init);
    const int N = grid.N();
    const Index n = spec.n();
    RVector guess(n * N);
    for (int m = 0; m < N; ++m) guess.segment(m * n, n) = x_init;
    const int iters = spec.K() == 1 ? 1 : newton_iterations;
    const IterateTrace t = classical_newton(F, guess, iters);
    if (t.halted) throw PreconditionError("solve_dynamics: singular Jacobian", t.halt_iteration);
    RMatrix traj(N + 1, n);
    traj.row(0) = x_init.transpose();
    for (int m = 0; m < N; ++m) traj.row(m + 1) = t.iterates.back().segment(m * n, n).transpose();
    return traj;
}

FunctionFamily first_order_chain(const MassChainSpec& spec) {
    spec.validate();
    const Index n = spec.n(), dim = 2 * n;
    FunctionFamily G;
    G.kind = FamilyKind::PowerOfSums;
    G.c = RVector::Zero(dim);
    RMatrix lin = RMatrix::Zero(dim, dim);
    lin.topRightCorner(n, n) = spec.masses.cwiseInverse().asDiagonal();
    lin.block(n, 0, n, n) = spec.k(0) * (difference_rows(n, true) - difference_rows(n, false));
    G.a.push_back(lin);
    G.p.push_back(1);
    std::vector<RVector> wcols{RVector::Ones(dim)};
    RVector lower = RVector::Zero(dim);
    lower.tail(n).setOnes();
    for (int p = 2; p <= spec.K(); ++p) {
        G.a.push_back(embed(difference_rows(n, true), dim, dim, n, 0));
        G.a.push_back(embed(difference_rows(n, false), dim, dim, n, 0));
        G.p.push_back(p);
        G.p.push_back(p);
        wcols.push_back(spec.k(p - 1) * lower);
        wcols.push_back(-spec.k(p - 1) * lower);
    }
    G.w.resize(dim, static_cast<Index>(wcols.size()));
    for (std::size_t l = 0; l < wcols.size(); ++l) G.w.col(static_cast<Index>(l)) = wcols[l];
    G.validate();
    return G;
}

FunctionFamily trapezoidal_system(const FunctionFamily& G, const RVector& y_m, double step) {
    G.validate();
    const Index n = G.n();
    const double h = 0.5 * step;
    FunctionFamily F = G;
    F.c = -y_m - h * evaluate(G, y_m) - h * G.c;
    const RMatrix I = RMatrix::Identity(n, n);
    switch (G.kind) {
    case FamilyKind::SumOfPowers: {
        for (auto& a : F.a) a *= -h;
        bool placed = false;
        for (Index l = 0; l < F.layers(); ++l)
            if (F.p[l] == 1) {
                F.a[l] += I;
                placed = true;
                break;
            }
        if (!placed) {
            F.a.push_back(I);
            F.p.push_back(1);
        }
        break;
    }
    case FamilyKind::PowerOfSums:
        F.w *= -h;
        F.a.push_back(I);
        F.p.push_back(1);
        F.w.conservativeResize(n, F.w.cols() + 1);
        F.w.col(F.w.cols() - 1).setOnes();
        break;
    case FamilyKind::ProductOfAffinePowers:
        throw PreconditionError("trapezoidal_system: product families are not supported");
    }
    F.validate();
    return F;
}

Trajectory integrate(const FirstOrderSystem& sys, const RVector& y0, double step, int steps,
                     const TrajectoryOptions& opt) {
    if (steps < 0) throw PreconditionError("integrate: negative step count", steps);
    Trajectory out;
    out.y = RMatrix::Zero(steps + 1, y0.size());
    out.y.row(0) = y0.transpose();
    RVector y = y0;
    for (int m = 0; m < steps; ++m) {
        const FunctionFamily F = trapezoidal_system(sys.G, y, step);
        RVector next;
        if (opt.solver == TrajectorySolver::Classical) {
            const IterateTrace t = classical_newton(F, y, opt.classical_iterations);
            if (t.halted) {
                out.halted = true;
                break;
            }
            next = t.iterates.back();
        } else {
            const SolveReport r = solve(F, y, opt.newton);
            if (r.halted) {
                out.halted = true;
                break;
            }
            next = r.x;
        }
        if (!all_finite(next)) {
            out.halted = true;
            break;
        }
        y = next;
        out.y.row(m + 1) = y.transpose();
        ++out.completed_steps;
    }
    if (out.halted) out.y.conservativeResize(out.completed_steps + 1, Eigen::NoChange);
    return out;
}

double encoded_distance(const RVector& a, const RVector& b, long shots, std::uint64_t seed) {
    if (a.size() != b.size() || a.size() == 0) throw PreconditionError("encoded_distance: length mismatch");
    const Index n = next_power_of_two(a.size());
    RVector pa = RVector::Zero(n), pb = RVector::Zero(n);
    pa.head(a.size()) = a;
    pb.head(b.size()) = b;
    const double B = std::max({max_abs(pa), max_abs(pb), 1e-300});
    const BlockEncoding diff = lin_combo<double>({diag_oracle(pa, B), diag_oracle(pb, B)}, {+1, -1});
    const BlockEncoding col = product(diff, hadamard_gate(log2_exact(n)));
    double amp = col.block().col(0).norm();
    if (shots > 0) {
        std::mt19937_64 rng(seed);
        std::normal_distribution<double> noise(0.0, 1.0 / double(shots));
        amp = std::max(0.0, amp + noise(rng));
    }
    return amp * 2.0 * B * std::sqrt(double(n));
}

LyapunovReport lyapunov_estimate(const FirstOrderSystem& sys, const RVector& x0, const RVector& x0_bar, double step,
                                 const LyapunovConfig& cfg, const TrajectoryOptions& opt) {
    if (cfg.interval_steps < 1 || cfg.intervals < 1) throw PreconditionError("lyapunov: empty schedule");
    const double d0 = (x0 - x0_bar).norm();
    if (!(d0 > 0.0)) throw PreconditionError("lyapunov: initial separation must be positive", d0);
    LyapunovReport r;
    RVector y = x0, yb = x0_bar;
    double acc = 0.0;
    for (int k = 0; k < cfg.intervals; ++k) {
        const Trajectory a = integrate(sys, y, step, cfg.interval_steps, opt);
        const Trajectory b = integrate(sys, yb, step, cfg.interval_steps, opt);
        if (a.halted || b.halted) {
            r.diverged = true;
            break;
        }
        y = a.y.bottomRows(1).transpose();
        yb = b.y.bottomRows(1).transpose();
        const double dk = encoded_distance(y, yb, cfg.shots, cfg.seed + static_cast<std::uint64_t>(k));
        if (!(dk > 0.0) || !std::isfinite(dk)) {
            r.diverged = true;
            break;
        }
        r.d.push_back(dk);
        acc += std::log(dk / d0);
        ++r.completed_intervals;
        if (cfg.renormalize) yb = y + (d0 / dk) * (yb - y);
    }
    if (r.completed_intervals > 0) r.lambda = acc / (r.completed_intervals * cfg.interval_steps * step);
    return r;
}

MassChainSpec chain_from_json(const nlohmann::json& j) {
    MassChainSpec s;
    const auto m = j.at("masses").get<std::vector<double>>();
    const auto k = j.at("k").get<std::vector<double>>();
    s.masses = Eigen::Map<const RVector>(m.data(), static_cast<Index>(m.size()));
    s.k = Eigen::Map<const RVector>(k.data(), static_cast<Index>(k.size()));
    if (j.value("boundary", std::string("closed")) != "closed")
        throw PreconditionError("chain spec: only closed chains are supported");
    s.validate();
    return s;
}

TimeGrid grid_spec_from_json(const nlohmann::json& j) {
    TimeGrid g;
    g.horizon = j.at("horizon").get<double>();
    g.step = j.at("step").get<double>();
    g.order = j.value("order", 1);
    g.validate();
    return g;
}

LyapunovConfig lyapunov_config_from_json(const nlohmann::json& j) {
    LyapunovConfig c;
    c.interval_steps = j.value("interval_steps", c.interval_steps);
    c.intervals = j.value("intervals", c.intervals);
    c.renormalize = j.value("renormalize", c.renormalize);
    c.shots = j.value("shots", c.shots);
    c.seed = j.value("seed", c.seed);
    return c;
}

nlohmann::json to_json(const LyapunovReport& r) {
    return {{"lambda", r.lambda}, {"d", r.d}, {"completed_intervals", r.completed_intervals}, {"diverged", r.diverged}};
}

void write_trajectory_csv(std::ostream& os, const RMatrix& traj, double step) {
    os << "time";
    for (Index i = 0; i < traj.cols(); ++i) os << ",x" << i;
    os << '\n' << std::setprecision(17);
    for (Index m = 0; m < traj.rows(); ++m) {
        os << double(m) * step;
        for (Index i = 0; i < traj.cols(); ++i) os << ',' << traj(m, i);
        os << '\n';
    }
}

}  // namespace qroot
