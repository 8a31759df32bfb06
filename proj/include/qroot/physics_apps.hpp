#pragma once

#include "qroot/circulant_pde.hpp"
#include "qroot/newton_solver.hpp"
#include "qroot/nonlinear_system.hpp"

#include <json.hpp>

#include <cstdint>
#include <iosfwd>
#include <vector>

namespace qroot {

/// Closed ring of n masses joined by springs with force Σ_p k_p·d^p on stretch d.
struct MassChainSpec {
    RVector masses;
    RVector k;  // k(p-1) multiplies d^p

    Index n() const { return masses.size(); }
    int K() const { return static_cast<int>(k.size()); }
    void validate() const;
};

struct TimeGrid {
    double horizon = 1.0;
    double step = 0.1;
    int order = 1;  // stencil half-width

    int N() const;
    void validate() const;
};

struct LyapunovConfig {
    int interval_steps = 10;  // T_L in units of the step
    int intervals = 10;       // N_L
    bool renormalize = true;
    long shots = 0;           // 0: exact distance readout
    std::uint64_t seed = 1;
};

/// f_i = Σ_p k_p [(x_{i+1} - x_i)^p - (x_i - x_{i-1})^p] with wraparound.
FunctionFamily build_equilibrium_system(const MassChainSpec& spec);

/// Direct Σ_i Σ_p k_p/(p+1)·(x_{i+1} - x_i)^{p+1}.
double potential_energy(const MassChainSpec& spec, const RVector& x);

struct EnergyEstimate {
    double value = 0.0;
    std::vector<double> amplitudes;  // per power, before rescaling
    std::vector<double> scales;      // amplitude · scale = Σ_i d_i^{p+1}
    CostLedger cost;
};

/// Energy through the difference-circulant overlap pipeline; shots = 0 gives the exact overlap.
EnergyEstimate equilibrium_energy(const BlockEncoding& x_enc, const MassChainSpec& spec, long shots = 0,
                                  std::uint64_t seed = 1);

/// Unknowns x_i(mΔ) for m = 1..N at index (m-1)·n + i.
/// Row block 0 fixes x(Δ) by a second-order Taylor start; blocks m = 1..N-1 are the stencil
/// equations Σ_j r_j x(m+j) = (Δ²/M_i) f_i(x(m)) with out-of-range taps dropped.
FunctionFamily build_dynamics_system(const MassChainSpec& spec, const TimeGrid& grid, const RVector& x_init,
                                     const RVector& v_init);

/// Trajectory (N+1)×n including the initial row, from the classical Newton oracle.
RMatrix solve_dynamics(const MassChainSpec& spec, const TimeGrid& grid, const RVector& x_init, const RVector& v_init,
                       int newton_iterations = 20);

/// y = (x, p): x' = p/M, p' = f(x). Returns the right-hand side as a 2n-dimensional family.
FunctionFamily first_order_chain(const MassChainSpec& spec);

/// Autonomous first-order system y' = G(y).
struct FirstOrderSystem {
    FunctionFamily G;
};

enum class TrajectorySolver { Classical, Quantum };

struct TrajectoryOptions {
    TrajectorySolver solver = TrajectorySolver::Classical;
    NewtonConfig newton;      // used by the Quantum solver
    int classical_iterations = 20;
};

/// Trapezoidal steps y_{m+1} = y_m + Δ/2·(G(y_m) + G(y_{m+1})); rows are time points.
struct Trajectory {
    RMatrix y;
    bool halted = false;
    int completed_steps = 0;
};

/// F(y) = y - y_m - Δ/2·(G(y_m) + G(y)); SumOfPowers and PowerOfSums only.
FunctionFamily trapezoidal_system(const FunctionFamily& G, const RVector& y_m, double step);

Trajectory integrate(const FirstOrderSystem& sys, const RVector& y0, double step, int steps,
                     const TrajectoryOptions& opt = {});

struct LyapunovReport {
    double lambda = 0.0;
    std::vector<double> d;  // d_k, k = 1..completed
    int completed_intervals = 0;
    bool diverged = false;
};

/// λ = (1/(N_L·T_L))·Σ_k ln(d_k/d₀) with d_k read from the difference encoding applied to the uniform state.
LyapunovReport lyapunov_estimate(const FirstOrderSystem& sys, const RVector& x0, const RVector& x0_bar, double step,
                                 const LyapunovConfig& cfg, const TrajectoryOptions& opt = {});

/// ‖a - b‖ through diag encodings and a Hadamard readout.
double encoded_distance(const RVector& a, const RVector& b, long shots, std::uint64_t seed);

MassChainSpec chain_from_json(const nlohmann::json& j);
TimeGrid grid_spec_from_json(const nlohmann::json& j);
LyapunovConfig lyapunov_config_from_json(const nlohmann::json& j);
nlohmann::json to_json(const LyapunovReport& r);

/// time,x0..x{n-1}
void write_trajectory_csv(std::ostream& os, const RMatrix& traj, double step);

}  // namespace qroot
