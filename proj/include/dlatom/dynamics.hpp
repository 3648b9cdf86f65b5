#pragma once

// Unitary time evolution of two- and four-component states.
//
// The Schroedinger equation i hbar d/dt psi = H(t) psi is integrated on a
// fixed grid from t0 to t1; the final step is shortened so the last sample
// lands exactly on t1.

#include "dlatom/algebra.hpp"
#include "dlatom/errors.hpp"
#include "dlatom/model.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <string>
#include <variant>
#include <vector>

namespace dlatom {

template <int N>
using StateVector = Eigen::Matrix<cplx, N, 1>;
template <int N>
using Operator = Eigen::Matrix<cplx, N, N>;

/// (psi1, psi2, psi3, psi4): components 1,2 form the particle (radiant)
/// block, components 3,4 the antiparticle (absorptive) block.
using Spinor4 = StateVector<4>;
/// (c_upper, c_lower)
using State2 = StateVector<2>;

using InitialState = std::variant<Spinor4, State2>;

enum class IntegratorKind { ExpMidpoint, RK4, Magnus2 };

inline constexpr std::string_view to_string(IntegratorKind k) {
    switch (k) {
        case IntegratorKind::ExpMidpoint: return "ExpMidpoint";
        case IntegratorKind::RK4: return "RK4";
        case IntegratorKind::Magnus2: return "Magnus2";
    }
    return "?";
}

inline constexpr double kHermitianTol = 1e-10;
inline constexpr double kEigenResidualTol = 1e-10;

template <int N>
using HamiltonianFn = std::function<Operator<N>(double)>;

namespace detail {

template <int N>
void require_hermitian(const Operator<N>& h, double t) {
    const double defect = hermiticity_defect(h);
    if (!(defect <= kHermitianTol))
        throw NumericalError("non-Hermitian Hamiltonian at t=" + std::to_string(t) +
                             " (defect " + std::to_string(defect) + ")");
}

}  // namespace detail

template <int N>
struct HermitianEigen {
    Eigen::Matrix<double, N, 1> values;
    Operator<N> vectors;  // columns
};

/// Eigendecomposition of a Hermitian matrix with a residual post-check
/// max|H v - lambda v| <= 1e-10 max|H|.
template <int N>
HermitianEigen<N> hermitian_eigen(const Operator<N>& h) {
    Eigen::SelfAdjointEigenSolver<Operator<N>> solver(h);
    if (solver.info() != Eigen::Success) throw NumericalError("Hermitian eigensolver failed");
    HermitianEigen<N> out{solver.eigenvalues(), solver.eigenvectors()};
    const Operator<N> residual =
        h * out.vectors - out.vectors * out.values.template cast<cplx>().asDiagonal();
    const double scale = h.cwiseAbs().maxCoeff();
    if (residual.cwiseAbs().maxCoeff() > kEigenResidualTol * scale)
        throw NumericalError("eigendecomposition residual check failed");
    return out;
}

/// exp(-i H dt / hbar) for Hermitian H.
template <int N>
Operator<N> propagator(const Operator<N>& h, double dt, double hbar = 1.0) {
    const HermitianEigen<N> eig = hermitian_eigen<N>(h);
    StateVector<N> phases;
    for (int k = 0; k < N; ++k) phases(k) = std::polar(1.0, -eig.values(k) * dt / hbar);
    return eig.vectors * phases.asDiagonal() * eig.vectors.adjoint();
}

template <int N, typename HFn>
StateVector<N> step_exp_midpoint(HFn&& hamiltonian_at, const StateVector<N>& psi, double t,
                                 double dt, double hbar = 1.0) {
    const double tm = t + 0.5 * dt;
    const Operator<N> h = hamiltonian_at(tm);
    detail::require_hermitian<N>(h, tm);
    return propagator<N>(h, dt, hbar) * psi;
}

/// Second-order Magnus step. At this order the midpoint commutator-free
/// form is the single exponential of the midpoint Hamiltonian, so it agrees
/// with step_exp_midpoint up to round-off.
template <int N, typename HFn>
StateVector<N> step_magnus2(HFn&& hamiltonian_at, const StateVector<N>& psi, double t, double dt,
                            double hbar = 1.0) {
    const double tm = t + 0.5 * dt;
    const Operator<N> omega1 = (dt / hbar) * hamiltonian_at(tm);
    detail::require_hermitian<N>(omega1, tm);
    return propagator<N>(omega1, 1.0, 1.0) * psi;
}

template <int N, typename HFn>
StateVector<N> step_rk4(HFn&& hamiltonian_at, const StateVector<N>& psi, double t, double dt,
                        double hbar = 1.0) {
    const cplx factor = -kI / hbar;
    const Operator<N> h0 = hamiltonian_at(t);
    const Operator<N> hm = hamiltonian_at(t + 0.5 * dt);
    const Operator<N> h1 = hamiltonian_at(t + dt);
    detail::require_hermitian<N>(h0, t);
    detail::require_hermitian<N>(hm, t + 0.5 * dt);
    detail::require_hermitian<N>(h1, t + dt);
    const StateVector<N> k1 = factor * (h0 * psi);
    const StateVector<N> k2 = factor * (hm * (psi + 0.5 * dt * k1));
    const StateVector<N> k3 = factor * (hm * (psi + 0.5 * dt * k2));
    const StateVector<N> k4 = factor * (h1 * (psi + dt * k3));
    return psi + (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
}

template <int N, typename HFn>
StateVector<N> step(IntegratorKind kind, HFn&& hamiltonian_at, const StateVector<N>& psi,
                    double t, double dt, double hbar) {
    switch (kind) {
        case IntegratorKind::ExpMidpoint: return step_exp_midpoint<N>(hamiltonian_at, psi, t, dt, hbar);
        case IntegratorKind::RK4: return step_rk4<N>(hamiltonian_at, psi, t, dt, hbar);
        case IntegratorKind::Magnus2: return step_magnus2<N>(hamiltonian_at, psi, t, dt, hbar);
    }
    throw InvalidArgument("unknown integrator");
}

/// Lowest-energy basis state: psi3 for the four-component models, c_lower
/// for the baseline.
inline InitialState ground_state(ModelKind kind) {
    if (component_count(kind) == 2) return State2(0.0, 1.0);
    return Spinor4(0.0, 0.0, 1.0, 0.0);
}

inline int component_count(const InitialState& s) {
    return std::holds_alternative<Spinor4>(s) ? 4 : 2;
}

struct EvolutionProblem {
    ModelKind model_kind = ModelKind::TransformedLiteral;
    CouplingKind coupling = CouplingKind::AlphaE;
    PhysicalParams params;
    FieldModel field = ZeroField{};
    InitialState initial_state = Spinor4(0.0, 0.0, 1.0, 0.0);
    double t0 = 0.0;
    double t1 = 1.0;
    double dt = 1e-3;
    IntegratorKind integrator = IntegratorKind::ExpMidpoint;
    std::int64_t sample_stride = 1;
    /// Polarization axis of the two-component baseline.
    Axis polarization_axis = Axis::z;
};

inline void validate(const EvolutionProblem& p) {
    validate(p.params);
    validate(p.field);
    if (!std::isfinite(p.t0) || !std::isfinite(p.t1) || !(p.t1 > p.t0))
        throw InvalidArgument("t1 must be greater than t0");
    if (!std::isfinite(p.dt) || !(p.dt > 0.0)) throw InvalidArgument("dt must be > 0");
    if (p.dt > (p.t1 - p.t0)) throw InvalidArgument("dt must not exceed t1 - t0");
    if (p.sample_stride < 1) throw InvalidArgument("sample_stride must be >= 1");
    if (component_count(p.initial_state) != component_count(p.model_kind))
        throw InvalidArgument("component count mismatch");
    const bool finite = std::visit([](const auto& s) { return s.allFinite(); }, p.initial_state);
    if (!finite) throw InvalidArgument("initial_state must be finite");
    if (p.model_kind == ModelKind::Baseline2) require_polarization(p.field, p.polarization_axis);
}

/// Fixed step layout on [t0, t1]: `full_steps` steps of dt, plus one
/// shortened step when the interval is not a multiple of dt.
struct StepGrid {
    double t0 = 0.0;
    double t1 = 0.0;
    double dt = 0.0;
    std::int64_t full_steps = 0;
    bool partial = false;

    std::int64_t total_steps() const { return full_steps + (partial ? 1 : 0); }
    double time_at(std::int64_t k) const {
        if (k >= total_steps()) return t1;
        return t0 + static_cast<double>(k) * dt;
    }
};

inline StepGrid make_step_grid(double t0, double t1, double dt) {
    StepGrid g{t0, t1, dt, 0, false};
    const double ratio = (t1 - t0) / dt;
    g.full_steps = static_cast<std::int64_t>(std::floor(ratio + 1e-9));
    const double remaining = (t1 - t0) - static_cast<double>(g.full_steps) * dt;
    g.partial = remaining > 1e-9 * dt;
    return g;
}

template <int N>
struct BasicTrajectory {
    std::vector<double> times;
    std::vector<StateVector<N>> states;
    EvolutionProblem problem;
};

using Trajectory4 = BasicTrajectory<4>;
using Trajectory2 = BasicTrajectory<2>;
using Trajectory = std::variant<Trajectory4, Trajectory2>;

template <int N>
HamiltonianFn<N> make_hamiltonian(const EvolutionProblem& p) {
    if constexpr (N == 4) {
        return [kind = p.model_kind, params = p.params, coupling = p.coupling,
                field = p.field](double t) { return hamiltonian(kind, params, coupling, field, t); };
    } else {
        return [params = p.params, field = p.field, axis = p.polarization_axis](double t) {
            return hamiltonian_baseline2(params, field, t, axis);
        };
    }
}

/// Integrates a problem whose component count is known to be N.
template <int N>
BasicTrajectory<N> evolve_as(const EvolutionProblem& problem) {
    validate(problem);
    if (component_count(problem.model_kind) != N)
        throw InvalidArgument("component count mismatch");
    const HamiltonianFn<N> h = make_hamiltonian<N>(problem);
    const StepGrid grid = make_step_grid(problem.t0, problem.t1, problem.dt);
    const std::int64_t steps = grid.total_steps();
    const double hbar = problem.params.hbar;

    BasicTrajectory<N> traj;
    traj.problem = problem;
    const std::size_t expected =
        static_cast<std::size_t>((steps + problem.sample_stride - 1) / problem.sample_stride + 1);
    traj.times.reserve(expected);
    traj.states.reserve(expected);

    StateVector<N> psi = std::get<StateVector<N>>(problem.initial_state);
    traj.times.push_back(problem.t0);
    traj.states.push_back(psi);
    for (std::int64_t k = 0; k < steps; ++k) {
        const double t = grid.time_at(k);
        const double t_next = (k + 1 == steps) ? problem.t1 : grid.time_at(k + 1);
        psi = step<N>(problem.integrator, h, psi, t, t_next - t, hbar);
        if (!psi.allFinite())
            throw NumericalError("non-finite state after step " + std::to_string(k + 1) +
                                 " at t=" + std::to_string(t_next));
        if ((k + 1) % problem.sample_stride == 0 || k + 1 == steps) {
            traj.times.push_back(t_next);
            traj.states.push_back(psi);
        }
    }
    return traj;
}

inline Trajectory evolve(const EvolutionProblem& problem) {
    if (component_count(problem.model_kind) == 2) return evolve_as<2>(problem);
    return evolve_as<4>(problem);
}

enum class TransformDirection { remove_rest, restore_rest };

/// remove_rest applies exp(+i beta m c^2 t / hbar): components 1,2 gain
/// the phase e^{+i mc^2 t/hbar}, components 3,4 the phase e^{-i mc^2 t/hbar}.
/// restore_rest is the inverse.
inline Spinor4 canonical_transform(const Spinor4& psi, double t, const PhysicalParams& params,
                                   TransformDirection direction) {
    Eigen::Vector4cd u = rest_phase(params, t);
    if (direction == TransformDirection::restore_rest) u = u.conjugate();
    return u.cwiseProduct(psi);
}

inline Trajectory4 transform_trajectory(const Trajectory4& traj, const PhysicalParams& params,
                                        TransformDirection direction) {
    Trajectory4 out = traj;
    for (std::size_t i = 0; i < out.states.size(); ++i)
        out.states[i] = canonical_transform(traj.states[i], traj.times[i], params, direction);
    return out;
}

inline Trajectory4 transform_trajectory(const Trajectory& traj, const PhysicalParams& params,
                                        TransformDirection direction) {
    if (!std::holds_alternative<Trajectory4>(traj))
        throw InvalidArgument("canonical transform requires a four-component trajectory");
    return transform_trajectory(std::get<Trajectory4>(traj), params, direction);
}

enum class ModeClass { particle, antiparticle };

struct PlaneWaveMode {
    double energy = 0.0;
    Spinor4 vector = Spinor4::Zero();
    ModeClass mode_class = ModeClass::particle;
};

inline constexpr double kDegenerateEnergyTol = 1e-12;

/// Free plane-wave modes of the full Hamiltonian at fixed momentum, sorted
/// by descending energy. Each eigenvector is normalized with its largest
/// component made real and positive.
inline std::vector<PlaneWaveMode> plane_wave_modes(const PhysicalParams& params,
                                                   CouplingKind coupling = CouplingKind::None,
                                                   const FieldModel& field = ZeroField{}) {
    if (coupling != CouplingKind::None && !std::holds_alternative<ZeroField>(field))
        throw InvalidArgument("plane-wave classification requires a zero field");
    const Matrix4 h = hamiltonian_full(params, coupling, field, 0.0);
    const HermitianEigen<4> eig = hermitian_eigen<4>(h);

    std::vector<PlaneWaveMode> modes;
    for (int k = 0; k < 4; ++k) {
        const double e = eig.values(k);
        if (std::abs(e) <= kDegenerateEnergyTol) throw InvalidArgument("degenerate rest frame");
        Spinor4 v = eig.vectors.col(k).normalized();
        Eigen::Index pivot = 0;
        v.cwiseAbs().maxCoeff(&pivot);
        v *= std::conj(v(pivot)) / std::abs(v(pivot));
        modes.push_back({e, v, e > 0.0 ? ModeClass::particle : ModeClass::antiparticle});
    }
    std::sort(modes.begin(), modes.end(),
              [](const PlaneWaveMode& a, const PlaneWaveMode& b) { return a.energy > b.energy; });
    return modes;
}

/// Upper-level probability of the resonant/RWA two-level model started in
/// the lower level: Omega^2 / (Omega^2 + Delta^2) sin^2(sqrt(Omega^2 + Delta^2) t / 2).
inline double rabi_analytic(double rabi_freq, double detuning, double t) {
    const double w2 = rabi_freq * rabi_freq + detuning * detuning;
    if (w2 == 0.0) return 0.0;
    const double s = std::sin(0.5 * std::sqrt(w2) * t);
    return rabi_freq * rabi_freq / w2 * s * s;
}

}  // namespace dlatom
