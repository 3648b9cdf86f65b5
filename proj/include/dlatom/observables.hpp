#pragma once

#include "dlatom/algebra.hpp"
#include "dlatom/dynamics.hpp"
#include "dlatom/errors.hpp"
#include "dlatom/model.hpp"

#include <fftw3.h>

#include <algorithm>
#include <cmath>
#include <memory>
#include <mutex>
#include <numbers>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

namespace dlatom {

template <int N>
double norm(const StateVector<N>& psi) {
    return psi.norm();
}

template <int N>
Eigen::Matrix<double, N, 1> populations(const StateVector<N>& psi) {
    return psi.cwiseAbs2();
}

struct BlockPopulations {
    double radiant = 0.0;     // |psi1|^2 + |psi2|^2
    double absorptive = 0.0;  // |psi3|^2 + |psi4|^2
};

inline BlockPopulations block_populations(const Spinor4& psi) {
    const Eigen::Vector4d p = populations<4>(psi);
    return {p(0) + p(1), p(2) + p(3)};
}

inline constexpr double kImaginaryResidueTol = 1e-12;

namespace detail {

template <int N, typename MakeOperator>
Vec3 expectation_triple(const StateVector<N>& psi, MakeOperator&& op, double mu) {
    Vec3 d;
    for (Axis a : kAxes) {
        const cplx v = psi.dot(op(a) * psi);  // <psi| K_a |psi>
        if (std::abs(v.imag()) > kImaginaryResidueTol * std::max(1.0, psi.squaredNorm()))
            throw NumericalError("dipole expectation has an imaginary residue");
        d(index_of(a)) = mu * v.real();
    }
    return d;
}

}  // namespace detail

/// mu <psi| K |psi> with K = alpha (AlphaE) or Sigma (SigmaE).
inline Vec3 dipole_expectation(const Spinor4& psi, CouplingKind coupling, double mu) {
    if (coupling == CouplingKind::None)
        throw InvalidArgument("dipole expectation requires a coupling");
    return detail::expectation_triple<4>(
        psi, [coupling](Axis a) { return coupling_operator(coupling, a); }, mu);
}

/// mu <c| sigma |c> for the two-component baseline.
inline Vec3 dipole_expectation(const State2& c, double mu) {
    return detail::expectation_triple<2>(c, [](Axis a) { return pauli(a); }, mu);
}

/// One CSV row. Four-component rows use pops[0..3]; two-component rows use
/// pops[0] (upper) and pops[1] (lower) and leave the block fields at zero.
struct ObservableRecord {
    double t = 0.0;
    double norm = 0.0;
    int components = 4;
    std::array<double, 4> pops{};
    double pop_radiant = 0.0;
    double pop_absorptive = 0.0;
    Vec3 dipole = Vec3::Zero();
};

/// Rows report the dipole of the run's coupling; with coupling None the
/// alpha dipole is used.
inline ObservableRecord observe(double t, const Spinor4& psi, CouplingKind coupling, double mu) {
    ObservableRecord r;
    r.t = t;
    r.norm = norm<4>(psi);
    r.components = 4;
    const Eigen::Vector4d p = populations<4>(psi);
    for (int i = 0; i < 4; ++i) r.pops[static_cast<std::size_t>(i)] = p(i);
    const BlockPopulations b = block_populations(psi);
    r.pop_radiant = b.radiant;
    r.pop_absorptive = b.absorptive;
    r.dipole = dipole_expectation(
        psi, coupling == CouplingKind::None ? CouplingKind::AlphaE : coupling, mu);
    return r;
}

inline ObservableRecord observe(double t, const State2& c, double mu) {
    ObservableRecord r;
    r.t = t;
    r.norm = norm<2>(c);
    r.components = 2;
    const Eigen::Vector2d p = populations<2>(c);
    r.pops = {p(0), p(1), 0.0, 0.0};
    r.dipole = dipole_expectation(c, mu);
    return r;
}

inline std::vector<ObservableRecord> observe(const Trajectory& traj) {
    std::vector<ObservableRecord> rows;
    std::visit(
        [&rows](const auto& tr) {
            rows.reserve(tr.times.size());
            const double mu = tr.problem.params.mu;
            for (std::size_t i = 0; i < tr.times.size(); ++i) {
                if constexpr (std::is_same_v<std::decay_t<decltype(tr)>, Trajectory4>)
                    rows.push_back(observe(tr.times[i], tr.states[i], tr.problem.coupling, mu));
                else
                    rows.push_back(observe(tr.times[i], tr.states[i], mu));
            }
        },
        traj);
    return rows;
}

enum class Signal { pop1, pop2, pop3, pop4, radiant, absorptive, upper, lower };

inline constexpr std::string_view to_string(Signal s) {
    switch (s) {
        case Signal::pop1: return "pop1";
        case Signal::pop2: return "pop2";
        case Signal::pop3: return "pop3";
        case Signal::pop4: return "pop4";
        case Signal::radiant: return "pop_radiant";
        case Signal::absorptive: return "pop_absorptive";
        case Signal::upper: return "pop_upper";
        case Signal::lower: return "pop_lower";
    }
    return "?";
}

inline std::vector<double> signal_series(const Trajectory& traj, Signal s) {
    std::vector<double> out;
    std::visit(
        [&](const auto& tr) {
            constexpr bool four = std::is_same_v<std::decay_t<decltype(tr)>, Trajectory4>;
            out.reserve(tr.states.size());
            for (const auto& psi : tr.states) {
                if constexpr (four) {
                    switch (s) {
                        case Signal::pop1: out.push_back(std::norm(psi(0))); break;
                        case Signal::pop2: out.push_back(std::norm(psi(1))); break;
                        case Signal::pop3: out.push_back(std::norm(psi(2))); break;
                        case Signal::pop4: out.push_back(std::norm(psi(3))); break;
                        case Signal::radiant: out.push_back(block_populations(psi).radiant); break;
                        case Signal::absorptive:
                            out.push_back(block_populations(psi).absorptive);
                            break;
                        default: throw InvalidArgument("signal not defined for four components");
                    }
                } else {
                    switch (s) {
                        case Signal::upper: out.push_back(std::norm(psi(0))); break;
                        case Signal::lower: out.push_back(std::norm(psi(1))); break;
                        default: throw InvalidArgument("signal not defined for two components");
                    }
                }
            }
        },
        traj);
    return out;
}

inline const std::vector<double>& times_of(const Trajectory& traj) {
    return std::visit([](const auto& tr) -> const std::vector<double>& { return tr.times; }, traj);
}

/// The population signal with the largest peak-to-peak swing.
inline Signal dominant_signal(const Trajectory& traj) {
    const bool four = std::holds_alternative<Trajectory4>(traj);
    const std::vector<Signal> candidates =
        four ? std::vector<Signal>{Signal::pop1, Signal::pop2, Signal::pop3, Signal::pop4}
             : std::vector<Signal>{Signal::upper, Signal::lower};
    Signal best = candidates.front();
    double best_swing = -1.0;
    for (Signal s : candidates) {
        const std::vector<double> x = signal_series(traj, s);
        const auto [lo, hi] = std::minmax_element(x.begin(), x.end());
        const double swing = *hi - *lo;
        if (swing > best_swing) {
            best_swing = swing;
            best = s;
        }
    }
    return best;
}

inline constexpr std::size_t kMinSpectralSamples = 16;
inline constexpr int kZeroPadFactor = 4;
inline constexpr double kPeakToMedian = 3.0;
/// Signals whose peak-to-peak swing is below this are treated as constant.
inline constexpr double kMinSwing = 1e-9;

namespace detail {

// FFTW's planner is not re-entrant.
inline std::mutex& fftw_planner_mutex() {
    static std::mutex m;
    return m;
}

struct FftwPlanDeleter {
    void operator()(fftw_plan_s* p) const {
        std::lock_guard lock(fftw_planner_mutex());
        fftw_destroy_plan(p);
    }
};

struct FftwBufferDeleter {
    void operator()(void* p) const { fftw_free(p); }
};

/// |DFT| of a real sequence, bins 0..n/2.
inline std::vector<double> magnitude_spectrum(std::vector<double> input) {
    const int n = static_cast<int>(input.size());
    const int bins = n / 2 + 1;
    std::unique_ptr<fftw_complex, FftwBufferDeleter> out(fftw_alloc_complex(static_cast<std::size_t>(bins)));
    std::unique_ptr<fftw_plan_s, FftwPlanDeleter> plan;
    {
        std::lock_guard lock(fftw_planner_mutex());
        plan.reset(fftw_plan_dft_r2c_1d(n, input.data(), out.get(), FFTW_ESTIMATE));
    }
    if (!plan) throw NumericalError("FFTW planning failed");
    fftw_execute(plan.get());
    std::vector<double> mag(static_cast<std::size_t>(bins));
    for (int k = 0; k < bins; ++k) mag[static_cast<std::size_t>(k)] = std::hypot(out.get()[k][0], out.get()[k][1]);
    return mag;
}

}  // namespace detail

/// Dominant angular frequency of a uniformly sampled real signal.
///
/// The weighted mean is removed, a Hann window applied and the sequence
/// zero-padded 4x before the FFT; the peak bin is refined by a parabola
/// through the magnitudes of its neighbours. Raw resolution is 2 pi / span.
/// Samples after the first break in uniform spacing (e.g. a shortened final
/// step) are ignored.
inline double oscillation_frequency(std::span<const double> times, std::span<const double> signal) {
    if (times.size() != signal.size()) throw InvalidArgument("times and signal differ in length");
    if (times.size() < 2) throw InvalidArgument("oscillation_frequency needs at least 16 samples");
    const double dt = times[1] - times[0];
    if (!(dt > 0.0)) throw InvalidArgument("sample times must be increasing");
    std::size_t n = 2;
    while (n < times.size() && std::abs((times[n] - times[n - 1]) - dt) <= 1e-6 * dt) ++n;
    if (n < kMinSpectralSamples)
        throw InvalidArgument("oscillation_frequency needs at least 16 uniformly spaced samples");

    const auto [lo, hi] = std::minmax_element(signal.begin(), signal.begin() + static_cast<std::ptrdiff_t>(n));
    if (!(*hi - *lo > kMinSwing)) throw NoOscillation();

    std::vector<double> window(n);
    double wsum = 0.0;
    double wxsum = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        window[i] = 0.5 * (1.0 - std::cos(2.0 * std::numbers::pi * static_cast<double>(i) /
                                          static_cast<double>(n - 1)));
        wsum += window[i];
        wxsum += window[i] * signal[i];
    }
    const double mean = wxsum / wsum;
    const std::size_t padded = n * kZeroPadFactor;
    std::vector<double> buffer(padded, 0.0);
    for (std::size_t i = 0; i < n; ++i) buffer[i] = window[i] * (signal[i] - mean);

    const std::vector<double> mag = detail::magnitude_spectrum(std::move(buffer));
    std::size_t peak = 1;
    for (std::size_t k = 1; k < mag.size(); ++k)
        if (mag[k] > mag[peak]) peak = k;

    std::vector<double> rest(mag.begin() + 1, mag.end());
    std::nth_element(rest.begin(), rest.begin() + static_cast<std::ptrdiff_t>(rest.size() / 2), rest.end());
    const double median = rest[rest.size() / 2];
    if (!(mag[peak] > kPeakToMedian * median)) throw NoOscillation();

    double offset = 0.0;
    if (peak > 0 && peak + 1 < mag.size()) {
        const double a = mag[peak - 1];
        const double b = mag[peak];
        const double c = mag[peak + 1];
        const double denom = a - 2.0 * b + c;
        if (denom != 0.0) offset = 0.5 * (a - c) / denom;
    }
    return 2.0 * std::numbers::pi * (static_cast<double>(peak) + offset) /
           (static_cast<double>(padded) * dt);
}

inline double oscillation_frequency(const Trajectory& traj, Signal selector) {
    const std::vector<double> x = signal_series(traj, selector);
    return oscillation_frequency(times_of(traj), x);
}

}  // namespace dlatom
