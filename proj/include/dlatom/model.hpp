#pragma once

// Physical parameters, classical drive fields and Hamiltonian assembly.
//
// All Hamiltonians carry the interaction as -mu (K . E(t)) with K = alpha
// (polar dipole coupling) or K = Sigma (axial alternative). The four-component
// forms are
//
//   full:         c (alpha . p) - mu (K . E) + beta m c^2 + beta1 hbar omega
//   transformed:  full - beta m c^2
//   exact:        U (full - beta m c^2) U^dagger,  U = exp(+i beta m c^2 t / hbar)
//
// and the two-component baseline is hbar omega_a (1 + sigma_z) / 2 - mu E sigma_axis.

#include "dlatom/algebra.hpp"
#include "dlatom/errors.hpp"

#include <algorithm>
#include <cmath>
#include <optional>
#include <string>
#include <string_view>
#include <type_traits>
#include <variant>

namespace dlatom {

struct PhysicalParams {
    double hbar = 1.0;
    double c = 1.0;
    double mass = 0.0;
    double omega = 0.0;
    double mu = 1.0;
    Vec3 momentum = Vec3::Zero();
    /// Transition halfwidth, only used by the weak-field ratio.
    std::optional<double> gamma;
    /// Level splitting of the two-component baseline. Defaults to 2 omega,
    /// the splitting of the {1,3} block of the transformed model.
    std::optional<double> omega_a;

    double rest_energy() const { return mass * c * c; }
    double baseline_omega() const { return omega_a.value_or(2.0 * omega); }
};

inline void validate(const PhysicalParams& p) {
    auto finite = [](double v) { return std::isfinite(v); };
    if (!finite(p.hbar) || p.hbar <= 0.0) throw InvalidArgument("params.hbar must be > 0");
    if (!finite(p.c) || p.c <= 0.0) throw InvalidArgument("params.c must be > 0");
    if (!finite(p.mass) || p.mass < 0.0) throw InvalidArgument("params.mass must be >= 0");
    if (!finite(p.omega) || p.omega < 0.0) throw InvalidArgument("params.omega must be >= 0");
    if (!finite(p.mu)) throw InvalidArgument("params.mu must be finite");
    if (!p.momentum.allFinite()) throw InvalidArgument("params.momentum must be finite");
    if (p.gamma && (!finite(*p.gamma) || *p.gamma <= 0.0))
        throw InvalidArgument("params.gamma must be > 0 when present");
    if (p.omega_a && (!finite(*p.omega_a) || *p.omega_a < 0.0))
        throw InvalidArgument("params.omega_a must be >= 0 when present");
}

struct ZeroField {};

struct StaticField {
    Vec3 amplitude = Vec3::Zero();
};

struct CosineField {
    Vec3 amplitude = Vec3::Zero();
    double nu = 0.0;
    double phase = 0.0;
};

struct GaussianPulse {
    Vec3 amplitude = Vec3::Zero();
    double nu = 0.0;
    double phase = 0.0;
    double center = 0.0;
    double width = 1.0;
};

using FieldModel = std::variant<ZeroField, StaticField, CosineField, GaussianPulse>;

inline void validate(const FieldModel& f) {
    std::visit(
        [](const auto& m) {
            using T = std::decay_t<decltype(m)>;
            if constexpr (!std::is_same_v<T, ZeroField>) {
                if (!m.amplitude.allFinite()) throw InvalidArgument("field.amplitude must be finite");
            }
            if constexpr (std::is_same_v<T, CosineField> || std::is_same_v<T, GaussianPulse>) {
                if (!std::isfinite(m.nu) || m.nu < 0.0) throw InvalidArgument("field.nu must be >= 0");
                if (!std::isfinite(m.phase)) throw InvalidArgument("field.phase must be finite");
            }
            if constexpr (std::is_same_v<T, GaussianPulse>) {
                if (!std::isfinite(m.center)) throw InvalidArgument("field.center must be finite");
                if (!std::isfinite(m.width) || m.width <= 0.0)
                    throw InvalidArgument("field.width must be > 0");
            }
        },
        f);
}

/// Peak polarization vector of the field (zero for ZeroField).
inline Vec3 field_amplitude(const FieldModel& f) {
    return std::visit(
        [](const auto& m) -> Vec3 {
            if constexpr (std::is_same_v<std::decay_t<decltype(m)>, ZeroField>)
                return Vec3::Zero();
            else
                return m.amplitude;
        },
        f);
}

inline Vec3 field_at(const FieldModel& f, double t) {
    return std::visit(
        [t](const auto& m) -> Vec3 {
            using T = std::decay_t<decltype(m)>;
            if constexpr (std::is_same_v<T, ZeroField>) {
                return Vec3::Zero();
            } else if constexpr (std::is_same_v<T, StaticField>) {
                return m.amplitude;
            } else if constexpr (std::is_same_v<T, CosineField>) {
                return m.amplitude * std::cos(m.nu * t + m.phase);
            } else {
                const double s = (t - m.center) / m.width;
                return m.amplitude * (std::exp(-0.5 * s * s) * std::cos(m.nu * t + m.phase));
            }
        },
        f);
}

enum class CouplingKind { AlphaE, SigmaE, None };
enum class ModelKind { Full, TransformedLiteral, TransformedExact, Baseline2 };

inline constexpr std::string_view to_string(CouplingKind k) {
    switch (k) {
        case CouplingKind::AlphaE: return "AlphaE";
        case CouplingKind::SigmaE: return "SigmaE";
        case CouplingKind::None: return "None";
    }
    return "?";
}

inline constexpr std::string_view to_string(ModelKind k) {
    switch (k) {
        case ModelKind::Full: return "Full";
        case ModelKind::TransformedLiteral: return "TransformedLiteral";
        case ModelKind::TransformedExact: return "TransformedExact";
        case ModelKind::Baseline2: return "Baseline2";
    }
    return "?";
}

inline constexpr int component_count(ModelKind k) { return k == ModelKind::Baseline2 ? 2 : 4; }

/// Dipole operator component K_axis for the chosen coupling.
inline Matrix4 coupling_operator(CouplingKind k, Axis a) {
    switch (k) {
        case CouplingKind::AlphaE: return alpha(a);
        case CouplingKind::SigmaE: return sigma_big(a);
        case CouplingKind::None: break;
    }
    throw InvalidArgument("coupling None has no dipole operator");
}

namespace detail {

inline Matrix4 transformed_unchecked(const PhysicalParams& p, CouplingKind k, const FieldModel& f,
                                     double t) {
    Matrix4 h = p.c * dot([](Axis a) { return alpha(a); }, p.momentum);
    if (k != CouplingKind::None) {
        const Vec3 e = field_at(f, t);
        h -= p.mu * dot([k](Axis a) { return coupling_operator(k, a); }, e);
    }
    h += (p.hbar * p.omega) * beta1();
    return h;
}

}  // namespace detail

inline Matrix4 hamiltonian_transformed(const PhysicalParams& p, CouplingKind k,
                                       const FieldModel& f, double t) {
    validate(p);
    return detail::transformed_unchecked(p, k, f, t);
}

inline Matrix4 hamiltonian_full(const PhysicalParams& p, CouplingKind k, const FieldModel& f,
                                double t) {
    validate(p);
    return detail::transformed_unchecked(p, k, f, t) + p.rest_energy() * beta();
}

/// Diagonal of exp(+i beta m c^2 t / hbar).
inline Eigen::Vector4cd rest_phase(const PhysicalParams& p, double t) {
    const double phi = p.rest_energy() * t / p.hbar;
    const cplx up = std::polar(1.0, phi);
    const cplx down = std::polar(1.0, -phi);
    return {up, up, down, down};
}

inline Matrix4 hamiltonian_exact_interaction(const PhysicalParams& p, CouplingKind k,
                                             const FieldModel& f, double t) {
    validate(p);
    const Matrix4 h = detail::transformed_unchecked(p, k, f, t);
    const Eigen::Vector4cd u = rest_phase(p, t);
    return u.asDiagonal() * h * u.conjugate().asDiagonal();
}

/// Four-component Hamiltonian for any non-baseline model kind.
inline Matrix4 hamiltonian(ModelKind m, const PhysicalParams& p, CouplingKind k,
                           const FieldModel& f, double t) {
    switch (m) {
        case ModelKind::Full: return hamiltonian_full(p, k, f, t);
        case ModelKind::TransformedLiteral: return hamiltonian_transformed(p, k, f, t);
        case ModelKind::TransformedExact: return hamiltonian_exact_interaction(p, k, f, t);
        case ModelKind::Baseline2: break;
    }
    throw InvalidArgument("Baseline2 is a two-component model");
}

/// Throws unless the field amplitude lies along `axis`.
inline void require_polarization(const FieldModel& f, Axis axis) {
    const Vec3 a = field_amplitude(f);
    const double scale = std::max(1.0, a.cwiseAbs().maxCoeff());
    for (Axis other : kAxes) {
        if (other != axis && std::abs(a(index_of(other))) > kExactTol * scale)
            throw InvalidArgument("field polarization is not aligned with axis " +
                                  std::string(axis_name(axis)));
    }
}

/// The kinetic p^2 / 2m term is a global phase in momentum representation
/// and is omitted.
inline Matrix2 hamiltonian_baseline2(const PhysicalParams& p, const FieldModel& f, double t,
                                     Axis polarization) {
    validate(p);
    require_polarization(f, polarization);
    Matrix2 h = Matrix2::Zero();
    h(0, 0) = p.hbar * p.baseline_omega();
    const double e = field_at(f, t)(index_of(polarization));
    h -= p.mu * e * pauli(polarization);
    return h;
}

inline constexpr int kWeakFieldSamples = 1000;

/// max over t in [t_begin, t_end] of mu |E(t)| / (hbar Gamma), sampled at
/// kWeakFieldSamples evenly spaced points including both ends. Values >= 1
/// mean the drive is strong enough to split the levels.
inline double validate_weak_field(const PhysicalParams& p, const FieldModel& f, double t_begin,
                                  double t_end) {
    validate(p);
    if (!p.gamma) throw InvalidArgument("validity ratio requires halfwidth");
    double peak = 0.0;
    for (int i = 0; i < kWeakFieldSamples; ++i) {
        const double t =
            t_begin + (t_end - t_begin) * static_cast<double>(i) / (kWeakFieldSamples - 1);
        peak = std::max(peak, field_at(f, t).norm());
    }
    return std::abs(p.mu) * peak / (p.hbar * *p.gamma);
}

inline double validate_weak_field(const PhysicalParams& p, const FieldModel& f, double horizon) {
    return validate_weak_field(p, f, 0.0, horizon);
}

}  // namespace dlatom
