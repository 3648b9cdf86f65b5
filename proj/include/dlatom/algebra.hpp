#pragma once

// Fixed operator algebra of the four-component two-level atom: Pauli
// matrices, the Dirac alpha/beta matrices, the level-selection matrix
// beta1 = diag(1, 0, -1, 0) and the spin matrix Sigma.
//
// Matrix entries are documented 1-based (row, column) to match the usual
// printed form; storage is Eigen's 0-based indexing.

#include <Eigen/Dense>

#include <array>
#include <complex>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace dlatom {

using cplx = std::complex<double>;
using Matrix2 = Eigen::Matrix2cd;
using Matrix4 = Eigen::Matrix4cd;
using Vec3 = Eigen::Vector3d;

inline constexpr double kExactTol = 1e-12;
inline constexpr cplx kI{0.0, 1.0};

enum class Axis { x, y, z };

inline constexpr std::array<Axis, 3> kAxes{Axis::x, Axis::y, Axis::z};

inline constexpr int index_of(Axis a) { return static_cast<int>(a); }

inline constexpr std::string_view axis_name(Axis a) {
    switch (a) {
        case Axis::x: return "x";
        case Axis::y: return "y";
        case Axis::z: return "z";
    }
    return "?";
}

inline Axis parse_axis(std::string_view s) {
    if (s == "x") return Axis::x;
    if (s == "y") return Axis::y;
    if (s == "z") return Axis::z;
    throw std::invalid_argument("invalid axis name '" + std::string(s) + "'");
}

inline Matrix2 pauli(Axis a) {
    Matrix2 m = Matrix2::Zero();
    switch (a) {
        case Axis::x:
            m(0, 1) = 1.0;
            m(1, 0) = 1.0;
            break;
        case Axis::y:
            m(0, 1) = -kI;
            m(1, 0) = kI;
            break;
        case Axis::z:
            m(0, 0) = 1.0;
            m(1, 1) = -1.0;
            break;
    }
    return m;
}

/// [[0, s], [s, 0]]
inline Matrix4 off_diagonal_blocks(const Matrix2& s) {
    Matrix4 m = Matrix4::Zero();
    m.topRightCorner<2, 2>() = s;
    m.bottomLeftCorner<2, 2>() = s;
    return m;
}

/// [[s, 0], [0, s]]
inline Matrix4 diagonal_blocks(const Matrix2& s) {
    Matrix4 m = Matrix4::Zero();
    m.topLeftCorner<2, 2>() = s;
    m.bottomRightCorner<2, 2>() = s;
    return m;
}

inline Matrix4 alpha(Axis a) { return off_diagonal_blocks(pauli(a)); }

inline Matrix4 sigma_big(Axis a) { return diagonal_blocks(pauli(a)); }

inline Matrix4 beta() {
    return Eigen::Vector4cd(1.0, 1.0, -1.0, -1.0).asDiagonal();
}

inline Matrix4 beta1() {
    return Eigen::Vector4cd(1.0, 0.0, -1.0, 0.0).asDiagonal();
}

inline Matrix4 identity4() { return Matrix4::Identity(); }

inline Matrix4 anticommutator(const Matrix4& a, const Matrix4& b) { return a * b + b * a; }

inline Matrix4 commutator(const Matrix4& a, const Matrix4& b) { return a * b - b * a; }

/// beta * m * beta. Polar internal operators (alpha) change sign, axial
/// ones (Sigma) do not.
inline Matrix4 parity_conjugate(const Matrix4& m) {
    const Matrix4 b = beta();
    return b * m * b;
}

/// Dot product of a 3-vector with an operator triple, e.g. alpha . p.
template <typename MakeComponent>
Matrix4 dot(MakeComponent&& component, const Vec3& v) {
    Matrix4 m = Matrix4::Zero();
    for (Axis a : kAxes) {
        const double c = v(index_of(a));
        if (c != 0.0) m += c * component(a);
    }
    return m;
}

template <typename A, typename B>
double max_abs_diff(const Eigen::MatrixBase<A>& a, const Eigen::MatrixBase<B>& b) {
    return (a - b).cwiseAbs().maxCoeff();
}

template <typename A>
double max_abs(const Eigen::MatrixBase<A>& a) {
    return a.cwiseAbs().maxCoeff();
}

template <typename A, typename B>
bool approx_equal(const Eigen::MatrixBase<A>& a, const Eigen::MatrixBase<B>& b,
                  double tol = kExactTol) {
    return max_abs_diff(a, b) <= tol;
}

template <typename A>
double hermiticity_defect(const Eigen::MatrixBase<A>& m) {
    return (m - m.adjoint()).cwiseAbs().maxCoeff();
}

template <typename A>
bool is_hermitian(const Eigen::MatrixBase<A>& m, double tol = kExactTol) {
    return hermiticity_defect(m) <= tol;
}

struct IdentityCheck {
    std::string name;
    double deviation = 0.0;
    bool pass = false;
};

/// Every identity the operator algebra is expected to satisfy, with the
/// measured deviation. "Nonzero" rows pass when the measured max-abs entry
/// exceeds 0.5 and report 0.5 - max(|entry|) clipped at zero as deviation.
inline std::vector<IdentityCheck> algebra_identities(double tol = kExactTol) {
    std::vector<IdentityCheck> rows;
    auto equal_row = [&](std::string name, const Matrix4& lhs, const Matrix4& rhs) {
        const double dev = max_abs_diff(lhs, rhs);
        rows.push_back({std::move(name), dev, dev <= tol});
    };
    auto nonzero_row = [&](std::string name, const Matrix4& m) {
        const double mag = max_abs(m);
        rows.push_back({std::move(name), mag > 0.5 ? 0.0 : 0.5 - mag, mag > 0.5});
    };
    const Matrix4 id = identity4();
    const Matrix4 zero = Matrix4::Zero();

    for (Axis i : kAxes) {
        for (Axis j : kAxes) {
            const std::string label = "{alpha_" + std::string(axis_name(i)) + ", alpha_" +
                                      std::string(axis_name(j)) + "} = " +
                                      (i == j ? "2I" : "0");
            equal_row(label, anticommutator(alpha(i), alpha(j)), i == j ? Matrix4(2.0 * id) : zero);
        }
    }
    for (Axis i : kAxes) {
        equal_row("{alpha_" + std::string(axis_name(i)) + ", beta} = 0",
                  anticommutator(alpha(i), beta()), zero);
    }
    equal_row("beta^2 = I", beta() * beta(), id);
    for (Axis i : kAxes) {
        equal_row("Sigma_" + std::string(axis_name(i)) + "^2 = I",
                  sigma_big(i) * sigma_big(i), id);
    }

    for (Axis i : kAxes) {
        const std::string n(axis_name(i));
        equal_row("hermitian: alpha_" + n, alpha(i), alpha(i).adjoint());
        equal_row("hermitian: Sigma_" + n, sigma_big(i), sigma_big(i).adjoint());
    }
    equal_row("hermitian: beta", beta(), beta().adjoint());
    equal_row("hermitian: beta1", beta1(), beta1().adjoint());

    for (Axis i : kAxes) {
        const std::string n(axis_name(i));
        equal_row("parity: beta alpha_" + n + " beta = -alpha_" + n,
                  parity_conjugate(alpha(i)), -alpha(i));
        equal_row("parity: beta Sigma_" + n + " beta = Sigma_" + n,
                  parity_conjugate(sigma_big(i)), sigma_big(i));
    }

    equal_row("[beta, beta1] = 0", commutator(beta(), beta1()), zero);
    equal_row("[beta1, beta1] = 0", commutator(beta1(), beta1()), zero);
    for (Axis i : kAxes) {
        nonzero_row("beta1 not Dirac: [alpha_" + std::string(axis_name(i)) + ", beta1] != 0",
                    commutator(alpha(i), beta1()));
    }

    for (Axis i : kAxes) {
        const std::string n(axis_name(i));
        const Matrix2 s = pauli(i);
        Matrix4 blocks_alpha = Matrix4::Zero();
        blocks_alpha.block<2, 2>(0, 2) = s;
        blocks_alpha.block<2, 2>(2, 0) = s;
        Matrix4 blocks_sigma = Matrix4::Zero();
        blocks_sigma.block<2, 2>(0, 0) = s;
        blocks_sigma.block<2, 2>(2, 2) = s;
        equal_row("alpha_" + n + " = offdiag(sigma_" + n + ")", alpha(i), blocks_alpha);
        equal_row("Sigma_" + n + " = diag(sigma_" + n + ")", sigma_big(i), blocks_sigma);
    }
    return rows;
}

}  // namespace dlatom
