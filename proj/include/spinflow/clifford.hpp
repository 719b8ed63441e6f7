#pragma once

#include <array>
#include <span>
#include <vector>

#include "spinflow/common.hpp"
#include "spinflow/spinor_field.hpp"

namespace spinflow {

/// Row-major 2x2 complex matrix.
using Mat2 = std::array<Complex, 4>;

Mat2 operator*(const Mat2& a, const Mat2& b);
Mat2 operator+(const Mat2& a, const Mat2& b);
Mat2 operator-(const Mat2& a, const Mat2& b);
Mat2 operator*(Complex c, const Mat2& a);
Mat2 adjoint(const Mat2& a);
Mat2 identity2();
/// Largest absolute entry.
double max_abs(const Mat2& a);

inline void apply(const Mat2& m, Complex a, Complex b, Complex& out_a, Complex& out_b) noexcept {
    out_a = m[0] * a + m[1] * b;
    out_b = m[2] * a + m[3] * b;
}

/**
 * Fixed representation of Clifford multiplication on the plane:
 *   sigma1 = [[0, 1], [-1, 0]],  sigma2 = [[0, i], [i, 0]],
 * chirality Gamma = i sigma1 sigma2 = diag(-1, 1), Gamma_(+/-) = (Id +/- Gamma) / 2.
 */
struct CliffordRep {
    Mat2 sigma1;
    Mat2 sigma2;
    Mat2 chirality;
    Mat2 proj_plus;
    Mat2 proj_minus;

    static const CliffordRep& standard();
    const Mat2& sigma(int alpha) const;
};

enum class Chirality { Plus, Minus };

/// Hermitian product <a, b> = sum_s a_s conj(b_s); conjugate-linear in b.
Complex hermitian(std::span<const Complex> a, std::span<const Complex> b) noexcept;

SpinorField clifford_multiply(int alpha, const SpinorField& psi);
SpinorField chirality_project(Chirality sign, const SpinorField& psi);

/// |psi| = (sum_c <psi^c, psi^c>)^(1/2) per node (zero on Outside nodes).
std::vector<double> pointwise_norm(const SpinorField& psi);

}  // namespace spinflow
