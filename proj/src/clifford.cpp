#include "spinflow/clifford.hpp"

#include <algorithm>
#include <cmath>

namespace spinflow {

Mat2 operator*(const Mat2& a, const Mat2& b) {
    return {a[0] * b[0] + a[1] * b[2], a[0] * b[1] + a[1] * b[3],
            a[2] * b[0] + a[3] * b[2], a[2] * b[1] + a[3] * b[3]};
}

Mat2 operator+(const Mat2& a, const Mat2& b) { return {a[0] + b[0], a[1] + b[1], a[2] + b[2], a[3] + b[3]}; }

Mat2 operator-(const Mat2& a, const Mat2& b) { return {a[0] - b[0], a[1] - b[1], a[2] - b[2], a[3] - b[3]}; }

Mat2 operator*(Complex c, const Mat2& a) { return {c * a[0], c * a[1], c * a[2], c * a[3]}; }

Mat2 adjoint(const Mat2& a) {
    return {std::conj(a[0]), std::conj(a[2]), std::conj(a[1]), std::conj(a[3])};
}

Mat2 identity2() { return {1.0, 0.0, 0.0, 1.0}; }

double max_abs(const Mat2& a) {
    double m = 0.0;
    for (const auto& v : a) m = std::max(m, std::abs(v));
    return m;
}

const CliffordRep& CliffordRep::standard() {
    static const CliffordRep rep = [] {
        const Complex I{0.0, 1.0};
        CliffordRep r;
        r.sigma1 = {0.0, 1.0, -1.0, 0.0};
        r.sigma2 = {0.0, I, I, 0.0};
        r.chirality = I * (r.sigma1 * r.sigma2);
        r.proj_plus = 0.5 * (identity2() + r.chirality);
        r.proj_minus = 0.5 * (identity2() - r.chirality);
        return r;
    }();
    return rep;
}

const Mat2& CliffordRep::sigma(int alpha) const {
    if (alpha == 1) return sigma1;
    if (alpha == 2) return sigma2;
    throw ConfigError("Clifford direction must be 1 or 2");
}

Complex hermitian(std::span<const Complex> a, std::span<const Complex> b) noexcept {
    Complex s{};
    for (std::size_t k = 0; k < a.size(); ++k) s += a[k] * std::conj(b[k]);
    return s;
}

namespace {

SpinorField apply_blockwise(const Mat2& m, const SpinorField& psi) {
    SpinorField out(psi.chart(), psi.n(), psi.tag());
    const auto& in = psi.values();
    auto& o = out.values();
    for (std::size_t k = 0; k + 1 < in.size(); k += 2) apply(m, in[k], in[k + 1], o[k], o[k + 1]);
    return out;
}

}  // namespace

SpinorField clifford_multiply(int alpha, const SpinorField& psi) {
    return apply_blockwise(CliffordRep::standard().sigma(alpha), psi);
}

SpinorField chirality_project(Chirality sign, const SpinorField& psi) {
    const auto& rep = CliffordRep::standard();
    return apply_blockwise(sign == Chirality::Plus ? rep.proj_plus : rep.proj_minus, psi);
}

std::vector<double> pointwise_norm(const SpinorField& psi) {
    std::vector<double> out(psi.node_count(), 0.0);
    for (std::size_t k = 0; k < out.size(); ++k) {
        double s = 0.0;
        for (const auto& v : psi.at(k)) s += std::norm(v);
        out[k] = std::sqrt(s);
    }
    return out;
}

}  // namespace spinflow
