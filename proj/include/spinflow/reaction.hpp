#pragma once

#include <optional>
#include <string>
#include <vector>

#include "spinflow/spinor_field.hpp"

namespace spinflow {

enum class ReactionKind { GeneralCubic, ScalarH, CurvatureCubic, ChiralUV };

enum class ChiralPreset { SU2, Nil, SL2, Custom };

std::string to_string(ReactionKind k);
std::string to_string(ChiralPreset p);
ChiralPreset chiral_preset_from_string(const std::string& s);

/// Quadratic potential in coefficient form
///   W(psi) = (h_coef H + c0) |psi|^2 + c1 |psi_1|^2 + c2 |psi_2|^2.
struct ChiralCoefficients {
    Complex h_coef{};
    Complex c0{};
    Complex c1{};
    Complex c2{};
};

/// Real scalar data on a chart, or a single constant when `chart` is empty.
struct ScalarData {
    std::optional<GridChart> chart;
    std::vector<double> values{0.0};

    static ScalarData constant(double v) { return {std::nullopt, {v}}; }
    static ScalarData field(const GridChart& c, std::vector<double> v);
    double at(std::size_t node) const noexcept { return values.size() == 1 ? values[0] : values[node]; }
    bool is_constant() const noexcept { return !chart.has_value(); }
};

/**
 * Cubic right-hand side of D psi = R(psi).
 *
 *  GeneralCubic:   R^i = H^i_{jkl} <psi^j, psi^k> psi^l, tensor stored flat
 *                  at ((i n + j) n + k) n + l, one tensor per node or one
 *                  for all nodes.
 *  ScalarH:        R = H |psi|^2 psi (n = 1).
 *  CurvatureCubic: R^i = -(1/3) R^i_{jkl} <psi^j, psi^k> psi^l with a
 *                  constant tensor carrying the curvature symmetries.
 *  ChiralUV:       R = [U(psi) Gamma_+ + V(psi) Gamma_-] psi = (V psi_1, U psi_2)
 *                  with U, V in coefficient form (n = 1).
 */
class ReactionSpec {
public:
    static ReactionSpec general_cubic(int n, std::vector<double> tensor);
    static ReactionSpec general_cubic_field(const GridChart& chart, int n, std::vector<double> tensors);
    static ReactionSpec scalar_h(ScalarData h);
    static ReactionSpec curvature_cubic(int n, std::vector<double> riemann);
    static ReactionSpec chiral_uv(ChiralPreset preset, ScalarData h);
    static ReactionSpec chiral_custom(ChiralCoefficients u, ChiralCoefficients v, ScalarData h);

    /// Constant-curvature tensor kappa (delta_ik delta_jl - delta_il delta_jk).
    static std::vector<double> constant_curvature_tensor(int n, double kappa);

    ReactionKind kind() const noexcept { return kind_; }
    ChiralPreset preset() const noexcept { return preset_; }
    int n() const noexcept { return n_; }
    /// sup of the coefficient magnitudes; ChiralUV uses
    /// max over nodes of |h_coef H + c0| + |c1| + |c2| for U and V.
    double h0() const noexcept { return h0_; }
    /// sup of |grad| of the coefficients by finite differences (0 when constant).
    double h1() const noexcept { return h1_; }

    const ChiralCoefficients& u() const noexcept { return u_; }
    const ChiralCoefficients& v() const noexcept { return v_; }
    const ScalarData& h() const noexcept { return h_; }
    /// Chart carrying per-node coefficients, if any.
    const std::optional<GridChart>& coefficient_chart() const noexcept { return chart_; }
    /// Flat tensor at a node (GeneralCubic, or the effective -R/3 for CurvatureCubic).
    const double* tensor(std::size_t node) const noexcept;

private:
    ReactionSpec() = default;
    void refresh();

    ReactionKind kind_ = ReactionKind::ScalarH;
    ChiralPreset preset_ = ChiralPreset::Custom;
    int n_ = 1;
    std::optional<GridChart> chart_;
    std::vector<double> tensors_;
    ScalarData h_;
    ChiralCoefficients u_, v_;
    double h0_ = 0.0;
    double h1_ = 0.0;
};

/// Pointwise R(psi). Throws ConfigError on component-count or chart mismatch.
SpinorField rhs_eval(const ReactionSpec& spec, const SpinorField& psi);

/// Real-linear directional derivative dR(psi)[dpsi].
SpinorField rhs_derivative(const ReactionSpec& spec, const SpinorField& psi, const SpinorField& dpsi);

}  // namespace spinflow
