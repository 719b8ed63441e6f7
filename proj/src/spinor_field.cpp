#include "spinflow/spinor_field.hpp"

#include <algorithm>
#include <cmath>

namespace spinflow {

SpinorField::SpinorField(GridChart chart, int n, std::string tag)
    : chart_(std::move(chart)), n_(n), tag_(std::move(tag)) {
    if (n < 1) throw ConfigError("spinor field needs at least one component");
    values_.assign(chart_.size() * static_cast<std::size_t>(2 * n), Complex{});
}

SpinorField SpinorField::sample(const GridChart& chart, int n, const Sampler& f, std::string tag) {
    SpinorField out(chart, n, std::move(tag));
    for (int j = 0; j < chart.ny(); ++j) {
        for (int i = 0; i < chart.nx(); ++i) {
            const std::size_t k = chart.index(i, j);
            if (!chart.has_data(k)) continue;
            f(chart.x(i), chart.y(j), out.at(k));
        }
    }
    return out;
}

bool SpinorField::is_finite() const noexcept {
    return std::all_of(values_.begin(), values_.end(), [](const Complex& z) {
        return std::isfinite(z.real()) && std::isfinite(z.imag());
    });
}

void SpinorField::clear_outside() noexcept {
    if (chart_.domain() != DomainKind::Disk) return;
    for (std::size_t k = 0; k < chart_.size(); ++k) {
        if (!chart_.has_data(k)) std::fill_n(values_.begin() + k * block(), block(), Complex{});
    }
}

bool SpinorField::compatible(const SpinorField& other) const noexcept {
    return n_ == other.n_ && chart_ == other.chart_;
}

SpinorField& SpinorField::operator+=(const SpinorField& other) { return axpy(1.0, other); }

SpinorField& SpinorField::operator-=(const SpinorField& other) { return axpy(-1.0, other); }

SpinorField& SpinorField::operator*=(Complex c) noexcept {
    for (auto& v : values_) v *= c;
    return *this;
}

SpinorField& SpinorField::axpy(Complex a, const SpinorField& other) {
    if (!compatible(other)) throw ConfigError("spinor fields live on different charts or component counts");
    for (std::size_t k = 0; k < values_.size(); ++k) values_[k] += a * other.values_[k];
    return *this;
}

SpinorField operator+(SpinorField a, const SpinorField& b) { return a += b; }
SpinorField operator-(SpinorField a, const SpinorField& b) { return a -= b; }
SpinorField operator*(Complex c, SpinorField a) { return a *= c; }

double max_abs_difference(const SpinorField& a, const SpinorField& b) {
    if (!a.compatible(b)) throw ConfigError("spinor fields live on different charts or component counts");
    double m = 0.0;
    for (std::size_t k = 0; k < a.values().size(); ++k) m = std::max(m, std::abs(a.values()[k] - b.values()[k]));
    return m;
}

}  // namespace spinflow
