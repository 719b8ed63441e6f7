#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include "spinflow/common.hpp"
#include "spinflow/grid_chart.hpp"

namespace spinflow {

/**
 * n-component spinor field sampled on a GridChart.
 *
 * Each node stores n spinors psi^c = (psi^c_1, psi^c_2) contiguously:
 * value (node, c, s) lives at node * 2n + 2c + s with s in {0, 1}.
 * Outside nodes of a disk chart always hold zeros.
 */
class SpinorField {
public:
    /// Writes the 2n values of one node given its coordinates.
    using Sampler = std::function<void(double x, double y, std::span<Complex> out)>;

    SpinorField(GridChart chart, int n, std::string tag = {});

    static SpinorField sample(const GridChart& chart, int n, const Sampler& f, std::string tag = {});

    const GridChart& chart() const noexcept { return chart_; }
    int n() const noexcept { return n_; }
    int block() const noexcept { return 2 * n_; }
    std::size_t node_count() const noexcept { return chart_.size(); }

    std::span<Complex> at(std::size_t node) noexcept {
        return {values_.data() + node * block(), static_cast<std::size_t>(block())};
    }
    std::span<const Complex> at(std::size_t node) const noexcept {
        return {values_.data() + node * block(), static_cast<std::size_t>(block())};
    }
    Complex& operator()(std::size_t node, int c, int s) noexcept {
        return values_[node * block() + 2 * c + s];
    }
    const Complex& operator()(std::size_t node, int c, int s) const noexcept {
        return values_[node * block() + 2 * c + s];
    }

    std::vector<Complex>& values() noexcept { return values_; }
    const std::vector<Complex>& values() const noexcept { return values_; }

    const std::string& tag() const noexcept { return tag_; }
    void set_tag(std::string tag) { tag_ = std::move(tag); }

    bool is_finite() const noexcept;
    /// Zeroes every Outside node.
    void clear_outside() noexcept;
    /// Same chart and component count.
    bool compatible(const SpinorField& other) const noexcept;

    SpinorField& operator+=(const SpinorField& other);
    SpinorField& operator-=(const SpinorField& other);
    SpinorField& operator*=(Complex c) noexcept;
    /// this += a * other
    SpinorField& axpy(Complex a, const SpinorField& other);

private:
    GridChart chart_;
    int n_;
    std::vector<Complex> values_;
    std::string tag_;
};

SpinorField operator+(SpinorField a, const SpinorField& b);
SpinorField operator-(SpinorField a, const SpinorField& b);
SpinorField operator*(Complex c, SpinorField a);

/// Maximum absolute difference over all stored values.
double max_abs_difference(const SpinorField& a, const SpinorField& b);

}  // namespace spinflow
