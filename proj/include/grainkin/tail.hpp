#pragma once

#include <functional>
#include <vector>

#include "grainkin/grid.hpp"

namespace grainkin {

/// How integrals treat mass beyond the truncated domain.
enum class Tail {
    truncate,   ///< rectangle rule on the grid only
    power_law,  ///< add a far field A|x|^{-p} fitted from samples at L/2 and L - h
};

/// Power-law fit of one side of a field: f(x) ~ amplitude * |x|^{-exponent}.
struct PowerTail {
    double amplitude = 0.0;
    double exponent = 0.0;
    bool active = false;
};

/// Quadrature nodes covering |x| > L + h/2: positions and weight * modeled value.
struct TailNodes {
    std::vector<double> x;
    std::vector<double> wf;
    bool empty() const noexcept { return x.empty(); }
};

PowerTail fit_power_tail(const Field& f, bool right_side);

/// Gauss-Legendre panels in log|x| up to |x| = L e^{40}.
TailNodes tail_nodes(const Field& f);

/// Integral of weight(x) f(x) over the grid plus, for Tail::power_law, the far field.
double integrate(const Field& f, const std::function<double(double)>& weight, Tail tail);

}  // namespace grainkin
