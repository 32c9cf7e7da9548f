#include "grainkin/tail.hpp"

#include <array>
#include <cmath>

namespace grainkin {

namespace {

// 8-point Gauss-Legendre on [-1, 1].
constexpr std::array<double, 8> kGaussX = {-0.9602898564975363, -0.7966664774136267, -0.5255324099163290,
                                           -0.1834346424956498, 0.1834346424956498,  0.5255324099163290,
                                           0.7966664774136267,  0.9602898564975363};
constexpr std::array<double, 8> kGaussW = {0.1012285362903763, 0.2223810344533745, 0.3137066458778873,
                                           0.3626837833783620, 0.3626837833783620, 0.3137066458778873,
                                           0.2223810344533745, 0.1012285362903763};
constexpr double kLogSpan = 40.0;
constexpr int kPanels = 80;
// At or below this exponent the far field has no finite mass.
constexpr double kMinExponent = 1.0;

}  // namespace

PowerTail fit_power_tail(const Field& f, bool right_side) {
    const std::size_t N = f.size();
    const std::size_t edge = right_side ? N - 1 : 1;
    const std::size_t mid = right_side ? N / 2 + N / 4 : N / 4;
    const double fe = f.samples[edge];
    const double fm = f.samples[mid];
    PowerTail t;
    if (fe == 0.0 || fm == 0.0 || (fe > 0.0) != (fm > 0.0)) return t;
    const double xe = std::abs(f.grid.node(edge));
    const double xm = std::abs(f.grid.node(mid));
    const double p = std::log(std::abs(fm / fe)) / std::log(xe / xm);
    if (!std::isfinite(p) || p <= kMinExponent) return t;
    t.exponent = p;
    t.amplitude = fe * std::pow(xe, p);
    t.active = true;
    return t;
}

TailNodes tail_nodes(const Field& f) {
    TailNodes nodes;
    const double h = f.grid.spacing();
    const double start = f.grid.half_width() + 0.5 * h;
    // The grid covers [-L - h/2, L - h/2]; the right tail starts one half cell early.
    const std::array<std::pair<bool, double>, 2> sides = {{{false, start}, {true, start - h}}};
    for (const auto& [right, x0] : sides) {
        const PowerTail pt = fit_power_tail(f, right);
        if (!pt.active) continue;
        const double sign = right ? 1.0 : -1.0;
        const double ds = kLogSpan / kPanels;
        for (int panel = 0; panel < kPanels; ++panel) {
            const double a = panel * ds;
            for (std::size_t q = 0; q < kGaussX.size(); ++q) {
                const double s = a + 0.5 * ds * (kGaussX[q] + 1.0);
                const double ax = x0 * std::exp(s);
                const double value = pt.amplitude * std::pow(ax, -pt.exponent);
                nodes.x.push_back(sign * ax);
                nodes.wf.push_back(0.5 * ds * kGaussW[q] * ax * value);
            }
        }
    }
    return nodes;
}

double integrate(const Field& f, const std::function<double(double)>& weight, Tail tail) {
    double s = quadrature(f, weight);
    if (tail == Tail::power_law) {
        const TailNodes t = tail_nodes(f);
        for (std::size_t i = 0; i < t.x.size(); ++i) s += weight(t.x[i]) * t.wf[i];
    }
    return s;
}

}  // namespace grainkin
