#pragma once

#include <complex>
#include <functional>
#include <utility>
#include <vector>

#include "grainkin/grid.hpp"
#include "grainkin/tail.hpp"

namespace grainkin {

/// Samples phi(xi_m) on the nonnegative half-axis; negative frequencies are the conjugates.
struct SpectralState {
    FrequencyGrid grid;
    std::vector<std::complex<double>> values;

    explicit SpectralState(const FrequencyGrid& g) : grid(g), values(g.size()) {}
    SpectralState(const FrequencyGrid& g, std::vector<std::complex<double>> v);

    static SpectralState sample(const FrequencyGrid& g, const std::function<double(double)>& fn);

    std::size_t size() const noexcept { return values.size(); }
    std::complex<double> operator[](std::size_t m) const noexcept { return values[m]; }
    std::complex<double>& operator[](std::size_t m) noexcept { return values[m]; }
};

SpectralState operator-(const SpectralState& a, const SpectralState& b);
SpectralState operator+(const SpectralState& a, const SpectralState& b);
SpectralState operator*(double s, const SpectralState& a);

struct DecayFit {
    double rate = 0.0;       ///< sigma_hat = -slope of log(value)
    double intercept = 0.0;  ///< of log(value)
    double rms_residual = 0.0;
    double t0 = 0.0, t1 = 0.0;
};

struct KNorm {
    double value = 0.0;       ///< max over admitted nodes
    double grid_value = 0.0;  ///< same as value; kept for callers that want the raw grid maximum
    double argmax = 0.0;
    bool divergent = false;
};

/// Phi(xi) = (1 + |xi|) e^{-|xi|}.
double equilibrium_phi(double xi);

/// Degree-7 Lagrange interpolation on the half-axis (one-sided stencils at both ends); 0 beyond xi_max.
std::complex<double> interpolate(const SpectralState& s, double xi);

/// xi -> e^{-t} phi(xi e^{t/4}); beyond xi_max the tail follows phi(xi_M) Phi(a xi) / Phi(a xi_M).
SpectralState free_transport(const SpectralState& s, double t);

/// Decay constant a of the tail model, fitted from the nodes at xi_max and 0.9 xi_max (1 if the fit fails).
double tail_decay_constant(const SpectralState& s);

enum class FourierModel {
    nonlinear,   ///< d_t phi = xi/4 d_xi phi + phi(xi/2)^2 - phi
    linearized,  ///< d_t psi = xi/4 d_xi psi + 2 psi(xi/2) Phi(xi/2) - psi
};

/// Integrating-factor (Lawson) RK4 on the Duhamel form: the dilation xi -> xi e^{t/4} is exact,
/// the remaining terms (including -phi) go through the RK4 stages. Each step ends by
/// restoring phi'(0+) = 0 (phi -> phi e^{-c xi}, resp. psi -> psi - c xi Phi).
/// Stencils for transport and halving are precomputed for a fixed grid and step.
class SpectralStepper {
public:
    SpectralStepper(const FrequencyGrid& grid, double dt, FourierModel model);

    SpectralState step(const SpectralState& s) const;
    double dt() const noexcept { return dt_; }
    const FrequencyGrid& grid() const noexcept { return grid_; }

private:
    struct Stencil {
        long start = 0;  ///< -1 marks a point beyond xi_max
        double w[8] = {};
        double xi = 0.0;
    };

    using Values = std::vector<std::complex<double>>;

    Values transport_half(const Values& u, double a_tail) const;
    Values forcing(const Values& u) const;

    FrequencyGrid grid_;
    double dt_;
    FourierModel model_;
    std::vector<Stencil> transport_;
    std::vector<Stencil> halving_;  ///< odd nodes only are used
    std::vector<double> phi_half_;  ///< Phi(xi_m / 2)
};

/// One step of size dt in (0, 0.5]; throws std::invalid_argument otherwise.
SpectralState step_nonlinear(const SpectralState& s, double dt);
SpectralState step_linearized(const SpectralState& s, double dt);

/// -phi''(0+), from the degree-7 one-sided fit through the first eight nodes.
double curvature_energy(const SpectralState& s);
/// phi'(0+) from the same fit; zero for data with zero momentum and finite energy.
double origin_slope(const SpectralState& s);

/// max over admitted nodes of |psi(xi)| / xi^k. When the maximizer is the first admitted node the
/// ratio is probed at xi_1/2 and xi_1/4 through the interpolant; steady growth sets `divergent`.
/// The flag is advisory: once structure contracts below the grid spacing it can fire spuriously.
KNorm fourier_norm_k(const SpectralState& s, double k);

/// (integral over the real line of |psi|^p / |xi|^{kp})^{1/p}; requires 1/p < k < 3 + 1/p.
double fourier_norm_kp(const SpectralState& s, double k, double p);

/// 1 - k/4 - 2^{1-k}.
double sigma_k(double k);
/// 1 - k/4 + 1/(4p) - 2^{1 + 1/p - k}.
double sigma_kp(double k, double p);

/// Least-squares line through (t, log value); needs at least 5 points, positive values.
DecayFit fit_decay_rate(const std::vector<std::pair<double, double>>& series);

/// max over nodes of |phi(xi)| / Phi(a xi).
double barrier_ratio(const SpectralState& s, double a);

/// f^(xi) = integral f(x) e^{-i x xi} dx by the rectangle rule on the velocity grid;
/// Tail::power_law adds the transform of the fitted far field.
SpectralState to_spectral(const Field& f, const FrequencyGrid& grid, Tail tail = Tail::truncate);
/// Inverse transform of Hermitian data by the trapezoidal rule; real part.
Field to_physical(const SpectralState& s, const VelocityGrid& grid);

}  // namespace grainkin
