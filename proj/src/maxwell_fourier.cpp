#include "grainkin/maxwell_fourier.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

#include "grainkin/kernels.hpp"

namespace grainkin {

using cplx = std::complex<double>;

SpectralState::SpectralState(const FrequencyGrid& g, std::vector<cplx> v) : grid(g), values(std::move(v)) {
    if (values.size() != grid.size()) throw std::invalid_argument("SpectralState: value count does not match grid");
}

SpectralState SpectralState::sample(const FrequencyGrid& g, const std::function<double(double)>& fn) {
    SpectralState s(g);
    for (std::size_t m = 0; m < s.size(); ++m) s.values[m] = fn(g.node(m));
    return s;
}

namespace {

void require_same(const SpectralState& a, const SpectralState& b) {
    if (!(a.grid == b.grid)) throw std::invalid_argument("spectral states live on different grids");
}

constexpr long kWidth = 8;

// Degree-7 Lagrange weights for fractional position t on nodes 0..7.
void lagrange8(double t, double* w) {
    for (long i = 0; i < kWidth; ++i) {
        double num = 1.0, den = 1.0;
        for (long j = 0; j < kWidth; ++j) {
            if (j == i) continue;
            num *= t - static_cast<double>(j);
            den *= static_cast<double>(i - j);
        }
        w[i] = num / den;
    }
}

// Ghost nodes past xi_max, filled from the tail model so that stencils stay centered
// at the inflow end (one-sided closures there amplify grid-scale oscillations).
constexpr long kGhost = kWidth / 2;

// Stencil start and weights for fractional index p in [0, M]; one-sided at xi = 0,
// where the data is polynomial on the half-axis but not even across it.
long stencil_at(double p, double* w) {
    const long i = static_cast<long>(std::floor(p));
    const long start = std::max(i - (kWidth / 2 - 1), 0L);
    lagrange8(p - static_cast<double>(start), w);
    return start;
}

// Weights of the k-th derivative at 0 of the degree-7 interpolant through nodes 0..7 (unit spacing).
std::array<double, kWidth> origin_derivative_weights(int k) {
    std::array<double, kWidth> w{};
    for (long j = 0; j < kWidth; ++j) {
        // Coefficients of L_j(t) = prod_{i != j} (t - i) / (j - i), lowest degree first.
        std::array<double, kWidth> c{};
        c[0] = 1.0;
        double den = 1.0;
        long deg = 0;
        for (long i = 0; i < kWidth; ++i) {
            if (i == j) continue;
            for (long d = deg + 1; d >= 1; --d) c[d] = c[d - 1] - static_cast<double>(i) * c[d];
            c[0] *= -static_cast<double>(i);
            ++deg;
            den *= static_cast<double>(j - i);
        }
        w[j] = c[k] * (k == 2 ? 2.0 : 1.0) / den;
    }
    return w;
}

cplx origin_derivative(const std::vector<cplx>& v, int k, double h) {
    static const std::array<double, kWidth> w1 = origin_derivative_weights(1), w2 = origin_derivative_weights(2);
    const auto& w = k == 1 ? w1 : w2;
    cplx acc = 0.0;
    for (long j = 0; j < kWidth; ++j) acc += w[j] * v[j];
    return acc / std::pow(h, k);
}

cplx apply_stencil(const std::vector<cplx>& v, long start, const double* w) {
    cplx acc = 0.0;
    for (long i = 0; i < kWidth; ++i) acc += w[i] * v[start + i];
    return acc;
}

// Tail model value at xi > xi_M.
cplx tail_value(const std::vector<cplx>& v, double xi_M, double xi, double a) {
    const double ratio = (1.0 + a * xi) / (1.0 + a * xi_M) * std::exp(-a * (xi - xi_M));
    return v.back() * ratio;
}

double log_phi(double x) { return std::log1p(x) - x; }

std::vector<cplx> with_ghosts(const std::vector<cplx>& v, double dxi, double a) {
    std::vector<cplx> e(v.size() + kGhost);
    std::copy(v.begin(), v.end(), e.begin());
    const double xi_M = dxi * static_cast<double>(v.size() - 1);
    for (long g = 1; g <= kGhost; ++g) e[v.size() - 1 + g] = tail_value(v, xi_M, xi_M + g * dxi, a);
    return e;
}

double fit_tail_constant(const std::vector<cplx>& v, double xi_M) {
    const std::size_t M = v.size() - 1;
    const std::size_t j = static_cast<std::size_t>(std::lround(0.9 * static_cast<double>(M)));
    const double xi_j = xi_M * static_cast<double>(j) / static_cast<double>(M);
    const double num = std::abs(v[M]), den = std::abs(v[j]);
    if (!(num > 0.0) || !(den > 0.0) || !std::isfinite(num) || !std::isfinite(den)) return 1.0;
    const double target = std::log(num / den);
    // g(a) = log Phi(a xi_M) - log Phi(a xi_j) is decreasing in a.
    auto g = [&](double a) { return log_phi(a * xi_M) - log_phi(a * xi_j); };
    double lo = 1e-3, hi = 1e3;
    if (!(target <= g(lo) && target >= g(hi))) return 1.0;
    for (int it = 0; it < 200; ++it) {
        const double mid = std::sqrt(lo * hi);
        (g(mid) > target ? lo : hi) = mid;
        if (hi / lo < 1.0 + 1e-14) break;
    }
    return std::sqrt(lo * hi);
}

}  // namespace

SpectralState operator-(const SpectralState& a, const SpectralState& b) {
    require_same(a, b);
    SpectralState r(a);
    for (std::size_t m = 0; m < r.size(); ++m) r.values[m] -= b.values[m];
    return r;
}

SpectralState operator+(const SpectralState& a, const SpectralState& b) {
    require_same(a, b);
    SpectralState r(a);
    for (std::size_t m = 0; m < r.size(); ++m) r.values[m] += b.values[m];
    return r;
}

SpectralState operator*(double s, const SpectralState& a) {
    SpectralState r(a);
    for (auto& v : r.values) v *= s;
    return r;
}

double equilibrium_phi(double xi) {
    const double a = std::abs(xi);
    return (1.0 + a) * std::exp(-a);
}

cplx interpolate(const SpectralState& s, double xi) {
    if (xi < 0.0) return std::conj(interpolate(s, -xi));
    const long M = static_cast<long>(s.grid.intervals());
    const double p = xi / s.grid.spacing();
    if (p > static_cast<double>(M)) return 0.0;
    double w[kWidth];
    const long start = stencil_at(p, w);
    if (start + kWidth <= M + 1) return apply_stencil(s.values, start, w);
    return apply_stencil(with_ghosts(s.values, s.grid.spacing(), fit_tail_constant(s.values, s.grid.xi_max())), start, w);
}

double tail_decay_constant(const SpectralState& s) { return fit_tail_constant(s.values, s.grid.xi_max()); }

SpectralState free_transport(const SpectralState& s, double t) {
    if (!(t >= 0.0)) throw std::invalid_argument("free_transport: t must be nonnegative");
    if (t == 0.0) return s;
    const long M = static_cast<long>(s.grid.intervals());
    const double stretch = std::exp(0.25 * t), damp = std::exp(-t);
    const double a = tail_decay_constant(s);
    const std::vector<cplx> ext = with_ghosts(s.values, s.grid.spacing(), a);
    SpectralState out(s.grid);
#pragma omp parallel for schedule(static)
    for (long m = 0; m <= M; ++m) {
        const double xi = s.grid.node(static_cast<std::size_t>(m)) * stretch;
        const double p = xi / s.grid.spacing();
        cplx v;
        if (p > static_cast<double>(M)) {
            v = tail_value(s.values, s.grid.xi_max(), xi, a);
        } else {
            double w[kWidth];
            const long start = stencil_at(p, w);
            v = apply_stencil(ext, start, w);
        }
        out.values[m] = damp * v;
    }
    return out;
}

SpectralStepper::SpectralStepper(const FrequencyGrid& grid, double dt, FourierModel model)
    : grid_(grid), dt_(dt), model_(model) {
    if (!(dt > 0.0 && dt <= 0.5)) throw std::invalid_argument("time step must lie in (0, 0.5]");
    const long M = static_cast<long>(grid.intervals());
    const double stretch = std::exp(0.125 * dt);
    transport_.resize(grid.size());
    halving_.resize(grid.size());
    phi_half_.resize(grid.size());
    for (long m = 0; m <= M; ++m) {
        const double xi = grid.node(static_cast<std::size_t>(m)) * stretch;
        const double p = xi / grid.spacing();
        Stencil& st = transport_[m];
        st.xi = xi;
        if (p > static_cast<double>(M)) st.start = -1;
        else st.start = stencil_at(p, st.w);
        if (m % 2 == 1) halving_[m].start = stencil_at(0.5 * static_cast<double>(m), halving_[m].w);
        phi_half_[m] = equilibrium_phi(0.5 * grid.node(static_cast<std::size_t>(m)));
    }
}

// u(xi e^{dt/8}): dilation over half a step. The damping -u is kept in the forcing,
// so at xi = 0 the scheme is plain RK4 on y' = y^2 - y and y = 1 stays fixed.
SpectralStepper::Values SpectralStepper::transport_half(const Values& u, double a_tail) const {
    const long n = static_cast<long>(u.size());
    const Values ext = with_ghosts(u, grid_.spacing(), a_tail);
    Values out(u.size());
#pragma omp parallel for schedule(static)
    for (long m = 0; m < n; ++m) {
        const Stencil& st = transport_[m];
        const cplx v = st.start < 0 ? tail_value(u, grid_.xi_max(), st.xi, a_tail) : apply_stencil(ext, st.start, st.w);
        out[m] = v;
    }
    return out;
}

SpectralStepper::Values SpectralStepper::forcing(const Values& u) const {
    const long n = static_cast<long>(u.size());
    Values out(u.size());
#pragma omp parallel for schedule(static)
    for (long m = 0; m < n; ++m) {
        const cplx half = m % 2 == 0 ? u[m / 2] : apply_stencil(u, halving_[m].start, halving_[m].w);
        out[m] = (model_ == FourierModel::nonlinear ? half * half : 2.0 * phi_half_[m] * half) - u[m];
    }
    return out;
}

SpectralState SpectralStepper::step(const SpectralState& s) const {
    if (!(s.grid == grid_)) throw std::invalid_argument("SpectralStepper: state on a different grid");
    const double h = dt_;
    const double a = fit_tail_constant(s.values, grid_.xi_max());
    const Values& u = s.values;
    const std::size_t n = u.size();
    auto lin = [n](const Values& x, double c, const Values& y) {
        Values r(n);
        for (std::size_t m = 0; m < n; ++m) r[m] = x[m] + c * y[m];
        return r;
    };
    const Values k1 = forcing(u);
    const Values k2 = forcing(transport_half(lin(u, 0.5 * h, k1), a));
    const Values Tu = transport_half(u, a);
    const Values k3 = forcing(lin(Tu, 0.5 * h, k2));
    const Values k4 = forcing(transport_half(lin(Tu, h, k3), a));
    Values inner = transport_half(lin(u, h / 6.0, k1), a);
    for (std::size_t m = 0; m < n; ++m) inner[m] += (h / 3.0) * (k2[m] + k3[m]);
    Values next = transport_half(inner, a);
    for (std::size_t m = 0; m < n; ++m) next[m] += (h / 6.0) * k4[m];

    // Remove the slope at xi = 0+. Both corrections map solutions to solutions, so they
    // only suppress the xi Phi(xi) mode (growth rate 1/4) seeded by rounding.
    const double c = origin_derivative(next, 1, grid_.spacing()).real();
    if (model_ == FourierModel::nonlinear) {
        const double y0 = next[0].real();
        if (y0 != 0.0) {
            for (std::size_t m = 0; m < n; ++m) next[m] *= std::exp(-c / y0 * grid_.node(m));
        }
    } else {
        for (std::size_t m = 0; m < n; ++m) next[m] -= c * grid_.node(m) * equilibrium_phi(grid_.node(m));
    }

    return SpectralState(grid_, std::move(next));
}

SpectralState step_nonlinear(const SpectralState& s, double dt) {
    return SpectralStepper(s.grid, dt, FourierModel::nonlinear).step(s);
}

SpectralState step_linearized(const SpectralState& s, double dt) {
    return SpectralStepper(s.grid, dt, FourierModel::linearized).step(s);
}

double curvature_energy(const SpectralState& s) { return -origin_derivative(s.values, 2, s.grid.spacing()).real(); }

double origin_slope(const SpectralState& s) { return origin_derivative(s.values, 1, s.grid.spacing()).real(); }

KNorm fourier_norm_k(const SpectralState& s, double k) {
    KNorm r;
    const std::size_t first = s.grid.first_admitted();
    double best = -1.0;
    std::size_t arg = first;
    for (std::size_t m = std::max<std::size_t>(first, 1); m < s.size(); ++m) {
        const double v = std::abs(s.values[m]) / std::pow(s.grid.node(m), k);
        if (v > best) {
            best = v;
            arg = m;
        }
    }
    r.grid_value = std::max(best, 0.0);
    r.argmax = s.grid.node(arg);
    r.value = r.grid_value;
    if (arg == std::max<std::size_t>(first, 1) && best > 0.0) {
        // Probe toward the origin: a convergent sup flattens, a divergent one keeps growing.
        const double x1 = s.grid.node(arg);
        auto ratio = [&](double xi) { return std::abs(interpolate(s, xi)) / std::pow(xi, k); };
        const double r1 = best, r2 = ratio(0.5 * x1), r3 = ratio(0.25 * x1);
        r.divergent = r2 > r1 && (r3 - r2) > 0.9 * (r2 - r1);
    }
    return r;
}

double fourier_norm_kp(const SpectralState& s, double k, double p) {
    if (!(p >= 1.0)) throw std::invalid_argument("fourier_norm_kp: p must be at least 1");
    if (!(1.0 / p < k && k < 3.0 + 1.0 / p)) throw std::invalid_argument("fourier_norm_kp: need 1/p < k < 3 + 1/p");
    const std::size_t n = s.size();
    std::vector<double> f(n, 0.0);
    for (std::size_t m = 1; m < n; ++m) f[m] = std::pow(std::abs(s.values[m]), p) / std::pow(s.grid.node(m), k * p);
    const double h = s.grid.spacing();
    // First cell: f ~ C xi^alpha with alpha from nodes 1 and 2.
    double first = 0.0;
    if (f[1] > 0.0 && f[2] > 0.0) {
        const double alpha = std::log(f[2] / f[1]) / std::numbers::ln2;
        if (alpha > -1.0) first = f[1] * h / (alpha + 1.0);
        else first = std::numeric_limits<double>::infinity();
    }
    double body = 0.0;
    for (std::size_t m = 1; m < n; ++m) body += (m == 1 || m == n - 1 ? 0.5 : 1.0) * f[m];
    body *= h;
    return std::pow(2.0 * (first + body), 1.0 / p);
}

double sigma_k(double k) { return 1.0 - 0.25 * k - std::exp2(1.0 - k); }

double sigma_kp(double k, double p) { return 1.0 - 0.25 * k + 0.25 / p - std::exp2(1.0 + 1.0 / p - k); }

DecayFit fit_decay_rate(const std::vector<std::pair<double, double>>& series) {
    if (series.size() < 5) throw std::invalid_argument("fit_decay_rate: need at least 5 points");
    double st = 0.0, sy = 0.0;
    for (const auto& [t, v] : series) {
        if (!(v > 0.0) || !std::isfinite(v)) throw std::invalid_argument("fit_decay_rate: values must be positive");
        st += t;
        sy += std::log(v);
    }
    const double n = static_cast<double>(series.size());
    const double tm = st / n, ym = sy / n;
    double stt = 0.0, sty = 0.0;
    for (const auto& [t, v] : series) {
        stt += (t - tm) * (t - tm);
        sty += (t - tm) * (std::log(v) - ym);
    }
    if (!(stt > 0.0)) throw std::invalid_argument("fit_decay_rate: times must not all coincide");
    const double slope = sty / stt;
    DecayFit fit;
    fit.rate = -slope;
    fit.intercept = ym - slope * tm;
    double ss = 0.0;
    for (const auto& [t, v] : series) {
        const double e = std::log(v) - (fit.intercept + slope * t);
        ss += e * e;
    }
    fit.rms_residual = std::sqrt(ss / n);
    fit.t0 = series.front().first;
    fit.t1 = series.back().first;
    return fit;
}

double barrier_ratio(const SpectralState& s, double a) {
    if (!(a > 0.0)) throw std::invalid_argument("barrier_ratio: a must be positive");
    double best = 0.0;
    for (std::size_t m = 0; m < s.size(); ++m) {
        const double bound = equilibrium_phi(a * s.grid.node(m));
        if (bound < std::numeric_limits<double>::min()) break;
        best = std::max(best, std::abs(s.values[m]) / bound);
    }
    return best;
}

namespace {

// 8-point Gauss-Legendre on [-1, 1].
constexpr double kGx[8] = {-0.9602898564975363, -0.7966664774136267, -0.5255324099163290, -0.1834346424956498,
                           0.1834346424956498,  0.5255324099163290,  0.7966664774136267,  0.9602898564975363};
constexpr double kGw[8] = {0.1012285362903763, 0.2223810344533745, 0.3137066458778873, 0.3626837833783620,
                           0.3626837833783620, 0.3137066458778873, 0.2223810344533745, 0.1012285362903763};

// integral_{x0}^inf x^{-p} e^{-i s x xi} dx, s = +-1, p > 1.
cplx far_field_transform(double p, double x0, double xi, double s) {
    if (xi == 0.0) return std::pow(x0, 1.0 - p) / (p - 1.0);
    const double X = std::max(x0, 60.0 / xi);
    cplx acc = 0.0;
    if (X > x0) {
        const int panels = static_cast<int>(std::ceil(std::max((X - x0) * xi / 2.0, 4.0 * std::log(X / x0)))) + 1;
        const double w = (X - x0) / panels;
        for (int k = 0; k < panels; ++k) {
            const double a = x0 + k * w;
            for (int q = 0; q < 8; ++q) {
                const double x = a + 0.5 * w * (kGx[q] + 1.0);
                acc += 0.5 * w * kGw[q] * std::pow(x, -p) * std::polar(1.0, -s * x * xi);
            }
        }
    }
    // Remainder by repeated integration by parts.
    const cplx iz(0.0, s * xi);
    cplx term = std::pow(X, -p) / iz, sum = 0.0;
    for (int n = 0; n < 12; ++n) {
        sum += term;
        term *= (p + n) / (X * iz);
    }
    return acc + std::polar(1.0, -s * X * xi) * sum;
}

}  // namespace

SpectralState to_spectral(const Field& f, const FrequencyGrid& grid, Tail tail) {
    std::vector<double> xi(grid.size());
    for (std::size_t m = 0; m < xi.size(); ++m) xi[m] = grid.node(m);
    SpectralState out(grid, kernels::forward_dft(f.samples, f.grid.node(0), f.grid.spacing(), xi));
    if (tail == Tail::power_law) {
        const double h = f.grid.spacing(), L = f.grid.half_width();
        for (bool right : {false, true}) {
            const PowerTail pt = fit_power_tail(f, right);
            if (!pt.active) continue;
            const double x0 = right ? L - 0.5 * h : L + 0.5 * h;
            const double s = right ? 1.0 : -1.0;
            const long M = static_cast<long>(grid.size());
#pragma omp parallel for schedule(dynamic, 64)
            for (long m = 0; m < M; ++m)
                out.values[m] += pt.amplitude * far_field_transform(pt.exponent, x0, xi[m], s);
        }
    }
    return out;
}

Field to_physical(const SpectralState& s, const VelocityGrid& grid) {
    return Field(grid, kernels::inverse_dft(s.values, s.grid.spacing(), grid.node(0), grid.spacing(), grid.size()));
}

}  // namespace grainkin
