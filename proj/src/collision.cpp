#include "grainkin/collision.hpp"

#include <cmath>
#include <stdexcept>

#include "grainkin/fft_conv.hpp"
#include "grainkin/kernels.hpp"

namespace grainkin {

CollisionParams::CollisionParams(double gamma_, double c_) : gamma(gamma_), c(c_) {
    if (!(gamma >= 0.0 && gamma <= 1.0)) throw std::invalid_argument("gamma must lie in [0,1]");
    // c = 0 is the physical (unscaled) equation, used for the dissipation check.
    if (!(c >= 0.0)) throw std::invalid_argument("drift constant c must be nonnegative");
}

namespace {

// |u|^gamma with the pointwise-limit convention at u = 0.
double power_weight(double r, double gamma) {
    if (r == 0.0) return gamma == 0.0 ? 1.0 : 0.0;
    return gamma == 0.0 ? 1.0 : std::pow(r, gamma);
}

// Weight of the diagonal cell in sums of |u|^gamma S(u) on a grid of spacing h.
// Dropping the cell (the pointwise value 0) leaves an O(h^{1+gamma}) error; the
// generalized Euler-Maclaurin expansion cancels it with -2 zeta(-gamma) h^gamma,
// which is 1 at gamma = 0 and so agrees with the Maxwell convention.
double diagonal_weight(double gamma, double h) {
    if (gamma == 0.0) return 1.0;
    return -2.0 * std::riemann_zeta(-gamma) * std::pow(h, gamma);
}

std::vector<double> collision_weights(const VelocityGrid& grid, double gamma) {
    std::vector<double> w = kernel_table(grid, [gamma](double u) { return power_weight(u, gamma); });
    w[0] = diagonal_weight(gamma, grid.spacing());
    return w;
}

using Kernel = std::function<double(double)>;
using PairKernel = std::function<double(double, double)>;

// Sum over tail nodes t of wf_t * h * sum_j field_j F(x_t, x_j) (or F(x_j, x_t)).
double tail_cross(const TailNodes& tn, const Field& field, const PairKernel& F, bool tail_first) {
    const long T = static_cast<long>(tn.x.size());
    const std::size_t N = field.size();
    const double h = field.grid.spacing();
    std::vector<double> part(tn.x.size());
#pragma omp parallel for schedule(static)
    for (long t = 0; t < T; ++t) {
        double acc = 0.0;
        for (std::size_t j = 0; j < N; ++j) {
            if (field.samples[j] == 0.0) continue;
            const double y = field.grid.node(j);
            acc += field.samples[j] * (tail_first ? F(tn.x[t], y) : F(y, tn.x[t]));
        }
        part[t] = tn.wf[t] * h * acc;
    }
    double s = 0.0;
    for (double v : part) s += v;
    return s;
}

double tail_tail(const TailNodes& a, const TailNodes& b, const PairKernel& F) {
    double s = 0.0;
    for (std::size_t t = 0; t < a.x.size(); ++t)
        for (std::size_t u = 0; u < b.x.size(); ++u) s += a.wf[t] * b.wf[u] * F(a.x[t], b.x[u]);
    return s;
}

// Far-field contribution of a symmetric-role double integral with kernel F(x, y).
double tail_correction(const Field& f, const Field& g, const PairKernel& F) {
    const TailNodes tf = tail_nodes(f);
    const TailNodes tg = tail_nodes(g);
    double cross = 0.0;
    if (!tf.empty()) cross += tail_cross(tf, g, F, true);
    if (!tg.empty()) cross += tail_cross(tg, f, F, false);
    const double tt = 0.5 * (tail_tail(tf, tg, F) + tail_tail(tg, tf, [&](double x, double y) { return F(y, x); }));
    return cross + tt;
}

// Double integral of f(x) g(y) K(|x-y|), summation symmetrized in (f, g).
double pair_integral(const Field& f, const Field& g, const Kernel& K, Tail tail) {
    require_same_grid(f, g, "pair integral");
    const std::vector<double> w = kernel_table(f.grid, K);
    const double h = f.grid.spacing();
    const double ab = kernels::pair_sum(f.samples, g.samples, w);
    const double ba = kernels::pair_sum(g.samples, f.samples, w);
    double s = 0.5 * (ab + ba) * h * h;
    if (tail == Tail::power_law)
        s += tail_correction(f, g, [&](double x, double y) { return K(std::abs(x - y)); });
    return s;
}

// Adds h * odd[m] at x_m + h/2 by the interpolation-dual weights of the quintic
// (3, -25, 150, 150, -25, 3)/256: moments up to fifth order of the deposit are kept.
// Narrower cubic and linear weights are used near the ends.
Field deposit_half_nodes(Field out, const std::vector<double>& odd, double h) {
    static constexpr double w6[6] = {3.0 / 256, -25.0 / 256, 150.0 / 256, 150.0 / 256, -25.0 / 256, 3.0 / 256};
    static constexpr double w4[4] = {-1.0 / 16, 9.0 / 16, 9.0 / 16, -1.0 / 16};
    const std::size_t N = out.size();
    for (std::size_t m = 0; m + 1 < N; ++m) {
        const double v = h * odd[m];
        if (v == 0.0) continue;
        if (m >= 2 && m + 3 < N) {
            for (std::size_t q = 0; q < 6; ++q) out.samples[m - 2 + q] += w6[q] * v;
        } else if (m >= 1 && m + 2 < N) {
            for (std::size_t q = 0; q < 4; ++q) out.samples[m - 1 + q] += w4[q] * v;
        } else {
            out.samples[m] += 0.5 * v;
            out.samples[m + 1] += 0.5 * v;
        }
    }
    return out;
}

Field absolute(const Field& f) {
    Field a(f);
    for (double& v : a.samples) v = std::abs(v);
    return a;
}

}  // namespace

std::vector<double> kernel_table(const VelocityGrid& grid, const std::function<double(double)>& kernel) {
    std::vector<double> w(grid.size());
    for (std::size_t d = 0; d < w.size(); ++d) w[d] = kernel(static_cast<double>(d) * grid.spacing());
    return w;
}

Field q_plus(const Field& f, const Field& g, const CollisionParams& p, GainPath path) {
    require_same_grid(f, g, "q_plus");
    const double h = f.grid.spacing();
    const std::size_t N = f.size();
    const bool use_fft = path == GainPath::fft || (path == GainPath::automatic && p.gamma == 0.0);
    // Every pair (a, b) lands at its midpoint: on a node when a - b is even, halfway
    // between nodes m and m+1 when it is odd.
    std::vector<double> even(N), odd(N - 1);
    if (use_fft) {
        if (p.gamma != 0.0) throw std::invalid_argument("q_plus: the convolution path requires gamma = 0");
        const std::vector<double> c =
            &f == &g ? linear_autoconvolution(f.samples) : linear_convolution(f.samples, g.samples);
        for (std::size_t i = 0; i < N; ++i) even[i] = c[2 * i];
        for (std::size_t m = 0; m + 1 < N; ++m) odd[m] = c[2 * m + 1];
    } else {
        const std::vector<double> w = collision_weights(f.grid, p.gamma);  // w[d] = |d h|^gamma
        std::vector<double> we(N, 0.0), wo(N, 0.0);
        for (std::size_t k = 0; 2 * k < N; ++k) we[k] = w[2 * k];
        for (std::size_t j = 0; 2 * j + 1 < N; ++j) wo[j] = w[2 * j + 1];
        even = kernels::gain_sum(f.samples, g.samples, we);
        odd = kernels::odd_gain_sum(f.samples, g.samples, wo);
    }
    Field out(f.grid);
    for (std::size_t i = 0; i < N; ++i) out.samples[i] = h * even[i];
    return deposit_half_nodes(out, odd, h);
}

Field collision_freq(const Field& f, double gamma) {
    if (!(gamma >= 0.0 && gamma <= 1.0)) throw std::invalid_argument("gamma must lie in [0,1]");
    Field out(f.grid);
    if (gamma == 0.0) {
        const double m = quadrature(f);
        for (double& v : out.samples) v = m;
        return out;
    }
    const std::vector<double> w = collision_weights(f.grid, gamma);
    const std::vector<double> s = kernels::toeplitz_sum(f.samples, w);
    const double h = f.grid.spacing();
    for (std::size_t i = 0; i < out.size(); ++i) out.samples[i] = h * s[i];
    return out;
}

Field q_minus(const Field& f, const Field& g, const CollisionParams& p) {
    require_same_grid(f, g, "q_minus");
    const Field sigma = collision_freq(g, p.gamma);
    Field out(f.grid);
    for (std::size_t i = 0; i < out.size(); ++i) out.samples[i] = f.samples[i] * sigma.samples[i];
    return out;
}

Field collision_operator(const Field& f, const Field& g, const CollisionParams& p) {
    return q_plus(f, g, p) - q_minus(f, g, p);
}

double weak_apply(const Field& f, const Field& g, const std::function<double(double)>& phi, const CollisionParams& p,
                  Tail tail) {
    require_same_grid(f, g, "weak_apply");
    const std::size_t N = f.size();
    const double h = f.grid.spacing();
    const double x0 = f.grid.node(0);
    std::vector<double> phi_node(N), phi_mid(2 * N - 1);
    for (std::size_t j = 0; j < N; ++j) phi_node[j] = phi(f.grid.node(j));
    for (std::size_t n = 0; n < phi_mid.size(); ++n) phi_mid[n] = phi(x0 + 0.5 * static_cast<double>(n) * h);
    const std::vector<double> w = collision_weights(f.grid, p.gamma);
    std::vector<double> rows(N);
    const long NN = static_cast<long>(N);
#pragma omp parallel for schedule(static)
    for (long i = 0; i < NN; ++i) {
        double acc = 0.0;
        const double fi = f.samples[i];
        if (fi != 0.0) {
            for (long j = 0; j < NN; ++j) {
                const double delta = 2.0 * phi_mid[i + j] - phi_node[i] - phi_node[j];
                acc += g.samples[j] * delta * w[std::abs(i - j)];
            }
        }
        rows[i] = fi * acc;
    }
    double s = 0.0;
    for (double v : rows) s += v;
    s *= 0.5 * h * h;
    if (tail == Tail::power_law) {
        s += tail_correction(f, g, [&](double x, double y) {
            return 0.5 * (2.0 * phi(0.5 * (x + y)) - phi(x) - phi(y)) * power_weight(std::abs(x - y), p.gamma);
        });
    }
    return s;
}

double moment(const Field& f, double s, Tail tail) {
    if (s < 0.0) throw std::invalid_argument("moment order must be nonnegative");
    return integrate(f, [s](double x) { return std::pow(std::abs(x), s); }, tail);
}

double weighted_norm(const Field& f, double a, Tail tail) {
    if (a < 0.0) throw std::invalid_argument("weight exponent must be nonnegative");
    return integrate(absolute(f), [a](double x) { return std::pow(1.0 + std::abs(x), a); }, tail);
}

MomentReport moment_report(const Field& f, const std::vector<double>& s_list, const std::vector<double>& a_list,
                           Tail tail) {
    MomentReport r;
    r.mass = integrate(f, [](double) { return 1.0; }, tail);
    r.momentum = integrate(f, [](double x) { return x; }, tail);
    r.energy = integrate(f, [](double x) { return x * x; }, tail);
    for (double s : s_list) r.fractional.emplace_back(s, moment(f, s, tail));
    for (double a : a_list) r.weighted.emplace_back(a, weighted_norm(f, a, tail));
    return r;
}

double lambda_gamma_fn(double r, double gamma) {
    if (!(r > 0.0)) throw std::invalid_argument("Lambda_gamma needs r > 0");
    const double lr = std::log(r);
    if (gamma == 0.0) return lr;
    return std::expm1(gamma * lr) / gamma;
}

double i0_functional(const Field& f, const Field& g, Tail tail) {
    return pair_integral(f, g, [](double r) { return r == 0.0 ? 0.0 : r * r * std::log(r); }, tail);
}

double i_gamma_functional(const Field& f, const Field& g, double gamma, Tail tail) {
    if (gamma == 0.0) return i0_functional(f, g, tail);
    if (!(gamma > 0.0 && gamma <= 1.0)) throw std::invalid_argument("gamma must lie in [0,1]");
    return pair_integral(f, g, [gamma](double r) { return r == 0.0 ? 0.0 : r * r * lambda_gamma_fn(r, gamma); },
                         tail);
}

double dissipation_integral(const Field& f, const Field& g, double gamma) {
    return pair_integral(f, g, [gamma](double r) { return std::pow(r, gamma + 2.0); }, Tail::truncate);
}

}  // namespace grainkin
