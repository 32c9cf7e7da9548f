#include "grainkin/selfsim.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "grainkin/errors.hpp"

namespace grainkin {

namespace {

constexpr double kBlowUp = 1e12;
constexpr double kPositivityFloor = -1e-8;
constexpr double kMomentumSlack = 1e-10;

bool blown_up(const Field& g) {
    for (double v : g.samples)
        if (!std::isfinite(v) || std::abs(v) > kBlowUp) return true;
    return false;
}

Field collision_substep(const Field& g, const CollisionParams& p, double dt, CollisionScheme scheme) {
    const Field k1 = collision_operator(g, g, p);
    if (scheme == CollisionScheme::rk2) {
        const Field g1 = axpy(g, dt, k1);
        const Field k2 = collision_operator(g1, g1, p);
        return axpy(axpy(g, 0.5 * dt, k1), 0.5 * dt, k2);
    }
    const Field g2 = axpy(g, 0.5 * dt, k1);
    const Field k2 = collision_operator(g2, g2, p);
    const Field g3 = axpy(g, 0.5 * dt, k2);
    const Field k3 = collision_operator(g3, g3, p);
    const Field g4 = axpy(g, dt, k3);
    const Field k4 = collision_operator(g4, g4, p);
    Field out = g;
    for (std::size_t j = 0; j < out.size(); ++j)
        out.samples[j] += dt / 6.0 * (k1.samples[j] + 2.0 * k2.samples[j] + 2.0 * k3.samples[j] + k4.samples[j]);
    return out;
}

Field recenter(const Field& g) {
    const double mass = quadrature(g);
    const double mom = quadrature(g, [](double x) { return x; });
    if (std::abs(mom) <= kMomentumSlack || mass == 0.0) return g;
    return affine_remap(g, 1.0, mom / mass);
}

// Dilation making 2c M_2 equal to the quarter dissipation integral.
Field balance_energy(const Field& g, const CollisionParams& p) {
    const double m2 = quadrature(g, [](double x) { return x * x; });
    const double d = dissipation_integral(g, g, p.gamma);
    if (!(m2 > 0.0) || !(d > 0.0)) return g;
    const double lambda = std::pow(d / (8.0 * p.c * m2), 1.0 / p.gamma);
    return dilate(g, lambda);
}

// Fourth-order derivative: centered inside, one-sided five-point at the two end nodes of
// each side (zero padding would read the truncation as a jump).
Field flux_derivative(const Field& u) {
    Field d = derivative4(u);
    const std::size_t N = u.size();
    if (N < 5) return d;
    const double h = u.grid.spacing();
    const auto& v = u.samples;
    static constexpr double first[5] = {-25.0, 48.0, -36.0, 16.0, -3.0};  // at node 0
    static constexpr double second[5] = {-3.0, -10.0, 18.0, -6.0, 1.0};   // at node 1
    double l0 = 0.0, l1 = 0.0, r0 = 0.0, r1 = 0.0;
    for (std::size_t q = 0; q < 5; ++q) {
        l0 += first[q] * v[q];
        l1 += second[q] * v[q];
        r0 -= first[q] * v[N - 1 - q];
        r1 -= second[q] * v[N - 1 - q];
    }
    d.samples[0] = l0 / (12.0 * h);
    d.samples[1] = l1 / (12.0 * h);
    d.samples[N - 1] = r0 / (12.0 * h);
    d.samples[N - 2] = r1 / (12.0 * h);
    return d;
}

}  // namespace

Field drift_step(const Field& g, double dt, double c) {
    Field out = dilate(g, std::exp(-c * dt));
    // Mass carried past +-L is handed back in proportion to the density.
    const double before = quadrature(g), after = quadrature(out);
    if (after != 0.0 && before != after) out *= before / after;
    return out;
}

Field drift_term(const Field& g, double c) {
    Field xg = g;
    for (std::size_t j = 0; j < xg.size(); ++j) xg.samples[j] *= g.grid.node(j);
    Field d = flux_derivative(xg);
    d *= -c;
    return d;
}

Field rhs_selfsim(const Field& g, const CollisionParams& p) {
    Field r = collision_operator(g, g, p);
    const Field d = drift_term(g, p.c);
    for (std::size_t j = 0; j < r.size(); ++j) r.samples[j] += d.samples[j];
    return r;
}

double steady_residual(const Field& g, const CollisionParams& p, double a) {
    return weighted_norm(rhs_selfsim(g, p), a);
}

Field strang_step(const Field& g, const CollisionParams& p, double dt, CollisionScheme scheme) {
    const Field half = drift_step(g, 0.5 * dt, p.c);
    return drift_step(collision_substep(half, p, dt, scheme), 0.5 * dt, p.c);
}

Trajectory evolve(const Field& g0, const CollisionParams& p, double T, double dt, const EvolveOptions& opt) {
    if (!(dt > 0.0)) throw std::invalid_argument("evolve: dt must be positive");
    if (!(T >= 0.0)) throw std::invalid_argument("evolve: T must be nonnegative");
    const double mass0 = quadrature(g0);
    if (dt > 0.5 / std::max(1.0, mass0)) throw std::invalid_argument("evolve: dt exceeds 0.5 / max(1, mass)");
    if (!(opt.frame_interval > 0.0)) throw std::invalid_argument("evolve: frame_interval must be positive");

    const long total = std::lround(T / dt);
    const long per_frame = std::max(1L, std::lround(opt.frame_interval / dt));
    const std::size_t keep = std::max<std::size_t>(1, opt.keep_every);

    Trajectory tr;
    std::size_t recorded = 0;
    auto record = [&](const Field& g, double t) {
        if (opt.check_positivity) {
            const auto it = std::min_element(g.samples.begin(), g.samples.end());
            if (*it < kPositivityFloor) {
                std::ostringstream msg;
                msg << "positivity lost at t = " << t << ": g(" << g.grid.node(it - g.samples.begin())
                    << ") = " << *it;
                throw DivergedError(msg.str(), tr.times.empty() ? 0.0 : tr.times.back());
            }
        }
        tr.times.push_back(t);
        tr.reports.push_back(moment_report(g, opt.moment_orders, opt.weight_exponents));
        if (opt.record_residual) tr.residuals.push_back(steady_residual(g, p));
        if (recorded % keep == 0) {
            tr.frames.push_back(g);
            tr.frame_index.push_back(tr.times.size() - 1);
        }
        ++recorded;
    };

    Field g = g0;
    record(g, 0.0);
    double last_good = 0.0;
    for (long n = 1; n <= total; ++n) {
        g = strang_step(g, p, dt, opt.scheme);
        const double t = static_cast<double>(n) * dt;
        if (blown_up(g)) throw DivergedError("evolve: solution blew up", last_good);
        last_good = t;
        if (n % per_frame == 0 || n == total) {
            if (opt.recenter) g = recenter(g);
            record(g, t);
        }
    }
    return tr;
}

SteadyProfile steady_profile(const CollisionParams& p, double tol, const Field& g0, const SteadyOptions& opt) {
    if (!(p.gamma > 0.0 && p.gamma < 1.0)) throw std::invalid_argument("steady_profile: gamma must lie in (0, 1)");
    if (!(tol > 0.0)) throw std::invalid_argument("steady_profile: tol must be positive");
    if (!(opt.dt > 0.0) || opt.dt > 0.5 / std::max(1.0, quadrature(g0)))
        throw std::invalid_argument("steady_profile: dt exceeds 0.5 / max(1, mass)");

    Field g = opt.balance_energy ? balance_energy(g0, p) : g0;
    const long per_check = std::max(1L, std::lround(opt.check_interval / opt.dt));
    const long budget = std::lround(opt.max_time / opt.dt);

    SteadyProfile best{g, p.gamma, std::numeric_limits<double>::infinity(), 0.0, 0.0, {}};
    std::vector<SteadyCheck> history;
    const long per_span = std::max(per_check, std::lround(opt.extrapolation_span / opt.dt));
    std::vector<double> m2_history;  // M_2 at span boundaries since the last dilation
    for (long n = 1; n <= budget; ++n) {
        g = strang_step(g, p, opt.dt);
        if (blown_up(g)) throw DivergedError("steady_profile: solution blew up", (n - 1) * opt.dt);
        if (n % per_check != 0) continue;
        g = recenter(g);
        double r = steady_residual(g, p);
        if (opt.balance_energy && r > opt.rebalance_above) {
            g = balance_energy(g, p);
            r = steady_residual(g, p);
            m2_history.clear();
        } else if (opt.extrapolate_energy && n % per_span == 0) {
            // The energy mode is the slowest (rate c gamma): Aitken on M_2 and dilate to the limit.
            m2_history.push_back(quadrature(g, [](double x) { return x * x; }));
            const std::size_t k = m2_history.size();
            if (k >= 3) {
                const double d1 = m2_history[k - 2] - m2_history[k - 3];
                const double d2 = m2_history[k - 1] - m2_history[k - 2];
                const double q = d1 != 0.0 ? d2 / d1 : 0.0;
                if (q > 0.0 && q < 0.9) {
                    const double limit = m2_history[k - 1] + d2 * q / (1.0 - q);
                    if (limit > 0.0) {
                        g = dilate(g, std::sqrt(m2_history[k - 1] / limit));
                        r = steady_residual(g, p);
                    }
                    m2_history.clear();
                }
            }
        }
        history.push_back({n * opt.dt, r, quadrature(g, [](double x) { return x * x; })});
        if (r < best.residual) best = SteadyProfile{g, p.gamma, r, 0.0, n * opt.dt, {}};
        if (r < tol) break;
    }
    best.history = std::move(history);
    const double m2 = quadrature(best.field, [](double x) { return x * x; });
    best.lambda = m2 > 0.0 ? 1.0 / std::sqrt(m2) : std::numeric_limits<double>::quiet_NaN();
    if (!(best.residual < tol)) {
        std::ostringstream msg;
        msg << "steady_profile: residual " << best.residual << " above " << tol << " after t = " << opt.max_time;
        throw NotConvergedError(msg.str(), best);
    }
    return best;
}

double v_gamma(double s, double gamma, double c) {
    if (gamma == 0.0) return std::exp(c * s);
    const double base = 1.0 + c * gamma * s;
    if (!(base > 0.0)) throw std::invalid_argument("v_gamma: need 1 + c gamma s > 0");
    return std::pow(base, 1.0 / gamma);
}

double t_gamma(double s, double gamma, double c) {
    if (gamma == 0.0) return s;
    const double base = 1.0 + c * gamma * s;
    if (!(base > 0.0)) throw std::invalid_argument("t_gamma: need 1 + c gamma s > 0");
    if (c == 0.0) return s;
    return std::log(base) / (c * gamma);
}

double s_of_t(double t, double gamma, double c) {
    if (gamma == 0.0 || c == 0.0) return t;
    return std::expm1(c * gamma * t) / (c * gamma);
}

Field to_selfsim(const Field& f, double s, double gamma, double c) {
    return dilate(f, 1.0 / v_gamma(s, gamma, c));
}

Field from_selfsim(const Field& g, double t, double gamma, double c) {
    return dilate(g, v_gamma(s_of_t(t, gamma, c), gamma, c));
}

double limiting_temperature(const Field& profile, Tail tail) {
    const double m2 = moment(profile, 2.0, tail);
    if (!(m2 > 0.0)) throw InvalidStateError("limiting_temperature: second moment is not positive");
    return 1.0 / std::sqrt(m2);
}

double limiting_temperature(const SteadyProfile& profile) { return limiting_temperature(profile.field); }

double pointwise_constant(const Field& G, double gamma) {
    double m = 0.0;
    for (std::size_t j = 0; j < G.size(); ++j) m = std::max(m, std::abs(G.grid.node(j) * G.samples[j]));
    return m / (8.0 * weighted_norm(G, gamma));
}

}  // namespace grainkin
