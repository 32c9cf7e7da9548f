#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numbers>

#include "grainkin/errors.hpp"
#include "grainkin/maxwell_fourier.hpp"
#include "grainkin/profiles.hpp"
#include "grainkin/selfsim.hpp"
#include "oracles.hpp"

using namespace grainkin;

namespace {

Field gaussian_on(double L, std::size_t N, double sigma = 1.0) {
    return Field::sample(make_grid(L, N), [sigma](double x) { return profiles::gaussian(x, sigma); });
}

double first_moment(const Field& f) { return quadrature(f, [](double x) { return x; }); }
double second_moment(const Field& f) { return quadrature(f, [](double x) { return x * x; }); }

double l1_diff(const Field& a, const Field& b) {
    Field d = a;
    for (std::size_t j = 0; j < d.size(); ++j) d.samples[j] = std::abs(a.samples[j] - b.samples[j]);
    return quadrature(d);
}

}  // namespace

TEST_CASE("drift step") {
    const Field g = gaussian_on(20.0, 1024);
    const Field d = drift_step(g, 0.1, 0.25);
    CHECK(std::abs(quadrature(d) - quadrature(g)) <= 1e-10);
    CHECK(std::abs(first_moment(d)) <= 1e-10);
    CHECK(second_moment(d) / second_moment(g) == doctest::Approx(std::exp(0.05)).epsilon(1e-6));
    CHECK(second_moment(d) / second_moment(g) == doctest::Approx(1.051271).epsilon(1e-6));

    // Heavy tails reach the boundary: the outflow is handed back, mass stays put.
    const Field H = Field::sample(make_grid(10.0, 512), profiles::H);
    CHECK(std::abs(quadrature(drift_step(H, 0.5, 0.25)) - quadrature(H)) <= 1e-13);
}

TEST_CASE("right-hand side conserves mass and momentum") {
    const Field g = gaussian_on(10.0, 1024);
    for (double gamma : {0.0, 0.1, 0.5}) {
        const Field r = rhs_selfsim(g, CollisionParams(gamma));
        CHECK(std::abs(quadrature(r)) <= 1e-9);
        CHECK(std::abs(first_moment(r)) <= 1e-9);
    }
}

TEST_CASE("energy production of the right-hand side") {
    const Field g = gaussian_on(10.0, 1024, 0.8);
    for (double gamma : {0.0, 0.1, 0.3}) {
        const CollisionParams p(gamma);
        const double direct = second_moment(rhs_selfsim(g, p));
        const std::vector<double> x = g.grid.nodes();
        const double pairs = oracle::brute_double_sum(
            x, g.samples, g.samples, [gamma](double a, double b) { return std::pow(std::abs(a - b), gamma + 2.0); },
            g.grid.spacing());
        const double expected = 2.0 * p.c * second_moment(g) - 0.25 * pairs;
        CHECK(direct == doctest::Approx(expected).epsilon(1e-6));
        CHECK(dissipation_integral(g, g, gamma) == doctest::Approx(pairs).epsilon(1e-12));
    }
}

TEST_CASE("Maxwell equilibrium is a discrete steady state under refinement") {
    double prev = 1.0;
    for (std::size_t N : {1024u, 2048u, 4096u}) {
        const Field G0 = Field::sample(make_grid(40.0, N), profiles::G0);
        const double r = weighted_norm(rhs_selfsim(G0, CollisionParams(0.0)), 0.0);
        CHECK(r < prev / 4.0);
        prev = r;
    }
    CHECK(prev < 1e-4);
}

TEST_CASE("Strang splitting is second order") {
    const Field g = Field::sample(make_grid(20.0, 1024), [](double x) {
        return 0.5 * (profiles::gaussian(x, 0.7, -1.0) + profiles::gaussian(x, 0.7, 1.0));
    });
    const CollisionParams p(0.1);
    auto defect = [&](double dt) {
        const Field one = strang_step(g, p, dt);
        const Field two = strang_step(strang_step(g, p, 0.5 * dt), p, 0.5 * dt);
        return max_abs_diff(one, two) / dt;
    };
    const double coarse = defect(0.2), fine = defect(0.1);
    CHECK(coarse / fine >= 3.5);
    CHECK(coarse / fine <= 4.5);
}

TEST_CASE("Maxwell evolution conserves mass and momentum") {
    EvolveOptions opt;
    opt.frame_interval = 1.0;
    opt.record_residual = false;
    const Trajectory tr = evolve(gaussian_on(100.0, 4096), CollisionParams(0.0), 10.0, 0.05, opt);
    REQUIRE(tr.times.size() == 11);
    for (std::size_t i = 1; i < tr.times.size(); ++i) CHECK(tr.times[i] > tr.times[i - 1]);
    for (const MomentReport& r : tr.reports) {
        CHECK(std::abs(r.mass - 1.0) <= 1e-8);
        CHECK(std::abs(r.momentum) <= 1e-8);
        CHECK(std::abs(r.energy - 1.0) <= 2e-2);
    }
    for (const Field& f : tr.frames) CHECK(*std::min_element(f.samples.begin(), f.samples.end()) >= -1e-8);
}

TEST_CASE("Maxwell equilibrium stays put") {
    const Field G0 = Field::sample(make_grid(40.0, 4096), profiles::G0);
    EvolveOptions opt;
    opt.frame_interval = 2.0;
    opt.record_residual = false;
    const Trajectory tr = evolve(G0, CollisionParams(0.0), 10.0, 0.05, opt);
    for (const Field& f : tr.frames) CHECK(l1_diff(f, G0) <= 1e-3);
}

TEST_CASE("physical-space run relaxes in the Fourier norm") {
    const Field g0 = gaussian_on(200.0, 8192);
    EvolveOptions opt;
    opt.frame_interval = 2.0;
    opt.record_residual = false;
    const Trajectory tr = evolve(g0, CollisionParams(0.0), 20.0, 0.05, opt);
    const FrequencyGrid fg(20.0, 2000);
    const SpectralState phi = SpectralState::sample(fg, equilibrium_phi);
    std::vector<std::pair<double, double>> series;
    for (std::size_t i = 0; i < tr.frames.size(); ++i)
        series.emplace_back(tr.times[tr.frame_index[i]],
                            fourier_norm_k(to_spectral(tr.frames[i], fg, Tail::power_law) - phi, 2.5).value);
    CHECK(fit_decay_rate(series).rate >= 0.7 * sigma_k(2.5));
}

TEST_CASE("energy is dissipated without drift") {
    EvolveOptions opt;
    opt.frame_interval = 0.5;
    opt.record_residual = false;
    const Trajectory tr = evolve(gaussian_on(20.0, 512), CollisionParams(0.1, 0.0), 5.0, 0.05, opt);
    for (std::size_t i = 1; i < tr.reports.size(); ++i) CHECK(tr.reports[i].energy <= tr.reports[i - 1].energy);
    CHECK(tr.reports.back().energy < 0.5 * tr.reports.front().energy);
}

TEST_CASE("evolve preconditions and failure modes") {
    const Field g = gaussian_on(20.0, 256);
    CHECK_THROWS_AS(evolve(g, CollisionParams(0.0), 1.0, 0.6), std::invalid_argument);
    CHECK_THROWS_AS(evolve(g, CollisionParams(0.0), 1.0, 0.0), std::invalid_argument);

    Field negative = g;
    negative.samples[100] = -1e-3;
    CHECK_THROWS_AS(evolve(negative, CollisionParams(0.0), 1.0, 0.1), DivergedError);

    const Field huge = 1e13 * g;
    try {
        evolve(huge, CollisionParams(0.0), 1.0, 1e-14);
        FAIL("expected divergence");
    } catch (const DivergedError& e) {
        CHECK(e.last_good_time() == 0.0);
    }
}

TEST_CASE("momentum is re-centered between frames") {
    const Field shifted = Field::sample(make_grid(20.0, 512), [](double x) { return profiles::gaussian(x, 1.0, 0.3); });
    EvolveOptions opt;
    opt.record_residual = false;
    const Trajectory tr = evolve(shifted, CollisionParams(0.0), 2.0, 0.05, opt);
    CHECK(std::abs(tr.reports.front().momentum - 0.3) <= 1e-8);
    CHECK(std::abs(tr.reports.back().momentum) <= 1e-10);
}

TEST_CASE("rescaling maps") {
    CHECK(v_gamma(0.0, 0.1, 0.25) == 1.0);
    CHECK(t_gamma(0.0, 0.1, 0.25) == 0.0);
    CHECK(v_gamma(3.0, 0.0, 0.25) == doctest::Approx(std::exp(0.75)).epsilon(1e-15));
    CHECK(std::abs(v_gamma(4.0, 0.001, 0.25) / std::exp(1.0) - 1.0) <= 1e-3);
    CHECK(t_gamma(4.0, 0.001, 0.25) == doctest::Approx(4.0).epsilon(1e-3));
    CHECK(s_of_t(t_gamma(2.5, 0.3, 0.25), 0.3, 0.25) == doctest::Approx(2.5).epsilon(1e-14));
    CHECK(v_gamma(s_of_t(2.0, 0.3, 0.25), 0.3, 0.25) == doctest::Approx(std::exp(0.5)).epsilon(1e-14));
    CHECK_THROWS_AS(v_gamma(-100.0, 0.1, 0.25), std::invalid_argument);
    CHECK_THROWS_AS(t_gamma(-100.0, 0.1, 0.25), std::invalid_argument);

    const Field f = gaussian_on(20.0, 2048);
    const Field id = to_selfsim(f, 0.0, 0.1, 0.25);
    CHECK(max_abs_diff(id, f) <= 1e-14);
    const double s = 1.5;
    const Field g = to_selfsim(f, s, 0.1, 0.25);
    const Field back = from_selfsim(g, t_gamma(s, 0.1, 0.25), 0.1, 0.25);
    CHECK(max_abs_diff(back, f) <= 1e-6);
}

TEST_CASE("limiting temperature of closed-form profiles") {
    const VelocityGrid grid = make_grid(200.0, 16384);
    CHECK(limiting_temperature(Field::sample(grid, profiles::H), Tail::power_law) ==
          doctest::Approx(1.0).epsilon(1e-3));
    CHECK(limiting_temperature(Field::sample(grid, profiles::G0), Tail::power_law) ==
          doctest::Approx(2.0 * std::sqrt(std::numbers::e)).epsilon(1e-3));
    CHECK(limiting_temperature(Field::sample(grid, profiles::G0), Tail::power_law) ==
          doctest::Approx(3.297443).epsilon(1e-3));
    const Field negative = -1.0 * Field::sample(grid, profiles::H);
    CHECK_THROWS_AS(limiting_temperature(negative), InvalidStateError);
}

TEST_CASE("steady profile at gamma = 0.2 on a coarse grid") {
    const CollisionParams p(0.2);
    CHECK_THROWS_AS(steady_profile(CollisionParams(0.0), 1e-3, gaussian_on(20.0, 512)), std::invalid_argument);
    CHECK_THROWS_AS(steady_profile(p, 0.0, gaussian_on(20.0, 512)), std::invalid_argument);

    SteadyOptions opt;
    opt.dt = 0.05;
    opt.max_time = 300.0;
    const double tol = 3e-3;  // the floor of this grid is about 1.2e-3
    const SteadyProfile G = steady_profile(p, tol, gaussian_on(20.0, 512), opt);
    CHECK(G.residual < tol);
    CHECK(std::abs(quadrature(G.field) - 1.0) <= 1e-8);
    CHECK(std::abs(first_moment(G.field)) <= 1e-8);
    const double m2 = second_moment(G.field);
    CHECK(m2 > 0.0);
    CHECK(m2 <= 0.5);
    CHECK(G.lambda == doctest::Approx(limiting_temperature(G)).epsilon(1e-12));
    CHECK(std::abs(i_gamma_functional(G.field, G.field, p.gamma)) <= 10.0 * tol);
    CHECK(pointwise_constant(G.field, p.gamma) <= 2.0);

    SteadyOptions short_budget = opt;
    short_budget.max_time = 1.0;
    try {
        steady_profile(p, 1e-10, gaussian_on(20.0, 512), short_budget);
        FAIL("expected non-convergence");
    } catch (const NotConvergedError& e) {
        CHECK(std::isfinite(e.best().residual));
        CHECK(e.best().field.size() == 512);
    }
}
