#pragma once

#include <stdexcept>
#include <string>
#include <vector>

#include "grainkin/collision.hpp"
#include "grainkin/grid.hpp"

// Physical-space solver for d_t g + c d_x(x g) = Q_gamma(g, g), steady profiles
// and the maps between physical and self-similar variables.

namespace grainkin {

/// Exact drift g -> e^{-c dt} g(x e^{-c dt}) by the conservative remap.
/// Mass carried past +-L is returned by rescaling the density (the outflow is O(L g(L)) per unit time).
Field drift_step(const Field& g, double dt, double c);

/// -c d_x(x g): fourth-order centered, one-sided five-point at the two end nodes of each side.
Field drift_term(const Field& g, double c);

/// drift_term(g, c) + Q_gamma(g, g).
Field rhs_selfsim(const Field& g, const CollisionParams& p);

/// ||rhs_selfsim(g)||_{L1(w_a)}, the steady residual.
double steady_residual(const Field& g, const CollisionParams& p, double a = 2.5);

enum class CollisionScheme { rk2, rk4 };

/// Strang step: half drift, full collision substep, half drift.
Field strang_step(const Field& g, const CollisionParams& p, double dt, CollisionScheme scheme = CollisionScheme::rk2);

struct EvolveOptions {
    double frame_interval = 1.0;  ///< time between recorded frames
    std::size_t keep_every = 1;   ///< store every n-th frame's samples (reports are kept for all)
    std::vector<double> moment_orders = {2.5};
    std::vector<double> weight_exponents = {2.5};
    bool record_residual = true;
    bool recenter = true;              ///< shift momentum back to 0 after each frame if |p| > 1e-10
    bool check_positivity = true;      ///< abort if a frame dips below -1e-8
    CollisionScheme scheme = CollisionScheme::rk2;
};

struct Trajectory {
    std::vector<double> times;
    std::vector<Field> frames;
    std::vector<std::size_t> frame_index;  ///< position in `times` of each stored frame
    std::vector<MomentReport> reports;
    std::vector<double> residuals;  ///< empty when not recorded
};

/// Integrates to time T; records t = 0 and every frame_interval.
/// Requires dt <= 0.5 / max(1, mass). Blow-up (NaN or |g| > 1e12) throws DivergedError.
Trajectory evolve(const Field& g0, const CollisionParams& p, double T, double dt, const EvolveOptions& opt = {});

struct SteadyCheck {
    double t = 0.0;
    double residual = 0.0;
    double m2 = 0.0;
};

struct SteadyProfile {
    Field field;
    double gamma = 0.0;
    double residual = 0.0;  ///< L1(w_2.5) norm of the steady residual
    double lambda = 0.0;    ///< M_2^{-1/2}
    double time = 0.0;      ///< integration time used
    std::vector<SteadyCheck> history;  ///< one entry per check, up to termination
};

struct SteadyOptions {
    double dt = 0.05;
    double max_time = 3000.0;
    double check_interval = 1.0;
    /// Dilate g0 so that 2c M_2 equals the collisional dissipation, an identity of every steady
    /// profile, and repeat at each check while the residual exceeds rebalance_above. Removes the
    /// energy mode, which otherwise relaxes at rate c*gamma only.
    bool balance_energy = true;
    double rebalance_above = 1e-3;
    /// Below that level, Aitken-extrapolate M_2 over three spans and dilate to the limit.
    bool extrapolate_energy = true;
    double extrapolation_span = 10.0;
};

class NotConvergedError : public std::runtime_error {
public:
    NotConvergedError(const std::string& what, SteadyProfile best)
        : std::runtime_error(what), best_(std::move(best)) {}
    const SteadyProfile& best() const noexcept { return best_; }

private:
    SteadyProfile best_;
};

/// Long-time integration until steady_residual < tol. gamma must lie in (0, 1).
SteadyProfile steady_profile(const CollisionParams& p, double tol, const Field& g0, const SteadyOptions& opt = {});

/// V(s) = (1 + c gamma s)^{1/gamma}, e^{cs} at gamma = 0.
double v_gamma(double s, double gamma, double c);
/// t(s) = log(1 + c gamma s) / (c gamma), s at gamma = 0.
double t_gamma(double s, double gamma, double c);
/// Inverse of t_gamma.
double s_of_t(double t, double gamma, double c);

/// g(t(s), x) = f(s, x / V(s)) / V(s).
Field to_selfsim(const Field& f, double s, double gamma, double c);
/// f(s(t), z) = V g(t, V z).
Field from_selfsim(const Field& g, double t, double gamma, double c);

/// M_2(G)^{-1/2}; throws InvalidStateError if M_2 <= 0.
double limiting_temperature(const Field& profile, Tail tail = Tail::truncate);
double limiting_temperature(const SteadyProfile& profile);

/// max |x| G(x) / (8 ||G||_{L1(w_gamma)}): the measured interpolation constant of the pointwise bound.
double pointwise_constant(const Field& G, double gamma);

}  // namespace grainkin
