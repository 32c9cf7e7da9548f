#pragma once

#include <functional>
#include <utility>
#include <vector>

#include "grainkin/grid.hpp"
#include "grainkin/tail.hpp"

namespace grainkin {

/// Kernel exponent gamma and drift constant c (restitution fixed at a = 1/2).
struct CollisionParams {
    double gamma = 0.0;
    double c = 0.25;

    /// Accepts gamma in [0, 1]; the endpoint is kept for kernel diagnostics.
    explicit CollisionParams(double gamma = 0.0, double c = 0.25);
};

struct MomentReport {
    double mass = 0.0;
    double momentum = 0.0;
    double energy = 0.0;
    std::vector<std::pair<double, double>> fractional;  ///< (s, M_s)
    std::vector<std::pair<double, double>> weighted;    ///< (a, ||f||_{L1(w_a)})
};

enum class GainPath { automatic, direct, fft };

/// x -> 2^{1+gamma} * integral f(x+u) g(x-u) |u|^gamma du, as the midpoint deposit of all
/// grid pairs (a, b) with weight h^2 f_a g_b |x_a - x_b|^gamma.
Field q_plus(const Field& f, const Field& g, const CollisionParams& p, GainPath path = GainPath::automatic);
/// x -> f(x) * integral g(y) |x-y|^gamma dy.
Field q_minus(const Field& f, const Field& g, const CollisionParams& p);
/// q_plus - q_minus.
Field collision_operator(const Field& f, const Field& g, const CollisionParams& p);

/// Half the double integral of f(x) g(y) [2 phi((x+y)/2) - phi(x) - phi(y)] |x-y|^gamma.
double weak_apply(const Field& f, const Field& g, const std::function<double(double)>& phi,
                  const CollisionParams& p, Tail tail = Tail::truncate);

/// Sigma_gamma(y) = integral |x-y|^gamma f(x) dx on the grid.
Field collision_freq(const Field& f, double gamma);

double moment(const Field& f, double s, Tail tail = Tail::truncate);
double weighted_norm(const Field& f, double a, Tail tail = Tail::truncate);
MomentReport moment_report(const Field& f, const std::vector<double>& s_list, const std::vector<double>& a_list,
                           Tail tail = Tail::truncate);

/// (r^gamma - 1)/gamma, log r at gamma = 0.
double lambda_gamma_fn(double r, double gamma);

/// Double integral of f(x) g(y) |x-y|^2 log|x-y| (diagonal cell omitted), symmetrized.
double i0_functional(const Field& f, const Field& g, Tail tail = Tail::truncate);
/// Same with |x-y|^2 Lambda_gamma(|x-y|); falls back to I0 at gamma = 0.
double i_gamma_functional(const Field& f, const Field& g, double gamma, Tail tail = Tail::truncate);

/// Double integral of f(x) g(y) |x-y|^{gamma+2} by the rectangle rule.
double dissipation_integral(const Field& f, const Field& g, double gamma);

/// w[d] = kernel(d h) for d = 0..N-1; w[0] = kernel(0).
std::vector<double> kernel_table(const VelocityGrid& grid, const std::function<double(double)>& kernel);

}  // namespace grainkin
