#pragma once

#include <array>
#include <utility>
#include <vector>

#include "grainkin/grid.hpp"
#include "grainkin/maxwell_fourier.hpp"

// Linearization around the Maxwell profile G0: L0(h) = Q0(h, G0) + Q0(G0, h) - (1/4) d_x(x h),
// the moment projection P and decay measurements in L1(w_a).

namespace grainkin {

/// g0(x) = (2/pi)(1 - 3x^2)/(1 + x^2)^3, M_2(g0) = -2.
double g0_kernel(double x);
/// phi0(x) = g0(lambda0 x), the kernel element of L0.
double phi0(double x);

/// zeta_1 = (3/2 - x^2) M, zeta_2 = 2x M, zeta_3 = (-1 + 2x^2) M with M = e^{-x^2}/sqrt(pi).
struct ProjectionBasis {
    explicit ProjectionBasis(const VelocityGrid& grid);

    VelocityGrid grid;
    std::array<Field, 3> zeta;
    /// moments[i][j] = integral x^i zeta_j on the grid; the identity up to quadrature error.
    std::array<std::array<double, 3>, 3> moments{};
};

/// (mass, momentum, energy) by the grid rectangle rule.
std::array<double, 3> low_moments(const Field& f);

/// P f = sum_j zeta_j c_j with c solving moments * c = low_moments(f), so that P f has
/// exactly the low moments of f on the grid.
Field project_P(const Field& f);
Field project_P(const Field& f, const ProjectionBasis& basis);
/// f - P f.
Field project_Y0(const Field& f);
Field project_Y0(const Field& f, const ProjectionBasis& basis);

/// L0 with G0 = lambda0 H(lambda0 x) stored as exact samples.
class LinearizedOperator {
public:
    explicit LinearizedOperator(const VelocityGrid& grid);

    const VelocityGrid& grid() const noexcept { return G0_.grid; }
    const Field& G0() const noexcept { return G0_; }

    /// Q0(h, G0) + Q0(G0, h); throws invalid_argument on a grid mismatch.
    Field collision_part(const Field& h) const;
    /// collision_part(h) - (1/4) d_x(x h).
    Field apply(const Field& h) const;
    /// One Strang step of d_t h = L0 h: exact half drift, Heun collision step, exact half drift.
    Field step(const Field& h, double dt) const;

private:
    Field G0_;
};

/// 1 - a/4 - 2^{1-a}, the gap bound for a in (2, 3).
double gap_bound(double a);

struct GapRun {
    std::vector<std::pair<double, double>> series;  ///< (t, ||h(t)||_{L1(w_a)})
    DecayFit fit;                                   ///< fitted on t in [T/2, T]
};

/// Evolves d_t h = L0 h from h0 and fits the decay rate of ||h||_{L1(w_a)} on the tail window.
/// The flow is restricted to zero momentum (the invariant subspace where the decay holds) by
/// subtracting the zeta_1 component after every step. Requires a in (2, 3); blow-up throws
/// DivergedError.
GapRun spectral_gap_estimate(double a, const Field& h0, double T, double dt, double record_interval = 0.5);

/// Explicit constant of the interpolation ||f||_{L1(w_a)} <= C ||f||_{L2}^alpha ||f||_{L1(w_as)}^{1-alpha}:
/// (integral (1+|x|)^{(2a - 2 as (1-alpha))/alpha} dx)^{alpha/2}. Requires the exponent below -1.
double interpolation_constant(double a, double a_star, double alpha);

/// ||f||_{L2} on the grid.
double l2_norm(const Field& f);

/// Which of two candidate values a computed number lands near.
struct CandidateMatch {
    double value = 0.0;
    std::size_t index = 0;      ///< closest candidate
    double relative_gap = 0.0;  ///< |value / candidate - 1| for that candidate
    bool unique = false;        ///< within tolerance of exactly one candidate
};
CandidateMatch match_candidate(double value, const std::vector<double>& candidates, double rel_tol = 0.01);

/// I0(phi0, G0) by double quadrature with power-law tails, against {-1/lambda0^3, -4/lambda0^3}.
CandidateMatch resolve_i0_phi0_G0(const VelocityGrid& grid);
/// I0(g0, H) against {-2 log 2 - 2, -2 log 2 - 5}.
CandidateMatch resolve_i0_g0_H(const VelocityGrid& grid);

}  // namespace grainkin
