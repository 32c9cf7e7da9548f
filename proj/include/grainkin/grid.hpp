#pragma once

#include <cstddef>
#include <functional>
#include <vector>

namespace grainkin {

/// Uniform velocity grid x_j = (j - N/2) h, j = 0..N-1, h = 2L/N.
class VelocityGrid {
public:
    VelocityGrid(double L, std::size_t N);

    double half_width() const noexcept { return L_; }
    std::size_t size() const noexcept { return N_; }
    double spacing() const noexcept { return h_; }
    double node(std::size_t j) const noexcept {
        return (static_cast<double>(j) - static_cast<double>(N_ / 2)) * h_;
    }
    std::vector<double> nodes() const;

    bool operator==(const VelocityGrid& o) const noexcept { return L_ == o.L_ && N_ == o.N_; }

private:
    double L_;
    std::size_t N_;
    double h_;
};

/// Throws std::invalid_argument unless L > 0, N even and N >= 4.
VelocityGrid make_grid(double L, std::size_t N);

/// Nonnegative frequency half-axis xi_m = m xi_max / M, m = 0..M.
class FrequencyGrid {
public:
    FrequencyGrid(double xi_max, std::size_t M, double xi_floor = 0.0);

    double xi_max() const noexcept { return xi_max_; }
    std::size_t intervals() const noexcept { return M_; }
    std::size_t size() const noexcept { return M_ + 1; }
    double spacing() const noexcept { return dxi_; }
    double node(std::size_t m) const noexcept { return static_cast<double>(m) * dxi_; }
    /// Smallest frequency admitted by sup-norms.
    double xi_min() const noexcept { return xi_min_; }
    /// First node index with node >= xi_min.
    std::size_t first_admitted() const noexcept { return first_; }
    FrequencyGrid with_floor(double xi_floor) const { return FrequencyGrid(xi_max_, M_, xi_floor); }

    bool operator==(const FrequencyGrid& o) const noexcept {
        return xi_max_ == o.xi_max_ && M_ == o.M_;
    }

private:
    double xi_max_;
    std::size_t M_;
    double dxi_;
    double xi_min_;
    std::size_t first_;
};

/// Real samples of a function on a VelocityGrid.
struct Field {
    VelocityGrid grid;
    std::vector<double> samples;

    explicit Field(const VelocityGrid& g) : grid(g), samples(g.size(), 0.0) {}
    Field(const VelocityGrid& g, std::vector<double> s);

    static Field sample(const VelocityGrid& g, const std::function<double(double)>& fn);

    std::size_t size() const noexcept { return samples.size(); }
    double operator[](std::size_t j) const noexcept { return samples[j]; }
    double& operator[](std::size_t j) noexcept { return samples[j]; }

    Field& operator+=(const Field& o);
    Field& operator-=(const Field& o);
    Field& operator*=(double a);
};

Field operator+(Field a, const Field& b);
Field operator-(Field a, const Field& b);
Field operator*(double a, Field f);
/// a + s*b
Field axpy(const Field& a, double s, const Field& b);

void require_same_grid(const Field& a, const Field& b, const char* what);

/// h * sum of samples.
double quadrature(const Field& f);
/// h * sum of w(x_j) f_j.
double quadrature(const Field& f, const std::function<double(double)>& weight);

/// Four-point Lagrange interpolation; zero outside the sampled interval [-L, L), zero padding near the ends.
double interpolate(const Field& f, double x);

/// Mass-conservative affine remap: returns x -> scale * f(scale * x + shift).
/// Cell averages are reconstructed with a fourth-order compact scheme, the
/// primitive is interpolated at the mapped cell faces, and differenced back.
Field affine_remap(const Field& f, double scale, double shift);

/// x -> lambda f(lambda x), conserving mass.
inline Field dilate(const Field& f, double lambda) { return affine_remap(f, lambda, 0.0); }

/// Fourth-order centered derivative with zero padding.
Field derivative4(const Field& f);

double max_abs(const Field& f);
double max_abs_diff(const Field& a, const Field& b);

}  // namespace grainkin
