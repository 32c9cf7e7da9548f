#include "grainkin/grid.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace grainkin {

VelocityGrid::VelocityGrid(double L, std::size_t N) : L_(L), N_(N), h_(0.0) {
    if (!(L > 0.0) || !std::isfinite(L)) throw std::invalid_argument("grid half-width L must be positive");
    if (N % 2 != 0) throw std::invalid_argument("grid size N must be even");
    if (N < 4) throw std::invalid_argument("grid size N must be at least 4");
    h_ = 2.0 * L / static_cast<double>(N);
}

std::vector<double> VelocityGrid::nodes() const {
    std::vector<double> x(N_);
    for (std::size_t j = 0; j < N_; ++j) x[j] = node(j);
    return x;
}

VelocityGrid make_grid(double L, std::size_t N) { return VelocityGrid(L, N); }

FrequencyGrid::FrequencyGrid(double xi_max, std::size_t M, double xi_floor)
    : xi_max_(xi_max), M_(M), dxi_(0.0), xi_min_(0.0), first_(1) {
    if (!(xi_max > 0.0)) throw std::invalid_argument("xi_max must be positive");
    if (M < 8) throw std::invalid_argument("frequency grid needs at least 8 intervals");
    if (xi_floor < 0.0) throw std::invalid_argument("xi_min floor must be nonnegative");
    dxi_ = xi_max / static_cast<double>(M);
    xi_min_ = std::max(dxi_, xi_floor);
    first_ = static_cast<std::size_t>(std::ceil(xi_min_ / dxi_ - 1e-9));
    if (first_ < 1) first_ = 1;
    if (first_ > M_) throw std::invalid_argument("xi_min floor exceeds xi_max");
}

Field::Field(const VelocityGrid& g, std::vector<double> s) : grid(g), samples(std::move(s)) {
    if (samples.size() != grid.size()) throw std::invalid_argument("sample count does not match grid");
}

Field Field::sample(const VelocityGrid& g, const std::function<double(double)>& fn) {
    Field f(g);
    for (std::size_t j = 0; j < g.size(); ++j) f.samples[j] = fn(g.node(j));
    return f;
}

void require_same_grid(const Field& a, const Field& b, const char* what) {
    if (!(a.grid == b.grid)) throw std::invalid_argument(std::string(what) + ": fields live on different grids");
}

Field& Field::operator+=(const Field& o) {
    require_same_grid(*this, o, "field addition");
    for (std::size_t j = 0; j < samples.size(); ++j) samples[j] += o.samples[j];
    return *this;
}

Field& Field::operator-=(const Field& o) {
    require_same_grid(*this, o, "field subtraction");
    for (std::size_t j = 0; j < samples.size(); ++j) samples[j] -= o.samples[j];
    return *this;
}

Field& Field::operator*=(double a) {
    for (double& v : samples) v *= a;
    return *this;
}

Field operator+(Field a, const Field& b) { return a += b; }
Field operator-(Field a, const Field& b) { return a -= b; }
Field operator*(double a, Field f) { return f *= a; }

Field axpy(const Field& a, double s, const Field& b) {
    require_same_grid(a, b, "axpy");
    Field r(a);
    for (std::size_t j = 0; j < r.size(); ++j) r.samples[j] += s * b.samples[j];
    return r;
}

double quadrature(const Field& f) {
    double s = 0.0;
    for (double v : f.samples) s += v;
    return f.grid.spacing() * s;
}

double quadrature(const Field& f, const std::function<double(double)>& weight) {
    double s = 0.0;
    for (std::size_t j = 0; j < f.size(); ++j) s += weight(f.grid.node(j)) * f.samples[j];
    return f.grid.spacing() * s;
}

namespace {

double sample_or_zero(const std::vector<double>& v, long j) {
    if (j < 0 || j >= static_cast<long>(v.size())) return 0.0;
    return v[static_cast<std::size_t>(j)];
}

}  // namespace

double interpolate(const Field& f, double x) {
    const double L = f.grid.half_width();
    if (!(x >= -L && x < L)) return 0.0;
    const double h = f.grid.spacing();
    const double s = x / h + static_cast<double>(f.size() / 2);
    const double fl = std::floor(s);
    const long j = static_cast<long>(fl);
    const double t = s - fl;
    if (t == 0.0) return sample_or_zero(f.samples, j);
    const double fm = sample_or_zero(f.samples, j - 1);
    const double f0 = sample_or_zero(f.samples, j);
    const double f1 = sample_or_zero(f.samples, j + 1);
    const double f2 = sample_or_zero(f.samples, j + 2);
    const double wm = -t * (t - 1.0) * (t - 2.0) / 6.0;
    const double w0 = (t + 1.0) * (t - 1.0) * (t - 2.0) / 2.0;
    const double w1 = -(t + 1.0) * t * (t - 2.0) / 2.0;
    const double w2 = (t + 1.0) * t * (t - 1.0) / 6.0;
    return wm * fm + w0 * f0 + w1 * f1 + w2 * f2;
}

namespace {

// Solves (1/24)(u[j-1] + 22 u[j] + u[j+1]) = r[j] with zero padding (Thomas algorithm).
std::vector<double> solve_compact(const std::vector<double>& r) {
    const std::size_t n = r.size();
    const double a = 1.0 / 24.0, b = 22.0 / 24.0;
    std::vector<double> c(n), d(n), u(n);
    c[0] = a / b;
    d[0] = r[0] / b;
    for (std::size_t i = 1; i < n; ++i) {
        const double m = b - a * c[i - 1];
        c[i] = a / m;
        d[i] = (r[i] - a * d[i - 1]) / m;
    }
    u[n - 1] = d[n - 1];
    for (std::size_t i = n - 1; i-- > 0;) u[i] = d[i] - c[i] * u[i + 1];
    return u;
}

// Six-point Lagrange interpolation of face primitives, clamped outside.
double primitive_at(const std::vector<double>& P, double s) {
    const long n = static_cast<long>(P.size());
    if (s <= 0.0) return 0.0;
    if (s >= static_cast<double>(n - 1)) return P.back();
    const double fl = std::floor(s);
    const long k = static_cast<long>(fl);
    const double t = s - fl;
    if (t == 0.0) return P[static_cast<std::size_t>(k)];
    auto at = [&](long i) {
        if (i < 0) return 0.0;
        if (i >= n) return P.back();
        return P[static_cast<std::size_t>(i)];
    };
    double acc = 0.0;
    for (long i = -2; i <= 3; ++i) {
        double w = 1.0;
        const double ti = static_cast<double>(i);
        for (long m = -2; m <= 3; ++m) {
            if (m == i) continue;
            const double tm = static_cast<double>(m);
            w *= (t - tm) / (ti - tm);
        }
        acc += w * at(k + i);
    }
    return acc;
}

}  // namespace

Field affine_remap(const Field& f, double scale, double shift) {
    if (!(scale > 0.0)) throw std::invalid_argument("remap scale must be positive");
    const std::size_t N = f.size();
    const double h = f.grid.spacing();
    // Point values -> cell averages: (1 + d2/24) applied to samples.
    std::vector<double> avg(N);
    for (std::size_t j = 0; j < N; ++j) {
        const double fm = j > 0 ? f.samples[j - 1] : 0.0;
        const double fp = j + 1 < N ? f.samples[j + 1] : 0.0;
        avg[j] = f.samples[j] + (fp - 2.0 * f.samples[j] + fm) / 24.0;
    }
    // Face primitive: P[k] = integral up to face k at x_k - h/2.
    std::vector<double> P(N + 1);
    P[0] = 0.0;
    for (std::size_t j = 0; j < N; ++j) P[j + 1] = P[j] + h * avg[j];
    // Face k sits at x_0 - h/2 + k h; position y maps to fractional face index.
    const double y0 = f.grid.node(0) - 0.5 * h;
    auto face_index = [&](double y) { return (y - y0) / h; };
    std::vector<double> Pm(N + 1);
    for (std::size_t k = 0; k <= N; ++k) {
        const double y = scale * (y0 + static_cast<double>(k) * h) + shift;
        Pm[k] = primitive_at(P, face_index(y));
    }
    std::vector<double> navg(N);
    for (std::size_t j = 0; j < N; ++j) navg[j] = (Pm[j + 1] - Pm[j]) / h;
    Field out(f.grid, solve_compact(navg));
    return out;
}

Field derivative4(const Field& f) {
    const std::size_t N = f.size();
    const double h = f.grid.spacing();
    auto at = [&](long j) { return sample_or_zero(f.samples, j); };
    Field d(f.grid);
    for (std::size_t j = 0; j < N; ++j) {
        const long i = static_cast<long>(j);
        d.samples[j] = (-at(i + 2) + 8.0 * at(i + 1) - 8.0 * at(i - 1) + at(i - 2)) / (12.0 * h);
    }
    return d;
}

double max_abs(const Field& f) {
    double m = 0.0;
    for (double v : f.samples) m = std::max(m, std::abs(v));
    return m;
}

double max_abs_diff(const Field& a, const Field& b) {
    require_same_grid(a, b, "max_abs_diff");
    double m = 0.0;
    for (std::size_t j = 0; j < a.size(); ++j) m = std::max(m, std::abs(a.samples[j] - b.samples[j]));
    return m;
}

}  // namespace grainkin
