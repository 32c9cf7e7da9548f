#include "grainkin/kernels.hpp"

#include <omp.h>

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <numbers>
#include <string>

namespace grainkin::kernels {

namespace {

// Row kernels are kept out of line so the serial and parallel drivers run the
// same machine code (no call-site-dependent contraction into FMAs).

// Row i of the gain sum. g is passed reversed (gr[N-1-j] = g[j]) so that all
// three operands stream forward and the loop vectorizes.
[[gnu::noinline]] double gain_row(const double* f, const double* gr, const double* w, long N, long i) {
    const long kmax = std::min(i, N - 1 - i);
    // k = 0 term, then +/-k pairs.
    double acc = f[i] * gr[N - 1 - i] * w[0];
    const double* fp = f + i;
    const double* gp = gr + (N - 1 - i);
    double sp = 0.0, sm = 0.0;
    for (long k = 1; k <= kmax; ++k) sp += fp[k] * gp[k] * w[k];
    for (long k = 1; k <= kmax; ++k) sm += fp[-k] * gp[-k] * w[k];
    return acc + sp + sm;
}

// Row m of the odd-separation sum: pairs (m+1+j, m-j) and (m-j, m+1+j).
[[gnu::noinline]] double odd_gain_row(const double* f, const double* gr, const double* w, long N, long m) {
    const long jmax = std::min(m, N - 2 - m);
    const double* fa = f + m + 1;       // f[m+1+j]
    const double* gb = gr + (N - 1 - m);  // g[m-j]
    const double* fb = f + m;           // f[m-j], walked backwards
    const double* ga = gr + (N - 2 - m);  // g[m+1+j], walked backwards
    double up = 0.0, down = 0.0;
    for (long j = 0; j <= jmax; ++j) up += fa[j] * gb[j] * w[j];
    for (long j = 0; j <= jmax; ++j) down += fb[-j] * ga[-j] * w[j];
    return up + down;
}

[[gnu::noinline]] double toeplitz_row(const double* g, const double* w, long N, long i) {
    double acc = g[i] * w[0];
    double right = 0.0, left = 0.0;
    for (long d = 1; d < N - i; ++d) right += g[i + d] * w[d];
    for (long d = 1; d <= i; ++d) left += g[i - d] * w[d];
    return acc + right + left;
}

std::vector<double> reversed(const std::vector<double>& g) { return std::vector<double>(g.rbegin(), g.rend()); }

[[gnu::noinline]] std::complex<double> dft_row(const std::vector<double>& f, double x0, double h, double xi) {
    // Rotation recurrence would drift; direct sincos keeps every term exact to rounding.
    double re = 0.0, im = 0.0;
    const std::size_t n = f.size();
    for (std::size_t j = 0; j < n; ++j) {
        if (f[j] == 0.0) continue;
        const double arg = (x0 + static_cast<double>(j) * h) * xi;
        re += f[j] * std::cos(arg);
        im -= f[j] * std::sin(arg);
    }
    return {h * re, h * im};
}

[[gnu::noinline]] double idft_row(const std::vector<std::complex<double>>& phi, double dxi, double x) {
    const std::size_t M = phi.size() - 1;
    double acc = 0.5 * phi[0].real();
    for (std::size_t m = 1; m <= M; ++m) {
        const double arg = x * static_cast<double>(m) * dxi;
        const double c = m == M ? 0.5 : 1.0;
        acc += c * (phi[m].real() * std::cos(arg) - phi[m].imag() * std::sin(arg));
    }
    return acc * dxi / std::numbers::pi;
}

}  // namespace

std::vector<double> gain_sum(const std::vector<double>& f, const std::vector<double>& g,
                             const std::vector<double>& w) {
    const long N = static_cast<long>(f.size());
    const std::vector<double> gr = reversed(g);
    std::vector<double> out(f.size());
#pragma omp parallel for schedule(dynamic, 64)
    for (long i = 0; i < N; ++i) out[i] = gain_row(f.data(), gr.data(), w.data(), N, i);
    return out;
}

std::vector<double> odd_gain_sum(const std::vector<double>& f, const std::vector<double>& g,
                                 const std::vector<double>& w) {
    const long N = static_cast<long>(f.size());
    if (N < 2) return {};
    const std::vector<double> gr = reversed(g);
    std::vector<double> out(f.size() - 1);
#pragma omp parallel for schedule(dynamic, 64)
    for (long m = 0; m < N - 1; ++m) out[m] = odd_gain_row(f.data(), gr.data(), w.data(), N, m);
    return out;
}

std::vector<double> toeplitz_sum(const std::vector<double>& g, const std::vector<double>& w) {
    const long N = static_cast<long>(g.size());
    std::vector<double> out(g.size());
#pragma omp parallel for schedule(static)
    for (long i = 0; i < N; ++i) out[i] = toeplitz_row(g.data(), w.data(), N, i);
    return out;
}

double pair_sum(const std::vector<double>& f, const std::vector<double>& g, const std::vector<double>& w) {
    const std::vector<double> t = toeplitz_sum(g, w);
    double s = 0.0;
    for (std::size_t i = 0; i < f.size(); ++i) s += f[i] * t[i];
    return s;
}

std::vector<std::complex<double>> forward_dft(const std::vector<double>& f, double x0, double h,
                                              const std::vector<double>& xi) {
    const long M = static_cast<long>(xi.size());
    std::vector<std::complex<double>> out(xi.size());
#pragma omp parallel for schedule(static)
    for (long m = 0; m < M; ++m) out[m] = dft_row(f, x0, h, xi[m]);
    return out;
}

std::vector<double> inverse_dft(const std::vector<std::complex<double>>& phi, double dxi, double x0, double h,
                                std::size_t n) {
    const long N = static_cast<long>(n);
    std::vector<double> out(n);
#pragma omp parallel for schedule(static)
    for (long j = 0; j < N; ++j) out[j] = idft_row(phi, dxi, x0 + static_cast<double>(j) * h);
    return out;
}

void configure_threads() {
    int n = omp_get_num_procs();
    if (const char* env = std::getenv("GRAINKIN_THREADS")) {
        const int cap = std::atoi(env);
        if (cap > 0) n = std::min(n, cap);
    }
    omp_set_num_threads(std::max(1, n));
}

namespace serial {

std::vector<double> gain_sum(const std::vector<double>& f, const std::vector<double>& g,
                             const std::vector<double>& w) {
    const long N = static_cast<long>(f.size());
    const std::vector<double> gr = reversed(g);
    std::vector<double> out(f.size());
    for (long i = 0; i < N; ++i) out[i] = gain_row(f.data(), gr.data(), w.data(), N, i);
    return out;
}

std::vector<double> odd_gain_sum(const std::vector<double>& f, const std::vector<double>& g,
                                 const std::vector<double>& w) {
    const long N = static_cast<long>(f.size());
    if (N < 2) return {};
    const std::vector<double> gr = reversed(g);
    std::vector<double> out(f.size() - 1);
    for (long m = 0; m < N - 1; ++m) out[m] = odd_gain_row(f.data(), gr.data(), w.data(), N, m);
    return out;
}

std::vector<double> toeplitz_sum(const std::vector<double>& g, const std::vector<double>& w) {
    const long N = static_cast<long>(g.size());
    std::vector<double> out(g.size());
    for (long i = 0; i < N; ++i) out[i] = toeplitz_row(g.data(), w.data(), N, i);
    return out;
}

double pair_sum(const std::vector<double>& f, const std::vector<double>& g, const std::vector<double>& w) {
    const std::vector<double> t = toeplitz_sum(g, w);
    double s = 0.0;
    for (std::size_t i = 0; i < f.size(); ++i) s += f[i] * t[i];
    return s;
}

std::vector<std::complex<double>> forward_dft(const std::vector<double>& f, double x0, double h,
                                              const std::vector<double>& xi) {
    std::vector<std::complex<double>> out(xi.size());
    for (std::size_t m = 0; m < xi.size(); ++m) out[m] = dft_row(f, x0, h, xi[m]);
    return out;
}

std::vector<double> inverse_dft(const std::vector<std::complex<double>>& phi, double dxi, double x0, double h,
                                std::size_t n) {
    std::vector<double> out(n);
    for (std::size_t j = 0; j < n; ++j) out[j] = idft_row(phi, dxi, x0 + static_cast<double>(j) * h);
    return out;
}

}  // namespace serial

}  // namespace grainkin::kernels
