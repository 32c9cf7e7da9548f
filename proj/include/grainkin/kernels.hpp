#pragma once

#include <complex>
#include <vector>

// Dense O(N^2) and O(N M) loops behind the collision operator and the
// quadrature Fourier transforms. Each kernel has an OpenMP version
// parallelized over output rows and a serial reference with the same
// per-row arithmetic order, so both give bitwise identical results.

namespace grainkin::kernels {

/// out[i] = sum_k f[i+k] g[i-k] w[|k|] over all k keeping both indices in range.
std::vector<double> gain_sum(const std::vector<double>& f, const std::vector<double>& g,
                             const std::vector<double>& w);

/// out[m] = sum_j (f[m+1+j] g[m-j] + f[m-j] g[m+1+j]) w[j], m = 0..N-2: pairs whose
/// midpoint is x_m + h/2, with w[j] the weight of separation 2j+1.
std::vector<double> odd_gain_sum(const std::vector<double>& f, const std::vector<double>& g,
                                 const std::vector<double>& w);

/// out[i] = sum_j g[j] w[|i-j|].
std::vector<double> toeplitz_sum(const std::vector<double>& g, const std::vector<double>& w);

/// sum_i f[i] sum_j g[j] w[|i-j|].
double pair_sum(const std::vector<double>& f, const std::vector<double>& g, const std::vector<double>& w);

/// out[m] = h sum_j f[j] exp(-i x_j xi[m]), x_j = x0 + j h.
std::vector<std::complex<double>> forward_dft(const std::vector<double>& f, double x0, double h,
                                              const std::vector<double>& xi);

/// out[j] = (dxi/pi) sum_m c_m Re(phi[m] exp(i x_j xi_m)), trapezoid weights c_0 = c_M = 1/2.
std::vector<double> inverse_dft(const std::vector<std::complex<double>>& phi, double dxi, double x0, double h,
                                std::size_t n);

/// Sets the number of OpenMP threads, capped by GRAINKIN_THREADS when set.
void configure_threads();

namespace serial {
std::vector<double> gain_sum(const std::vector<double>& f, const std::vector<double>& g,
                             const std::vector<double>& w);
std::vector<double> odd_gain_sum(const std::vector<double>& f, const std::vector<double>& g,
                                 const std::vector<double>& w);
std::vector<double> toeplitz_sum(const std::vector<double>& g, const std::vector<double>& w);
double pair_sum(const std::vector<double>& f, const std::vector<double>& g, const std::vector<double>& w);
std::vector<std::complex<double>> forward_dft(const std::vector<double>& f, double x0, double h,
                                              const std::vector<double>& xi);
std::vector<double> inverse_dft(const std::vector<std::complex<double>>& phi, double dxi, double x0, double h,
                                std::size_t n);
}  // namespace serial

}  // namespace grainkin::kernels
