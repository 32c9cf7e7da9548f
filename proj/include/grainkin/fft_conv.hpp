#pragma once

#include <vector>

namespace grainkin {

/// Linear (zero-padded) convolution c[n] = sum_a f[a] g[n-a], n = 0..2N-2, via FFTW.
/// Plans are created with FFTW_ESTIMATE so the arithmetic is reproducible run to run.
std::vector<double> linear_convolution(const std::vector<double>& f, const std::vector<double>& g);

/// Same, for the autoconvolution of f (one forward transform).
std::vector<double> linear_autoconvolution(const std::vector<double>& f);

}  // namespace grainkin
