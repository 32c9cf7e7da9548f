#include "grainkin/fft_conv.hpp"

#include <fftw3.h>

#include <algorithm>
#include <complex>
#include <map>
#include <memory>
#include <mutex>
#include <stdexcept>

namespace grainkin {

namespace {

struct PlanPair {
    std::size_t n = 0;
    double* real = nullptr;
    fftw_complex* spectrum = nullptr;
    fftw_plan forward = nullptr;
    fftw_plan backward = nullptr;

    explicit PlanPair(std::size_t size) : n(size) {
        real = fftw_alloc_real(n);
        spectrum = fftw_alloc_complex(n / 2 + 1);
        if (!real || !spectrum) throw std::bad_alloc();
        forward = fftw_plan_dft_r2c_1d(static_cast<int>(n), real, spectrum, FFTW_ESTIMATE);
        backward = fftw_plan_dft_c2r_1d(static_cast<int>(n), spectrum, real, FFTW_ESTIMATE);
    }
    ~PlanPair() {
        fftw_destroy_plan(forward);
        fftw_destroy_plan(backward);
        fftw_free(real);
        fftw_free(spectrum);
    }
    PlanPair(const PlanPair&) = delete;
    PlanPair& operator=(const PlanPair&) = delete;
};

// FFTW planning is not thread safe; execution on new-array interfaces is.
std::mutex plan_mutex;

std::size_t padded_size(std::size_t n) {
    std::size_t p = 1;
    while (p < 2 * n) p <<= 1;
    return p;
}

PlanPair& plans_for(std::size_t size) {
    thread_local std::map<std::size_t, std::unique_ptr<PlanPair>> cache;
    auto it = cache.find(size);
    if (it != cache.end()) return *it->second;
    std::lock_guard<std::mutex> lock(plan_mutex);
    auto pp = std::make_unique<PlanPair>(size);
    PlanPair& ref = *pp;
    cache.emplace(size, std::move(pp));
    return ref;
}

using Spectrum = std::vector<std::complex<double>>;

Spectrum transform(PlanPair& p, const std::vector<double>& x) {
    std::fill(p.real, p.real + p.n, 0.0);
    std::copy(x.begin(), x.end(), p.real);
    fftw_execute(p.forward);
    Spectrum out(p.n / 2 + 1);
    for (std::size_t k = 0; k < out.size(); ++k) out[k] = {p.spectrum[k][0], p.spectrum[k][1]};
    return out;
}

void load(PlanPair& p, const Spectrum& s) {
    for (std::size_t k = 0; k < s.size(); ++k) {
        p.spectrum[k][0] = s[k].real();
        p.spectrum[k][1] = s[k].imag();
    }
}

std::vector<double> finish(PlanPair& p, std::size_t count) {
    fftw_execute(p.backward);
    std::vector<double> c(count);
    const double scale = 1.0 / static_cast<double>(p.n);
    for (std::size_t i = 0; i < count; ++i) c[i] = p.real[i] * scale;
    return c;
}

}  // namespace

std::vector<double> linear_convolution(const std::vector<double>& f, const std::vector<double>& g) {
    if (f.size() != g.size() || f.empty()) throw std::invalid_argument("convolution operands must match");
    PlanPair& p = plans_for(padded_size(f.size()));
    Spectrum fh = transform(p, f);
    const Spectrum gh = transform(p, g);
    for (std::size_t k = 0; k < fh.size(); ++k) fh[k] *= gh[k];
    load(p, fh);
    return finish(p, 2 * f.size() - 1);
}

std::vector<double> linear_autoconvolution(const std::vector<double>& f) {
    if (f.empty()) throw std::invalid_argument("convolution operand is empty");
    PlanPair& p = plans_for(padded_size(f.size()));
    Spectrum fh = transform(p, f);
    for (auto& v : fh) v *= v;
    load(p, fh);
    return finish(p, 2 * f.size() - 1);
}

}  // namespace grainkin
