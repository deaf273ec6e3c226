#include "hawkes/fft.hpp"

#include <fftw3.h>

#include <cstring>
#include <mutex>

namespace hawkes::fft {

namespace {

// FFTW plan creation is not thread safe; execution on distinct buffers is.
std::mutex& planner_mutex() {
    static std::mutex m;
    return m;
}

std::vector<Complex> transform(const std::vector<Complex>& x, int sign) {
    const auto n = x.size();
    std::vector<Complex> out(n);
    if (n == 0) return out;
    std::vector<Complex> in(x);
    fftw_plan plan;
    {
        std::lock_guard<std::mutex> lock(planner_mutex());
        plan = fftw_plan_dft_1d(static_cast<int>(n),
                                reinterpret_cast<fftw_complex*>(in.data()),
                                reinterpret_cast<fftw_complex*>(out.data()),
                                sign, FFTW_ESTIMATE);
    }
    fftw_execute(plan);
    {
        std::lock_guard<std::mutex> lock(planner_mutex());
        fftw_destroy_plan(plan);
    }
    return out;
}

} // namespace

std::vector<Complex> dft(const std::vector<Complex>& x) {
    return transform(x, FFTW_FORWARD);
}

std::vector<Complex> idft(const std::vector<Complex>& X) {
    auto out = transform(X, FFTW_BACKWARD);
    const double inv = X.empty() ? 1.0 : 1.0 / static_cast<double>(X.size());
    for (auto& v : out) v *= inv;
    return out;
}

std::size_t next_fast_len(std::size_t n) {
    if (n <= 1) return 1;
    std::size_t best = 1;
    while (best < n) best <<= 1; // power-of-two fallback bound
    for (std::size_t f5 = 1; f5 < best; f5 *= 5) {
        for (std::size_t f35 = f5; f35 < best; f35 *= 3) {
            std::size_t m = f35;
            while (m < n) m <<= 1;
            if (m < best) best = m;
        }
    }
    return best;
}

std::vector<double> cross_correlation(const std::vector<double>& x,
                                      const std::vector<double>& y,
                                      int max_lag) {
    const std::size_t m = x.size();
    const std::size_t len = next_fast_len(m + static_cast<std::size_t>(max_lag) + 1);
    const std::size_t nc = len / 2 + 1;

    double* bx = fftw_alloc_real(len);
    double* by = fftw_alloc_real(len);
    fftw_complex* fx = fftw_alloc_complex(nc);
    fftw_complex* fy = fftw_alloc_complex(nc);

    std::memset(bx, 0, len * sizeof(double));
    std::memset(by, 0, len * sizeof(double));
    std::memcpy(bx, x.data(), m * sizeof(double));
    std::memcpy(by, y.data(), m * sizeof(double));

    fftw_plan px, py, pinv;
    {
        std::lock_guard<std::mutex> lock(planner_mutex());
        px = fftw_plan_dft_r2c_1d(static_cast<int>(len), bx, fx, FFTW_ESTIMATE);
        py = fftw_plan_dft_r2c_1d(static_cast<int>(len), by, fy, FFTW_ESTIMATE);
    }
    fftw_execute(px);
    fftw_execute(py);

    // spectrum of sum_m x[m] y[m+k]: conj(X) * Y
    for (std::size_t i = 0; i < nc; ++i) {
        const Complex a(fx[i][0], -fx[i][1]);
        const Complex b(fy[i][0], fy[i][1]);
        const Complex c = a * b;
        fx[i][0] = c.real();
        fx[i][1] = c.imag();
    }
    {
        std::lock_guard<std::mutex> lock(planner_mutex());
        pinv = fftw_plan_dft_c2r_1d(static_cast<int>(len), fx, bx, FFTW_ESTIMATE);
    }
    fftw_execute(pinv);

    std::vector<double> out(static_cast<std::size_t>(max_lag) + 1);
    const double inv = 1.0 / static_cast<double>(len);
    for (int k = 0; k <= max_lag; ++k) out[static_cast<std::size_t>(k)] = bx[k] * inv;

    {
        std::lock_guard<std::mutex> lock(planner_mutex());
        fftw_destroy_plan(px);
        fftw_destroy_plan(py);
        fftw_destroy_plan(pinv);
    }
    fftw_free(bx);
    fftw_free(by);
    fftw_free(fx);
    fftw_free(fy);
    return out;
}

} // namespace hawkes::fft
