#pragma once

#include "hawkes/types.hpp"

#include <complex>
#include <vector>

namespace hawkes::fft {

/// In-order complex DFT, X_m = sum_k x_k e^{-2*pi*i*m*k/N}. Arbitrary N.
std::vector<Complex> dft(const std::vector<Complex>& x);

/// Inverse of dft(): x_k = (1/N) sum_m X_m e^{+2*pi*i*m*k/N}.
std::vector<Complex> idft(const std::vector<Complex>& X);

/// Linear (non-circular) cross-correlation of mean-preserved real series:
/// out[k] = sum_{m} x[m] * y[m+k] for k = 0..max_lag, computed with a
/// zero-padded real FFT. x and y must have equal length.
std::vector<double> cross_correlation(const std::vector<double>& x,
                                      const std::vector<double>& y,
                                      int max_lag);

/// Smallest 5-smooth integer >= n (FFT-friendly transform length).
std::size_t next_fast_len(std::size_t n);

} // namespace hawkes::fft
