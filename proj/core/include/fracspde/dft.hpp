#pragma once

#include <complex>
#include <vector>

namespace fracspde::dft {

// In-place complex DFT over a row-major array with the given dimensions
// (rank 1..3). sign = -1: forward (unnormalized), sign = +1: backward.
// Plans are cached per (dims, sign) behind a mutex; execution is thread-safe
// on distinct buffers.
void transform(std::vector<std::complex<double>>& data,
               const std::vector<int>& dims, int sign);

// Linear (zero-padded) convolution c[n] = sum_m a[m] b[n-m] of two complex
// sequences, via FFT. Result length is a.size() + b.size() - 1.
std::vector<std::complex<double>> convolve(
    const std::vector<std::complex<double>>& a,
    const std::vector<std::complex<double>>& b);

} // namespace fracspde::dft
