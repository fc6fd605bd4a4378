#pragma once

#include <complex>
#include <vector>

namespace heatlab {

// In-place iterative radix-2 FFT (forward: e^{-2*pi*i*jk/n}).
// n must be a power of two.
void fft(std::vector<std::complex<double>>& a, bool inverse = false);

}  // namespace heatlab
