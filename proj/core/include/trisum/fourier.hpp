#pragma once

#include <complex>
#include <cstdint>
#include <vector>

namespace trisum {

using cdouble = std::complex<double>;

// Direct-definition DFT over Z_N:  f~(r) = sum_x f(x) e(-xr/N).
// O(N^2); this is the reference evaluation, deliberately unoptimized.
std::vector<cdouble> dft(const std::vector<double>& f, unsigned threads = 1);
std::vector<cdouble> dft(const std::vector<cdouble>& f, unsigned threads = 1);

// Inverse:  f(x) = (1/N) sum_r f~(r) e(+xr/N).
std::vector<cdouble> idft(const std::vector<cdouble>& ft, unsigned threads = 1);

// Cyclic convolution (f*g)(x) = sum_y f(y) g(x-y), direct evaluation.
std::vector<double> cyclic_convolve(const std::vector<double>& f, const std::vector<double>& g);

// Neumaier-compensated sum; deterministic sequential order.
double compensated_sum(const std::vector<double>& xs);

}  // namespace trisum
