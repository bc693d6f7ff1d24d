#include "trisum/fourier.hpp"

#include "trisum/parallel.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace trisum {

namespace {

// e(-2*pi*i*k/N) for k in [0, N).
std::vector<cdouble> twiddle_table(std::size_t N) {
    std::vector<cdouble> w(N);
    for (std::size_t k = 0; k < N; ++k) {
        const double ang = -2.0 * std::numbers::pi * static_cast<double>(k) /
                           static_cast<double>(N);
        w[k] = cdouble(std::cos(ang), std::sin(ang));
    }
    return w;
}

template <typename T>
std::vector<cdouble> dft_impl(const std::vector<T>& f, unsigned threads) {
    const std::size_t N = f.size();
    if (N < 2) throw std::invalid_argument("dft: N >= 2 required");
    const auto w = twiddle_table(N);
    std::vector<cdouble> out(N);
    parallel_for(N, threads, [&](std::size_t r) {
        cdouble acc(0.0, 0.0);
        std::size_t idx = 0;
        for (std::size_t x = 0; x < N; ++x) {
            acc += cdouble(f[x]) * w[idx];
            idx += r;
            if (idx >= N) idx -= N;
        }
        out[r] = acc;
    });
    return out;
}

}  // namespace

std::vector<cdouble> dft(const std::vector<double>& f, unsigned threads) {
    return dft_impl(f, threads);
}

std::vector<cdouble> dft(const std::vector<cdouble>& f, unsigned threads) {
    return dft_impl(f, threads);
}

std::vector<cdouble> idft(const std::vector<cdouble>& ft, unsigned threads) {
    const std::size_t N = ft.size();
    if (N < 2) throw std::invalid_argument("idft: N >= 2 required");
    const auto w = twiddle_table(N);
    std::vector<cdouble> out(N);
    const double inv = 1.0 / static_cast<double>(N);
    parallel_for(N, threads, [&](std::size_t x) {
        cdouble acc(0.0, 0.0);
        std::size_t idx = 0;
        for (std::size_t r = 0; r < N; ++r) {
            acc += ft[r] * std::conj(w[idx]);  // conj gives e(+xr/N)
            idx += x;
            if (idx >= N) idx -= N;
        }
        out[x] = acc * inv;
    });
    return out;
}

std::vector<double> cyclic_convolve(const std::vector<double>& f, const std::vector<double>& g) {
    const std::size_t N = f.size();
    if (g.size() != N) throw std::invalid_argument("cyclic_convolve: size mismatch");
    std::vector<double> out(N, 0.0);
    for (std::size_t y = 0; y < N; ++y) {
        const double fy = f[y];
        if (fy == 0.0) continue;
        // out[y + t mod N] += f[y] * g[t]
        std::size_t x = y;
        for (std::size_t t = 0; t < N; ++t) {
            out[x] += fy * g[t];
            ++x;
            if (x == N) x = 0;
        }
    }
    return out;
}

double compensated_sum(const std::vector<double>& xs) {
    double sum = 0.0, comp = 0.0;
    for (double v : xs) {
        const double t = sum + v;
        if (std::abs(sum) >= std::abs(v))
            comp += (sum - t) + v;
        else
            comp += (v - t) + sum;
        sum = t;
    }
    return sum + comp;
}

}  // namespace trisum
