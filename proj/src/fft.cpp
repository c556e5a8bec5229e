#include "fft.hpp"

#include <algorithm>
#include <new>

#include "slowlight/units.hpp"

namespace slowlight::detail {

Fft::Fft(std::size_t n) : n_(n)
{
    buffer_ = fftw_alloc_complex(n);
    if (buffer_ == nullptr) throw std::bad_alloc();
    const int size = static_cast<int>(n);
    forward_ = fftw_plan_dft_1d(size, buffer_, buffer_, FFTW_FORWARD, FFTW_ESTIMATE);
    backward_ = fftw_plan_dft_1d(size, buffer_, buffer_, FFTW_BACKWARD, FFTW_ESTIMATE);
}

Fft::~Fft()
{
    fftw_destroy_plan(forward_);
    fftw_destroy_plan(backward_);
    fftw_free(buffer_);
}

void Fft::execute(fftw_plan plan, std::vector<std::complex<double>>& data, double scale)
{
    auto* raw = reinterpret_cast<std::complex<double>*>(buffer_);
    std::copy(data.begin(), data.end(), raw);
    fftw_execute(plan);
    for (std::size_t i = 0; i < n_; ++i) data[i] = raw[i] * scale;
}

void Fft::forward(std::vector<std::complex<double>>& data) { execute(forward_, data, 1.0); }

void Fft::backward(std::vector<std::complex<double>>& data)
{
    execute(backward_, data, 1.0 / static_cast<double>(n_));
}

std::vector<double> wavenumbers(std::size_t n, double period)
{
    std::vector<double> k(n);
    const double base = two_pi / period;
    for (std::size_t m = 0; m < n; ++m) {
        const auto signed_m = m < (n + 1) / 2 ? static_cast<double>(m) : static_cast<double>(m) - static_cast<double>(n);
        k[m] = base * signed_m;
    }
    return k;
}

}  // namespace slowlight::detail
