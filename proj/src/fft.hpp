// fft.hpp - RAII wrapper around a pair of FFTW plans (internal)

#pragma once

#include <complex>
#include <cstddef>
#include <vector>

#include <fftw3.h>

namespace slowlight::detail {

class Fft {
public:
    explicit Fft(std::size_t n);
    ~Fft();
    Fft(const Fft&) = delete;
    Fft& operator=(const Fft&) = delete;

    /// Unnormalized forward transform in place.
    void forward(std::vector<std::complex<double>>& data);
    /// Inverse transform in place, normalized by 1/n.
    void backward(std::vector<std::complex<double>>& data);

    std::size_t size() const { return n_; }

private:
    void execute(fftw_plan plan, std::vector<std::complex<double>>& data, double scale);

    std::size_t n_;
    fftw_complex* buffer_;
    fftw_plan forward_;
    fftw_plan backward_;
};

/// Angular wavenumbers 2 pi m / period in FFT order.
std::vector<double> wavenumbers(std::size_t n, double period);

}  // namespace slowlight::detail
