#pragma once

#include <span>
#include <vector>

namespace vlab {

// Real Fourier coefficients of a 2pi-periodic function sampled uniformly:
//   f(theta) ~ mean + sum_{k>=1} cos_coef[k-1] cos(k theta) + sin_coef[k-1] sin(k theta)
// Coefficients run k = 1 .. n/2 for n samples (the Nyquist mode, when n is
// even, lands in cos_coef with the usual halving).
struct FourierModes {
    double mean = 0.0;
    std::vector<double> cos_coef;
    std::vector<double> sin_coef;

    int modes() const { return static_cast<int>(cos_coef.size()); }
    double eval(double theta) const;
    double derivative(double theta) const;
};

// DFT of uniformly spaced samples f(2 pi j / n), j = 0..n-1.
FourierModes fourier_analyze(std::span<const double> samples);

} // namespace vlab
