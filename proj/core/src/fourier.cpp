#include "vlab/fourier.hpp"

#include <cmath>
#include <mutex>

#include <fftw3.h>

#include "vlab/errors.hpp"

namespace vlab {

double FourierModes::eval(double theta) const {
    double out = mean;
    for (std::size_t k = 0; k < cos_coef.size(); ++k) {
        const double kt = (double)(k + 1) * theta;
        out += cos_coef[k] * std::cos(kt) + sin_coef[k] * std::sin(kt);
    }
    return out;
}

double FourierModes::derivative(double theta) const {
    double out = 0.0;
    for (std::size_t k = 0; k < cos_coef.size(); ++k) {
        const double kk = (double)(k + 1);
        const double kt = kk * theta;
        out += kk * (-cos_coef[k] * std::sin(kt) + sin_coef[k] * std::cos(kt));
    }
    return out;
}

namespace {
// FFTW plan creation is not thread safe; execution of a fresh plan is fine.
std::mutex fftw_mutex;
} // namespace

FourierModes fourier_analyze(std::span<const double> samples) {
    const int n = static_cast<int>(samples.size());
    if (n < 2) throw InvalidArgument("fourier_analyze needs at least 2 samples");

    std::vector<double> in(samples.begin(), samples.end());
    std::vector<fftw_complex> out(n / 2 + 1);
    fftw_plan plan;
    {
        std::lock_guard<std::mutex> lock(fftw_mutex);
        plan = fftw_plan_dft_r2c_1d(n, in.data(), out.data(), FFTW_ESTIMATE);
    }
    fftw_execute(plan);
    {
        std::lock_guard<std::mutex> lock(fftw_mutex);
        fftw_destroy_plan(plan);
    }

    FourierModes modes;
    modes.mean = out[0][0] / n;
    const int kmax = n / 2;
    modes.cos_coef.resize(kmax);
    modes.sin_coef.resize(kmax);
    for (int k = 1; k <= kmax; ++k) {
        double scale = 2.0 / n;
        if (n % 2 == 0 && k == kmax) scale = 1.0 / n;
        modes.cos_coef[k - 1] = scale * out[k][0];
        modes.sin_coef[k - 1] = -scale * out[k][1];
    }
    return modes;
}

} // namespace vlab
