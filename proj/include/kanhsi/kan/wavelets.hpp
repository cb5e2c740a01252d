#pragma once

#include <string>
#include <string_view>

namespace kanhsi::kan {

enum class MotherWavelet { MexicanHat, Morlet, DoG };

/// psi(z) and d psi / dz.
struct WaveletSample {
    double value;
    double derivative;
};

/// (2 / (sqrt(3) pi^(1/4))) (1 - z^2) exp(-z^2 / 2)
WaveletSample mexican_hat(double z) noexcept;
/// Real Morlet cos(5 z) exp(-z^2 / 2). The centre frequency is fixed.
WaveletSample morlet(double z) noexcept;
/// Derivative of Gaussian, -z exp(-z^2 / 2).
WaveletSample dog(double z) noexcept;

WaveletSample evaluate(MotherWavelet mother, double z) noexcept;

inline constexpr double kMorletOmega0 = 5.0;

std::string to_string(MotherWavelet mother);
/// Accepts "mexican_hat", "morlet", "dog". Throws InputError otherwise.
MotherWavelet parse_mother_wavelet(std::string_view name);

}  // namespace kanhsi::kan
