#include "kanhsi/kan/wavelets.hpp"

#include <cmath>
#include <numbers>

#include "kanhsi/errors.hpp"

namespace kanhsi::kan {

namespace {

// 2 / (sqrt(3) * pi^(1/4))
const double kMexicanHatNorm = 2.0 / (std::sqrt(3.0) * std::pow(std::numbers::pi, 0.25));

}  // namespace

WaveletSample mexican_hat(double z) noexcept {
    const double z2 = z * z;
    const double g = kMexicanHatNorm * std::exp(-0.5 * z2);
    return {g * (1.0 - z2), g * z * (z2 - 3.0)};
}

WaveletSample morlet(double z) noexcept {
    const double g = std::exp(-0.5 * z * z);
    const double c = std::cos(kMorletOmega0 * z);
    const double s = std::sin(kMorletOmega0 * z);
    return {c * g, -g * (kMorletOmega0 * s + z * c)};
}

WaveletSample dog(double z) noexcept {
    const double g = std::exp(-0.5 * z * z);
    return {-z * g, (z * z - 1.0) * g};
}

WaveletSample evaluate(MotherWavelet mother, double z) noexcept {
    switch (mother) {
        case MotherWavelet::MexicanHat:
            return mexican_hat(z);
        case MotherWavelet::Morlet:
            return morlet(z);
        case MotherWavelet::DoG:
            return dog(z);
    }
    return {0.0, 0.0};
}

std::string to_string(MotherWavelet mother) {
    switch (mother) {
        case MotherWavelet::MexicanHat:
            return "mexican_hat";
        case MotherWavelet::Morlet:
            return "morlet";
        case MotherWavelet::DoG:
            return "dog";
    }
    return "unknown";
}

MotherWavelet parse_mother_wavelet(std::string_view name) {
    if (name == "mexican_hat") return MotherWavelet::MexicanHat;
    if (name == "morlet") return MotherWavelet::Morlet;
    if (name == "dog") return MotherWavelet::DoG;
    throw InputError("unknown mother wavelet '" + std::string(name) + "'");
}

}  // namespace kanhsi::kan
