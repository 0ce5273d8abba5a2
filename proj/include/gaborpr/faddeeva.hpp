#pragma once

#include <complex>

namespace gaborpr {

// Faddeeva function w(z) = e^{-z^2} erfc(-iz), valid for Im z >= 0.
std::complex<double> faddeeva_w(std::complex<double> z);

// Scaled complementary error function erfcx(z) = e^{z^2} erfc(z) = w(iz),
// valid for Re z >= 0.
std::complex<double> erfcx(std::complex<double> z);

}  // namespace gaborpr
