#pragma once

#include <complex>
#include <vector>

#include "gaborpr/signal.hpp"

namespace gaborpr {

// Query for the band-limited Gaussian kernel
//   I(u, omega, B) = integral_{-B}^{B} e^{-pi (xi - omega)^2} e^{2 pi i xi u} dxi,
// entire in u.
struct KernelQuery {
    cdouble u;
    double omega = 0.0;
    double bandwidth = 1.0;
};

// Closed-form kernel via erfcx differences; throws OverflowGuard when an
// intermediate exponent would exceed exponent_guard (natural-log units).
cdouble band_gaussian_kernel(const KernelQuery& q, double exponent_guard = 700.0);

// Per-coefficient forward factors: Gf(x, omega) = sum_k c_k row[k + K].
std::vector<cdouble> gabor_row(double bandwidth, int K, double x, double omega);

// Gf(x, omega) = 2^{1/4} e^{-2 pi i x omega} sum_k c_k I(x - k/(2B), omega, B).
cdouble gabor_transform(const BandlimitedSignal& s, double x, double omega);

// Direct adaptive quadrature of the defining Gabor integral; independent of
// the closed-form path. Declared error <= tolerance (relative).
cdouble gabor_quadrature_oracle(const BandlimitedSignal& s, double x,
                                double omega, double tolerance);

// Bf(z) through the Gabor relation Gf(x, -w) = e^{pi i x w} Bf(x + iw)
// e^{-pi/2 (x^2 + w^2)}; entire in z. Safe range pi/2 |z|^2 <= 700.
cdouble bargmann_transform(const BandlimitedSignal& s, cdouble z);

// |Bf(-iz) - B(Ff)(z)| with the right side by quadrature of the Bargmann
// integral of Ff over the band.
double bargmann_fourier_symmetry_residual(const BandlimitedSignal& s, cdouble z);

// max over the grid of ||(phi * M_{-omega} f)(x)| - |Gf(x, omega)||,
// convolution by quadrature.
double convolution_form_residual(const BandlimitedSignal& s, double omega,
                                 const std::vector<double>& grid);

inline constexpr double kTwoPowQuarter = 1.1892071150027210667;  // 2^{1/4}
inline constexpr double kSqrtPi = 1.7724538509055160273;

// Half-width of the hard quadrature window: e^{-pi t^2} mass beyond it is
// ~e^{-46} ~ 1e-20.
inline constexpr double kGaussWindow = 3.8265;

}  // namespace gaborpr
