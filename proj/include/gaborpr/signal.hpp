#pragma once

#include <complex>
#include <cstdint>
#include <vector>

namespace gaborpr {

using cdouble = std::complex<double>;

double sinc(double u);  // sin(pi u) / (pi u), sinc(0) = 1

// Finite Shannon-coefficient realization of a PW_B^2 element:
//   Ff(xi) = sum_k c_k e^{-pi i k xi / B} on [-B, B], zero outside,
//   f(t)   = 2B sum_k c_k sinc(2Bt - k),   k = -K..K.
struct BandlimitedSignal {
    double bandwidth = 1.0;
    std::vector<cdouble> coeffs;  // index k = -K..K stored at k + K

    int half_width() const { return (int(coeffs.size()) - 1) / 2; }
    cdouble coeff(int k) const { return coeffs[std::size_t(k + half_width())]; }
    double norm() const;  // L2 norm sqrt(2B sum |c_k|^2)
};

// Validates B > 0 and an odd, nonempty coefficient vector.
BandlimitedSignal make_signal(double bandwidth, std::vector<cdouble> coeffs);

struct PhaseAlignment {
    double alpha;     // in (-pi, pi]
    double distance;  // sqrt(2B) * min_a ||c_f - e^{ia} c_g||_2
};

cdouble fourier_eval(const BandlimitedSignal& s, double xi);
cdouble time_eval(const BandlimitedSignal& s, double t);

// Requires matching bandwidths; shorter coefficient vectors are zero-padded.
PhaseAlignment phase_align(const BandlimitedSignal& f, const BandlimitedSignal& g);

// Zero-pads to half-width K (no-op if already that wide).
BandlimitedSignal pad_to(const BandlimitedSignal& s, int K);

// i.i.d. standard Gaussian coefficients (complex, or real when real_only),
// normalized to ||f|| = 1. Deterministic in seed.
BandlimitedSignal random_signal(int K, double bandwidth, std::uint64_t seed,
                                bool real_only = false);

}  // namespace gaborpr
