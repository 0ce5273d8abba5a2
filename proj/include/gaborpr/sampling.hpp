#pragma once

#include <array>
#include <functional>
#include <vector>

#include "gaborpr/signal.hpp"

namespace gaborpr {

// Truncated sampling lattice (1/4B)Z x {omega0, omega1}. The step is never
// stored as a float: x_n = n / (4B) is recomputed from the denominator, so
// step * 4B = 1 holds exactly.
struct MeasurementGrid {
    double bandwidth = 1.0;
    double omega0 = 0.0;
    double omega1 = 0.5;
    int half_count = 0;  // N; lattice indices n = -N..N

    double step_denominator() const { return 4.0 * bandwidth; }
    double x(int n) const { return double(n) / step_denominator(); }
    double omega(int bin) const { return bin == 0 ? omega0 : omega1; }
    double tau() const { return omega1 - omega0; }
    int count() const { return 2 * half_count + 1; }
};

// Validates B > 0, omega0 < omega1, N >= 1.
MeasurementGrid make_grid(double bandwidth, double omega0, double omega1,
                          int half_count);

// Squared-magnitude samples s_j[n] = |Gf(n/(4B), omega_j)|^2.
struct MagnitudeSamples {
    MeasurementGrid grid;
    std::array<std::vector<double>, 2> values;  // indexed [bin][n + N]
};

// Gaussian-envelope tail rule: env(x) = ||f|| e^{-pi max(0,|x|-K/(2B))^2};
// returns the smallest N with sum_{|n|>N} env(x_n)^2 <= tail_tolerance.
// The envelope (and hence N) does not depend on the bins.
int choose_truncation(const BandlimitedSignal& s, double tail_tolerance);

MagnitudeSamples sample_magnitudes(const BandlimitedSignal& s,
                                   const MeasurementGrid& grid);

// Truncated Shannon series sum_{|n|<=N} s_j[n] sinc(4Bx - n).
double shannon_interpolate(const MagnitudeSamples& samples, int bin, double x);

// Tapered-DFT leakage diagnostic on an arbitrary slice sampler: fraction of
// spectral power outside [-2B, 2B]. Exposed so negative controls (e.g. the
// squared slice) can reuse the identical spectral machinery.
double bandlimit_diagnostic_raw(const std::function<double(double)>& slice,
                                double bandwidth, int oversample,
                                double window_half_width);

// Diagnostic applied to x -> |Gf(x, omega)|^2; errors if the window is too
// small for the envelope tail bound (1e-10 relative).
double bandlimit_diagnostic(const BandlimitedSignal& s, double omega,
                            int oversample, double window_half_width);

}  // namespace gaborpr
