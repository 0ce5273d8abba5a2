#pragma once

#include <cstdint>
#include <vector>

#include "gaborpr/sampling.hpp"
#include "gaborpr/signal.hpp"

namespace gaborpr {

struct ReconstructionConfig {
    int starts = 16;
    int max_iterations = 200;
    double gradient_tolerance = 1e-10;
    double loss_tolerance = 1e-14;
    std::uint64_t seed = 0;
};

struct ReconstructionResult {
    BandlimitedSignal signal;
    double loss = 0.0;
    bool converged = false;
    int start_index = -1;
    int iterations = 0;  // total LM iterations of the winning start
};

// One squared-magnitude measurement |Gf(x, omega)|^2 = value.
struct Measurement {
    double x;
    double omega;
    double value;
};

std::vector<Measurement> to_measurements(const MagnitudeSamples& samples);
std::vector<Measurement> to_measurements(const MagnitudeSamples& samples, int bin);

struct LossEval {
    double value;
    // interleaved (d/dRe c_k, d/dIm c_k), k = -K..K
    std::vector<double> gradient;
};

LossEval loss(const std::vector<cdouble>& coeffs, const MagnitudeSamples& samples);
LossEval loss(const std::vector<cdouble>& coeffs, double bandwidth,
              const std::vector<Measurement>& data);

// One damped least-squares descent on the squared-magnitude residuals from a
// given initialization; appends the loss after every accepted step to trace
// when non-null (accepted steps are monotone by construction). Building block
// of reconstruct, exposed for diagnostics.
std::vector<cdouble> lm_descend(const std::vector<cdouble>& init,
                                double bandwidth,
                                const std::vector<Measurement>& data,
                                int max_iterations,
                                std::vector<double>* trace = nullptr);

// Multi-start solver: `starts` independent runs from unit-normalized complex
// Gaussian initializations (deterministic per-start streams derived from
// config.seed); each run is an amplitude-residual warmup, a squared-magnitude
// polish, and up to 40 perturbation restarts accepted only on improvement.
// Winner by (loss, start_index). Starts run in parallel up to GABORPR_THREADS.
ReconstructionResult reconstruct(const MagnitudeSamples& samples, int K,
                                 const ReconstructionConfig& config);
ReconstructionResult reconstruct(double bandwidth, int K,
                                 const std::vector<Measurement>& data,
                                 const ReconstructionConfig& config);

// max over lattice points and bins of ||Gf|^2 - |Gg|^2|
double empirical_distinctness(const BandlimitedSignal& f,
                              const BandlimitedSignal& g,
                              const MeasurementGrid& grid);

}  // namespace gaborpr
