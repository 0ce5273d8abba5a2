#pragma once

#include <complex>
#include <cstdint>
#include <random>

namespace gaborpr {

// Deterministic Gaussian stream: mt19937_64 plus hand-rolled Box-Muller, so
// draws do not depend on the standard library's implementation-defined
// normal_distribution.
class GaussianStream {
public:
    explicit GaussianStream(std::uint64_t seed) : eng_(seed) {}

    // N(0, 1)
    double next();

    // independent N(0, 1) real and imaginary parts
    std::complex<double> next_complex() {
        const double re = next();
        return {re, next()};
    }

    // uniform in (0, 1]
    double uniform();

private:
    std::mt19937_64 eng_;
    double spare_ = 0.0;
    bool has_spare_ = false;
};

// splitmix64 combine for deriving independent per-stream seeds.
std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t stream);

}  // namespace gaborpr
