#include "gaborpr/transforms.hpp"

#include <cmath>
#include <string>

#include "gaborpr/errors.hpp"
#include "gaborpr/faddeeva.hpp"
#include "gaborpr/quadrature.hpp"

namespace gaborpr {

namespace {

cdouble guarded_exp(cdouble e, double guard, const char* where) {
    if (e.real() > guard) {
        throw OverflowGuard(std::string(where) + ": exponent " +
                                std::to_string(e.real()) + " exceeds guard " +
                                std::to_string(guard),
                            e.real());
    }
    return std::exp(e);
}

// One erfcx term of the kernel difference: e^{-xi^2 - 2 xi v} erfcx(xi + v),
// xi real, Re(xi + v) >= 0 by the caller's case split.
cdouble seg_term(double xi, cdouble v, double guard) {
    const cdouble e = -xi * xi - 2.0 * xi * v;
    return guarded_exp(e, guard, "band_gaussian_kernel") * erfcx(xi + v);
}

cdouble e_pure(double a, double b, cdouble v, double guard) {
    return 0.5 * (seg_term(a, v, guard) - seg_term(b, v, guard));
}

// E(a, b, v) = (1/2)[e^{-a^2-2av} erfcx(a+v) - e^{-b^2-2bv} erfcx(b+v)]
// with the three-way split keeping every erfcx argument in Re >= 0.
cdouble e_diff(double a, double b, cdouble v, double guard) {
    const double ra = a + v.real();
    const double rb = b + v.real();
    if (ra >= 0.0 && rb >= 0.0) return e_pure(a, b, v, guard);
    if (ra < 0.0 && rb <= 0.0) return e_pure(-b, -a, -v, guard);
    const double xs = -v.real();  // split where Re(xi + v) changes sign
    return e_pure(-xs, -a, -v, guard) + e_pure(xs, b, v, guard);
}

}  // namespace

cdouble band_gaussian_kernel(const KernelQuery& q, double exponent_guard) {
    if (!(q.bandwidth > 0.0)) {
        throw ContractViolation("kernel bandwidth must be positive");
    }
    const double a = kSqrtPi * (-q.bandwidth - q.omega);
    const double b = kSqrtPi * (q.bandwidth - q.omega);
    const cdouble v = cdouble(0.0, -kSqrtPi) * q.u;
    const cdouble phase =
        guarded_exp(cdouble(0.0, 2.0 * M_PI * q.omega) * q.u, exponent_guard,
                    "band_gaussian_kernel");
    return phase * e_diff(a, b, v, exponent_guard);
}

std::vector<cdouble> gabor_row(double bandwidth, int K, double x, double omega) {
    const double ph = -2.0 * M_PI * x * omega;
    const cdouble pre = kTwoPowQuarter * cdouble(std::cos(ph), std::sin(ph));
    std::vector<cdouble> row(std::size_t(2 * K + 1));
    for (int k = -K; k <= K; ++k) {
        row[std::size_t(k + K)] = pre * band_gaussian_kernel(
            KernelQuery{x - k / (2.0 * bandwidth), omega, bandwidth});
    }
    return row;
}

cdouble gabor_transform(const BandlimitedSignal& s, double x, double omega) {
    const int K = s.half_width();
    const std::vector<cdouble> row = gabor_row(s.bandwidth, K, x, omega);
    cdouble acc = 0.0;
    for (std::size_t i = 0; i < row.size(); ++i) acc += s.coeffs[i] * row[i];
    return acc;
}

cdouble gabor_quadrature_oracle(const BandlimitedSignal& s, double x,
                                double omega, double tolerance) {
    if (!(tolerance > 0.0)) {
        throw ContractViolation("oracle tolerance must be positive");
    }
    const auto integrand = [&](double t) {
        const double ph = -2.0 * M_PI * t * omega;
        return kTwoPowQuarter * time_eval(s, t) *
               std::exp(-M_PI * (t - x) * (t - x)) *
               cdouble(std::cos(ph), std::sin(ph));
    };
    // A pure relative target is unreachable when oscillation cancels the
    // integral far below the integrand scale (the Gauss-Kronrod error
    // estimate plateaus at roundoff). Floor the absolute target two orders
    // under tolerance * integrand bound.
    double coeff_sum = 0.0;
    for (const cdouble& c : s.coeffs) coeff_sum += std::abs(c);
    const double bound =
        kTwoPowQuarter * 2.0 * s.bandwidth * std::max(coeff_sum, 1e-30);
    return integrate(integrand, x - kGaussWindow, x + kGaussWindow, tolerance,
                     tolerance * bound * 1e-2)
        .value;
}

cdouble bargmann_transform(const BandlimitedSignal& s, cdouble z) {
    const double x = z.real();
    const double y = z.imag();
    const double e = 0.5 * M_PI * (x * x + y * y);
    if (e > 700.0) {
        throw OverflowGuard("bargmann_transform: exponent " + std::to_string(e) +
                                " exceeds guard 700",
                            e);
    }
    const double ph = -M_PI * x * y;
    return std::exp(e) * cdouble(std::cos(ph), std::sin(ph)) *
           gabor_transform(s, x, -y);
}

double bargmann_fourier_symmetry_residual(const BandlimitedSignal& s, cdouble z) {
    const cdouble lhs = bargmann_transform(s, cdouble(0.0, -1.0) * z);
    const cdouble zsq_half = 0.5 * M_PI * z * z;
    const auto integrand = [&](double xi) {
        return fourier_eval(s, xi) *
               std::exp(2.0 * M_PI * xi * z - M_PI * xi * xi - zsq_half);
    };
    const cdouble rhs =
        kTwoPowQuarter *
        integrate(integrand, -s.bandwidth, s.bandwidth, 1e-13, 1e-16).value;
    return std::abs(lhs - rhs);
}

double convolution_form_residual(const BandlimitedSignal& s, double omega,
                                 const std::vector<double>& grid) {
    double worst = 0.0;
    for (double x : grid) {
        const auto integrand = [&](double t) {
            const double ph = -2.0 * M_PI * t * omega;  // (M_{-omega} f)(t)
            return kTwoPowQuarter * std::exp(-M_PI * (x - t) * (x - t)) *
                   time_eval(s, t) * cdouble(std::cos(ph), std::sin(ph));
        };
        const cdouble conv = integrate(integrand, x - kGaussWindow,
                                       x + kGaussWindow, 1e-13, 1e-16)
                                 .value;
        worst = std::max(worst,
                         std::abs(std::abs(conv) -
                                  std::abs(gabor_transform(s, x, omega))));
    }
    return worst;
}

}  // namespace gaborpr
