#include "gaborpr/signal.hpp"

#include <cmath>

#include "gaborpr/errors.hpp"
#include "gaborpr/rng.hpp"

namespace gaborpr {

double sinc(double u) {
    if (u == 0.0) return 1.0;
    const double pu = M_PI * u;
    return std::sin(pu) / pu;
}

double BandlimitedSignal::norm() const {
    double s = 0.0;
    for (const cdouble& c : coeffs) s += std::norm(c);
    return std::sqrt(2.0 * bandwidth * s);
}

BandlimitedSignal make_signal(double bandwidth, std::vector<cdouble> coeffs) {
    if (!(bandwidth > 0.0)) {
        throw ContractViolation("bandwidth must be positive");
    }
    if (coeffs.empty() || coeffs.size() % 2 == 0) {
        throw ContractViolation("coefficient vector must have odd length 2K+1");
    }
    return BandlimitedSignal{bandwidth, std::move(coeffs)};
}

cdouble fourier_eval(const BandlimitedSignal& s, double xi) {
    if (std::abs(xi) > s.bandwidth) return 0.0;
    const int K = s.half_width();
    cdouble acc = 0.0;
    for (int k = -K; k <= K; ++k) {
        const double phase = -M_PI * k * xi / s.bandwidth;
        acc += s.coeff(k) * cdouble(std::cos(phase), std::sin(phase));
    }
    return acc;
}

cdouble time_eval(const BandlimitedSignal& s, double t) {
    const int K = s.half_width();
    const double twoB = 2.0 * s.bandwidth;
    cdouble acc = 0.0;
    for (int k = -K; k <= K; ++k) {
        acc += s.coeff(k) * sinc(twoB * t - k);
    }
    return twoB * acc;
}

BandlimitedSignal pad_to(const BandlimitedSignal& s, int K) {
    const int K0 = s.half_width();
    if (K < K0) {
        throw ContractViolation("pad_to cannot shrink a coefficient vector");
    }
    if (K == K0) return s;
    std::vector<cdouble> c(std::size_t(2 * K + 1), 0.0);
    for (int k = -K0; k <= K0; ++k) c[std::size_t(k + K)] = s.coeff(k);
    return BandlimitedSignal{s.bandwidth, std::move(c)};
}

PhaseAlignment phase_align(const BandlimitedSignal& f, const BandlimitedSignal& g) {
    if (f.bandwidth != g.bandwidth) {
        throw ContractViolation("phase_align requires matching bandwidths");
    }
    const int K = std::max(f.half_width(), g.half_width());
    const BandlimitedSignal fp = pad_to(f, K);
    const BandlimitedSignal gp = pad_to(g, K);
    cdouble ip = 0.0;  // <c_f, c_g>
    for (std::size_t i = 0; i < fp.coeffs.size(); ++i) {
        ip += fp.coeffs[i] * std::conj(gp.coeffs[i]);
    }
    double alpha = (ip == cdouble(0.0)) ? 0.0 : std::arg(ip);
    if (alpha <= -M_PI) alpha = M_PI;  // ties at -pi resolve to +pi
    const cdouble rot(std::cos(alpha), std::sin(alpha));
    double d2 = 0.0;
    for (std::size_t i = 0; i < fp.coeffs.size(); ++i) {
        d2 += std::norm(fp.coeffs[i] - rot * gp.coeffs[i]);
    }
    return PhaseAlignment{alpha, std::sqrt(2.0 * f.bandwidth * d2)};
}

BandlimitedSignal random_signal(int K, double bandwidth, std::uint64_t seed,
                                bool real_only) {
    if (K < 0 || !(bandwidth > 0.0)) {
        throw ContractViolation("random_signal requires K >= 0 and B > 0");
    }
    GaussianStream g(seed);
    std::vector<cdouble> c(std::size_t(2 * K + 1));
    for (auto& v : c) {
        v = real_only ? cdouble(g.next(), 0.0) : g.next_complex();
    }
    BandlimitedSignal s{bandwidth, std::move(c)};
    const double n = s.norm();
    if (n > 0.0) {
        for (auto& v : s.coeffs) v /= n;
    }
    return s;
}

}  // namespace gaborpr
