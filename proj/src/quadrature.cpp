#include "gaborpr/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

#include "gaborpr/errors.hpp"

namespace gaborpr {

namespace {

// 15-point Kronrod abscissae/weights and the embedded 7-point Gauss weights.
constexpr double kXgk[8] = {
    0.9914553711208126, 0.9491079123427585, 0.8648644233597691,
    0.7415311855993944, 0.5860872354676911, 0.4058451513773972,
    0.2077849550078985, 0.0,
};
constexpr double kWgk[8] = {
    0.02293532201052922, 0.06309209262997855, 0.10479001032225018,
    0.14065325971552592, 0.16900472663926790, 0.19035057806478541,
    0.20443294007529889, 0.20948214108472783,
};
constexpr double kWg[4] = {
    0.12948496616886969, 0.27970539148927667, 0.38183005050511894,
    0.41795918367346939,
};

struct Segment {
    double a, b;
    std::complex<double> value;
    double error;
};

Segment gk15(const std::function<std::complex<double>(double)>& f, double a,
             double b) {
    const double c = 0.5 * (a + b);
    const double h = 0.5 * (b - a);
    const std::complex<double> fc = f(c);
    std::complex<double> kron = kWgk[7] * fc;
    std::complex<double> gauss = kWg[3] * fc;
    for (int i = 0; i < 7; ++i) {
        const std::complex<double> lo = f(c - h * kXgk[i]);
        const std::complex<double> hi = f(c + h * kXgk[i]);
        kron += kWgk[i] * (lo + hi);
        if (i % 2 == 1) {
            gauss += kWg[i / 2] * (lo + hi);
        }
    }
    return Segment{a, b, kron * h, std::abs(kron - gauss) * std::abs(h)};
}

}  // namespace

QuadratureResult integrate(const std::function<std::complex<double>(double)>& f,
                           double a, double b, double rel_tol, double abs_tol,
                           int max_intervals) {
    std::vector<Segment> segs{gk15(f, a, b)};
    while (true) {
        std::complex<double> total = 0.0;
        double err = 0.0;
        std::size_t worst = 0;
        for (std::size_t i = 0; i < segs.size(); ++i) {
            total += segs[i].value;
            err += segs[i].error;
            if (segs[i].error > segs[worst].error) worst = i;
        }
        if (err <= std::max(abs_tol, rel_tol * std::abs(total))) {
            return QuadratureResult{total, err, int(segs.size())};
        }
        if (int(segs.size()) >= max_intervals) {
            throw QuadratureError("adaptive quadrature did not converge in " +
                                  std::to_string(max_intervals) + " intervals");
        }
        const Segment s = segs[worst];
        const double mid = 0.5 * (s.a + s.b);
        if (!(mid > s.a && mid < s.b)) {
            throw QuadratureError("interval collapsed before reaching tolerance");
        }
        segs[worst] = gk15(f, s.a, mid);
        segs.push_back(gk15(f, mid, s.b));
    }
}

}  // namespace gaborpr
