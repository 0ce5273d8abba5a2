#include "gaborpr/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <optional>
#include <sstream>

#include <Eigen/Dense>

#include "gaborpr/errors.hpp"
#include "gaborpr/transforms.hpp"

namespace gaborpr {

namespace {

constexpr double kPi = std::numbers::pi;

struct Rect {
    double x0, x1, y0, y1;

    cdouble corner(int i) const {
        switch (i & 3) {
            case 0: return {x0, y0};
            case 1: return {x1, y0};
            case 2: return {x1, y1};
            default: return {x0, y1};
        }
    }
    double diameter() const { return std::hypot(x1 - x0, y1 - y0); }
    cdouble center() const { return {0.5 * (x0 + x1), 0.5 * (y0 + y1)}; }
};

[[noreturn]] void boundary_zero_error(cdouble z) {
    std::ostringstream os;
    os << "find_zeros: |F| vanishes on the contour near (" << z.real() << ", "
       << z.imag() << "); move the window boundary";
    throw ContractViolation(os.str());
}

// Accumulates the continuous change of arg F along straight segments,
// bisecting until each step turns the phase by at most pi/2.
class PhaseTracer {
  public:
    explicit PhaseTracer(const EntireFn& f) : f_(f) {}

    cdouble eval(cdouble z) const {
        cdouble v = f_(z);
        if (!std::isfinite(v.real()) || !std::isfinite(v.imag())) {
            std::ostringstream os;
            os << "find_zeros: non-finite F at (" << z.real() << ", "
               << z.imag() << ")";
            throw ContractViolation(os.str());
        }
        if (std::abs(v) == 0.0) boundary_zero_error(z);
        return v;
    }

    // A step is accepted only when the phase turns by at most pi/2 on the
    // segment and both halves, and log F looks straight across the midpoint.
    // The curvature guard is what catches zeros lying close to the contour:
    // a full 2 pi swing hiding inside one step (which aliases the principal
    // phase difference to ~0) always comes with a log-magnitude dip that the
    // three-point second difference cannot miss.
    double segment(cdouble z0, cdouble f0, cdouble z1, cdouble f1,
                   int depth) const {
        const double dphi = std::arg(f1 * std::conj(f0));
        if (depth >= 64) {
            if (std::abs(dphi) <= 0.5 * kPi) return dphi;
            boundary_zero_error(0.5 * (z0 + z1));
        }
        const cdouble zm = 0.5 * (z0 + z1);
        const cdouble fm = eval(zm);
        const double da = std::arg(fm * std::conj(f0));
        const double db = std::arg(f1 * std::conj(fm));
        const double mag_curv =
            std::log(std::abs(f0)) - 2.0 * std::log(std::abs(fm)) +
            std::log(std::abs(f1));
        if (std::abs(dphi) <= 0.5 * kPi && std::abs(da) <= 0.5 * kPi &&
            std::abs(db) <= 0.5 * kPi && std::abs(da - db) <= 0.6 &&
            std::abs(mag_curv) <= 0.6) {
            return dphi;
        }
        return segment(z0, f0, zm, fm, depth + 1) +
               segment(zm, fm, z1, f1, depth + 1);
    }

    // Total phase change along z0 -> z1, seeded with a few interior samples
    // so that slow multi-turn windings are not missed outright.
    double edge(cdouble z0, cdouble z1) const {
        constexpr int kChunks = 8;
        double total = 0.0;
        cdouble za = z0;
        cdouble fa = eval(za);
        for (int i = 1; i <= kChunks; ++i) {
            cdouble zb = z0 + (z1 - z0) * (static_cast<double>(i) / kChunks);
            cdouble fb = eval(zb);
            total += segment(za, fa, zb, fb, 0);
            za = zb;
            fa = fb;
        }
        return total;
    }

    int winding(const Rect& r) const {
        double total = 0.0;
        for (int e = 0; e < 4; ++e) total += edge(r.corner(e), r.corner(e + 1));
        double turns = total / (2.0 * kPi);
        long n = std::lround(turns);
        if (std::abs(turns - static_cast<double>(n)) > 0.25) {
            throw ContractViolation(
                "find_zeros: boundary phase accumulation is not an integer "
                "multiple of 2*pi");
        }
        return static_cast<int>(n);
    }

  private:
    const EntireFn& f_;
};

// Modified Newton z <- z - m F / F' for a multiplicity-m zero; the derivative
// uses a 4th-order central stencil.
std::optional<cdouble> refine_newton(const EntireFn& F, cdouble z, int m,
                                     double tol) {
    for (int it = 0; it < 60; ++it) {
        cdouble fz = F(z);
        // an exact hit leaves 0/0 in the step; it is already the answer
        if (std::abs(fz) == 0.0) return z;
        double h = 1e-5 * (1.0 + std::abs(z));
        cdouble fp = (-F(z + 2.0 * h) + 8.0 * F(z + h) - 8.0 * F(z - h) +
                      F(z - 2.0 * h)) /
                     (12.0 * h);
        if (!std::isfinite(fp.real()) || !std::isfinite(fp.imag()) ||
            std::abs(fp) == 0.0)
            return std::nullopt;
        cdouble step = -static_cast<double>(m) * fz / fp;
        if (!std::isfinite(step.real()) || !std::isfinite(step.imag()))
            return std::nullopt;
        z += step;
        if (std::abs(step) <= std::max(0.05 * tol, 1e-15 * (1.0 + std::abs(z))))
            return z;
    }
    return std::nullopt;
}

struct ZeroAccum {
    std::vector<ZeroEntry> found;
};

class Subdivider {
  public:
    Subdivider(const EntireFn& F, const PhaseTracer& tracer, double tol,
               const ZeroFindOptions& opt)
        : f_(F), tracer_(tracer), tol_(tol), opt_(opt) {}

    void solve(const Rect& r, int w, int depth, ZeroAccum& acc) const {
        if (w == 0) return;
        if (w < 0) {
            throw ContractViolation(
                "find_zeros: negative winding number (F is not analytic on "
                "the window)");
        }
        double diam = r.diameter();
        if (diam <= std::max(opt_.cluster_radius, 1e-13)) {
            acc.found.push_back({r.center(), w});
            return;
        }
        if (diam < 1.0 && try_newton(r, w, acc)) return;
        if (depth >= opt_.max_depth) {
            acc.found.push_back({r.center(), w});
            return;
        }
        split(r, w, depth, acc);
    }

  private:
    // A Newton candidate is accepted only when a small verification contour
    // around it carries the cell's full winding number.
    bool try_newton(const Rect& r, int w, ZeroAccum& acc) const {
        auto z = refine_newton(f_, r.center(), w, tol_);
        if (!z) return false;
        double hv = std::max({4.0 * tol_, opt_.cluster_radius,
                              1e-12 * (1.0 + std::abs(*z))});
        if (z->real() - hv <= r.x0 || z->real() + hv >= r.x1 ||
            z->imag() - hv <= r.y0 || z->imag() + hv >= r.y1)
            return false;
        Rect box{z->real() - hv, z->real() + hv, z->imag() - hv,
                 z->imag() + hv};
        int wv;
        try {
            wv = tracer_.winding(box);
        } catch (const ContractViolation&) {
            return false;
        }
        if (wv != w) return false;
        acc.found.push_back({*z, w});
        return true;
    }

    void split(const Rect& r, int w, int depth, ZeroAccum& acc) const {
        bool vertical = (r.x1 - r.x0) >= (r.y1 - r.y0);
        // Irrational cut fractions: a line through an even-multiplicity zero
        // splits its winding silently (the phase of F is continuous across
        // such a zero along a straight line), and zeros tend to sit at round
        // coordinates. Conservation of the child windings validates each
        // attempt; later entries in the list retry after near misses.
        constexpr double kFracs[] = {0.50137869561323, 0.46712927295533,
                                     0.53851648071345, 0.42360679774998,
                                     0.57735026918963, 0.38196601125011,
                                     0.61803398874989};
        for (double frac : kFracs) {
            Rect a = r, b = r;
            if (vertical) {
                double xm = r.x0 + frac * (r.x1 - r.x0);
                a.x1 = xm;
                b.x0 = xm;
            } else {
                double ym = r.y0 + frac * (r.y1 - r.y0);
                a.y1 = ym;
                b.y0 = ym;
            }
            int wa, wb;
            try {
                wa = tracer_.winding(a);
                wb = tracer_.winding(b);
            } catch (const ContractViolation&) {
                continue;
            }
            if (wa + wb != w || wa < 0 || wb < 0) continue;
            solve(a, wa, depth + 1, acc);
            solve(b, wb, depth + 1, acc);
            return;
        }
        throw ContractViolation(
            "find_zeros: could not place a clean subdivision line (zeros "
            "cluster tighter than the available resolution)");
    }

    const EntireFn& f_;
    const PhaseTracer& tracer_;
    double tol_;
    ZeroFindOptions opt_;
};

Rect to_rect(const Strip& w) {
    if (!(w.real_low < w.real_high) || !(w.imag_low < w.imag_high)) {
        throw ContractViolation("find_zeros: window must have positive extent");
    }
    return {w.real_low, w.real_high, w.imag_low, w.imag_high};
}

// Multiplicity of the entry within `radius` of p; two matches are ambiguous.
int multiplicity_at(const ZeroSet& zs, cdouble p, double radius,
                    const char* tag) {
    int m = 0;
    int hits = 0;
    for (const auto& e : zs.entries) {
        if (std::abs(e.location - p) <= radius) {
            ++hits;
            m = e.multiplicity;
        }
    }
    if (hits > 1) {
        std::ostringstream os;
        os << tag << ": two zeros within the match radius of (" << p.real()
           << ", " << p.imag() << "); matching is ambiguous";
        throw ContractViolation(os.str());
    }
    return hits ? m : 0;
}

std::vector<cdouble> dedupe(std::vector<cdouble> pts, double radius) {
    std::sort(pts.begin(), pts.end(), [](cdouble a, cdouble b) {
        return a.real() != b.real() ? a.real() < b.real()
                                    : a.imag() < b.imag();
    });
    std::vector<cdouble> out;
    for (cdouble p : pts) {
        bool dup = false;
        for (auto it = out.rbegin(); it != out.rend(); ++it) {
            if (p.real() - it->real() > radius) break;
            if (std::abs(p - *it) <= radius) {
                dup = true;
                break;
            }
        }
        if (!dup) out.push_back(p);
    }
    return out;
}

}  // namespace

int ZeroSet::total_multiplicity() const {
    int total = 0;
    for (const auto& e : entries) total += e.multiplicity;
    return total;
}

int winding_count(const EntireFn& F, const Strip& window) {
    PhaseTracer tracer(F);
    return tracer.winding(to_rect(window));
}

ZeroSet find_zeros(const EntireFn& F, const Strip& window, double tolerance,
                   const ZeroFindOptions& options) {
    if (!(tolerance > 0.0)) {
        throw ContractViolation("find_zeros: tolerance must be positive");
    }
    Rect outer = to_rect(window);
    PhaseTracer tracer(F);
    int w_outer = tracer.winding(outer);

    ZeroAccum acc;
    Subdivider sub(F, tracer, tolerance, options);
    sub.solve(outer, w_outer, 0, acc);

    // Merge clusters closer than the clustering radius into one
    // multiplicity-weighted entry.
    std::vector<ZeroEntry> merged;
    std::vector<bool> used(acc.found.size(), false);
    for (size_t i = 0; i < acc.found.size(); ++i) {
        if (used[i]) continue;
        cdouble sum = acc.found[i].location *
                      static_cast<double>(acc.found[i].multiplicity);
        int m = acc.found[i].multiplicity;
        used[i] = true;
        bool grew = true;
        while (grew) {
            grew = false;
            for (size_t j = 0; j < acc.found.size(); ++j) {
                if (used[j]) continue;
                if (std::abs(acc.found[j].location - sum / double(m)) <=
                    options.cluster_radius) {
                    sum += acc.found[j].location *
                           static_cast<double>(acc.found[j].multiplicity);
                    m += acc.found[j].multiplicity;
                    used[j] = true;
                    grew = true;
                }
            }
        }
        merged.push_back({sum / static_cast<double>(m), m});
    }
    std::sort(merged.begin(), merged.end(),
              [](const ZeroEntry& a, const ZeroEntry& b) {
                  return a.location.real() != b.location.real()
                             ? a.location.real() < b.location.real()
                             : a.location.imag() < b.location.imag();
              });

    ZeroSet out;
    out.entries = std::move(merged);
    out.residual = 0.0;
    for (const auto& e : out.entries) {
        out.residual = std::max(out.residual, std::abs(F(e.location)));
    }
    if (out.total_multiplicity() != w_outer) {
        throw ContractViolation(
            "find_zeros: located multiplicities do not sum to the boundary "
            "winding number");
    }
    return out;
}

PeriodicityVerdict multiplicity_periodicity_check(const ZeroSet& zf,
                                                  const ZeroSet& zg, double tau,
                                                  const Strip& strip,
                                                  double match_radius) {
    if (!(tau > 0.0)) {
        throw ContractViolation("periodicity check: tau must be positive");
    }
    cdouble shift(0.0, 2.0 * tau);
    auto in_strip = [&](cdouble z) {
        return z.imag() > strip.imag_low && z.imag() <= strip.imag_high &&
               z.real() >= strip.real_low && z.real() <= strip.real_high;
    };
    std::vector<cdouble> candidates;
    for (const auto* zs : {&zf, &zg}) {
        for (const auto& e : zs->entries) {
            if (in_strip(e.location)) candidates.push_back(e.location);
            if (in_strip(e.location - shift))
                candidates.push_back(e.location - shift);
        }
    }
    candidates = dedupe(std::move(candidates), match_radius);

    PeriodicityVerdict verdict;
    verdict.ok = true;
    for (cdouble z : candidates) {
        int mf = multiplicity_at(zf, z, match_radius, "periodicity check");
        int mg = multiplicity_at(zg, z, match_radius, "periodicity check");
        int mfs =
            multiplicity_at(zf, z + shift, match_radius, "periodicity check");
        int mgs =
            multiplicity_at(zg, z + shift, match_radius, "periodicity check");
        if (mf - mg != mfs - mgs) {
            verdict.ok = false;
            verdict.violations.push_back({z, mf, mg, mfs, mgs});
        }
    }
    return verdict;
}

bool one_line_reflection_check(const ZeroSet& zf, const ZeroSet& zg,
                               double match_radius) {
    std::vector<cdouble> candidates;
    for (const auto* zs : {&zf, &zg}) {
        for (const auto& e : zs->entries) candidates.push_back(e.location);
    }
    candidates = dedupe(std::move(candidates), match_radius);
    for (cdouble z : candidates) {
        cdouble zc = std::conj(z);
        int lhs = multiplicity_at(zf, z, match_radius, "reflection check") +
                  multiplicity_at(zf, zc, match_radius, "reflection check");
        int rhs = multiplicity_at(zg, z, match_radius, "reflection check") +
                  multiplicity_at(zg, zc, match_radius, "reflection check");
        if (lhs != rhs) return false;
    }
    return true;
}

PhaseCheckResult hadamard_phase_check(const BandlimitedSignal& f,
                                      const BandlimitedSignal& g, double tau,
                                      const std::vector<double>& grid) {
    if (f.bandwidth != g.bandwidth) {
        throw ContractViolation(
            "hadamard_phase_check: signals must share a bandwidth");
    }
    if (!(tau > 0.0)) {
        throw ContractViolation("hadamard_phase_check: tau must be positive");
    }
    if (grid.size() < 6) {
        throw ContractViolation(
            "hadamard_phase_check: need at least 6 grid points");
    }
    std::vector<double> xs = grid;
    std::sort(xs.begin(), xs.end());

    const size_t n = xs.size();
    std::vector<std::vector<cdouble>> bf(2), bg(2);
    double hyp = 0.0;
    double gmax = 0.0;
    for (int line = 0; line < 2; ++line) {
        double y = line == 0 ? 0.0 : tau;
        bf[line].resize(n);
        bg[line].resize(n);
        for (size_t j = 0; j < n; ++j) {
            cdouble z(xs[j], y);
            bf[line][j] = bargmann_transform(f, z);
            bg[line][j] = bargmann_transform(g, z);
            hyp = std::max(hyp,
                           std::abs(std::abs(bf[line][j]) - std::abs(bg[line][j])));
            gmax = std::max(gmax, std::abs(bg[line][j]));
        }
    }
    if (hyp > 1e-8) {
        std::ostringstream os;
        os << "hadamard_phase_check: | |Bf| - |Bg| | = " << hyp
           << " on the two lines; the equal-magnitude hypothesis fails";
        throw ContractViolation(os.str());
    }

    // Fit log(Bf/Bg) ~ q0 + q1 z + q2 z^2 over both lines jointly, after
    // per-line phase unwrapping and a 2*pi branch alignment between lines.
    double floor = 1e-6 * gmax;
    std::vector<cdouble> zs_fit;
    std::vector<cdouble> h_fit;
    std::vector<int> line_of;
    std::array<double, 2> line_mean{0.0, 0.0};
    std::array<int, 2> line_count{0, 0};
    for (int line = 0; line < 2; ++line) {
        double y = line == 0 ? 0.0 : tau;
        double phase = 0.0;
        bool have_prev = false;
        bool have_any = false;
        cdouble prev_ratio;
        for (size_t j = 0; j < n; ++j) {
            if (std::abs(bg[line][j]) <= floor) {
                have_prev = false;
                continue;
            }
            cdouble ratio = bf[line][j] / bg[line][j];
            if (have_prev) {
                phase += std::arg(ratio * std::conj(prev_ratio));
            } else if (have_any) {
                // Resume after a zero-floor gap on the branch nearest the
                // accumulated phase.
                double raw = std::arg(ratio);
                phase = raw + 2.0 * kPi * std::round((phase - raw) / (2.0 * kPi));
            } else {
                phase = std::arg(ratio);
                have_any = true;
            }
            prev_ratio = ratio;
            have_prev = true;
            zs_fit.push_back({xs[j], y});
            h_fit.push_back({std::log(std::abs(ratio)), phase});
            line_of.push_back(line);
            line_mean[line] += phase;
            ++line_count[line];
        }
    }
    if (line_count[0] < 3 || line_count[1] < 3) {
        throw ContractViolation(
            "hadamard_phase_check: too many grid points inside the |Bg| zero "
            "floor for a stable fit");
    }
    for (int line = 0; line < 2; ++line) line_mean[line] /= line_count[line];
    double branch =
        2.0 * kPi * std::round((line_mean[0] - line_mean[1]) / (2.0 * kPi));
    for (size_t i = 0; i < h_fit.size(); ++i) {
        if (line_of[i] == 1) h_fit[i] += cdouble(0.0, branch);
    }

    Eigen::MatrixXcd A(h_fit.size(), 3);
    Eigen::VectorXcd b(h_fit.size());
    for (size_t i = 0; i < h_fit.size(); ++i) {
        A(i, 0) = 1.0;
        A(i, 1) = zs_fit[i];
        A(i, 2) = zs_fit[i] * zs_fit[i];
        b(i) = h_fit[i];
    }
    Eigen::Vector3cd q = A.colPivHouseholderQr().solve(b);

    PhaseCheckResult out;
    double alpha = q(0).imag();
    alpha = std::remainder(alpha, 2.0 * kPi);
    if (alpha <= -kPi) alpha = kPi;
    out.alpha = alpha;
    out.lambda1 = q(1).imag();
    out.lambda2 = q(2).imag();
    cdouble rot = std::polar(1.0, out.alpha);
    out.max_residual = 0.0;
    for (int line = 0; line < 2; ++line) {
        for (size_t j = 0; j < n; ++j) {
            out.max_residual = std::max(
                out.max_residual, std::abs(bf[line][j] - rot * bg[line][j]));
        }
    }
    return out;
}

ZalikReport zalik_report(cdouble z0, double omega0, double tau, int N) {
    if (!(tau > 0.0)) {
        throw ContractViolation("zalik_report: tau must be positive");
    }
    if (N < 2) {
        throw ContractViolation("zalik_report: N must be at least 2");
    }
    auto c = [&](int k) {
        return cdouble(0.0, 1.0) * z0 - omega0 - 2.0 * static_cast<double>(k) * tau;
    };
    auto term = [&](int k) {
        double a = std::abs(c(k));
        return a > 0.0 ? 1.0 / a : 0.0;
    };

    ZalikReport rep;
    rep.partial_sums.resize(N);
    double running = term(0);
    for (int np = 1; np <= N; ++np) {
        running += term(np) + term(-np);
        rep.partial_sums[np - 1] = running;
    }

    // Least-squares fit S_{N'} ~ a ln N' + b over the trailing decade.
    int lo = std::max(2, N / 10);
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    int cnt = 0;
    for (int np = lo; np <= N; ++np) {
        double x = std::log(static_cast<double>(np));
        double y = rep.partial_sums[np - 1];
        sx += x;
        sy += y;
        sxx += x * x;
        sxy += x * y;
        ++cnt;
    }
    double denom = cnt * sxx - sx * sx;
    double a = denom != 0.0 ? (cnt * sxy - sx * sy) / denom : 0.0;
    double b = cnt != 0 ? (sy - a * sx) / cnt : 0.0;
    rep.divergence_verdict =
        a > 0.0 &&
        rep.partial_sums[N - 1] >= a * std::log(static_cast<double>(N)) -
                                       std::abs(b);

    // Cone condition |Re(c_k - 1/2)| >= delta |c_k - 1/2| for |k| >= N0.
    auto ratio = [&](int k) {
        cdouble d = c(k) - 0.5;
        double m = std::abs(d);
        return m > 0.0 ? std::abs(d.real()) / m : 0.0;
    };
    std::vector<double> suffix(N + 1, 0.0);
    double running_min = std::min(ratio(N), ratio(-N));
    suffix[N] = running_min;
    for (int j = N - 1; j >= 1; --j) {
        running_min = std::min({running_min, ratio(j), ratio(-j)});
        suffix[j] = running_min;
    }
    suffix[0] = std::min(running_min, ratio(0));

    rep.N0 = -1;
    rep.delta = 0.0;
    for (int j = 0; j <= N; ++j) {
        if (suffix[j] >= 0.5) {
            rep.N0 = j;
            rep.delta = suffix[j];
            break;
        }
    }
    if (rep.N0 < 0) {
        for (int j = 0; j <= N; ++j) rep.delta = std::max(rep.delta, suffix[j]);
    }
    return rep;
}

std::pair<BandlimitedSignal, BandlimitedSignal> counterexample_pair(
    const BandlimitedSignal& h1, const BandlimitedSignal& h2) {
    if (h1.bandwidth != h2.bandwidth) {
        throw ContractViolation(
            "counterexample_pair: inputs must share a bandwidth");
    }
    double scale = 0.0;
    for (const auto* h : {&h1, &h2}) {
        for (cdouble ck : h->coeffs) scale = std::max(scale, std::abs(ck));
    }
    for (const auto* h : {&h1, &h2}) {
        for (cdouble ck : h->coeffs) {
            if (std::abs(ck.imag()) > 1e-14 * scale) {
                throw ContractViolation(
                    "counterexample_pair: inputs must be real-valued");
            }
        }
    }
    int K = std::max(h1.half_width(), h2.half_width());
    BandlimitedSignal a = pad_to(h1, K);
    BandlimitedSignal b = pad_to(h2, K);

    double ip = 0.0, na = 0.0, nb = 0.0;
    for (size_t i = 0; i < a.coeffs.size(); ++i) {
        ip += a.coeffs[i].real() * b.coeffs[i].real();
        na += a.coeffs[i].real() * a.coeffs[i].real();
        nb += b.coeffs[i].real() * b.coeffs[i].real();
    }
    if (na == 0.0 || nb == 0.0 ||
        ip * ip >= (1.0 - 1e-12) * na * nb) {
        throw ContractViolation(
            "counterexample_pair: inputs are proportional, the pair would be "
            "trivial");
    }

    BandlimitedSignal u = a, v = a;
    for (size_t i = 0; i < a.coeffs.size(); ++i) {
        double re = a.coeffs[i].real();
        double im = b.coeffs[i].real();
        u.coeffs[i] = cdouble(re, im);
        v.coeffs[i] = cdouble(re, -im);
    }
    return {u, v};
}

}  // namespace gaborpr
