#include "gaborpr/retrieval.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <thread>

#include "gaborpr/errors.hpp"
#include "gaborpr/rng.hpp"
#include "gaborpr/transforms.hpp"

namespace gaborpr {

namespace {

using Eigen::MatrixXcd;
using Eigen::MatrixXd;
using Eigen::VectorXcd;
using Eigen::VectorXd;

int thread_cap() {
    if (const char* env = std::getenv("GABORPR_THREADS")) {
        const int n = std::atoi(env);
        if (n >= 1) return n;
    }
    const unsigned hc = std::thread::hardware_concurrency();
    return hc ? int(hc) : 1;
}

void check_coeffs(const std::vector<cdouble>& coeffs) {
    if (coeffs.empty() || coeffs.size() % 2 == 0) {
        throw ContractViolation(
            "candidate coefficient vector must have odd length 2K+1");
    }
}

MatrixXcd build_phi(double B, int K, const std::vector<Measurement>& data) {
    MatrixXcd phi(data.size(), 2 * K + 1);
    for (std::size_t m = 0; m < data.size(); ++m) {
        const std::vector<cdouble> row = gabor_row(B, K, data[m].x, data[m].omega);
        for (int j = 0; j < 2 * K + 1; ++j) phi(Eigen::Index(m), j) = row[std::size_t(j)];
    }
    return phi;
}

VectorXd build_s(const std::vector<Measurement>& data) {
    VectorXd s(data.size());
    for (std::size_t m = 0; m < data.size(); ++m) s[Eigen::Index(m)] = data[m].value;
    return s;
}

double squared_loss(const MatrixXcd& phi, const VectorXd& s, const VectorXcd& c) {
    const VectorXcd G = phi * c;
    double L = 0.0;
    for (Eigen::Index m = 0; m < G.size(); ++m) {
        const double r = std::norm(G[m]) - s[m];
        L += r * r;
    }
    return L;
}

VectorXd squared_gradient(const MatrixXcd& phi, const VectorXd& s,
                          const VectorXcd& c) {
    const VectorXcd G = phi * c;
    const Eigen::Index M = phi.rows(), P = phi.cols();
    VectorXd g = VectorXd::Zero(2 * P);
    for (Eigen::Index m = 0; m < M; ++m) {
        const double r = std::norm(G[m]) - s[m];
        const cdouble cg = std::conj(G[m]);
        for (Eigen::Index k = 0; k < P; ++k) {
            const cdouble w = phi(m, k) * cg;
            g[2 * k] += 2.0 * r * 2.0 * w.real();
            g[2 * k + 1] += 2.0 * r * (-2.0 * w.imag());
        }
    }
    return g;
}

enum class Residual { kAmplitude, kSquared };

constexpr double kAmpFloor = 1e-24;  // smooths |G| at the origin

struct LmOutcome {
    VectorXcd c;
    double local_loss;  // in the mode's own residuals
    int iterations;
};

// Levenberg-Marquardt with mu * diag(J^T J) damping; accepts only decreasing
// steps, so the per-iteration loss trace is monotone.
LmOutcome lm_run(const MatrixXcd& phi, const VectorXd& s, VectorXcd c,
                 int max_iterations, Residual mode,
                 std::vector<double>* trace = nullptr) {
    const Eigen::Index M = phi.rows(), P = phi.cols();
    VectorXd sqrt_s(M);
    for (Eigen::Index m = 0; m < M; ++m) sqrt_s[m] = std::sqrt(std::max(0.0, s[m]));

    const auto residuals = [&](const VectorXcd& G, VectorXd& r) {
        for (Eigen::Index m = 0; m < M; ++m) {
            r[m] = (mode == Residual::kAmplitude)
                       ? std::sqrt(std::norm(G[m]) + kAmpFloor) - sqrt_s[m]
                       : std::norm(G[m]) - s[m];
        }
    };

    VectorXcd G = phi * c;
    VectorXd r(M), rn(M);
    residuals(G, r);
    double L = r.squaredNorm();
    double mu = 1e-2;
    MatrixXd J(M, 2 * P);
    int it = 0;
    for (; it < max_iterations; ++it) {
        for (Eigen::Index m = 0; m < M; ++m) {
            const cdouble cg = std::conj(G[m]);
            const double amp = std::sqrt(std::norm(G[m]) + kAmpFloor);
            for (Eigen::Index k = 0; k < P; ++k) {
                const cdouble w = phi(m, k) * cg;
                if (mode == Residual::kAmplitude) {
                    J(m, 2 * k) = w.real() / amp;
                    J(m, 2 * k + 1) = -w.imag() / amp;
                } else {
                    J(m, 2 * k) = 2.0 * w.real();
                    J(m, 2 * k + 1) = -2.0 * w.imag();
                }
            }
        }
        const VectorXd jtr = J.transpose() * r;
        if (L < 1e-17 || 2.0 * jtr.norm() < 1e-11) break;
        const MatrixXd jtj = J.transpose() * J;
        const VectorXd damp = jtj.diagonal().cwiseMax(1e-12);
        bool accepted = false;
        for (int tries = 0; tries < 50; ++tries) {
            MatrixXd A = jtj;
            A.diagonal() += mu * damp;
            const VectorXd step = A.ldlt().solve(-jtr);
            VectorXcd cn = c;
            for (Eigen::Index k = 0; k < P; ++k) {
                cn[k] += cdouble(step[2 * k], step[2 * k + 1]);
            }
            const VectorXcd Gn = phi * cn;
            residuals(Gn, rn);
            const double Ln = rn.squaredNorm();
            if (Ln < L) {
                c = cn;
                G = Gn;
                r = rn;
                L = Ln;
                mu = std::max(mu / 3.0, 1e-14);
                accepted = true;
                if (trace) trace->push_back(L);
                break;
            }
            mu *= 4.0;
        }
        if (!accepted) break;  // stalled at this damping scale
    }
    return LmOutcome{std::move(c), L, it};
}

struct StartOutcome {
    VectorXcd c;
    double loss = 0.0;
    int iterations = 0;
};

constexpr int kMaxHops = 40;
constexpr double kHopScales[4] = {0.25, 0.5, 1.0, 2.0};

StartOutcome run_start(const MatrixXcd& phi, const VectorXd& s, double B,
                       int K, const ReconstructionConfig& cfg, int start) {
    GaussianStream rng(mix_seed(cfg.seed, std::uint64_t(start)));
    const int P = 2 * K + 1;
    VectorXcd c0(P);
    for (int k = 0; k < P; ++k) c0[k] = rng.next_complex();
    const double n = std::sqrt(2.0 * B) * c0.norm();
    if (n > 0.0) c0 /= n;

    const int warmup_iters = std::min(120, cfg.max_iterations);
    StartOutcome out;
    LmOutcome w = lm_run(phi, s, c0, warmup_iters, Residual::kAmplitude);
    LmOutcome p = lm_run(phi, s, w.c, cfg.max_iterations, Residual::kSquared);
    out.iterations = w.iterations + p.iterations;
    VectorXcd best = p.c;
    double best_loss = squared_loss(phi, s, best);
    for (int hop = 0; hop < kMaxHops && best_loss > cfg.loss_tolerance; ++hop) {
        const double scale = kHopScales[hop % 4] * best.norm();
        VectorXcd cp = best;
        for (int k = 0; k < P; ++k) {
            cp[k] += scale * rng.next_complex() / std::sqrt(2.0 * P);
        }
        w = lm_run(phi, s, cp, warmup_iters, Residual::kAmplitude);
        p = lm_run(phi, s, w.c, cfg.max_iterations, Residual::kSquared);
        out.iterations += w.iterations + p.iterations;
        const double cand_loss = squared_loss(phi, s, p.c);
        if (cand_loss < best_loss) {
            best = p.c;
            best_loss = cand_loss;
        }
    }
    out.c = std::move(best);
    out.loss = best_loss;
    return out;
}

}  // namespace

std::vector<Measurement> to_measurements(const MagnitudeSamples& samples,
                                         int bin) {
    if (bin != 0 && bin != 1) {
        throw ContractViolation("bin index must be 0 or 1");
    }
    const MeasurementGrid& g = samples.grid;
    std::vector<Measurement> out;
    out.reserve(std::size_t(g.count()));
    for (int n = -g.half_count; n <= g.half_count; ++n) {
        out.push_back(Measurement{
            g.x(n), g.omega(bin),
            samples.values[std::size_t(bin)][std::size_t(n + g.half_count)]});
    }
    return out;
}

std::vector<Measurement> to_measurements(const MagnitudeSamples& samples) {
    std::vector<Measurement> out = to_measurements(samples, 0);
    const std::vector<Measurement> second = to_measurements(samples, 1);
    out.insert(out.end(), second.begin(), second.end());
    return out;
}

LossEval loss(const std::vector<cdouble>& coeffs, double bandwidth,
              const std::vector<Measurement>& data) {
    check_coeffs(coeffs);
    const int K = (int(coeffs.size()) - 1) / 2;
    const MatrixXcd phi = build_phi(bandwidth, K, data);
    const VectorXd s = build_s(data);
    VectorXcd c(coeffs.size());
    for (std::size_t i = 0; i < coeffs.size(); ++i) c[Eigen::Index(i)] = coeffs[i];
    const VectorXd g = squared_gradient(phi, s, c);
    return LossEval{squared_loss(phi, s, c),
                    std::vector<double>(g.data(), g.data() + g.size())};
}

LossEval loss(const std::vector<cdouble>& coeffs, const MagnitudeSamples& samples) {
    return loss(coeffs, samples.grid.bandwidth, to_measurements(samples));
}

std::vector<cdouble> lm_descend(const std::vector<cdouble>& init,
                                double bandwidth,
                                const std::vector<Measurement>& data,
                                int max_iterations, std::vector<double>* trace) {
    check_coeffs(init);
    const int K = (int(init.size()) - 1) / 2;
    const MatrixXcd phi = build_phi(bandwidth, K, data);
    const VectorXd s = build_s(data);
    VectorXcd c(init.size());
    for (std::size_t i = 0; i < init.size(); ++i) c[Eigen::Index(i)] = init[i];
    const LmOutcome out =
        lm_run(phi, s, c, max_iterations, Residual::kSquared, trace);
    return std::vector<cdouble>(out.c.data(), out.c.data() + out.c.size());
}

ReconstructionResult reconstruct(double bandwidth, int K,
                                 const std::vector<Measurement>& data,
                                 const ReconstructionConfig& config) {
    if (K < 0) throw ContractViolation("reconstruct requires K >= 0");
    if (config.starts < 1 || config.max_iterations < 1 ||
        !(config.gradient_tolerance > 0.0) || !(config.loss_tolerance > 0.0)) {
        throw ContractViolation("reconstruction config fields must be positive");
    }
    if (data.empty()) throw ContractViolation("no measurements");
    const MatrixXcd phi = build_phi(bandwidth, K, data);
    const VectorXd s = build_s(data);

    std::vector<StartOutcome> outcomes(std::size_t(config.starts));
    const int threads = std::min(thread_cap(), config.starts);
    if (threads <= 1) {
        for (int i = 0; i < config.starts; ++i) {
            outcomes[std::size_t(i)] = run_start(phi, s, bandwidth, K, config, i);
        }
    } else {
        std::vector<std::thread> pool;
        pool.reserve(std::size_t(threads));
        for (int t = 0; t < threads; ++t) {
            pool.emplace_back([&, t] {
                for (int i = t; i < config.starts; i += threads) {
                    outcomes[std::size_t(i)] =
                        run_start(phi, s, bandwidth, K, config, i);
                }
            });
        }
        for (auto& th : pool) th.join();
    }

    int win = 0;
    for (int i = 1; i < config.starts; ++i) {
        if (outcomes[std::size_t(i)].loss < outcomes[std::size_t(win)].loss) win = i;
    }
    const StartOutcome& w = outcomes[std::size_t(win)];
    std::vector<cdouble> coeffs(w.c.data(), w.c.data() + w.c.size());
    const VectorXd grad = squared_gradient(phi, s, w.c);
    ReconstructionResult res;
    res.signal = BandlimitedSignal{bandwidth, std::move(coeffs)};
    res.loss = w.loss;
    res.converged = w.loss <= config.loss_tolerance ||
                    grad.norm() <= config.gradient_tolerance;
    res.start_index = win;
    res.iterations = w.iterations;
    return res;
}

ReconstructionResult reconstruct(const MagnitudeSamples& samples, int K,
                                 const ReconstructionConfig& config) {
    return reconstruct(samples.grid.bandwidth, K, to_measurements(samples),
                       config);
}

double empirical_distinctness(const BandlimitedSignal& f,
                              const BandlimitedSignal& g,
                              const MeasurementGrid& grid) {
    if (f.bandwidth != g.bandwidth) {
        throw ContractViolation("empirical_distinctness requires a shared B");
    }
    double worst = 0.0;
    for (int bin = 0; bin < 2; ++bin) {
        for (int n = -grid.half_count; n <= grid.half_count; ++n) {
            const double x = grid.x(n);
            const double d = std::abs(std::norm(gabor_transform(f, x, grid.omega(bin))) -
                                      std::norm(gabor_transform(g, x, grid.omega(bin))));
            worst = std::max(worst, d);
        }
    }
    return worst;
}

}  // namespace gaborpr
