#pragma once

#include <functional>
#include <utility>
#include <vector>

#include "gaborpr/signal.hpp"

namespace gaborpr {

// Rectangular window: Im z in (imag_low, imag_high], Re z in [real_low,
// real_high]. The exclusive/inclusive imaginary bounds mirror the strip
// bookkeeping R + i(-tau, tau]; numerically, zeros on the boundary are
// rejected rather than classified.
struct Strip {
    double imag_low;
    double imag_high;
    double real_low;
    double real_high;
};

struct ZeroEntry {
    cdouble location;
    int multiplicity;
};

struct ZeroSet {
    std::vector<ZeroEntry> entries;
    double residual = 0.0;  // max |F| over the reported locations
    int total_multiplicity() const;
};

using EntireFn = std::function<cdouble(cdouble)>;

struct ZeroFindOptions {
    double cluster_radius = 1e-8;
    // Splits alternate direction, so the cell diameter halves every two
    // levels; 64 levels resolve a unit window down past cluster_radius.
    int max_depth = 64;
};

// Winding number of F along the window boundary (the argument-principle
// count of enclosed zeros). Throws on boundary zeros or an inconsistent
// phase accumulation.
int winding_count(const EntireFn& F, const Strip& window);

// Argument-principle rectangle subdivision with Newton refinement;
// multiplicities come from terminal cell winding numbers and always sum to
// the outer winding count.
ZeroSet find_zeros(const EntireFn& F, const Strip& window, double tolerance,
                   const ZeroFindOptions& options = {});

struct PeriodicityViolation {
    cdouble location;
    int m_f, m_g;                  // multiplicities at the location
    int m_f_shifted, m_g_shifted;  // at location + 2 i tau
};

struct PeriodicityVerdict {
    bool ok;
    std::vector<PeriodicityViolation> violations;
};

// Checks m_F(z + 2 i tau) - m_G(z + 2 i tau) = m_F(z) - m_G(z) at every zero
// in the strip or its translate. Two zeros of one set within match_radius of
// a query point raise an ambiguity error.
PeriodicityVerdict multiplicity_periodicity_check(const ZeroSet& zf,
                                                  const ZeroSet& zg, double tau,
                                                  const Strip& strip,
                                                  double match_radius = 1e-6);

// m_F(z) + m_F(conj z) == m_G(z) + m_G(conj z) at every computed zero
// (the one-line |F| = |G| reflection identity).
bool one_line_reflection_check(const ZeroSet& zf, const ZeroSet& zg,
                               double match_radius = 1e-6);

struct PhaseCheckResult {
    double alpha;     // constant of Q(z) = i(alpha + lambda1 z + lambda2 z^2)
    double lambda1;
    double lambda2;
    double max_residual;  // max |Bf - e^{i alpha} Bg| over the grid
};

// Requires |Bf| and |Bg| to agree within 1e-8 on the lines R and R + i tau at
// the grid points (else a hypothesis error); fits log(Bf/Bg) by a complex
// quadratic jointly over both lines.
PhaseCheckResult hadamard_phase_check(const BandlimitedSignal& f,
                                      const BandlimitedSignal& g, double tau,
                                      const std::vector<double>& grid);

struct ZalikReport {
    std::vector<double> partial_sums;  // S_{N'} = sum_{|k| <= N'} 1/|c_k|, N' = 1..N
    double delta;                      // cone constant at the onset
    int N0;                            // onset index; -1 if 1/2 is never reached
    bool divergence_verdict;
};

// c_k = i z0 - omega0 - 2 k tau, k = -N..N; zero elements are skipped in the
// sums per the theorem's convention.
ZalikReport zalik_report(cdouble z0, double omega0, double tau, int N);

// u = h1 + i h2, v = h1 - i h2 (coefficientwise); requires real-valued inputs
// with a shared bandwidth, rejects proportional pairs as trivial.
std::pair<BandlimitedSignal, BandlimitedSignal> counterexample_pair(
    const BandlimitedSignal& h1, const BandlimitedSignal& h2);

}  // namespace gaborpr
