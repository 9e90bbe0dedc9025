#pragma once

#include <cstdint>
#include <iosfwd>
#include <vector>

#include "seis/dynamics.hpp"
#include "seis/lattice.hpp"

namespace seis {

// Spacetime block [0,J] x [0,T], shifted copies overlapping on j = J-K+1 sites.
struct BlockGeometry {
    int J = 7;            // sites 0..J
    int K = 6;            // horizontal shift
    int required = 1;     // i: active sites needed on each flank
    double budget = 650;  // expected label count in the block; sets T unless overridden
    double T = 0;         // 0 => budget / gamma

    int sites() const { return J + 1; }
    int overlap() const { return J - K + 1; }  // j
    void validate() const;
};

// Uniformized jump chain P = I + Q/gamma of the process restricted to the
// block's sites, where gamma is the total label intensity over the block.
struct UniformizedChain {
    Process process;
    int sites = 0;
    int alphabet = 0;  // per-site codes 0..alphabet-1
    double gamma = 0;
    // sparse rows: P[i] = diag[i] at i plus (col, value) off-diagonals
    std::vector<double> diag;
    std::vector<std::vector<std::pair<int, double>>> rows;

    long state_count() const { return static_cast<long>(diag.size()); }
    long encode(const Configuration& eta) const;
    Configuration decode(long index) const;
    double row_sum(long i) const;
};

// Supported kinds: TwoStageLower (alphabet 3) and Limit (alphabet 2).
UniformizedChain uniformized_chain(ProcessKind kind, const BlockGeometry& geom, double lambda,
                                   double tau);

struct PoissonSumResult {
    std::vector<double> v;     // sub-probability vector at time T (one-sided truncation)
    double deficiency = 0.0;   // Poisson(gamma*T) tail mass beyond N
    int terms = 0;
};

// sum_{i=0..N} e^{-gT} (gT)^i / i! * (v0 P^i), by iterated vector products.
PoissonSumResult poisson_time_T(const UniformizedChain& chain, double T,
                                const std::vector<double>& v0, int N);

int default_term_count(double gamma_T);

struct CertResult {
    ProcessKind kind = ProcessKind::TwoStageLower;
    BlockGeometry geometry;
    double lambda = 0, tau = 0, threshold = 0;
    double gamma = 0, T = 0;
    int terms = 0;
    double deficiency = 0;
    // crossing probability per minimal good initial configuration
    std::vector<double> left_flank_probs;
    std::vector<double> right_flank_probs;
    double min_prob = 0;
    bool pass = false;
};

// Certified lower bound on the crossing probability, minimized over all
// minimal good initial configurations (i weakest-type actives among the
// leftmost j sites, plus the reflected right-flank starts as a cross-check).
CertResult certify_block(ProcessKind kind, const BlockGeometry& geom, double lambda, double tau,
                         double threshold = 0.819);

// Crossing probability from an arbitrary initial configuration.
double crossing_probability(const UniformizedChain& chain, const BlockGeometry& geom,
                            const Configuration& eta0);

void cert_report(const CertResult& cert, std::ostream& os);
void cert_report_csv(const CertResult& cert, std::ostream& os);

}  // namespace seis
