#pragma once

#include <cstdint>
#include <iosfwd>
#include <utility>
#include <vector>

#include "seis/lattice.hpp"

namespace seis {

// One effective transition of the renormalized window process: jump from
// window state `from` to `to`, shifting the left edge by `delta`. Transitions
// producing identical (to, delta) are merged; pure edge shifts (to == from,
// delta != 0) are kept, no-effect events are excluded.
struct EdgeTransition {
    int from = 0;
    int to = 0;
    int delta = 0;
    double rate = 0.0;
    double prob = 0.0;  // rate / exit_rate[from]
};

// Embedded jump chain of the width-(m+1) window process anchored at the
// leftmost active site, with everything beyond the window frozen at the
// kind's boundary type (upper: 3, contact: 2, limit: 1).
struct EdgeChain {
    ProcessKind kind = ProcessKind::Contact;
    int m = 0;
    double lambda = 0.0;
    double tau = 0.0;
    std::vector<std::vector<uint8_t>> states;              // window configurations
    std::vector<double> exit_rate;                         // q_i
    std::vector<std::vector<EdgeTransition>> transitions;  // grouped by from-state

    int state_count() const { return static_cast<int>(states.size()); }
    int state_index(const std::vector<uint8_t>& window) const;
};

// All windows of length m+1 over the kind's alphabet with site 0 active,
// in canonical (base-|alphabet| integer) order.
// Supported kinds: Upper, Contact, Limit.
std::vector<std::vector<uint8_t>> enumerate_states(ProcessKind kind, int m);

// Builds the full chain; asserts irreducibility (structural error otherwise).
EdgeChain build_edge_chain(ProcessKind kind, int m, double lambda, double tau);

// Solves mu P = mu, sum mu = 1, residual <= 1e-10 (dense solve with a
// power-iteration fallback).
std::vector<double> invariant_measure(const EdgeChain& chain);

// Mean per-jump increment of the left edge under mu.
double expected_increment(const EdgeChain& chain, const std::vector<double>& mu);

double expected_increment(ProcessKind kind, int m, double lambda, double tau);

struct LambdaMResult {
    double value = 0.0;
    bool multiple_sign_changes = false;  // grid pre-scan found several roots
};

// sup{lambda : E_mu Delta > 0}, located by a 50-point grid pre-scan and
// bisection to absolute tolerance tol.
LambdaMResult lambda_m(ProcessKind kind, int m, double tau,
                       std::pair<double, double> bracket = {0.05, 3.0}, double tol = 1e-4);

// Audit CSV (i, j, r-merged rate, probability, delta).
void edge_chain_csv(const EdgeChain& chain, std::ostream& os);

}  // namespace seis
