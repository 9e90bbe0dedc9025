#pragma once

#include <cstdint>
#include <vector>

#include "seis/dynamics.hpp"
#include "seis/lattice.hpp"
#include "seis/substructure.hpp"

namespace seis {

struct CouplingReport {
    double tau = 0;
    double T = 0;
    uint64_t seed = 0;
    bool discrepancy = false;
    double first_discrepancy_time = -1.0;
    // true iff the induced limit trajectory matched the rescaled SEIS process
    // at every sampled time outside S (trivially true once tracking stops on a
    // discrepancy, over the pre-discrepancy window only)
    bool agreement = true;
    double lebesgue_S = 0;  // total time with an infectious site, exact
    int onset_count = 0;
    int max_simultaneous_infectious = 0;
    bool onset_ordered_region = false;  // onset-ordering predicate on the full spacetime region
    // dispersal outcome per completed onset: (site, neighbor count, subset mask)
    struct Outcome {
        int site = 0;
        int k = 0;
        uint32_t mask = 0;
    };
    std::vector<Outcome> dispersal_outcomes;
};

// Onset-ordering predicate: between every two consecutive
// onset labels of the restricted region, the earlier onset's site carries a
// recovery label before the later onset.
bool onset_ordered(const Substructure& sub, const Region& region);

// Couples the time-rescaled SEIS process (onset rate 1, recovery rate tau,
// transmission rate lambda*tau) to the limit process it induces; eta0 must
// have no infectious sites and finitely many exposed sites.
CouplingReport run_coupled(double lambda, double tau, const Graph& g, const Configuration& eta0,
                           double T, uint64_t seed);

}  // namespace seis
