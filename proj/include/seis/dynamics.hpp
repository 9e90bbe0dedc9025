#pragma once

#include <cstdint>
#include <iosfwd>
#include <vector>

#include "seis/lattice.hpp"
#include "seis/rng.hpp"
#include "seis/substructure.hpp"

namespace seis {

// Process kind plus parameters. tau is unused by Contact and Limit.
struct Process {
    ProcessKind kind = ProcessKind::Contact;
    double lambda = 1.0;
    double tau = 0.0;

    Process() = default;
    Process(ProcessKind k, double l, double t = 0.0) : kind(k), lambda(l), tau(t) { validate(); }
    void validate() const;
    bool uses_onset() const {
        return kind == ProcessKind::Seis || kind == ProcessKind::TwoStageLower ||
               kind == ProcessKind::Upper || kind == ProcessKind::Limit;
    }
};

struct TransitionRecord {
    double time = 0.0;
    int site = 0;
    uint8_t before = 0;
    uint8_t after = 0;
};

// Effective transitions only; replaying them from `initial` gives `final_state`.
// A limit-process dispersal jump is recorded as consecutive entries sharing one
// time (vacated site first).
struct Trajectory {
    Configuration initial;
    std::vector<TransitionRecord> events;
    Configuration final_state;
};

// Pathwise construction: applies the substructure's labels in time order with
// the per-kind effect table. For Limit, each onset label at an occupied site
// triggers a dispersal draw from a per-(site, onset ordinal) stream derived
// from the substructure seed, so replay is deterministic and two limit
// processes sharing a substructure share their dispersal randomness.
Trajectory evolve(const Process& proc, const Configuration& eta0, const Substructure& sub,
                  double t_end);

// As above but with the label list already merged/sorted (all labels of `sub`).
Trajectory evolve_with_labels(const Process& proc, const Configuration& eta0,
                              const Substructure& sub, const std::vector<Label>& labels,
                              double t_end);

// One instantaneous transition of the rate map: a set of simultaneous site
// changes (singleton except for limit dispersal outcomes) and its rate.
struct RateEntry {
    std::vector<std::pair<int, uint8_t>> changes;  // (site, new type), sorted by site
    double rate = 0.0;
};

// Exact instantaneous rates of every effective transition from eta.
std::vector<RateEntry> rate_map(const Process& proc, const Configuration& eta, const Graph& g);

// Offspring-set distribution of a single infectious site with k neighbors:
// prob[mask] over the 2^k neighbor subsets.
struct DispersalPmf {
    double lambda = 0.0;
    int k = 0;
    std::vector<double> prob;
};

// p(A) = a! * prod_{j<a} lambda/(1+(k-j)lambda) * 1/(1+(k-a)lambda), a = |A|.
DispersalPmf dispersal_pmf(double lambda, int k);

// Inverse-CDF draw of a neighbor subset mask.
uint32_t sample_dispersal(const DispersalPmf& pmf, SplitMix64& rng);

struct EdgeSpeedResult {
    double alpha = 0.0;       // mean least-squares slope of l_t over [t_end/2, t_end]
    double half_width = 0.0;  // 1.96 * standard error over replicas
    double std_error = 0.0;
    int replicas = 0;
};

// Front drift of the half-line initial condition on a width-`window` path;
// throws std::runtime_error if the front reaches the window boundary.
EdgeSpeedResult edge_speed(const Process& proc, int window, double t_end, int replicas,
                           uint64_t seed);

// Trajectory CSV rows (time, site, old, new).
void trajectory_csv(const Trajectory& traj, std::ostream& os);

}  // namespace seis
