#pragma once

#include <cstdint>
#include <iosfwd>
#include <utility>
#include <vector>

#include "seis/lattice.hpp"

namespace seis {

enum class LabelKind : uint8_t { Recovery = 0, Onset = 1, Transmission = 2 };

// A single Poisson label. Recovery/onset live on a vertex fiber (target = -1),
// transmission on a directed edge fiber (site -> target).
struct Label {
    LabelKind kind = LabelKind::Recovery;
    int site = 0;
    int target = -1;
    double time = 0.0;
};

// Tie-break for simultaneous floating-point times: (time, kind, site, target).
bool label_less(const Label& a, const Label& b);

struct Intensities {
    double recovery = 0.0;
    double onset = 0.0;
    double transmission = 0.0;  // per directed edge
};

struct FiberId {
    LabelKind kind = LabelKind::Recovery;
    int site = 0;    // vertex, or transmission source
    int target = -1; // transmission target, else -1
};

struct TimeInterval {
    double lo = 0.0;
    double hi = 0.0;
};

// A set of (fiber, time-interval) pairs; rectangles are site-range x interval.
struct Region {
    std::vector<std::pair<FiberId, TimeInterval>> fibers;

    // All vertex fibers for sites in [site_lo, site_hi] and all directed edge
    // fibers with both endpoints in that range, over [t_lo, t_hi].
    static Region rectangle(const Graph& g, int site_lo, int site_hi, double t_lo, double t_hi);
};

// Seeded, time-sorted Poisson label streams per fiber up to a horizon.
// Each fiber's stream is a counter-based function of (seed, fiber id), so
// generation order and query order are irrelevant. Immutable once built.
struct Substructure {
    Graph graph;
    Intensities intensities;
    double horizon = 0.0;
    uint64_t seed = 0;

    std::vector<std::vector<double>> recovery_times;      // [site]
    std::vector<std::vector<double>> onset_times;         // [site]
    std::vector<std::vector<double>> transmission_times;  // [directed edge index]

    size_t label_count() const;
    // All labels merged, sorted by label_less.
    std::vector<Label> all_labels_sorted() const;

    // Hand-built substructure for scripted tests; validates sortedness and range.
    static Substructure scripted(const Graph& g, double horizon, const std::vector<Label>& labels);
};

Substructure generate(const Graph& g, const Intensities& intensities, double horizon,
                      uint64_t seed);

// Labels whose (fiber, time) lie in the region, globally sorted by time.
std::vector<Label> restrict_labels(const Substructure& sub, const Region& region);

// Coupled pair: the lambda-substructure's transmission labels are a subset of
// the lambda_prime-substructure's; recovery/onset labels identical.
std::pair<Substructure, Substructure> split_for_lambda_coupling(const Graph& g, double lambda,
                                                                double lambda_prime,
                                                                const Intensities& other,
                                                                double horizon, uint64_t seed);

// Debug dump as sorted CSV rows (fiber, kind, time). Not a stable format.
void dump_csv(const Substructure& sub, std::ostream& os);

}  // namespace seis
