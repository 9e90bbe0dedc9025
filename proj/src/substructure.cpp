#include "seis/substructure.hpp"

#include <algorithm>
#include <ostream>
#include <stdexcept>

#include "seis/rng.hpp"

namespace seis {

bool label_less(const Label& a, const Label& b) {
    if (a.time != b.time) return a.time < b.time;
    if (a.kind != b.kind) return static_cast<int>(a.kind) < static_cast<int>(b.kind);
    if (a.site != b.site) return a.site < b.site;
    return a.target < b.target;
}

namespace {

// Fiber stream categories; category 3 is the extra lambda'-lambda stream used
// by the splitting coupling.
enum : uint64_t { kCatRecovery = 0, kCatOnset = 1, kCatTransmission = 2, kCatTransmissionExtra = 3 };

std::vector<double> generate_fiber(uint64_t seed, uint64_t category, uint64_t index, double rate,
                                   double horizon) {
    std::vector<double> times;
    if (rate <= 0.0 || horizon <= 0.0) return times;
    SplitMix64 rng(mix_seed(seed, category, index));
    double t = rng.exponential(rate);
    while (t <= horizon) {
        times.push_back(t);
        t += rng.exponential(rate);
    }
    return times;
}

void check_params(const Intensities& in, double horizon) {
    if (in.recovery < 0 || in.onset < 0 || in.transmission < 0)
        throw std::invalid_argument("substructure: intensities must be nonnegative");
    if (horizon < 0) throw std::invalid_argument("substructure: horizon must be nonnegative");
}

}  // namespace

size_t Substructure::label_count() const {
    size_t c = 0;
    for (const auto& f : recovery_times) c += f.size();
    for (const auto& f : onset_times) c += f.size();
    for (const auto& f : transmission_times) c += f.size();
    return c;
}

std::vector<Label> Substructure::all_labels_sorted() const {
    std::vector<Label> out;
    out.reserve(label_count());
    for (int x = 0; x < graph.n; ++x)
        for (double t : recovery_times[static_cast<size_t>(x)])
            out.push_back({LabelKind::Recovery, x, -1, t});
    for (int x = 0; x < graph.n; ++x)
        for (double t : onset_times[static_cast<size_t>(x)])
            out.push_back({LabelKind::Onset, x, -1, t});
    for (size_t e = 0; e < graph.directed_edges.size(); ++e)
        for (double t : transmission_times[e])
            out.push_back({LabelKind::Transmission, graph.directed_edges[e].first,
                           graph.directed_edges[e].second, t});
    std::sort(out.begin(), out.end(), label_less);
    return out;
}

Substructure Substructure::scripted(const Graph& g, double horizon,
                                    const std::vector<Label>& labels) {
    Substructure sub;
    sub.graph = g;
    sub.horizon = horizon;
    sub.recovery_times.assign(static_cast<size_t>(g.n), {});
    sub.onset_times.assign(static_cast<size_t>(g.n), {});
    sub.transmission_times.assign(g.directed_edges.size(), {});
    for (const Label& l : labels) {
        if (l.time < 0 || l.time > horizon)
            throw std::out_of_range("scripted substructure: label time outside [0, horizon]");
        if (l.site < 0 || l.site >= g.n)
            throw std::invalid_argument("scripted substructure: label site outside the graph");
        switch (l.kind) {
            case LabelKind::Recovery:
                sub.recovery_times[static_cast<size_t>(l.site)].push_back(l.time);
                break;
            case LabelKind::Onset:
                sub.onset_times[static_cast<size_t>(l.site)].push_back(l.time);
                break;
            case LabelKind::Transmission: {
                int e = g.directed_edge_index(l.site, l.target);
                if (e < 0)
                    throw std::invalid_argument(
                        "scripted substructure: transmission on a non-adjacent pair");
                sub.transmission_times[static_cast<size_t>(e)].push_back(l.time);
                break;
            }
        }
    }
    auto sort_all = [](std::vector<std::vector<double>>& fibers) {
        for (auto& f : fibers) std::sort(f.begin(), f.end());
    };
    sort_all(sub.recovery_times);
    sort_all(sub.onset_times);
    sort_all(sub.transmission_times);
    return sub;
}

Substructure generate(const Graph& g, const Intensities& intensities, double horizon,
                      uint64_t seed) {
    check_params(intensities, horizon);
    Substructure sub;
    sub.graph = g;
    sub.intensities = intensities;
    sub.horizon = horizon;
    sub.seed = seed;
    sub.recovery_times.resize(static_cast<size_t>(g.n));
    sub.onset_times.resize(static_cast<size_t>(g.n));
    sub.transmission_times.resize(g.directed_edges.size());
    for (int x = 0; x < g.n; ++x) {
        sub.recovery_times[static_cast<size_t>(x)] =
            generate_fiber(seed, kCatRecovery, static_cast<uint64_t>(x), intensities.recovery,
                           horizon);
        sub.onset_times[static_cast<size_t>(x)] =
            generate_fiber(seed, kCatOnset, static_cast<uint64_t>(x), intensities.onset, horizon);
    }
    for (size_t e = 0; e < g.directed_edges.size(); ++e)
        sub.transmission_times[e] =
            generate_fiber(seed, kCatTransmission, e, intensities.transmission, horizon);
    return sub;
}

std::vector<Label> restrict_labels(const Substructure& sub, const Region& region) {
    std::vector<Label> out;
    for (const auto& [fiber, iv] : region.fibers) {
        if (iv.lo > iv.hi) throw std::invalid_argument("restrict: ill-ordered interval");
        if (iv.lo < 0 || iv.hi > sub.horizon)
            throw std::out_of_range("restrict: region interval outside [0, horizon]");
        const std::vector<double>* times = nullptr;
        int target = -1;
        switch (fiber.kind) {
            case LabelKind::Recovery:
            case LabelKind::Onset: {
                if (fiber.site < 0 || fiber.site >= sub.graph.n)
                    throw std::invalid_argument("restrict: fiber site not in graph");
                const auto& per_site = fiber.kind == LabelKind::Recovery ? sub.recovery_times
                                                                         : sub.onset_times;
                times = &per_site[static_cast<size_t>(fiber.site)];
                break;
            }
            case LabelKind::Transmission: {
                int e = sub.graph.directed_edge_index(fiber.site, fiber.target);
                if (e < 0) throw std::invalid_argument("restrict: fiber edge not in graph");
                times = &sub.transmission_times[static_cast<size_t>(e)];
                target = fiber.target;
                break;
            }
        }
        auto lo = std::lower_bound(times->begin(), times->end(), iv.lo);
        auto hi = std::upper_bound(times->begin(), times->end(), iv.hi);
        for (auto it = lo; it != hi; ++it)
            out.push_back({fiber.kind, fiber.site, target, *it});
    }
    std::sort(out.begin(), out.end(), label_less);
    return out;
}

Region Region::rectangle(const Graph& g, int site_lo, int site_hi, double t_lo, double t_hi) {
    Region r;
    TimeInterval iv{t_lo, t_hi};
    for (int x = site_lo; x <= site_hi; ++x) {
        r.fibers.push_back({{LabelKind::Recovery, x, -1}, iv});
        r.fibers.push_back({{LabelKind::Onset, x, -1}, iv});
    }
    for (const auto& [from, to] : g.directed_edges)
        if (from >= site_lo && from <= site_hi && to >= site_lo && to <= site_hi)
            r.fibers.push_back({{LabelKind::Transmission, from, to}, iv});
    return r;
}

std::pair<Substructure, Substructure> split_for_lambda_coupling(const Graph& g, double lambda,
                                                                double lambda_prime,
                                                                const Intensities& other,
                                                                double horizon, uint64_t seed) {
    if (lambda < 0 || lambda >= lambda_prime)
        throw std::invalid_argument("split_for_lambda_coupling: requires 0 <= lambda < lambda'");
    Intensities base = other;
    base.transmission = lambda;
    Substructure low = generate(g, base, horizon, seed);
    Substructure high = low;
    high.intensities.transmission = lambda_prime;
    for (size_t e = 0; e < g.directed_edges.size(); ++e) {
        std::vector<double> extra =
            generate_fiber(seed, kCatTransmissionExtra, e, lambda_prime - lambda, horizon);
        auto& merged = high.transmission_times[e];
        merged.insert(merged.end(), extra.begin(), extra.end());
        std::sort(merged.begin(), merged.end());
    }
    return {std::move(low), std::move(high)};
}

void dump_csv(const Substructure& sub, std::ostream& os) {
    os << "kind,site,target,time\n";
    for (const Label& l : sub.all_labels_sorted()) {
        const char* k = l.kind == LabelKind::Recovery ? "recovery"
                        : l.kind == LabelKind::Onset  ? "onset"
                                                      : "transmission";
        os << k << ',' << l.site << ',' << l.target << ',' << l.time << '\n';
    }
}

}  // namespace seis
