#include "seis/dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <ostream>
#include <stdexcept>

namespace seis {

namespace {

constexpr uint64_t kDispersalTag = 0xD15BE45AD15BE45Aull;

// Dispersal draw for an onset at `site` (its n-th onset label), shared-stream
// keyed so that processes replaying the same substructure stay aligned. The
// subset is the exponential race outcome {y : Exp(lambda)_y < Exp(1)}, which
// has exactly the dispersal law and is monotone increasing in lambda for
// fixed uniforms.
uint32_t draw_dispersal_mask(uint64_t seed, int site, int ordinal, int k, double lambda) {
    SplitMix64 rng(mix_seed(mix_seed(seed, kDispersalTag), static_cast<uint64_t>(site),
                            static_cast<uint64_t>(ordinal)));
    double recovery = -std::log(rng.u01());
    uint32_t mask = 0;
    for (int i = 0; i < k; ++i) {
        double arrival = -std::log(rng.u01()) / lambda;
        if (arrival < recovery) mask |= (1u << i);
    }
    return mask;
}

}  // namespace

void Process::validate() const {
    if (lambda <= 0) throw std::invalid_argument("process: lambda must be positive");
    bool needs_tau = kind == ProcessKind::Seis || kind == ProcessKind::TwoStageLower ||
                     kind == ProcessKind::Upper;
    if (needs_tau && tau <= 0)
        throw std::invalid_argument("process: tau must be positive for " +
                                    process_kind_name(kind));
}

Trajectory evolve(const Process& proc, const Configuration& eta0, const Substructure& sub,
                  double t_end) {
    return evolve_with_labels(proc, eta0, sub, sub.all_labels_sorted(), t_end);
}

Trajectory evolve_with_labels(const Process& proc, const Configuration& eta0,
                              const Substructure& sub, const std::vector<Label>& labels,
                              double t_end) {
    proc.validate();
    if (eta0.kind != proc.kind)
        throw std::invalid_argument("evolve: configuration kind does not match process kind");
    eta0.validate();
    if (eta0.size() != sub.graph.n)
        throw std::invalid_argument("evolve: configuration size does not match graph");
    if (t_end > sub.horizon) throw std::out_of_range("evolve: t_end beyond substructure horizon");

    Trajectory traj;
    traj.initial = eta0;
    Configuration eta = eta0;
    std::vector<int> onset_ordinal(static_cast<size_t>(sub.graph.n), 0);

    auto set_type = [&](int x, uint8_t to, double t) {
        traj.events.push_back({t, x, eta[x], to});
        eta[x] = to;
    };

    for (const Label& l : labels) {
        if (l.time > t_end) break;
        switch (proc.kind) {
            case ProcessKind::Contact:
                if (l.kind == LabelKind::Recovery && eta[l.site] == 2)
                    set_type(l.site, 0, l.time);
                else if (l.kind == LabelKind::Transmission && eta[l.site] == 2 &&
                         eta[l.target] == 0)
                    set_type(l.target, 2, l.time);
                break;
            case ProcessKind::Seis:
            case ProcessKind::TwoStageLower:
                if (l.kind == LabelKind::Recovery) {
                    if (eta[l.site] == 2) set_type(l.site, 0, l.time);
                    else if (proc.kind == ProcessKind::TwoStageLower && eta[l.site] == 1)
                        set_type(l.site, 0, l.time);
                } else if (l.kind == LabelKind::Onset) {
                    if (eta[l.site] == 1) set_type(l.site, 2, l.time);
                } else if (eta[l.site] == 2 && eta[l.target] == 0) {
                    set_type(l.target, 1, l.time);
                }
                break;
            case ProcessKind::Upper:
                if (l.kind == LabelKind::Recovery) {
                    if (eta[l.site] == 2) set_type(l.site, 0, l.time);
                    else if (eta[l.site] == 3) set_type(l.site, 1, l.time);
                } else if (l.kind == LabelKind::Onset) {
                    if (eta[l.site] == 1 || eta[l.site] == 3) set_type(l.site, 2, l.time);
                } else if (eta[l.site] == 2 || eta[l.site] == 3) {
                    if (eta[l.target] == 0) set_type(l.target, 1, l.time);
                    else if (eta[l.target] == 2) set_type(l.target, 3, l.time);
                }
                break;
            case ProcessKind::Limit:
                if (l.kind == LabelKind::Onset) {
                    int ord = onset_ordinal[static_cast<size_t>(l.site)]++;
                    if (eta[l.site] == 1) {
                        const auto& nbrs = sub.graph.adjacency[static_cast<size_t>(l.site)];
                        uint32_t mask = draw_dispersal_mask(sub.seed, l.site, ord,
                                                            static_cast<int>(nbrs.size()),
                                                            proc.lambda);
                        set_type(l.site, 0, l.time);
                        for (size_t i = 0; i < nbrs.size(); ++i)
                            if ((mask & (1u << i)) && eta[nbrs[i]] == 0)
                                set_type(nbrs[i], 1, l.time);
                    }
                }
                break;
        }
    }
    traj.final_state = eta;
    return traj;
}

std::vector<RateEntry> rate_map(const Process& proc, const Configuration& eta, const Graph& g) {
    proc.validate();
    if (eta.kind != proc.kind)
        throw std::invalid_argument("rate_map: configuration kind does not match process kind");
    eta.validate();

    std::vector<RateEntry> out;
    auto single = [&](int x, uint8_t to, double rate) {
        out.push_back({{{x, to}}, rate});
    };
    auto infectious_neighbors = [&](int x) {
        int c = 0;
        for (int y : g.adjacency[static_cast<size_t>(x)]) {
            uint8_t s = eta[y];
            if (s == 2 || (proc.kind == ProcessKind::Upper && s == 3)) ++c;
        }
        return c;
    };

    switch (proc.kind) {
        case ProcessKind::Contact:
            for (int x = 0; x < eta.size(); ++x) {
                if (eta[x] == 2) single(x, 0, 1.0);
                else if (int n2 = infectious_neighbors(x); n2 > 0)
                    single(x, 2, proc.lambda * n2);
            }
            break;
        case ProcessKind::Seis:
        case ProcessKind::TwoStageLower:
            for (int x = 0; x < eta.size(); ++x) {
                if (eta[x] == 2) single(x, 0, 1.0);
                else if (eta[x] == 1) {
                    single(x, 2, 1.0 / proc.tau);
                    if (proc.kind == ProcessKind::TwoStageLower) single(x, 0, 1.0);
                } else if (int n2 = infectious_neighbors(x); n2 > 0)
                    single(x, 1, proc.lambda * n2);
            }
            break;
        case ProcessKind::Upper:
            for (int x = 0; x < eta.size(); ++x) {
                if (eta[x] == 2) single(x, 0, 1.0);
                else if (eta[x] == 3) {
                    single(x, 1, 1.0);
                    single(x, 2, 1.0 / proc.tau);
                } else if (eta[x] == 1) {
                    single(x, 2, 1.0 / proc.tau);
                } else if (int n2 = infectious_neighbors(x); n2 > 0)
                    single(x, 1, proc.lambda * n2);
                if (eta[x] == 2) {
                    if (int n2 = infectious_neighbors(x); n2 > 0) single(x, 3, proc.lambda * n2);
                }
            }
            break;
        case ProcessKind::Limit: {
            std::map<std::vector<std::pair<int, uint8_t>>, double> merged;
            for (int x = 0; x < eta.size(); ++x) {
                if (eta[x] != 1) continue;
                const auto& nbrs = g.adjacency[static_cast<size_t>(x)];
                DispersalPmf pmf = dispersal_pmf(proc.lambda, static_cast<int>(nbrs.size()));
                for (uint32_t mask = 0; mask < pmf.prob.size(); ++mask) {
                    std::vector<std::pair<int, uint8_t>> changes{{x, uint8_t{0}}};
                    for (size_t i = 0; i < nbrs.size(); ++i)
                        if ((mask & (1u << i)) && eta[nbrs[i]] == 0)
                            changes.emplace_back(nbrs[i], uint8_t{1});
                    std::sort(changes.begin(), changes.end());
                    merged[changes] += pmf.prob[mask];
                }
            }
            for (auto& [changes, rate] : merged) out.push_back({changes, rate});
            break;
        }
    }
    return out;
}

DispersalPmf dispersal_pmf(double lambda, int k) {
    if (lambda <= 0) throw std::invalid_argument("dispersal_pmf: lambda must be positive");
    if (k < 0) throw std::invalid_argument("dispersal_pmf: k must be nonnegative");
    DispersalPmf pmf;
    pmf.lambda = lambda;
    pmf.k = k;
    pmf.prob.assign(size_t{1} << k, 0.0);
    for (uint32_t mask = 0; mask < pmf.prob.size(); ++mask) {
        int a = __builtin_popcount(mask);
        double p = 1.0 / (1.0 + (k - a) * lambda);
        for (int j = 0; j < a; ++j)
            p *= (j + 1) * lambda / (1.0 + (k - j) * lambda);
        pmf.prob[mask] = p;
    }
    return pmf;
}

uint32_t sample_dispersal(const DispersalPmf& pmf, SplitMix64& rng) {
    double u = rng.u01();
    double acc = 0.0;
    for (uint32_t mask = 0; mask < pmf.prob.size(); ++mask) {
        acc += pmf.prob[mask];
        if (u <= acc) return mask;
    }
    return static_cast<uint32_t>(pmf.prob.size()) - 1;
}

namespace {

uint8_t half_line_active_type(ProcessKind kind) {
    switch (kind) {
        case ProcessKind::Upper: return 3;
        case ProcessKind::Limit: return 1;
        default: return 2;
    }
}

Intensities process_intensities(const Process& proc) {
    Intensities in;
    switch (proc.kind) {
        case ProcessKind::Contact:
            in = {1.0, 0.0, proc.lambda};
            break;
        case ProcessKind::Seis:
        case ProcessKind::TwoStageLower:
        case ProcessKind::Upper:
            in = {1.0, 1.0 / proc.tau, proc.lambda};
            break;
        case ProcessKind::Limit:
            in = {0.0, 1.0, 0.0};
            break;
    }
    return in;
}

}  // namespace

EdgeSpeedResult edge_speed(const Process& proc, int window, double t_end, int replicas,
                           uint64_t seed) {
    proc.validate();
    if (window < 8) throw std::invalid_argument("edge_speed: window too small");
    if (replicas < 2) throw std::invalid_argument("edge_speed: need at least 2 replicas");

    const Graph g = build_graph(GraphKind::Path, window);
    Configuration eta0(proc.kind, std::vector<uint8_t>(static_cast<size_t>(window), 0));
    const int front0 = window / 2;
    for (int x = front0; x < window; ++x) eta0[x] = half_line_active_type(proc.kind);

    const int kSamples = 200;
    const double dt = t_end / kSamples;
    const Intensities in = process_intensities(proc);

    std::vector<double> slopes;
    slopes.reserve(static_cast<size_t>(replicas));
    for (int rep = 0; rep < replicas; ++rep) {
        Substructure sub = generate(g, in, t_end, mix_seed(seed, static_cast<uint64_t>(rep)));
        Trajectory traj = evolve(proc, eta0, sub, t_end);

        // Replay, tracking the leftmost active site at sample times.
        std::vector<uint8_t> state = eta0.states;
        int l = front0;
        std::vector<double> front(kSamples + 1, 0.0);
        size_t ev = 0;
        for (int s = 0; s <= kSamples; ++s) {
            double t = s * dt;
            while (ev < traj.events.size() && traj.events[ev].time <= t) {
                const auto& e = traj.events[ev++];
                state[static_cast<size_t>(e.site)] = e.after;
                if (e.after != 0 && e.site < l) l = e.site;
                else if (e.after == 0 && e.site == l)
                    while (l < window && state[static_cast<size_t>(l)] == 0) ++l;
            }
            if (l <= 0 || l >= window - 1)
                throw std::runtime_error(
                    "edge_speed: front reached the window boundary; widen the window");
            front[static_cast<size_t>(s)] = l;
        }

        // Least-squares slope over [t_end/2, t_end].
        double sx = 0, sy = 0, sxx = 0, sxy = 0;
        int n = 0;
        for (int s = kSamples / 2; s <= kSamples; ++s) {
            double t = s * dt;
            sx += t;
            sy += front[static_cast<size_t>(s)];
            sxx += t * t;
            sxy += t * front[static_cast<size_t>(s)];
            ++n;
        }
        slopes.push_back((n * sxy - sx * sy) / (n * sxx - sx * sx));
    }

    EdgeSpeedResult res;
    res.replicas = replicas;
    double mean = 0;
    for (double s : slopes) mean += s;
    mean /= replicas;
    double var = 0;
    for (double s : slopes) var += (s - mean) * (s - mean);
    var /= (replicas - 1);
    res.alpha = mean;
    res.std_error = std::sqrt(var / replicas);
    res.half_width = 1.96 * res.std_error;
    return res;
}

void trajectory_csv(const Trajectory& traj, std::ostream& os) {
    os << "time,site,old,new\n";
    for (const auto& e : traj.events)
        os << e.time << ',' << e.site << ',' << int(e.before) << ',' << int(e.after) << '\n';
}

}  // namespace seis
