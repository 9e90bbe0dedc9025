#include "seis/coupling.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace seis {

bool onset_ordered(const Substructure& sub, const Region& region) {
    std::vector<Label> labels = restrict_labels(sub, region);
    bool have_star = false;
    int star_site = -1;
    bool recovered_since = false;
    for (const Label& l : labels) {
        if (l.kind == LabelKind::Onset) {
            if (have_star && !recovered_since) return false;
            have_star = true;
            star_site = l.site;
            recovered_since = false;
        } else if (l.kind == LabelKind::Recovery && have_star && l.site == star_site) {
            recovered_since = true;
        }
    }
    return true;
}

namespace {

constexpr uint64_t kSecondSubstructureTag = 0xC0B51DEC0B51DECull;

struct InducedJump {
    double time = 0;
    std::vector<std::pair<int, uint8_t>> changes;  // (site, new value) on {0,1}
};

}  // namespace

CouplingReport run_coupled(double lambda, double tau, const Graph& g, const Configuration& eta0,
                           double T, uint64_t seed) {
    if (lambda <= 0 || tau <= 0) throw std::invalid_argument("run_coupled: bad parameters");
    if (eta0.kind != ProcessKind::Seis)
        throw std::invalid_argument("run_coupled: initial configuration must be a SEIS one");
    for (int x = 0; x < eta0.size(); ++x)
        if (eta0[x] == 2)
            throw std::invalid_argument("run_coupled: initial state must have no infectious site");

    CouplingReport rep;
    rep.tau = tau;
    rep.T = T;
    rep.seed = seed;

    // Time-rescaled substructure: onset rate 1, recovery rate tau,
    // transmission rate lambda*tau.
    const Intensities rescaled{tau, 1.0, lambda * tau};
    const Substructure sub = generate(g, rescaled, T, seed);
    const Process seis(ProcessKind::Seis, lambda, tau);
    const Trajectory traj = evolve(seis, eta0, sub, T);

    rep.onset_ordered_region = onset_ordered(sub, Region::rectangle(g, 0, g.n - 1, 0.0, T));

    // Onsets (1->2) and each onset site's first subsequent recovery.
    struct Onset {
        double t = 0;
        int site = 0;
        double recovery = std::numeric_limits<double>::infinity();
    };
    std::vector<Onset> onsets;
    for (const auto& e : traj.events)
        if (e.before == 1 && e.after == 2) onsets.push_back({e.time, e.site, {}});
    for (auto& o : onsets)
        for (const auto& e : traj.events)
            if (e.site == o.site && e.before == 2 && e.after == 0 && e.time > o.t) {
                o.recovery = e.time;
                break;
            }
    rep.onset_count = static_cast<int>(onsets.size());

    // Discrepancy: the next onset fires before the previous onset site recovers.
    size_t cutoff = onsets.size();  // onsets with index < cutoff induce limit jumps
    for (size_t i = 0; i + 1 < onsets.size(); ++i)
        if (onsets[i + 1].t < onsets[i].recovery) {
            rep.discrepancy = true;
            rep.first_discrepancy_time = onsets[i + 1].t;
            cutoff = i;  // onset i's outcome is not resolved before the discrepancy
            break;
        }

    // Exact Lebesgue measure of S and the simultaneous-infectious maximum.
    {
        int infectious = 0;
        for (int x = 0; x < eta0.size(); ++x) infectious += (eta0[x] == 2);
        double prev = 0.0;
        for (const auto& e : traj.events) {
            if (infectious > 0) rep.lebesgue_S += e.time - prev;
            prev = e.time;
            if (e.before == 2) --infectious;
            if (e.after == 2) ++infectious;
            rep.max_simultaneous_infectious = std::max(rep.max_simultaneous_infectious, infectious);
        }
        if (infectious > 0) rep.lebesgue_S += T - prev;
    }

    // Induced limit jumps: the dispersal outcome of onset i is the set of
    // neighbors receiving a transmission label from the onset site in
    // (t_i, s_i).
    std::vector<InducedJump> jumps;
    for (size_t i = 0; i < cutoff; ++i) {
        const Onset& o = onsets[i];
        if (o.recovery > T) break;  // unresolved within the horizon
        InducedJump jump;
        jump.time = o.t;
        jump.changes.emplace_back(o.site, uint8_t{0});
        const auto& nbrs = g.adjacency[static_cast<size_t>(o.site)];
        uint32_t mask = 0;
        for (size_t ni = 0; ni < nbrs.size(); ++ni) {
            int e = g.directed_edge_index(o.site, nbrs[ni]);
            const auto& times = sub.transmission_times[static_cast<size_t>(e)];
            auto it = std::upper_bound(times.begin(), times.end(), o.t);
            if (it != times.end() && *it < o.recovery) {
                mask |= (1u << ni);
                jump.changes.emplace_back(nbrs[ni], uint8_t{1});
            }
        }
        rep.dispersal_outcomes.push_back({o.site, static_cast<int>(nbrs.size()), mask});
        jumps.push_back(std::move(jump));
    }

    // Replay both processes and compare at event times and on a uniform
    // 1000-point grid, at times outside S. Agreement tracking stops at the
    // first discrepancy.
    {
        std::vector<uint8_t> eta = eta0.states;
        std::vector<uint8_t> zeta(eta0.states.size());
        for (size_t x = 0; x < zeta.size(); ++x) zeta[x] = eta0.states[x] != 0 ? 1 : 0;
        int infectious = 0;
        const double t_stop = rep.discrepancy ? rep.first_discrepancy_time : T;

        size_t ei = 0, ji = 0;
        auto advance_to = [&](double t) {
            while (true) {
                double te = ei < traj.events.size() ? traj.events[ei].time
                                                    : std::numeric_limits<double>::infinity();
                double tj = ji < jumps.size() ? jumps[ji].time
                                              : std::numeric_limits<double>::infinity();
                if (std::min(te, tj) > t) break;
                if (tj <= te) {
                    for (const auto& [x, v] : jumps[ji].changes) {
                        if (v == 0 || zeta[static_cast<size_t>(x)] == 0)
                            zeta[static_cast<size_t>(x)] = v;
                    }
                    ++ji;
                } else {
                    const auto& e = traj.events[ei++];
                    if (e.before == 2) --infectious;
                    if (e.after == 2) ++infectious;
                    eta[static_cast<size_t>(e.site)] = e.after;
                }
            }
        };
        auto check = [&](double t) {
            if (t > t_stop || infectious > 0) return;
            for (size_t x = 0; x < eta.size(); ++x)
                if ((eta[x] != 0 ? 1 : 0) != zeta[x]) {
                    rep.agreement = false;
                    return;
                }
        };

        std::vector<double> check_times;
        for (int k = 0; k <= 1000; ++k) check_times.push_back(T * k / 1000.0);
        for (const auto& e : traj.events) check_times.push_back(e.time);
        std::sort(check_times.begin(), check_times.end());
        for (double t : check_times) {
            advance_to(t);
            check(t);
        }

        // On a discrepancy the limit process continues from an independent
        // substructure, as in the construction; agreement is no longer tracked.
        if (rep.discrepancy) {
            advance_to(t_stop);
            Configuration zc(ProcessKind::Limit, zeta);
            Substructure sub2 =
                generate(g, Intensities{0.0, 1.0, 0.0}, T, mix_seed(seed, kSecondSubstructureTag));
            std::vector<Label> tail;
            for (const Label& l : sub2.all_labels_sorted())
                if (l.time > t_stop) tail.push_back(l);
            evolve_with_labels(Process(ProcessKind::Limit, lambda), zc, sub2, tail, T);
        }
    }
    return rep;
}

}  // namespace seis
