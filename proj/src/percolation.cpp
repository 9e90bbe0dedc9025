#include "seis/percolation.hpp"

#include <cmath>
#include <deque>
#include <stdexcept>

#include "seis/rng.hpp"

namespace seis {

namespace {

constexpr uint64_t kPercTag = 0x9E4C01A7E5ull;

double site_uniform(uint64_t seed, int m, int n) {
    SplitMix64 rng(mix_seed(mix_seed(seed, kPercTag), static_cast<uint64_t>(int64_t{m} + (1 << 30)),
                            static_cast<uint64_t>(n)));
    return rng.u01();
}

}  // namespace

bool PercField::open(int m, int n) const {
    if (!in_lattice(m, n)) return false;
    size_t idx = static_cast<size_t>(n) * static_cast<size_t>(2 * width + 1) +
                 static_cast<size_t>(m + width);
    return open_flags[idx] != 0;
}

PercField sample_field(double p, int rows, int width, Dependence dep, uint64_t seed) {
    if (p < 0.0 || p > 1.0) throw std::invalid_argument("sample_field: p must be in [0,1]");
    if (rows < 1 || width < 0) throw std::invalid_argument("sample_field: bad dimensions");
    PercField f;
    f.p = p;
    f.rows = rows;
    f.width = width;
    f.dependence = dep;
    f.seed = seed;
    f.open_flags.assign(static_cast<size_t>(rows) * static_cast<size_t>(2 * width + 1), 0);
    for (int n = 0; n < rows; ++n)
        for (int m = -width; m <= width; ++m) {
            if (((m + n) & 1) != 0) continue;
            double u;
            if (dep == Dependence::Independent) {
                u = site_uniform(seed, m, n);
            } else {
                // frac of a sum of independent uniforms is uniform, so the
                // marginal is exactly p; sites sharing no uniform (L1
                // distance > 2 on L) are independent.
                u = std::fmod(site_uniform(seed, m, n) + site_uniform(seed, m + 2, n), 1.0);
            }
            size_t idx = static_cast<size_t>(n) * static_cast<size_t>(2 * width + 1) +
                         static_cast<size_t>(m + width);
            f.open_flags[idx] = u < p ? 1 : 0;
        }
    return f;
}

int cluster_rows(const PercField& field, int origin_m, int origin_n) {
    if (!field.in_lattice(origin_m, origin_n))
        throw std::invalid_argument("cluster_rows: origin not in lattice");
    int deepest = origin_n;
    if (!field.open(origin_m, origin_n)) return deepest;

    std::vector<uint8_t> seen(field.open_flags.size(), 0);
    auto index = [&](int m, int n) {
        return static_cast<size_t>(n) * static_cast<size_t>(2 * field.width + 1) +
               static_cast<size_t>(m + field.width);
    };
    std::deque<std::pair<int, int>> queue{{origin_m, origin_n}};
    seen[index(origin_m, origin_n)] = 1;
    while (!queue.empty()) {
        auto [m, n] = queue.front();
        queue.pop_front();
        for (int dm : {-1, +1}) {
            int m2 = m + dm, n2 = n + 1;
            // reflecting side boundary: a step off the strip bounces back
            if (m2 < -field.width || m2 > field.width) m2 = m - dm;
            if (n2 >= field.rows) {
                deepest = std::max(deepest, field.rows - 1);
                continue;
            }
            if (seen[index(m2, n2)]) continue;
            seen[index(m2, n2)] = 1;
            deepest = std::max(deepest, n2);  // reached; need not be open itself
            if (field.open(m2, n2)) queue.push_back({m2, n2});
        }
    }
    return deepest;
}

SurvivalEstimate survival_frequency(double p, int rows, int width, Dependence dep, int reps,
                                    uint64_t seed) {
    if (reps < 1) throw std::invalid_argument("survival_frequency: reps must be >= 1");
    int hits = 0;
    for (int r = 0; r < reps; ++r) {
        PercField f = sample_field(p, rows, width, dep, mix_seed(seed, static_cast<uint64_t>(r)));
        if (cluster_rows(f) >= rows - 1) ++hits;
    }
    SurvivalEstimate est;
    est.p = p;
    est.rows = rows;
    est.width = width;
    est.reps = reps;
    est.survival = static_cast<double>(hits) / reps;
    est.ci_half_width = 1.96 * std::sqrt(est.survival * (1.0 - est.survival) / reps);
    return est;
}

}  // namespace seis
