#pragma once

#include <cstdint>
#include <vector>

namespace seis {

enum class Dependence { Independent, OneDependent };

// Oriented site percolation field on the even lattice
// L = {(m,n) : n >= 0, m+n even}, truncated to |m| <= width with a reflecting
// side boundary (exploratory; survival estimates are boundary-biased).
struct PercField {
    double p = 0.0;
    int rows = 0;
    int width = 0;
    Dependence dependence = Dependence::Independent;
    uint64_t seed = 0;
    std::vector<uint8_t> open_flags;  // rows x (2*width+1), parity sites only

    bool in_lattice(int m, int n) const {
        return n >= 0 && n < rows && m >= -width && m <= width && ((m + n) & 1) == 0;
    }
    bool open(int m, int n) const;
};

PercField sample_field(double p, int rows, int width, Dependence dep, uint64_t seed);

// Deepest row reached from the origin via steps (k+-1, l+1) through open
// sites; the last site of a path is not required to be open.
int cluster_rows(const PercField& field, int origin_m = 0, int origin_n = 0);

struct SurvivalEstimate {
    double p = 0;
    int rows = 0, width = 0, reps = 0;
    double survival = 0;
    double ci_half_width = 0;  // 1.96 binomial
};

SurvivalEstimate survival_frequency(double p, int rows, int width, Dependence dep, int reps,
                                    uint64_t seed);

}  // namespace seis
