#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <random>

#include "doctest.h"
#include "replay.hpp"
#include "seis/dynamics.hpp"

using namespace seis;

namespace {

// exposure times can lag between the coupled processes, so the pathwise
// guarantee is line containment, not per-code equality: a two-stage exposed
// site is active in SEIS, a two-stage infectious site is infectious in SEIS,
// a SEIS exposed site carries the dashed line above, a SEIS infectious site
// carries the solid line above
bool lower_ok(uint8_t two, uint8_t s) {
    return two == 0 || (two == 1 && s >= 1) || (two == 2 && s == 2);
}
bool upper_ok(uint8_t s, uint8_t up) {
    return s == 0 || (s == 1 && (up == 1 || up == 3)) || (s == 2 && (up == 2 || up == 3));
}

std::vector<uint8_t> random_states(std::mt19937_64& rng, int n, int max_code) {
    std::vector<uint8_t> s(static_cast<size_t>(n));
    for (auto& v : s) v = static_cast<uint8_t>(rng() % static_cast<uint64_t>(max_code + 1));
    return s;
}

}  // namespace

TEST_CASE("two-stage, SEIS and upperbound processes sandwich pathwise") {
    Graph g = build_graph(GraphKind::Path, 12);
    const double lam = 1.4, tau = 0.8, T = 3.0;
    Intensities in{1.0, 1.0 / tau, lam};
    std::mt19937_64 rng(2024);
    for (int r = 0; r < 300; ++r) {
        Substructure sub = generate(g, in, T, 10000 + static_cast<uint64_t>(r));
        std::vector<uint8_t> init = random_states(rng, 12, 2);
        Trajectory lo = evolve(Process(ProcessKind::TwoStageLower, lam, tau),
                               Configuration(ProcessKind::TwoStageLower, init), sub, T);
        Trajectory mid = evolve(Process(ProcessKind::Seis, lam, tau),
                                Configuration(ProcessKind::Seis, init), sub, T);
        Trajectory hi = evolve(Process(ProcessKind::Upper, lam, tau),
                               Configuration(ProcessKind::Upper, init), sub, T);
        for (double t : {T / 3, T}) {
            auto a = testreplay::states_at(lo, t);
            auto b = testreplay::states_at(mid, t);
            auto c = testreplay::states_at(hi, t);
            for (size_t x = 0; x < a.size(); ++x) {
                REQUIRE(lower_ok(a[x], b[x]));
                REQUIRE(upper_ok(b[x], c[x]));
            }
        }
    }
}

TEST_CASE("contact process is attractive in the initial configuration") {
    Graph g = build_graph(GraphKind::Cycle, 10);
    const double lam = 1.8, T = 3.0;
    Intensities in{1.0, 0.0, lam};
    std::mt19937_64 rng(7);
    for (int r = 0; r < 300; ++r) {
        Substructure sub = generate(g, in, T, 20000 + static_cast<uint64_t>(r));
        std::vector<uint8_t> small(10, 0), big(10, 0);
        for (int x = 0; x < 10; ++x) {
            if (rng() % 2) big[static_cast<size_t>(x)] = 2;
            if (big[static_cast<size_t>(x)] == 2 && rng() % 2) small[static_cast<size_t>(x)] = 2;
        }
        Trajectory a = evolve(Process(ProcessKind::Contact, lam),
                              Configuration(ProcessKind::Contact, small), sub, T);
        Trajectory b = evolve(Process(ProcessKind::Contact, lam),
                              Configuration(ProcessKind::Contact, big), sub, T);
        for (double t : {T / 2, T}) {
            auto sa = testreplay::states_at(a, t);
            auto sb = testreplay::states_at(b, t);
            for (size_t x = 0; x < sa.size(); ++x)
                if (sa[x] == 2) REQUIRE(sb[x] == 2);
        }
    }
}

TEST_CASE("higher transmission rate dominates under the split coupling") {
    Graph g = build_graph(GraphKind::Path, 12);
    const double lam = 0.9, lam2 = 1.7, T = 3.0;
    for (int r = 0; r < 300; ++r) {
        auto [base, merged] =
            split_for_lambda_coupling(g, lam, lam2, {1.0, 0.0, 0.0}, T, 30000 + static_cast<uint64_t>(r));
        std::vector<uint8_t> init(12, 0);
        init[5] = 2;
        init[6] = 2;
        Trajectory a = evolve(Process(ProcessKind::Contact, lam),
                              Configuration(ProcessKind::Contact, init), base, T);
        Trajectory b = evolve(Process(ProcessKind::Contact, lam2),
                              Configuration(ProcessKind::Contact, init), merged, T);
        for (double t : {T / 2, T}) {
            auto sa = testreplay::states_at(a, t);
            auto sb = testreplay::states_at(b, t);
            for (size_t x = 0; x < sa.size(); ++x)
                if (sa[x] == 2) REQUIRE(sb[x] == 2);
        }
    }
}

TEST_CASE("SEIS itself is not monotone") {
    // start from eta <= eta' in the naive total order 0 <= 1 <= 2; a recovery
    // hits the infectious site before its onset would fire, so the larger
    // start ends vacant while the smaller one turns infectious
    Graph g = build_graph(GraphKind::Path, 2);
    Substructure sub = Substructure::scripted(
        g, 2.0, {{LabelKind::Recovery, 0, -1, 0.5}, {LabelKind::Onset, 0, -1, 1.0}});
    Process p(ProcessKind::Seis, 1.0, 1.0);
    Trajectory small = evolve(p, Configuration(ProcessKind::Seis, {1, 0}), sub, 2.0);
    Trajectory big = evolve(p, Configuration(ProcessKind::Seis, {2, 0}), sub, 2.0);
    CHECK(small.final_state[0] == 2);
    CHECK(big.final_state[0] == 0);
}
