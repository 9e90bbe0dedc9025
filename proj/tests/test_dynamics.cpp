#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cmath>

#include "doctest.h"
#include "replay.hpp"
#include "seis/dynamics.hpp"
#include "stats.hpp"

using namespace seis;

TEST_CASE("scripted SEIS and two-stage hand trace") {
    Graph g = build_graph(GraphKind::Path, 3);
    std::vector<Label> labels{{LabelKind::Onset, 1, -1, 0.5},
                              {LabelKind::Transmission, 1, 2, 0.8},
                              {LabelKind::Recovery, 1, -1, 1.2},
                              {LabelKind::Recovery, 2, -1, 1.5}};
    Substructure sub = Substructure::scripted(g, 2.0, labels);

    Configuration seis0(ProcessKind::Seis, {0, 1, 0});
    Trajectory ts = evolve(Process(ProcessKind::Seis, 1.0, 1.0), seis0, sub, 2.0);
    REQUIRE(ts.events.size() == 3);  // onset, transmission, recovery; last x ignored
    CHECK(ts.events[0].site == 1);
    CHECK(ts.events[0].after == 2);
    CHECK(ts.events[1].site == 2);
    CHECK(ts.events[1].after == 1);
    CHECK(ts.events[2].site == 1);
    CHECK(ts.events[2].after == 0);
    CHECK(ts.final_state.states == std::vector<uint8_t>{0, 0, 1});

    Configuration two0(ProcessKind::TwoStageLower, {0, 1, 0});
    Trajectory tt = evolve(Process(ProcessKind::TwoStageLower, 1.0, 1.0), two0, sub, 2.0);
    REQUIRE(tt.events.size() == 4);  // the final recovery kills the exposed site
    CHECK(tt.events[3].site == 2);
    CHECK(tt.events[3].before == 1);
    CHECK(tt.events[3].after == 0);
    CHECK(tt.final_state.states == std::vector<uint8_t>{0, 0, 0});
}

TEST_CASE("scripted upperbound hand trace") {
    Graph g = build_graph(GraphKind::Path, 3);
    std::vector<Label> labels{{LabelKind::Recovery, 0, -1, 0.3},
                              {LabelKind::Onset, 0, -1, 0.6},
                              {LabelKind::Transmission, 0, 1, 0.9},
                              {LabelKind::Transmission, 1, 2, 1.1},
                              {LabelKind::Onset, 1, -1, 1.4}};
    Substructure sub = Substructure::scripted(g, 2.0, labels);
    Configuration eta0(ProcessKind::Upper, {3, 2, 0});
    Trajectory t = evolve(Process(ProcessKind::Upper, 1.0, 1.0), eta0, sub, 2.0);
    // x: 3 -> 1; star: 1 -> 2; arrow into infectious target: 2 -> 3;
    // arrow from the type-3 source into vacant: 0 -> 1; star at 3: -> 2
    REQUIRE(t.events.size() == 5);
    CHECK(t.events[0].after == 1);
    CHECK(t.events[1].after == 2);
    CHECK(t.events[2].site == 1);
    CHECK(t.events[2].before == 2);
    CHECK(t.events[2].after == 3);
    CHECK(t.events[3].site == 2);
    CHECK(t.events[3].after == 1);
    CHECK(t.events[4].site == 1);
    CHECK(t.events[4].before == 3);
    CHECK(t.events[4].after == 2);
}

TEST_CASE("limit onset vacates and disperses atomically") {
    Graph g = build_graph(GraphKind::Path, 5);
    std::vector<Label> labels{{LabelKind::Onset, 2, -1, 1.0}};
    Substructure sub = Substructure::scripted(g, 2.0, labels);
    Configuration eta0(ProcessKind::Limit, {0, 0, 1, 0, 0});
    Trajectory t = evolve(Process(ProcessKind::Limit, 1.0), eta0, sub, 2.0);
    REQUIRE(t.events.size() >= 1);
    CHECK(t.events[0].site == 2);
    CHECK(t.events[0].after == 0);
    for (const auto& e : t.events) {
        CHECK(e.time == 1.0);
        if (e.site != 2) {
            CHECK((e.site == 1 || e.site == 3));
            CHECK(e.after == 1);
        }
    }
    CHECK(t.final_state[2] == 0);

    // deterministic replay
    Trajectory t2 = evolve(Process(ProcessKind::Limit, 1.0), eta0, sub, 2.0);
    CHECK(t.final_state.states == t2.final_state.states);
}

TEST_CASE("evolve rejects mismatched input") {
    Graph g = build_graph(GraphKind::Path, 3);
    Substructure sub = generate(g, {1, 1, 1}, 1.0, 5);
    Configuration eta0(ProcessKind::Seis, {0, 1, 0});
    CHECK_THROWS_AS(evolve(Process(ProcessKind::Contact, 1.0), eta0, sub, 1.0),
                    std::invalid_argument);
    CHECK_THROWS_AS(evolve(Process(ProcessKind::Seis, 1.0, 1.0), eta0, sub, 2.0),
                    std::out_of_range);
    CHECK_THROWS_AS(Process(ProcessKind::Seis, 1.0, 0.0), std::invalid_argument);
    CHECK_THROWS_AS(Process(ProcessKind::Contact, -1.0), std::invalid_argument);
}

TEST_CASE("rate maps match the effect tables") {
    Graph g = build_graph(GraphKind::Path, 3);

    auto find = [](const std::vector<RateEntry>& rm, int x, uint8_t to) -> double {
        for (const auto& e : rm)
            if (e.changes.size() == 1 && e.changes[0].first == x && e.changes[0].second == to)
                return e.rate;
        return -1.0;
    };

    Configuration c(ProcessKind::Contact, {0, 2, 0});
    auto rm = rate_map(Process(ProcessKind::Contact, 1.7), c, g);
    CHECK(rm.size() == 3);
    CHECK(find(rm, 1, 0) == doctest::Approx(1.0));
    CHECK(find(rm, 0, 2) == doctest::Approx(1.7));
    CHECK(find(rm, 2, 2) == doctest::Approx(1.7));

    Configuration s(ProcessKind::Seis, {1, 2, 0});
    auto rs = rate_map(Process(ProcessKind::Seis, 2.0, 0.25), s, g);
    CHECK(find(rs, 0, 2) == doctest::Approx(4.0));  // onset 1/tau
    CHECK(find(rs, 1, 0) == doctest::Approx(1.0));
    CHECK(find(rs, 2, 1) == doctest::Approx(2.0));
    CHECK(find(rs, 0, 0) == -1.0);  // SEIS does not kill exposed

    Configuration w(ProcessKind::TwoStageLower, {1, 2, 0});
    auto rw = rate_map(Process(ProcessKind::TwoStageLower, 2.0, 0.25), w, g);
    CHECK(find(rw, 0, 0) == doctest::Approx(1.0));

    Configuration u(ProcessKind::Upper, {3, 2, 0});
    auto ru = rate_map(Process(ProcessKind::Upper, 1.5, 2.0), u, g);
    CHECK(find(ru, 0, 1) == doctest::Approx(1.0));   // dashed recovery 3 -> 1
    CHECK(find(ru, 0, 2) == doctest::Approx(0.5));   // onset 1/tau
    CHECK(find(ru, 1, 3) == doctest::Approx(1.5));   // infectious target hit
    CHECK(find(ru, 2, 1) == doctest::Approx(1.5));
}

TEST_CASE("limit rate map merges dispersal outcomes") {
    Graph g = build_graph(GraphKind::Path, 3);
    Configuration eta(ProcessKind::Limit, {0, 1, 0});
    auto rm = rate_map(Process(ProcessKind::Limit, 1.0), eta, g);
    REQUIRE(rm.size() == 4);
    double total = 0;
    for (const auto& e : rm) {
        total += e.rate;
        bool vacates = false;  // every outcome clears the firing site
        for (const auto& ch : e.changes)
            if (ch.first == 1 && ch.second == 0) vacates = true;
        CHECK(vacates);
    }
    CHECK(total == doctest::Approx(1.0));
    for (const auto& e : rm) {
        if (e.changes.size() == 1) CHECK(e.rate == doctest::Approx(1.0 / 3));
        if (e.changes.size() == 3) CHECK(e.rate == doctest::Approx(1.0 / 3));
    }
}

TEST_CASE("dispersal pmf closed form and consistency") {
    DispersalPmf p2 = dispersal_pmf(1.0, 2);
    CHECK(p2.prob[0] == doctest::Approx(1.0 / 3));
    CHECK(p2.prob[1] == doctest::Approx(1.0 / 6));
    CHECK(p2.prob[2] == doctest::Approx(1.0 / 6));
    CHECK(p2.prob[3] == doctest::Approx(1.0 / 3));

    for (double lam : {0.3, 1.0, 2.5, 8.563})
        for (int k : {0, 1, 2, 3}) {
            DispersalPmf p = dispersal_pmf(lam, k);
            double s = 0;
            for (double q : p.prob) s += q;
            CHECK(s == doctest::Approx(1.0));
        }

    // marginalizing one neighbor of the k=2 law gives the k=1 law
    for (double lam : {0.4, 1.0, 3.0}) {
        DispersalPmf a = dispersal_pmf(lam, 2);
        DispersalPmf b = dispersal_pmf(lam, 1);
        CHECK(a.prob[0] + a.prob[2] == doctest::Approx(b.prob[0]));
        CHECK(a.prob[1] + a.prob[3] == doctest::Approx(b.prob[1]));
    }
}

TEST_CASE("dispersal sampling matches the pmf") {
    DispersalPmf pmf = dispersal_pmf(1.3, 2);
    SplitMix64 rng(314);
    std::vector<long> counts(4, 0);
    const long n = 200000;
    for (long i = 0; i < n; ++i) ++counts[sample_dispersal(pmf, rng)];
    CHECK(teststats::chi2_gof_pvalue(counts, pmf.prob) > 0.001);
}

TEST_CASE("trajectory events replay to the final state") {
    Graph g = build_graph(GraphKind::Cycle, 12);
    Substructure sub = generate(g, {1.0, 2.0, 1.2}, 6.0, 21);
    Configuration eta0(ProcessKind::Upper, std::vector<uint8_t>(12, 0));
    eta0[0] = 3;
    eta0[5] = 2;
    Trajectory t = evolve(Process(ProcessKind::Upper, 1.2, 0.5), eta0, sub, 6.0);
    CHECK(testreplay::states_at(t, 6.0) == t.final_state.states);
    CHECK(t.final_state.valid());
    double prev = 0;
    for (const auto& e : t.events) {
        CHECK(e.time >= prev);
        CHECK(e.before != e.after);
        prev = e.time;
    }
}

TEST_CASE("edge speed sign tracks the phase") {
    Process sub_crit(ProcessKind::Contact, 0.8);
    EdgeSpeedResult r = edge_speed(sub_crit, 300, 8.0, 30, 5);
    CHECK(r.alpha > 0);  // retreating front, infection dies

    Process sup_crit(ProcessKind::Contact, 4.0);
    EdgeSpeedResult r2 = edge_speed(sup_crit, 200, 8.0, 30, 5);
    CHECK(r2.alpha < 0);  // advancing front

    CHECK_THROWS_AS(edge_speed(sup_crit, 12, 20.0, 5, 5), std::runtime_error);
    CHECK_THROWS_AS(edge_speed(sup_crit, 4, 1.0, 5, 5), std::invalid_argument);
}
