#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"
#include "seis/lattice.hpp"

using namespace seis;

TEST_CASE("path graph structure") {
    Graph g = build_graph(GraphKind::Path, 5);
    CHECK(g.n == 5);
    CHECK(g.edge_count() == 4);
    CHECK(g.max_degree == 2);
    CHECK(g.degree(0) == 1);
    CHECK(g.degree(2) == 2);
    CHECK(g.adjacency[2] == std::vector<int>{1, 3});
    CHECK(g.directed_edge_index(1, 2) >= 0);
    CHECK(g.directed_edge_index(0, 2) == -1);
    CHECK(g.directed_edge_index(1, 2) != g.directed_edge_index(2, 1));
}

TEST_CASE("cycle graph structure") {
    Graph g = build_graph(GraphKind::Cycle, 4);
    CHECK(g.edge_count() == 4);
    CHECK(g.degree(0) == 2);
    CHECK(g.directed_edge_index(3, 0) >= 0);
    CHECK_THROWS_AS(build_graph(GraphKind::Cycle, 2), std::invalid_argument);
    CHECK_THROWS_AS(build_graph(GraphKind::Path, 0), std::invalid_argument);
}

TEST_CASE("single-vertex path is allowed") {
    Graph g = build_graph(GraphKind::Path, 1);
    CHECK(g.edge_count() == 0);
    CHECK(g.max_degree == 0);
}

TEST_CASE("allowed codes per kind") {
    CHECK(code_allowed(ProcessKind::Contact, 0));
    CHECK_FALSE(code_allowed(ProcessKind::Contact, 1));
    CHECK(code_allowed(ProcessKind::Contact, 2));
    CHECK(code_allowed(ProcessKind::Seis, 1));
    CHECK_FALSE(code_allowed(ProcessKind::Seis, 3));
    CHECK(code_allowed(ProcessKind::Upper, 3));
    CHECK(code_allowed(ProcessKind::Limit, 1));
    CHECK_FALSE(code_allowed(ProcessKind::Limit, 2));
}

TEST_CASE("configuration validation") {
    Configuration ok(ProcessKind::Contact, {0, 2, 0, 2});
    CHECK(ok.valid());
    CHECK(ok.active_count() == 2);
    CHECK_NOTHROW(ok.validate());

    Configuration bad(ProcessKind::Contact, {0, 1, 0});
    CHECK_FALSE(bad.valid());
    CHECK_THROWS_AS(bad.validate(), std::invalid_argument);

    Configuration u = Configuration::uniform(ProcessKind::Upper, 3, 3);
    CHECK(u.size() == 3);
    CHECK(u[1] == 3);
    CHECK(u.active_count() == 3);
}
