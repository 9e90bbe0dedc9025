#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

namespace seis {

enum class GraphKind { Path, Cycle };

// Finite bounded-degree graph with dense integer vertex labels 0..n-1.
// Immutable after construction; safe to share across threads.
struct Graph {
    GraphKind kind = GraphKind::Path;
    int n = 0;
    int max_degree = 0;
    std::vector<std::vector<int>> adjacency;
    // All ordered adjacent pairs, in a fixed deterministic order.
    std::vector<std::pair<int, int>> directed_edges;

    int degree(int x) const { return static_cast<int>(adjacency[static_cast<size_t>(x)].size()); }
    int edge_count() const { return static_cast<int>(directed_edges.size()) / 2; }
    // Index of the directed edge (from, to) in directed_edges, or -1.
    int directed_edge_index(int from, int to) const;
};

// Path: vertices 0..n-1, edges {x,x+1}, n >= 1. Cycle: n >= 3.
Graph build_graph(GraphKind kind, int n);

enum class ProcessKind { Contact, Seis, TwoStageLower, Upper, Limit };

std::string process_kind_name(ProcessKind kind);

// Allowed per-site type codes: contact {0,2}; SEIS and two-stage {0,1,2};
// upperbound {0,1,2,3}; limit {0,1}.
bool code_allowed(ProcessKind kind, uint8_t code);

// One byte per site; kind carried alongside for code validation.
struct Configuration {
    ProcessKind kind = ProcessKind::Contact;
    std::vector<uint8_t> states;

    Configuration() = default;
    Configuration(ProcessKind k, std::vector<uint8_t> s) : kind(k), states(std::move(s)) {}
    static Configuration uniform(ProcessKind kind, int n, uint8_t code);

    int size() const { return static_cast<int>(states.size()); }
    uint8_t operator[](int x) const { return states[static_cast<size_t>(x)]; }
    uint8_t& operator[](int x) { return states[static_cast<size_t>(x)]; }
    bool valid() const;
    // Throws std::invalid_argument if a code is not allowed for the kind.
    void validate() const;
    int active_count() const;
};

}  // namespace seis
