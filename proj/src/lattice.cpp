#include "seis/lattice.hpp"

#include <algorithm>
#include <stdexcept>

namespace seis {

int Graph::directed_edge_index(int from, int to) const {
    for (size_t i = 0; i < directed_edges.size(); ++i) {
        if (directed_edges[i].first == from && directed_edges[i].second == to)
            return static_cast<int>(i);
    }
    return -1;
}

Graph build_graph(GraphKind kind, int n) {
    if (kind == GraphKind::Path && n < 1)
        throw std::invalid_argument("build_graph: path requires n >= 1");
    if (kind == GraphKind::Cycle && n < 3)
        throw std::invalid_argument("build_graph: cycle requires n >= 3");

    Graph g;
    g.kind = kind;
    g.n = n;
    g.adjacency.assign(static_cast<size_t>(n), {});
    for (int x = 0; x + 1 < n; ++x) {
        g.adjacency[static_cast<size_t>(x)].push_back(x + 1);
        g.adjacency[static_cast<size_t>(x + 1)].push_back(x);
        g.directed_edges.emplace_back(x, x + 1);
        g.directed_edges.emplace_back(x + 1, x);
    }
    if (kind == GraphKind::Cycle) {
        g.adjacency[static_cast<size_t>(n - 1)].push_back(0);
        g.adjacency[0].push_back(n - 1);
        g.directed_edges.emplace_back(n - 1, 0);
        g.directed_edges.emplace_back(0, n - 1);
    }
    for (auto& nbrs : g.adjacency) std::sort(nbrs.begin(), nbrs.end());
    g.max_degree = 0;
    for (int x = 0; x < n; ++x) g.max_degree = std::max(g.max_degree, g.degree(x));
    return g;
}

std::string process_kind_name(ProcessKind kind) {
    switch (kind) {
        case ProcessKind::Contact: return "contact";
        case ProcessKind::Seis: return "seis";
        case ProcessKind::TwoStageLower: return "two-stage";
        case ProcessKind::Upper: return "upper";
        case ProcessKind::Limit: return "limit";
    }
    return "?";
}

bool code_allowed(ProcessKind kind, uint8_t code) {
    switch (kind) {
        case ProcessKind::Contact: return code == 0 || code == 2;
        case ProcessKind::Seis:
        case ProcessKind::TwoStageLower: return code <= 2;
        case ProcessKind::Upper: return code <= 3;
        case ProcessKind::Limit: return code <= 1;
    }
    return false;
}

Configuration Configuration::uniform(ProcessKind kind, int n, uint8_t code) {
    Configuration c(kind, std::vector<uint8_t>(static_cast<size_t>(n), code));
    c.validate();
    return c;
}

bool Configuration::valid() const {
    for (uint8_t s : states)
        if (!code_allowed(kind, s)) return false;
    return true;
}

void Configuration::validate() const {
    if (!valid())
        throw std::invalid_argument("configuration contains a type code not allowed for " +
                                    process_kind_name(kind));
}

int Configuration::active_count() const {
    int c = 0;
    for (uint8_t s : states) c += (s != 0);
    return c;
}

}  // namespace seis
