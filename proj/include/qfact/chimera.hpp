#pragma once

#include <algorithm>
#include <cstdint>
#include <utility>
#include <vector>

#include "qfact/errors.hpp"

namespace qfact {

/// Chimera hardware graph: an m x n grid of K_{t,t} unit cells. Side 0 qubits
/// couple vertically between rows, side 1 horizontally between columns.
/// Qubit id = ((row * n + col) * 2 + side) * t + k.
struct ChimeraGraph {
    std::uint32_t m = 0, n = 0, t = 0;
    std::vector<std::vector<std::uint32_t>> adj;

    std::uint32_t num_nodes() const { return m * n * 2 * t; }

    std::uint32_t node(std::uint32_t row, std::uint32_t col, std::uint32_t side,
                       std::uint32_t k) const {
        return ((row * n + col) * 2 + side) * t + k;
    }

    bool adjacent(std::uint32_t a, std::uint32_t b) const {
        const auto& list = adj[a];
        return std::find(list.begin(), list.end(), b) != list.end();
    }

    std::vector<std::pair<std::uint32_t, std::uint32_t>> edges() const {
        std::vector<std::pair<std::uint32_t, std::uint32_t>> out;
        for (std::uint32_t a = 0; a < num_nodes(); ++a)
            for (std::uint32_t b : adj[a])
                if (a < b) out.emplace_back(a, b);
        return out;
    }

    std::size_t num_edges() const {
        std::size_t twice = 0;
        for (const auto& list : adj) twice += list.size();
        return twice / 2;
    }
};

inline ChimeraGraph build_chimera(std::uint32_t m, std::uint32_t n, std::uint32_t t) {
    ChimeraGraph g;
    g.m = m;
    g.n = n;
    g.t = t;
    g.adj.assign(g.num_nodes(), {});
    auto link = [&](std::uint32_t a, std::uint32_t b) {
        g.adj[a].push_back(b);
        g.adj[b].push_back(a);
    };
    for (std::uint32_t r = 0; r < m; ++r) {
        for (std::uint32_t c = 0; c < n; ++c) {
            for (std::uint32_t i = 0; i < t; ++i)
                for (std::uint32_t j = 0; j < t; ++j) link(g.node(r, c, 0, i), g.node(r, c, 1, j));
            if (r + 1 < m)
                for (std::uint32_t k = 0; k < t; ++k)
                    link(g.node(r, c, 0, k), g.node(r + 1, c, 0, k));
            if (c + 1 < n)
                for (std::uint32_t k = 0; k < t; ++k)
                    link(g.node(r, c, 1, k), g.node(r, c + 1, 1, k));
        }
    }
    for (auto& list : g.adj) std::sort(list.begin(), list.end());
    return g;
}

}  // namespace qfact
