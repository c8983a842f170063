#pragma once

#include <utility>
#include <vector>

#include "bfa/errors.hpp"

namespace bfa {

// Graphs on vertex set [N] are encoded with one Boolean coordinate per edge.
// Edges (i,j), 1 <= i < j <= N, are ordered lexicographically; this fixes the
// coordinate layout shared by the graph-property functions and the
// vertex-permutation action on edges.
inline std::vector<std::pair<int, int>> edge_list(int N) {
    std::vector<std::pair<int, int>> edges;
    for (int i = 1; i <= N; ++i)
        for (int j = i + 1; j <= N; ++j) edges.emplace_back(i, j);
    return edges;
}

// Zero-based coordinate of edge {i,j}.
inline int edge_coordinate(int i, int j, int N) {
    if (i == j || i < 1 || j < 1 || i > N || j > N)
        throw input_error("bad edge endpoints");
    if (i > j) std::swap(i, j);
    // Edges starting at vertices < i come first.
    int before = (i - 1) * N - (i - 1) * i / 2;
    return before + (j - i - 1);
}

}  // namespace bfa
