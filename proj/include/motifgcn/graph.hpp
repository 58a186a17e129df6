#pragma once

#include <map>
#include <string>

#include "motifgcn/sparse.hpp"

namespace motifgcn {

// Weighted directed graph in CSR form. Invariants: nonnegative weights,
// no self-loops, no duplicate arcs, sorted columns. When directed == false
// the stored structure is symmetric.
struct DirectedGraph {
    std::size_t n = 0;
    bool directed = true;
    SparseMatrix adj;  // n x n

    std::size_t arc_count() const { return adj.nnz(); }
};

struct EdgeListStats {
    std::size_t lines_read = 0;
    std::size_t self_loops_dropped = 0;
    std::size_t duplicates_merged = 0;
    std::size_t header_n = 0;  // 0 when no header was present
};

// Builds the canonical graph: self-loops dropped, duplicate arcs summed,
// zero-weight arcs removed, mirrored arcs added when undirected.
DirectedGraph graph_from_triplets(std::size_t n, bool directed, std::vector<Triplet> arcs,
                                  EdgeListStats* stats = nullptr);

// Edge-list file: UTF-8 text, one `src<TAB>dst<TAB>weight` line per edge
// (weight optional, default 1.0), 0-based indices, `#` comments, optional
// `% n=<count>` header. n == 0 means: take the header count, else 1 + max index.
DirectedGraph load_edge_list(const std::string& path, std::size_t n = 0, bool directed = true,
                             EdgeListStats* stats = nullptr);

// Writes the stored entries of `m` in the same format, with a `% n=<count>`
// header and optional extra `% key=value` headers.
void save_edge_list(const std::string& path, const SparseMatrix& m,
                    const std::map<std::string, std::string>& extra_headers = {});

}  // namespace motifgcn
