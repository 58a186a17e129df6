#pragma once

#include <array>
#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <unordered_map>

#include "motifgcn/graph.hpp"

namespace motifgcn {

// U is the undirected projection, M1..M13 the thirteen weakly connected
// 3-vertex directed patterns up to isomorphism, Min/Mout the incoming and
// outgoing edge projections.
enum class MotifId : int {
    U = 0,
    M1 = 1, M2 = 2, M3 = 3, M4 = 4, M5 = 5, M6 = 6, M7 = 7,
    M8 = 8, M9 = 9, M10 = 10, M11 = 11, M12 = 12, M13 = 13,
    Min = 14,
    Mout = 15,
};

inline constexpr int kTriadMotifCount = 13;
inline constexpr int kMotifCount = 16;

bool is_triad_motif(MotifId id);
const char* motif_name(MotifId id);
std::optional<MotifId> motif_from_name(const std::string& name);
std::array<MotifId, kMotifCount> all_motifs();
std::array<MotifId, kTriadMotifCount> triad_motifs();

// A triad pattern is a 6-bit code over the off-diagonal cells of the 3x3
// adjacency, in the fixed cell order (0,1),(0,2),(1,0),(1,2),(2,0),(2,1).
namespace triad {

std::uint8_t cell_code(int i, int j);                      // bit index of cell (i,j)
std::uint8_t pattern_from_arcs(const bool arcs[3][3]);     // diagonal ignored
std::uint8_t permuted(std::uint8_t code, const std::array<int, 3>& perm);
bool weakly_connected(std::uint8_t code);
std::uint8_t canonical(std::uint8_t code);                 // min over the 6 vertex permutations
int arc_count(std::uint8_t code);

}  // namespace triad

// The 13 canonical patterns, ordered by arc count ascending, then by the
// smallest canonical 6-bit code. The ordering is stable and documented so
// motif indices are reproducible across runs and builds.
class MotifCatalog {
public:
    static const MotifCatalog& instance();

    std::uint8_t pattern(MotifId id) const;  // canonical code, triads only
    std::optional<MotifId> classify(std::uint8_t code) const;

private:
    MotifCatalog();
    std::array<std::uint8_t, kTriadMotifCount> canon_{};
    std::array<std::int8_t, 64> lookup_{};  // pattern -> triad index - 1, or -1
};

// Catalog membership test for an explicit 3x3 binary pattern (zero diagonal).
std::optional<MotifId> classify_triad(const bool pattern[3][3]);

// Calls fn(i, j, l, id) once per weakly connected induced vertex triple,
// i < j < l. Enumeration is adjacency-driven: triangles of the undirected
// projection by their minimum vertex, open wedges by their center.
void for_each_triad(const DirectedGraph& g,
                    const std::function<void(std::size_t, std::size_t, std::size_t, MotifId)>& fn);

struct TriadCounts {
    // pair_counts[k]: (i,j) with i<j -> number of Mk instances containing both
    std::array<std::unordered_map<std::uint64_t, std::uint32_t>, kTriadMotifCount> pair_counts;
    std::array<std::size_t, kTriadMotifCount> instance_totals{};

    static std::uint64_t pair_key(std::size_t i, std::size_t j) {
        return (static_cast<std::uint64_t>(i) << 32) | static_cast<std::uint64_t>(j);
    }
};

TriadCounts count_triad_motifs(const DirectedGraph& g, int threads = 1);

// Symmetric motif-weighted adjacency. For triad motifs, counts(i,j) is the
// co-occurrence count and matrix(i,j) = counts(i,j) * (w_ij + w_ji)/2; for U
// the entry is max(w_ij, w_ji); Min and Mout are W^T and W as-is (the only
// asymmetric members).
struct MotifAdjacency {
    MotifId motif = MotifId::U;
    SparseMatrix matrix;
    SparseMatrix counts;
    std::size_t instance_total = 0;
};

MotifAdjacency motif_adjacency(const DirectedGraph& g, MotifId k, int threads = 1);
// Shares one enumeration pass across all requested triad motifs.
std::vector<MotifAdjacency> motif_adjacencies(const DirectedGraph& g,
                                              const std::vector<MotifId>& ks, int threads = 1);

}  // namespace motifgcn
