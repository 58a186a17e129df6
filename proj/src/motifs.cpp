#include "motifgcn/motifs.hpp"

#include <algorithm>
#include <bit>
#include <cassert>
#include <mutex>
#include <stdexcept>

#include "motifgcn/threading.hpp"

namespace motifgcn {

bool is_triad_motif(MotifId id) {
    const int v = static_cast<int>(id);
    return v >= 1 && v <= kTriadMotifCount;
}

const char* motif_name(MotifId id) {
    static const char* names[kMotifCount] = {"U",  "M1",  "M2",  "M3",  "M4",  "M5",
                                             "M6", "M7",  "M8",  "M9",  "M10", "M11",
                                             "M12", "M13", "Min", "Mout"};
    return names[static_cast<int>(id)];
}

std::optional<MotifId> motif_from_name(const std::string& name) {
    for (int v = 0; v < kMotifCount; ++v)
        if (name == motif_name(static_cast<MotifId>(v))) return static_cast<MotifId>(v);
    return std::nullopt;
}

std::array<MotifId, kMotifCount> all_motifs() {
    std::array<MotifId, kMotifCount> out{};
    for (int v = 0; v < kMotifCount; ++v) out[v] = static_cast<MotifId>(v);
    return out;
}

std::array<MotifId, kTriadMotifCount> triad_motifs() {
    std::array<MotifId, kTriadMotifCount> out{};
    for (int v = 0; v < kTriadMotifCount; ++v) out[v] = static_cast<MotifId>(v + 1);
    return out;
}

namespace triad {

namespace {
// cell bit order: (0,1),(0,2),(1,0),(1,2),(2,0),(2,1)
constexpr int kCellIndex[3][3] = {{-1, 0, 1}, {2, -1, 3}, {4, 5, -1}};
constexpr int kCellPair[6][2] = {{0, 1}, {0, 2}, {1, 0}, {1, 2}, {2, 0}, {2, 1}};
constexpr std::array<std::array<int, 3>, 6> kPerms = {
    {{0, 1, 2}, {0, 2, 1}, {1, 0, 2}, {1, 2, 0}, {2, 0, 1}, {2, 1, 0}}};
}  // namespace

std::uint8_t cell_code(int i, int j) { return static_cast<std::uint8_t>(kCellIndex[i][j]); }

std::uint8_t pattern_from_arcs(const bool arcs[3][3]) {
    std::uint8_t code = 0;
    for (int t = 0; t < 6; ++t)
        if (arcs[kCellPair[t][0]][kCellPair[t][1]]) code |= static_cast<std::uint8_t>(1u << t);
    return code;
}

std::uint8_t permuted(std::uint8_t code, const std::array<int, 3>& perm) {
    std::uint8_t out = 0;
    for (int t = 0; t < 6; ++t) {
        if (!(code & (1u << t))) continue;
        const int ni = perm[kCellPair[t][0]];
        const int nj = perm[kCellPair[t][1]];
        out |= static_cast<std::uint8_t>(1u << kCellIndex[ni][nj]);
    }
    return out;
}

bool weakly_connected(std::uint8_t code) {
    const bool p01 = code & ((1u << 0) | (1u << 2));
    const bool p02 = code & ((1u << 1) | (1u << 4));
    const bool p12 = code & ((1u << 3) | (1u << 5));
    // On three vertices any two covered pairs share a vertex.
    return static_cast<int>(p01) + static_cast<int>(p02) + static_cast<int>(p12) >= 2;
}

std::uint8_t canonical(std::uint8_t code) {
    std::uint8_t best = 0x3f;
    for (const auto& perm : kPerms) best = std::min(best, permuted(code, perm));
    return best;
}

int arc_count(std::uint8_t code) { return std::popcount(code); }

}  // namespace triad

MotifCatalog::MotifCatalog() {
    std::vector<std::uint8_t> canons;
    for (int code = 0; code < 64; ++code) {
        const auto c = static_cast<std::uint8_t>(code);
        if (!triad::weakly_connected(c)) continue;
        const std::uint8_t canon = triad::canonical(c);
        if (std::find(canons.begin(), canons.end(), canon) == canons.end())
            canons.push_back(canon);
    }
    std::sort(canons.begin(), canons.end(), [](std::uint8_t a, std::uint8_t b) {
        const int ca = triad::arc_count(a), cb = triad::arc_count(b);
        return ca != cb ? ca < cb : a < b;
    });
    assert(canons.size() == static_cast<std::size_t>(kTriadMotifCount));
    std::copy(canons.begin(), canons.end(), canon_.begin());

    lookup_.fill(-1);
    for (int code = 0; code < 64; ++code) {
        const auto c = static_cast<std::uint8_t>(code);
        if (!triad::weakly_connected(c)) continue;
        const std::uint8_t canon = triad::canonical(c);
        const auto it = std::find(canon_.begin(), canon_.end(), canon);
        lookup_[static_cast<std::size_t>(code)] =
            static_cast<std::int8_t>(it - canon_.begin());
    }
}

const MotifCatalog& MotifCatalog::instance() {
    static MotifCatalog catalog;
    return catalog;
}

std::uint8_t MotifCatalog::pattern(MotifId id) const {
    if (!is_triad_motif(id))
        throw std::invalid_argument(std::string("pattern: not a triad motif: ") + motif_name(id));
    return canon_[static_cast<std::size_t>(static_cast<int>(id) - 1)];
}

std::optional<MotifId> MotifCatalog::classify(std::uint8_t code) const {
    const std::int8_t idx = lookup_[code & 0x3f];
    if (idx < 0) return std::nullopt;
    return static_cast<MotifId>(idx + 1);
}

std::optional<MotifId> classify_triad(const bool pattern[3][3]) {
    return MotifCatalog::instance().classify(triad::pattern_from_arcs(pattern));
}

namespace {

// Sorted undirected neighbor lists of the union structure W | W^T.
std::vector<std::vector<std::uint32_t>> union_adjacency(const DirectedGraph& g) {
    std::vector<std::vector<std::uint32_t>> adj(g.n);
    const SparseMatrix& w = g.adj;
    for (std::size_t i = 0; i < g.n; ++i)
        for (std::size_t k = w.row_ptr[i]; k < w.row_ptr[i + 1]; ++k) {
            adj[i].push_back(static_cast<std::uint32_t>(w.col_idx[k]));
            adj[w.col_idx[k]].push_back(static_cast<std::uint32_t>(i));
        }
    for (auto& nbrs : adj) {
        std::sort(nbrs.begin(), nbrs.end());
        nbrs.erase(std::unique(nbrs.begin(), nbrs.end()), nbrs.end());
    }
    return adj;
}

bool has_neighbor(const std::vector<std::uint32_t>& nbrs, std::uint32_t v) {
    return std::binary_search(nbrs.begin(), nbrs.end(), v);
}

std::uint8_t induced_pattern(const SparseMatrix& w, std::size_t a, std::size_t b, std::size_t c) {
    const std::size_t v[3] = {a, b, c};
    std::uint8_t code = 0;
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) {
            if (i == j) continue;
            if (w.has_entry(v[i], v[j]))
                code |= static_cast<std::uint8_t>(1u << triad::cell_code(i, j));
        }
    return code;
}

// Emits every weakly connected triple with minimum-vertex (triangles) or
// center-vertex (wedges) in [lo, hi) exactly once.
template <typename Sink>
void enumerate_triads_range(const DirectedGraph& g,
                            const std::vector<std::vector<std::uint32_t>>& uadj, std::size_t lo,
                            std::size_t hi, Sink&& sink) {
    const MotifCatalog& catalog = MotifCatalog::instance();
    for (std::size_t v = lo; v < hi; ++v) {
        const auto& nv = uadj[v];
        // Triangles {v, j, l} with v < j < l.
        for (std::size_t ji = 0; ji < nv.size(); ++ji) {
            const std::uint32_t j = nv[ji];
            if (j <= v) continue;
            const auto& nj = uadj[j];
            for (std::size_t li = ji + 1; li < nv.size(); ++li) {
                const std::uint32_t l = nv[li];
                if (has_neighbor(nj, l)) {
                    const auto id = catalog.classify(induced_pattern(g.adj, v, j, l));
                    sink(v, j, l, *id);
                }
            }
        }
        // Open wedges centered at v: neighbors a < b that are not adjacent.
        for (std::size_t ai = 0; ai < nv.size(); ++ai) {
            const std::uint32_t a = nv[ai];
            for (std::size_t bi = ai + 1; bi < nv.size(); ++bi) {
                const std::uint32_t b = nv[bi];
                if (has_neighbor(uadj[a], b)) continue;
                std::size_t t[3] = {a, static_cast<std::size_t>(v), b};
                std::sort(t, t + 3);
                const auto id = catalog.classify(induced_pattern(g.adj, t[0], t[1], t[2]));
                sink(t[0], t[1], t[2], *id);
            }
        }
    }
}

}  // namespace

void for_each_triad(const DirectedGraph& g,
                    const std::function<void(std::size_t, std::size_t, std::size_t, MotifId)>& fn) {
    const auto uadj = union_adjacency(g);
    enumerate_triads_range(g, uadj, 0, g.n, fn);
}

TriadCounts count_triad_motifs(const DirectedGraph& g, int threads) {
    const auto uadj = union_adjacency(g);
    const std::size_t nworkers =
        threads <= 1 ? 1 : std::min<std::size_t>(static_cast<std::size_t>(threads), g.n ? g.n : 1);
    std::vector<TriadCounts> partial(nworkers);

    parallel_for(0, g.n, static_cast<int>(nworkers), [&](std::size_t lo, std::size_t hi, int w) {
        TriadCounts& acc = partial[static_cast<std::size_t>(w)];
        enumerate_triads_range(g, uadj, lo, hi,
                               [&](std::size_t i, std::size_t j, std::size_t l, MotifId id) {
                                   const std::size_t k =
                                       static_cast<std::size_t>(static_cast<int>(id) - 1);
                                   acc.instance_totals[k]++;
                                   acc.pair_counts[k][TriadCounts::pair_key(i, j)]++;
                                   acc.pair_counts[k][TriadCounts::pair_key(i, l)]++;
                                   acc.pair_counts[k][TriadCounts::pair_key(j, l)]++;
                               });
    });

    // Merge in worker-index order; integer adds make the result exact.
    TriadCounts total = std::move(partial[0]);
    for (std::size_t w = 1; w < nworkers; ++w) {
        for (int k = 0; k < kTriadMotifCount; ++k) {
            total.instance_totals[static_cast<std::size_t>(k)] +=
                partial[w].instance_totals[static_cast<std::size_t>(k)];
            for (const auto& [key, c] : partial[w].pair_counts[static_cast<std::size_t>(k)])
                total.pair_counts[static_cast<std::size_t>(k)][key] += c;
        }
    }
    return total;
}

namespace {

double symmetrized_weight(const SparseMatrix& w, std::size_t i, std::size_t j) {
    return 0.5 * (w.at(i, j) + w.at(j, i));
}

MotifAdjacency triad_adjacency_from_counts(const DirectedGraph& g, MotifId k,
                                           const TriadCounts& counts) {
    const auto& pairs = counts.pair_counts[static_cast<std::size_t>(static_cast<int>(k) - 1)];
    std::vector<Triplet> count_entries, weight_entries;
    count_entries.reserve(2 * pairs.size());
    weight_entries.reserve(2 * pairs.size());
    for (const auto& [key, c] : pairs) {
        const auto i = static_cast<std::size_t>(key >> 32);
        const auto j = static_cast<std::size_t>(key & 0xffffffffu);
        const auto cnt = static_cast<double>(c);
        count_entries.push_back({i, j, cnt});
        count_entries.push_back({j, i, cnt});
        const double wij = cnt * symmetrized_weight(g.adj, i, j);
        weight_entries.push_back({i, j, wij});
        weight_entries.push_back({j, i, wij});
    }
    MotifAdjacency out;
    out.motif = k;
    out.counts = from_triplets(g.n, g.n, std::move(count_entries));
    out.matrix = from_triplets(g.n, g.n, std::move(weight_entries));
    out.instance_total = counts.instance_totals[static_cast<std::size_t>(static_cast<int>(k) - 1)];
    return out;
}

MotifAdjacency undirected_projection(const DirectedGraph& g) {
    std::vector<Triplet> weight_entries, count_entries;
    const SparseMatrix& w = g.adj;
    std::size_t pairs = 0;
    for (std::size_t i = 0; i < g.n; ++i) {
        for (std::size_t k = w.row_ptr[i]; k < w.row_ptr[i + 1]; ++k) {
            const std::size_t j = w.col_idx[k];
            // handle each unordered pair once
            if (j < i && w.has_entry(j, i)) continue;
            const double m = std::max(w.values[k], w.at(j, i));
            weight_entries.push_back({i, j, m});
            weight_entries.push_back({j, i, m});
            count_entries.push_back({i, j, 1.0});
            count_entries.push_back({j, i, 1.0});
            pairs++;
        }
    }
    MotifAdjacency out;
    out.motif = MotifId::U;
    out.matrix = from_triplets(g.n, g.n, std::move(weight_entries));
    out.counts = from_triplets(g.n, g.n, std::move(count_entries));
    out.instance_total = pairs;
    return out;
}

SparseMatrix binary_structure(const SparseMatrix& m) {
    SparseMatrix out = m;
    std::fill(out.values.begin(), out.values.end(), 1.0);
    return out;
}

}  // namespace

MotifAdjacency motif_adjacency(const DirectedGraph& g, MotifId k, int threads) {
    if (is_triad_motif(k)) {
        const TriadCounts counts = count_triad_motifs(g, threads);
        return triad_adjacency_from_counts(g, k, counts);
    }
    if (k == MotifId::U) return undirected_projection(g);
    MotifAdjacency out;
    out.motif = k;
    if (k == MotifId::Min) {
        out.matrix = transpose(g.adj);  // incoming edges, asymmetric by design
    } else if (k == MotifId::Mout) {
        out.matrix = g.adj;
    } else {
        throw std::invalid_argument("motif_adjacency: unknown motif id " +
                                    std::to_string(static_cast<int>(k)));
    }
    out.counts = binary_structure(out.matrix);
    out.instance_total = out.matrix.nnz();
    return out;
}

std::vector<MotifAdjacency> motif_adjacencies(const DirectedGraph& g,
                                              const std::vector<MotifId>& ks, int threads) {
    const bool wants_triads = std::any_of(ks.begin(), ks.end(), is_triad_motif);
    TriadCounts counts;
    if (wants_triads) counts = count_triad_motifs(g, threads);
    std::vector<MotifAdjacency> out;
    out.reserve(ks.size());
    for (MotifId k : ks) {
        if (is_triad_motif(k))
            out.push_back(triad_adjacency_from_counts(g, k, counts));
        else
            out.push_back(motif_adjacency(g, k, threads));
    }
    return out;
}

}  // namespace motifgcn
