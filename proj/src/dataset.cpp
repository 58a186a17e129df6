#include "motifgcn/dataset.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <numeric>
#include <queue>
#include <random>
#include <set>
#include <sstream>
#include <stdexcept>

#include "motifgcn/filters.hpp"
#include "motifgcn/spectral.hpp"

#include <json.hpp>

namespace motifgcn {

namespace fs = std::filesystem;
using nlohmann::json;

SyntheticSpec make_directional_spec(std::size_t n, int blocks, double p_within, double p_between,
                                    double directionality, std::size_t feature_dim,
                                    double noise_sigma, std::uint64_t seed) {
    SyntheticSpec spec;
    spec.n = n;
    spec.blocks = blocks;
    spec.directionality = directionality;
    spec.feature_dim = feature_dim;
    spec.noise_sigma = noise_sigma;
    spec.seed = seed;
    spec.block_probs = DenseMatrix(static_cast<std::size_t>(blocks), static_cast<std::size_t>(blocks),
                                   p_between);
    for (int a = 0; a < blocks; ++a) {
        spec.block_probs(static_cast<std::size_t>(a), static_cast<std::size_t>(a)) = p_within;
        if (a + 1 < blocks)
            spec.block_probs(static_cast<std::size_t>(a), static_cast<std::size_t>(a + 1)) =
                std::min(1.0, p_between + directionality);
    }
    return spec;
}

namespace {

std::vector<int> block_labels(std::size_t n, int blocks, std::mt19937_64& rng) {
    std::vector<int> labels(n);
    for (std::size_t i = 0; i < n; ++i) labels[i] = static_cast<int>(i % static_cast<std::size_t>(blocks));
    std::shuffle(labels.begin(), labels.end(), rng);
    return labels;
}

DenseMatrix noisy_class_features(const std::vector<int>& labels, int blocks,
                                 std::size_t feature_dim, double mean_scale, double noise_sigma,
                                 std::mt19937_64& rng) {
    DenseMatrix means(static_cast<std::size_t>(blocks), feature_dim);
    fill_gaussian(means, rng, 0.0, mean_scale);
    DenseMatrix features(labels.size(), feature_dim);
    fill_gaussian(features, rng, 0.0, noise_sigma);
    for (std::size_t i = 0; i < labels.size(); ++i)
        for (std::size_t j = 0; j < feature_dim; ++j)
            features(i, j) += means(static_cast<std::size_t>(labels[i]), j);
    return features;
}

}  // namespace

NodeDataset generate_synthetic(const SyntheticSpec& spec) {
    if (spec.blocks <= 0 || spec.block_probs.rows() != static_cast<std::size_t>(spec.blocks) ||
        spec.block_probs.cols() != static_cast<std::size_t>(spec.blocks))
        throw std::invalid_argument("generate_synthetic: block_probs must be blocks x blocks");
    for (double p : spec.block_probs.values())
        if (p < 0.0 || p > 1.0)
            throw std::invalid_argument("generate_synthetic: probabilities must lie in [0,1]");

    // independent streams per stage keep the instance bitwise reproducible
    std::mt19937_64 label_rng(spec.seed * 0x9e3779b97f4a7c15ull + 1);
    std::mt19937_64 edge_rng(spec.seed * 0x9e3779b97f4a7c15ull + 2);
    std::mt19937_64 feat_rng(spec.seed * 0x9e3779b97f4a7c15ull + 3);

    NodeDataset ds;
    ds.num_classes = spec.blocks;
    ds.labels = block_labels(spec.n, spec.blocks, label_rng);

    std::uniform_real_distribution<double> coin(0.0, 1.0);
    std::vector<Triplet> arcs;
    for (std::size_t u = 0; u < spec.n; ++u)
        for (std::size_t v = 0; v < spec.n; ++v) {
            if (u == v) continue;
            const double p = spec.block_probs(static_cast<std::size_t>(ds.labels[u]),
                                              static_cast<std::size_t>(ds.labels[v]));
            if (coin(edge_rng) < p) arcs.push_back({u, v, 1.0});
        }
    ds.graph = graph_from_triplets(spec.n, true, std::move(arcs));
    ds.features = noisy_class_features(ds.labels, spec.blocks, spec.feature_dim, spec.mean_scale,
                                       spec.noise_sigma, feat_rng);
    ds.masks = make_splits(spec.n, spec.split_fractions, spec.seed, true, &ds.labels);
    return ds;
}

NodeDataset generate_planted_motif(const PlantedMotifSpec& spec) {
    if (!is_triad_motif(spec.motif))
        throw std::invalid_argument("generate_planted_motif: motif must be one of M1..M13");
    std::mt19937_64 rng(spec.seed * 0x2545f4914f6cdd1dull + 7);

    NodeDataset ds;
    ds.num_classes = spec.blocks;
    ds.labels = block_labels(spec.n, spec.blocks, rng);
    std::vector<std::vector<std::size_t>> members(static_cast<std::size_t>(spec.blocks));
    for (std::size_t i = 0; i < spec.n; ++i)
        members[static_cast<std::size_t>(ds.labels[i])].push_back(i);

    // Instances are planted on triples whose pairs carry no arc yet, so every
    // planted triple keeps exactly the motif's induced pattern and the other
    // triad classes see no block-aligned signal.
    const std::uint8_t pattern = MotifCatalog::instance().pattern(spec.motif);
    std::vector<Triplet> arcs;
    std::set<std::uint64_t> occupied;
    const auto pair_key = [](std::size_t a, std::size_t b) {
        return TriadCounts::pair_key(std::min(a, b), std::max(a, b));
    };
    for (int b = 0; b < spec.blocks; ++b) {
        auto& verts = members[static_cast<std::size_t>(b)];
        if (verts.size() < 3) continue;
        std::uniform_int_distribution<std::size_t> pick(0, verts.size() - 1);
        int planted = 0;
        for (int attempt = 0; attempt < spec.instances_per_block * 50 &&
                              planted < spec.instances_per_block;
             ++attempt) {
            const std::size_t a = pick(rng), c = pick(rng), d = pick(rng);
            if (a == c || a == d || c == d) continue;
            const std::size_t tri[3] = {verts[a], verts[c], verts[d]};
            if (occupied.count(pair_key(tri[0], tri[1])) ||
                occupied.count(pair_key(tri[0], tri[2])) ||
                occupied.count(pair_key(tri[1], tri[2])))
                continue;
            for (int i = 0; i < 3; ++i)
                for (int j = 0; j < 3; ++j) {
                    if (i == j) continue;
                    if (pattern & (1u << triad::cell_code(i, j)))
                        arcs.push_back({tri[i], tri[j], 1.0});
                }
            occupied.insert(pair_key(tri[0], tri[1]));
            occupied.insert(pair_key(tri[0], tri[2]));
            occupied.insert(pair_key(tri[1], tri[2]));
            planted++;
        }
    }
    // cross-block noise arcs contaminate the projection operators but almost
    // never complete an instance of a >=3-arc planted motif
    std::uniform_real_distribution<double> coin(0.0, 1.0);
    for (std::size_t u = 0; u < spec.n; ++u)
        for (std::size_t v = 0; v < spec.n; ++v) {
            if (u == v || ds.labels[u] == ds.labels[v]) continue;
            if (coin(rng) < spec.cross_noise_p) arcs.push_back({u, v, 1.0});
        }

    ds.graph = graph_from_triplets(spec.n, true, std::move(arcs));
    ds.features = noisy_class_features(ds.labels, spec.blocks, spec.feature_dim, 0.0,
                                       spec.noise_sigma, rng);  // zero mean separation
    ds.masks = make_splits(spec.n, spec.split_fractions, spec.seed, true, &ds.labels);
    return ds;
}

Masks make_splits(std::size_t n, const std::array<double, 3>& fractions, std::uint64_t seed,
                  bool stratify_by_label, const std::vector<int>* labels,
                  SplitWarnings* warnings) {
    double total = 0.0;
    for (double f : fractions) {
        if (f < 0.0) throw std::invalid_argument("make_splits: negative fraction");
        total += f;
    }
    if (total > 1.0 + 1e-12)
        throw std::invalid_argument("make_splits: fractions sum to " + std::to_string(total) +
                                    " > 1");
    if (stratify_by_label && (!labels || labels->size() != n))
        throw std::invalid_argument("make_splits: stratification needs labels of length n");

    Masks masks;
    masks.train.assign(n, 0);
    masks.val.assign(n, 0);
    masks.test.assign(n, 0);
    std::mt19937_64 rng(seed ^ 0x5851f42d4c957f2dull);
    std::array<std::vector<std::uint8_t>*, 3> out = {&masks.train, &masks.val, &masks.test};

    auto assign_group = [&](std::vector<std::size_t>& ids, bool proportional_to_group) {
        std::shuffle(ids.begin(), ids.end(), rng);
        std::size_t cursor = 0;
        for (int s = 0; s < 3; ++s) {
            const std::size_t want = static_cast<std::size_t>(
                std::floor(fractions[static_cast<std::size_t>(s)] *
                           static_cast<double>(proportional_to_group ? ids.size() : n)));
            for (std::size_t t = 0; t < want && cursor < ids.size(); ++t, ++cursor)
                (*out[static_cast<std::size_t>(s)])[ids[cursor]] = 1;
        }
    };

    if (!stratify_by_label) {
        std::vector<std::size_t> ids(n);
        std::iota(ids.begin(), ids.end(), 0);
        assign_group(ids, false);
        return masks;
    }

    std::map<int, std::vector<std::size_t>> by_class;
    for (std::size_t i = 0; i < n; ++i) by_class[(*labels)[i]].push_back(i);
    std::vector<std::size_t> fallback_pool;
    for (auto& [cls, ids] : by_class) {
        bool too_small = false;
        for (double f : fractions)
            if (f > 0.0 && static_cast<std::size_t>(std::floor(f * static_cast<double>(ids.size()))) == 0)
                too_small = true;
        if (too_small) {
            if (warnings) warnings->unstratified_classes.push_back(cls);
            fallback_pool.insert(fallback_pool.end(), ids.begin(), ids.end());
            continue;
        }
        assign_group(ids, true);
    }
    if (!fallback_pool.empty()) assign_group(fallback_pool, true);
    return masks;
}

PcaResult pca_reduce(const DenseMatrix& features, std::size_t target_dims) {
    const std::size_t n = features.rows(), d = features.cols();
    if (target_dims == 0 || target_dims > std::min(n, d))
        throw std::invalid_argument("pca_reduce: target_dims " + std::to_string(target_dims) +
                                    " out of range for " + std::to_string(n) + "x" +
                                    std::to_string(d) + " data");

    PcaResult out;
    out.mean = col_sums(features);
    out.mean.scale_inplace(1.0 / static_cast<double>(n));
    DenseMatrix centered = features;
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < d; ++j) centered(i, j) -= out.mean(0, j);
    const double denom = n > 1 ? static_cast<double>(n - 1) : 1.0;

    out.components = DenseMatrix(d, target_dims);
    out.explained.resize(target_dims);
    if (d <= n) {
        DenseMatrix cov = matmul_tn(centered, centered);
        cov.scale_inplace(1.0 / denom);
        const SpectralDecomposition dec = jacobi_eigendecomposition(cov);
        for (std::size_t k = 0; k < target_dims; ++k) {
            const std::size_t src = d - 1 - k;  // eigenvalues ascend
            out.explained[k] = dec.eigenvalues[src];
            for (std::size_t j = 0; j < d; ++j) out.components(j, k) = dec.eigenvectors(j, src);
        }
    } else {
        // Gram trick: eigenvectors of X Xt / (n-1) map to components Xt u.
        DenseMatrix gram = matmul_nt(centered, centered);
        gram.scale_inplace(1.0 / denom);
        const SpectralDecomposition dec = jacobi_eigendecomposition(gram);
        for (std::size_t k = 0; k < target_dims; ++k) {
            const std::size_t src = n - 1 - k;
            out.explained[k] = dec.eigenvalues[src];
            DenseMatrix u(n, 1);
            for (std::size_t i = 0; i < n; ++i) u(i, 0) = dec.eigenvectors(i, src);
            DenseMatrix comp = matmul_tn(centered, u);
            const double nrm = frobenius_norm(comp);
            if (nrm > 0.0) comp.scale_inplace(1.0 / nrm);
            for (std::size_t j = 0; j < d; ++j) out.components(j, k) = comp(j, 0);
        }
    }

    // deterministic sign: the largest-magnitude loading is positive
    for (std::size_t k = 0; k < target_dims; ++k) {
        std::size_t arg = 0;
        double best = 0.0;
        for (std::size_t j = 0; j < d; ++j)
            if (std::fabs(out.components(j, k)) > best) {
                best = std::fabs(out.components(j, k));
                arg = j;
            }
        if (out.components(arg, k) < 0.0)
            for (std::size_t j = 0; j < d; ++j) out.components(j, k) = -out.components(j, k);
    }

    out.projected = matmul(centered, out.components);
    return out;
}

NodeDataset subsample_largest_wcc(const NodeDataset& ds, std::size_t target_n, std::uint64_t seed) {
    const std::size_t n = ds.graph.n;
    // union-find over the undirected projection
    std::vector<std::size_t> parent(n);
    std::iota(parent.begin(), parent.end(), 0);
    std::function<std::size_t(std::size_t)> find = [&](std::size_t x) {
        while (parent[x] != x) x = parent[x] = parent[parent[x]];
        return x;
    };
    const SparseMatrix& w = ds.graph.adj;
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t k = w.row_ptr[i]; k < w.row_ptr[i + 1]; ++k) {
            const std::size_t a = find(i), b = find(w.col_idx[k]);
            if (a != b) parent[a] = b;
        }
    std::map<std::size_t, std::size_t> comp_size;
    for (std::size_t i = 0; i < n; ++i) comp_size[find(i)]++;
    std::size_t root = 0, best = 0;
    for (const auto& [r, c] : comp_size)
        if (c > best || (c == best && r < root)) {
            best = c;
            root = r;
        }

    // BFS from the smallest vertex of the component, neighbors ascending
    std::vector<std::vector<std::size_t>> undirected(n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t k = w.row_ptr[i]; k < w.row_ptr[i + 1]; ++k) {
            undirected[i].push_back(w.col_idx[k]);
            undirected[w.col_idx[k]].push_back(i);
        }
    for (auto& nbrs : undirected) {
        std::sort(nbrs.begin(), nbrs.end());
        nbrs.erase(std::unique(nbrs.begin(), nbrs.end()), nbrs.end());
    }
    std::size_t start = n;
    for (std::size_t i = 0; i < n; ++i)
        if (find(i) == root) {
            start = i;
            break;
        }
    std::vector<std::size_t> kept;
    std::vector<std::uint8_t> visited(n, 0);
    std::queue<std::size_t> frontier;
    if (start < n) {
        frontier.push(start);
        visited[start] = 1;
    }
    while (!frontier.empty() && kept.size() < std::min(target_n, best)) {
        const std::size_t v = frontier.front();
        frontier.pop();
        kept.push_back(v);
        for (std::size_t u : undirected[v])
            if (!visited[u]) {
                visited[u] = 1;
                frontier.push(u);
            }
    }
    std::sort(kept.begin(), kept.end());

    std::vector<std::size_t> remap(n, n);
    for (std::size_t i = 0; i < kept.size(); ++i) remap[kept[i]] = i;

    NodeDataset out;
    out.num_classes = ds.num_classes;
    std::vector<Triplet> arcs;
    for (std::size_t i : kept)
        for (std::size_t k = w.row_ptr[i]; k < w.row_ptr[i + 1]; ++k)
            if (remap[w.col_idx[k]] < n) arcs.push_back({remap[i], remap[w.col_idx[k]], w.values[k]});
    out.graph = graph_from_triplets(kept.size(), ds.graph.directed, std::move(arcs));
    out.features = DenseMatrix(kept.size(), ds.features.cols());
    out.labels.resize(kept.size());
    for (std::size_t i = 0; i < kept.size(); ++i) {
        out.labels[i] = ds.labels[kept[i]];
        for (std::size_t j = 0; j < ds.features.cols(); ++j)
            out.features(i, j) = ds.features(kept[i], j);
    }
    out.masks = make_splits(kept.size(), {0.1, 0.1, 0.1}, seed, true, &out.labels);
    return out;
}

namespace {

std::vector<std::string> split_on(const std::string& s, char delim) {
    std::vector<std::string> out;
    std::string token;
    std::istringstream stream(s);
    while (std::getline(stream, token, delim)) out.push_back(token);
    return out;
}

}  // namespace

NodeDataset load_cora_format(const std::string& dir_path) {
    const fs::path dir(dir_path);
    const fs::path labels_path = dir / "labels.tsv";
    const fs::path features_path = dir / "features.tsv";
    const fs::path edges_path = dir / "edges.tsv";
    if (!fs::exists(labels_path) || !fs::exists(features_path) || !fs::exists(edges_path))
        throw std::runtime_error("load_cora_format: " + dir_path +
                                 " must contain edges.tsv, features.tsv and labels.tsv");

    // labels first: they define the vertex id universe
    std::map<long long, long long> raw_labels;
    {
        std::ifstream in(labels_path);
        std::string line;
        std::size_t lineno = 0;
        while (std::getline(in, line)) {
            lineno++;
            if (line.empty() || line[0] == '#') continue;
            std::istringstream ls(line);
            long long id, cls;
            if (!(ls >> id >> cls))
                throw std::runtime_error("load_cora_format: malformed labels.tsv line " +
                                         std::to_string(lineno));
            raw_labels[id] = cls;
        }
    }
    if (raw_labels.empty()) throw std::runtime_error("load_cora_format: labels.tsv is empty");

    const std::size_t n = raw_labels.size();
    std::map<long long, std::size_t> id_map;
    bool contiguous = true;
    {
        std::size_t next = 0;
        for (const auto& [raw, cls] : raw_labels) {
            if (raw != static_cast<long long>(next)) contiguous = false;
            id_map[raw] = next++;
        }
    }

    // contiguous class remap
    std::map<long long, int> label_map;
    for (const auto& [raw, cls] : raw_labels)
        if (!label_map.count(cls)) label_map[cls] = 0;
    {
        int next = 0;
        for (auto& [raw_cls, mapped] : label_map) mapped = next++;
    }

    NodeDataset ds;
    ds.num_classes = static_cast<int>(label_map.size());
    ds.labels.resize(n);
    for (const auto& [raw, cls] : raw_labels) ds.labels[id_map[raw]] = label_map[cls];

    // features
    {
        std::ifstream in(features_path);
        std::string line;
        std::size_t lineno = 0, seen = 0;
        std::size_t dim = 0;
        std::vector<std::uint8_t> covered(n, 0);
        while (std::getline(in, line)) {
            lineno++;
            if (line.empty() || line[0] == '#') continue;
            const std::size_t tab = line.find('\t');
            if (tab == std::string::npos)
                throw std::runtime_error("load_cora_format: malformed features.tsv line " +
                                         std::to_string(lineno));
            const long long raw = std::stoll(line.substr(0, tab));
            const auto it = id_map.find(raw);
            if (it == id_map.end())
                throw std::runtime_error("load_cora_format: features.tsv id " +
                                         std::to_string(raw) + " missing from labels.tsv");
            const auto parts = split_on(line.substr(tab + 1), ',');
            if (dim == 0) {
                dim = parts.size();
                ds.features = DenseMatrix(n, dim);
            } else if (parts.size() != dim) {
                throw std::runtime_error("load_cora_format: inconsistent feature width on line " +
                                         std::to_string(lineno));
            }
            for (std::size_t j = 0; j < dim; ++j)
                ds.features(it->second, j) = std::stod(parts[j]);
            covered[it->second] = 1;
            seen++;
        }
        if (seen != n)
            throw std::runtime_error("load_cora_format: features.tsv covers " +
                                     std::to_string(seen) + " of " + std::to_string(n) +
                                     " labeled vertices");
    }

    // edges, remapped through the id map; parsed directly so raw ids may be
    // arbitrary integers
    {
        std::ifstream in(edges_path);
        std::vector<Triplet> arcs;
        std::string line;
        std::size_t lineno = 0;
        while (std::getline(in, line)) {
            lineno++;
            const std::size_t start = line.find_first_not_of(" \t\r");
            if (start == std::string::npos || line[start] == '#' || line[start] == '%') continue;
            std::istringstream ls(line);
            long long src, dst;
            double weight = 1.0;
            if (!(ls >> src >> dst))
                throw std::runtime_error("load_cora_format: malformed edges.tsv line " +
                                         std::to_string(lineno));
            if (!(ls >> weight)) weight = 1.0;
            const auto si = id_map.find(src);
            const auto sj = id_map.find(dst);
            if (si == id_map.end() || sj == id_map.end())
                throw std::runtime_error("load_cora_format: edges.tsv vertex " +
                                         std::to_string(si == id_map.end() ? src : dst) +
                                         " missing from labels.tsv (line " +
                                         std::to_string(lineno) + ")");
            arcs.push_back({si->second, sj->second, weight});
        }
        ds.graph = graph_from_triplets(n, true, std::move(arcs));
    }

    // optional fixed splits (raw vertex ids)
    ds.masks.train.assign(n, 0);
    ds.masks.val.assign(n, 0);
    ds.masks.test.assign(n, 0);
    const fs::path splits_path = dir / "splits.json";
    if (fs::exists(splits_path)) {
        std::ifstream in(splits_path);
        json j = json::parse(in);
        auto fill = [&](const char* key, std::vector<std::uint8_t>& mask) {
            if (!j.contains(key)) return;
            for (const auto& raw : j[key]) {
                const auto it = id_map.find(raw.get<long long>());
                if (it == id_map.end())
                    throw std::runtime_error("load_cora_format: splits.json id not in labels.tsv");
                mask[it->second] = 1;
            }
        };
        fill("train", ds.masks.train);
        fill("val", ds.masks.val);
        fill("test", ds.masks.test);
    }

    // persist the remapping when ids or classes were not already contiguous
    if (!contiguous) {
        std::ofstream out(dir / "idmap.tsv");
        out << "# raw_id\tvertex_index\n";
        for (const auto& [raw, idx] : id_map) out << raw << '\t' << idx << '\n';
    }
    bool labels_contiguous = true;
    for (const auto& [raw_cls, mapped] : label_map)
        if (raw_cls != mapped) labels_contiguous = false;
    if (!labels_contiguous) {
        std::ofstream out(dir / "labelmap.tsv");
        out << "# raw_label\tclass_index\n";
        for (const auto& [raw_cls, mapped] : label_map) out << raw_cls << '\t' << mapped << '\n';
    }
    return ds;
}

void save_dataset(const std::string& dir_path, const NodeDataset& ds, bool write_splits) {
    const fs::path dir(dir_path);
    fs::create_directories(dir);
    save_edge_list((dir / "edges.tsv").string(), ds.graph.adj);

    {
        std::ofstream out(dir / "features.tsv");
        char buf[64];
        for (std::size_t i = 0; i < ds.features.rows(); ++i) {
            out << i << '\t';
            for (std::size_t j = 0; j < ds.features.cols(); ++j) {
                std::snprintf(buf, sizeof(buf), "%.17g", ds.features(i, j));
                out << (j ? "," : "") << buf;
            }
            out << '\n';
        }
    }
    {
        std::ofstream out(dir / "labels.tsv");
        for (std::size_t i = 0; i < ds.labels.size(); ++i) out << i << '\t' << ds.labels[i] << '\n';
    }
    if (write_splits && !ds.masks.train.empty()) {
        json j;
        auto ids = [&](const std::vector<std::uint8_t>& mask) {
            std::vector<std::size_t> out_ids;
            for (std::size_t i = 0; i < mask.size(); ++i)
                if (mask[i]) out_ids.push_back(i);
            return out_ids;
        };
        j["train"] = ids(ds.masks.train);
        j["val"] = ids(ds.masks.val);
        j["test"] = ids(ds.masks.test);
        std::ofstream out(dir / "splits.json");
        out << j.dump(2) << '\n';
    }
}

double masked_accuracy(const DenseMatrix& logits, const std::vector<int>& labels,
                       const std::vector<std::uint8_t>& mask) {
    std::size_t correct = 0, total = 0;
    for (std::size_t i = 0; i < logits.rows(); ++i) {
        if (!mask[i]) continue;
        std::size_t arg = 0;
        for (std::size_t j = 1; j < logits.cols(); ++j)
            if (logits(i, j) > logits(i, arg)) arg = j;
        if (static_cast<int>(arg) == labels[i]) correct++;
        total++;
    }
    return total ? static_cast<double>(correct) / static_cast<double>(total) : 0.0;
}

double masked_cross_entropy(const DenseMatrix& logits, const std::vector<int>& labels,
                            const std::vector<std::uint8_t>& mask) {
    const DenseMatrix probs = softmax_rows(logits);
    double loss = 0.0;
    std::size_t total = 0;
    for (std::size_t i = 0; i < logits.rows(); ++i) {
        if (!mask[i]) continue;
        loss -= std::log(std::max(probs(i, static_cast<std::size_t>(labels[i])), 1e-300));
        total++;
    }
    return total ? loss / static_cast<double>(total) : 0.0;
}

}  // namespace motifgcn
