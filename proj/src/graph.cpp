#include "motifgcn/graph.hpp"

#include <cctype>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace motifgcn {

DirectedGraph graph_from_triplets(std::size_t n, bool directed, std::vector<Triplet> arcs,
                                  EdgeListStats* stats) {
    std::size_t self_loops = 0;
    std::vector<Triplet> kept;
    kept.reserve(arcs.size() * (directed ? 1 : 2));
    for (const Triplet& t : arcs) {
        if (t.row >= n || t.col >= n)
            throw std::invalid_argument("graph_from_triplets: vertex index " +
                                        std::to_string(std::max(t.row, t.col)) +
                                        " out of range for n=" + std::to_string(n));
        if (t.value < 0.0)
            throw std::invalid_argument("graph_from_triplets: negative weight on arc (" +
                                        std::to_string(t.row) + "," + std::to_string(t.col) + ")");
        if (t.row == t.col) {
            self_loops++;
            continue;
        }
        kept.push_back(t);
        if (!directed) kept.push_back({t.col, t.row, t.value});
    }
    const std::size_t before = kept.size();
    DirectedGraph g;
    g.n = n;
    g.directed = directed;
    g.adj = from_triplets(n, n, std::move(kept), true);
    if (stats) {
        stats->self_loops_dropped += self_loops;
        stats->duplicates_merged += before - g.adj.nnz();
    }
    return g;
}

namespace {

bool parse_header_n(const std::string& line, std::size_t* out) {
    // `% n=<count>`, whitespace tolerated around tokens
    std::size_t pos = line.find("n=");
    if (pos == std::string::npos) return false;
    try {
        *out = std::stoull(line.substr(pos + 2));
    } catch (const std::exception&) {
        return false;
    }
    return true;
}

}  // namespace

DirectedGraph load_edge_list(const std::string& path, std::size_t n, bool directed,
                             EdgeListStats* stats) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("load_edge_list: cannot open " + path);

    std::vector<Triplet> arcs;
    std::size_t header_n = 0;
    std::size_t max_index = 0;
    bool any_edge = false;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        lineno++;
        std::size_t start = line.find_first_not_of(" \t\r");
        if (start == std::string::npos) continue;
        if (line[start] == '#') continue;
        if (line[start] == '%') {
            parse_header_n(line, &header_n);
            continue;
        }
        std::istringstream ls(line);
        std::size_t src, dst;
        double weight = 1.0;
        if (!(ls >> src >> dst)) {
            throw std::runtime_error("load_edge_list: malformed line " + std::to_string(lineno) +
                                     " in " + path + ": '" + line + "'");
        }
        if (!(ls >> weight)) {
            if (!ls.eof())
                throw std::runtime_error("load_edge_list: malformed weight on line " +
                                         std::to_string(lineno) + " in " + path);
            weight = 1.0;
        }
        std::string trailing;
        if (ls >> trailing)
            throw std::runtime_error("load_edge_list: trailing tokens on line " +
                                     std::to_string(lineno) + " in " + path);
        if (weight < 0.0 || !std::isfinite(weight))
            throw std::runtime_error("load_edge_list: bad weight on line " +
                                     std::to_string(lineno) + " in " + path);
        arcs.push_back({src, dst, weight});
        max_index = std::max({max_index, src, dst});
        any_edge = true;
    }

    std::size_t resolved_n = n;
    if (resolved_n == 0) resolved_n = header_n != 0 ? header_n : (any_edge ? max_index + 1 : 0);
    if (any_edge && max_index >= resolved_n)
        throw std::runtime_error("load_edge_list: vertex index " + std::to_string(max_index) +
                                 " >= n=" + std::to_string(resolved_n) + " in " + path);

    EdgeListStats local;
    EdgeListStats* s = stats ? stats : &local;
    s->lines_read = lineno;
    s->header_n = header_n;
    return graph_from_triplets(resolved_n, directed, std::move(arcs), s);
}

void save_edge_list(const std::string& path, const SparseMatrix& m,
                    const std::map<std::string, std::string>& extra_headers) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("save_edge_list: cannot write " + path);
    out << "% n=" << m.rows << "\n";
    for (const auto& [k, v] : extra_headers) out << "% " << k << "=" << v << "\n";
    char buf[64];
    for (std::size_t i = 0; i < m.rows; ++i) {
        for (std::size_t k = m.row_ptr[i]; k < m.row_ptr[i + 1]; ++k) {
            std::snprintf(buf, sizeof(buf), "%.17g", m.values[k]);
            out << i << '\t' << m.col_idx[k] << '\t' << buf << '\n';
        }
    }
    if (!out) throw std::runtime_error("save_edge_list: write failed for " + path);
}

}  // namespace motifgcn
