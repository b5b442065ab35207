#include "mtnn/ground_truth.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>
#include <thread>

#include "mtnn/errors.hpp"
#include "mtnn/io_util.hpp"

namespace mtnn {

namespace {

struct SortKey {
    double f;
    double subtree_min;
    int subtree_size;
    int id;

    bool operator<(const SortKey& o) const {
        if (f != o.f) return f < o.f;
        if (subtree_min != o.subtree_min) return subtree_min < o.subtree_min;
        if (subtree_size != o.subtree_size) return subtree_size < o.subtree_size;
        return id < o.id;
    }
};

Labeling canonical_labeling(const MergeTree& t, int label_count) {
    const int n = t.node_count();
    const auto kids = t.children();

    std::vector<double> sub_min(n);
    std::vector<int> sub_size(n);
    // Children have smaller ids than parents for sweep-built trees, but be
    // general: process in reverse topological order found by depth.
    std::vector<int> order(n);
    std::vector<int> stack{t.root()};
    int pos = 0;
    while (!stack.empty()) {
        const int v = stack.back();
        stack.pop_back();
        order[pos++] = v;
        for (int c : kids[v]) stack.push_back(c);
    }
    for (int i = n - 1; i >= 0; --i) {
        const int v = order[i];
        sub_min[v] = t.nodes[v].f;
        sub_size[v] = 1;
        for (int c : kids[v]) {
            sub_min[v] = std::min(sub_min[v], sub_min[c]);
            sub_size[v] += sub_size[c];
        }
    }

    std::vector<SortKey> keys(n);
    for (int v = 0; v < n; ++v) keys[v] = {t.nodes[v].f, sub_min[v], sub_size[v], v};
    std::vector<int> sorted(n);
    for (int v = 0; v < n; ++v) sorted[v] = v;
    std::sort(sorted.begin(), sorted.end(), [&](int a, int b) { return keys[a] < keys[b]; });

    Labeling lab;
    lab.label_count = label_count;
    lab.node_of_label.resize(label_count);
    for (int i = 0; i < label_count; ++i) {
        lab.node_of_label[i] = i < n ? sorted[i] : t.root();
    }
    return lab;
}

}  // namespace

std::pair<Labeling, Labeling> label_pair(const MergeTree& t1, const MergeTree& t2) {
    if (t1.node_count() == 0 || t2.node_count() == 0) {
        throw ConfigError("label_pair: empty tree");
    }
    const int a = std::max(t1.node_count(), t2.node_count());
    return {canonical_labeling(t1, a), canonical_labeling(t2, a)};
}

LcaMatrix lca_matrix(const MergeTree& t, const Labeling& lab) {
    const int n = t.node_count();
    for (int node : lab.node_of_label) {
        if (node < 0 || node >= n) throw ConfigError("lca_matrix: label out of range");
    }

    std::vector<int> depth(n, 0);
    for (int v = 0; v < n; ++v) {
        int d = 0, u = v;
        while (t.parent[u] >= 0) {
            u = t.parent[u];
            ++d;
        }
        depth[v] = d;
    }
    auto lca = [&](int u, int v) {
        while (depth[u] > depth[v]) u = t.parent[u];
        while (depth[v] > depth[u]) v = t.parent[v];
        while (u != v) {
            u = t.parent[u];
            v = t.parent[v];
        }
        return u;
    };

    const int a = lab.label_count;
    LcaMatrix m;
    m.a = a;
    m.m.resize(static_cast<size_t>(a) * a);
    for (int i = 0; i < a; ++i) {
        for (int j = i; j < a; ++j) {
            const double f = t.nodes[lca(lab.node_of_label[i], lab.node_of_label[j])].f;
            m.m[static_cast<size_t>(i) * a + j] = f;
            m.m[static_cast<size_t>(j) * a + i] = f;
        }
    }
    return m;
}

double interleaving_distance(const MergeTree& t1, const MergeTree& t2) {
    const auto [l1, l2] = label_pair(t1, t2);
    const LcaMatrix m1 = lca_matrix(t1, l1);
    const LcaMatrix m2 = lca_matrix(t2, l2);
    double d = 0.0;
    for (size_t i = 0; i < m1.m.size(); ++i) {
        d = std::max(d, std::abs(m1.m[i] - m2.m[i]));
    }
    return d;
}

namespace {

void check_pair_values(PairValues p, const char* op) {
    if (p.death < p.birth) {
        throw ConfigError(std::string(op) + ": death < birth");
    }
}

}  // namespace

double relabel_cost(PairValues m, PairValues s) {
    check_pair_values(m, "relabel_cost");
    check_pair_values(s, "relabel_cost");
    const double matched = std::max(std::abs(m.birth - s.birth), std::abs(m.death - s.death));
    const double collapsed =
        (std::abs(m.death - m.birth) + std::abs(s.death - s.birth)) / 2.0;
    return std::min(matched, collapsed);
}

double delete_cost(PairValues m) {
    check_pair_values(m, "delete_cost");
    return (m.death - m.birth) / 2.0;
}

double insert_cost(PairValues s) {
    check_pair_values(s, "insert_cost");
    return (s.death - s.birth) / 2.0;
}

DistanceTable pairwise_table(const std::vector<MergeTree>& trees, int workers) {
    const int n = static_cast<int>(trees.size());
    if (n < 2) throw ConfigError("pairwise_table: need at least 2 trees");
    if (workers < 1) workers = 1;

    DistanceTable table;
    table.n = n;
    table.ids.reserve(n);
    for (const MergeTree& t : trees) table.ids.push_back(t.source_id);
    table.raw.assign(static_cast<size_t>(n) * n, 0.0);

    // Flattened upper-triangle cells, statically partitioned; every cell is
    // independent so the result does not depend on the worker count.
    std::vector<std::pair<int, int>> cells;
    cells.reserve(static_cast<size_t>(n) * (n - 1) / 2);
    for (int i = 0; i < n; ++i) {
        for (int j = i + 1; j < n; ++j) cells.emplace_back(i, j);
    }

    auto run = [&](size_t begin, size_t end) {
        for (size_t k = begin; k < end; ++k) {
            const auto [i, j] = cells[k];
            const double d = interleaving_distance(trees[i], trees[j]);
            table.raw[static_cast<size_t>(i) * n + j] = d;
            table.raw[static_cast<size_t>(j) * n + i] = d;
        }
    };

    if (workers == 1) {
        run(0, cells.size());
    } else {
        std::vector<std::thread> pool;
        const size_t chunk = (cells.size() + workers - 1) / workers;
        for (int w = 0; w < workers; ++w) {
            const size_t begin = std::min(cells.size(), w * chunk);
            const size_t end = std::min(cells.size(), begin + chunk);
            if (begin < end) pool.emplace_back(run, begin, end);
        }
        for (auto& th : pool) th.join();
    }

    double max_off = 0.0;
    for (double d : table.raw) max_off = std::max(max_off, d);
    table.norm_constant = max_off > 0.0 ? max_off : 1.0;
    table.normalized.resize(table.raw.size());
    for (size_t i = 0; i < table.raw.size(); ++i) {
        table.normalized[i] = table.raw[i] / table.norm_constant;
    }
    return table;
}

void save_table(const DistanceTable& table, const std::string& path) {
    if (table.n == 0) throw ConfigError("save_table: empty table");
    std::ofstream out(path);
    if (!out) throw ParseError(path + ": cannot open for writing");
    for (int i = 0; i < table.n; ++i) {
        out << (i ? "," : "") << table.ids[i];
    }
    out << '\n';
    for (int i = 0; i < table.n; ++i) {
        for (int j = 0; j < table.n; ++j) {
            out << (j ? "," : "") << fmt17(table.raw_at(i, j));
        }
        out << '\n';
    }
    out << "# norm " << fmt17(table.norm_constant) << '\n';
    if (!out) throw ParseError(path + ": write failed");
}

DistanceTable load_table(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ParseError(path + ": cannot open");
    std::string line;
    int lineno = 0;

    if (!std::getline(in, line)) throw ParseError(path + ":1: empty table");
    ++lineno;
    DistanceTable table;
    {
        std::istringstream header(line);
        std::string id;
        while (std::getline(header, id, ',')) table.ids.push_back(id);
    }
    table.n = static_cast<int>(table.ids.size());
    if (table.n == 0) throw ParseError(path + ":1: empty id header");

    table.raw.reserve(static_cast<size_t>(table.n) * table.n);
    bool norm_seen = false;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty()) continue;
        if (line.rfind("# norm", 0) == 0) {
            std::istringstream meta(line);
            std::string hash, word, value;
            meta >> hash >> word >> value;
            table.norm_constant = parse_double(value, path, lineno);
            norm_seen = true;
            continue;
        }
        std::istringstream row(line);
        std::string cell;
        int cols = 0;
        while (std::getline(row, cell, ',')) {
            table.raw.push_back(parse_double(cell, path, lineno));
            ++cols;
        }
        if (cols != table.n) {
            throw ParseError(path + ":" + std::to_string(lineno) + ": row width " +
                             std::to_string(cols) + " != " + std::to_string(table.n));
        }
    }
    if (table.raw.size() != static_cast<size_t>(table.n) * table.n) {
        throw ParseError(path + ": expected " + std::to_string(table.n) + " rows");
    }
    if (!norm_seen) throw ParseError(path + ": missing '# norm' metadata line");
    if (table.norm_constant <= 0.0) throw ParseError(path + ": non-positive norm constant");
    table.normalized.resize(table.raw.size());
    for (size_t i = 0; i < table.raw.size(); ++i) {
        table.normalized[i] = table.raw[i] / table.norm_constant;
    }
    return table;
}

}  // namespace mtnn
