#include "mtnn/merge_tree.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numeric>
#include <sstream>

#include "mtnn/errors.hpp"
#include "mtnn/io_util.hpp"

namespace mtnn {

int MergeTree::root() const {
    for (size_t i = 0; i < parent.size(); ++i) {
        if (parent[i] < 0) return static_cast<int>(i);
    }
    throw ConfigError("merge tree '" + source_id + "' has no root");
}

std::vector<std::vector<int>> MergeTree::children() const {
    std::vector<std::vector<int>> out(nodes.size());
    for (size_t v = 0; v < parent.size(); ++v) {
        if (parent[v] >= 0) out[parent[v]].push_back(static_cast<int>(v));
    }
    return out;
}

std::vector<int> MergeTree::leaves() const {
    std::vector<char> has_child(nodes.size(), 0);
    for (int p : parent) {
        if (p >= 0) has_child[p] = 1;
    }
    std::vector<int> out;
    for (size_t v = 0; v < nodes.size(); ++v) {
        if (!has_child[v]) out.push_back(static_cast<int>(v));
    }
    return out;
}

bool MergeTree::operator==(const MergeTree& o) const {
    if (source_id != o.source_id || parent != o.parent || pairs != o.pairs) return false;
    if (nodes.size() != o.nodes.size()) return false;
    for (size_t i = 0; i < nodes.size(); ++i) {
        if (nodes[i].id != o.nodes[i].id || nodes[i].kind != o.nodes[i].kind ||
            nodes[i].f != o.nodes[i].f) {
            return false;
        }
    }
    return true;
}

void MergeTree::validate() const {
    const int n = node_count();
    if (n == 0) throw ConfigError("merge tree '" + source_id + "' is empty");
    if (static_cast<int>(parent.size()) != n) {
        throw ConfigError("merge tree '" + source_id + "': parent array size mismatch");
    }
    int roots = 0;
    for (int v = 0; v < n; ++v) {
        if (nodes[v].id != v) throw ConfigError("merge tree '" + source_id + "': ids not positional");
        if (parent[v] < 0) {
            ++roots;
        } else {
            if (parent[v] >= n) throw ConfigError("merge tree '" + source_id + "': bad parent id");
            // Parent strictly above in the sweep order (f, id).
            const TreeNode& c = nodes[v];
            const TreeNode& p = nodes[parent[v]];
            if (p.f < c.f || (p.f == c.f && p.id <= c.id)) {
                throw ConfigError("merge tree '" + source_id + "': parent not above child");
            }
        }
    }
    if (roots != 1) throw ConfigError("merge tree '" + source_id + "': must have exactly one root");

    const int r = root();
    if (nodes[r].kind != NodeKind::root) {
        throw ConfigError("merge tree '" + source_id + "': root node kind mismatch");
    }
    for (int v = 0; v < n; ++v) {
        if (nodes[v].f > nodes[r].f) {
            throw ConfigError("merge tree '" + source_id + "': root is not the maximum");
        }
    }
    const auto kids = children();
    for (int v = 0; v < n; ++v) {
        if (v == r) continue;
        if (kids[v].empty() && nodes[v].kind != NodeKind::minimum) {
            throw ConfigError("merge tree '" + source_id + "': leaf that is not a minimum");
        }
        if (!kids[v].empty() && kids[v].size() < 2) {
            throw ConfigError("merge tree '" + source_id + "': internal node with one child");
        }
    }
    // One persistence pair per leaf (the n == 1 degenerate tree pairs the
    // root with itself).
    size_t leaf_count = leaves().size();
    if (pairs.size() != leaf_count) {
        throw ConfigError("merge tree '" + source_id + "': pair count != leaf count");
    }
}

namespace {

// Union-find over grid vertices, path halving.
struct UnionFind {
    std::vector<int> parent;
    explicit UnionFind(int n) : parent(n) { std::iota(parent.begin(), parent.end(), 0); }
    int find(int x) {
        while (parent[x] != x) {
            parent[x] = parent[parent[x]];
            x = parent[x];
        }
        return x;
    }
    void unite(int a, int b) { parent[find(a)] = find(b); }
};

MergeTree degenerate_tree(const std::string& id) {
    MergeTree t;
    t.source_id = id;
    t.nodes.push_back({0, NodeKind::root, 0.0});
    t.parent.push_back(-1);
    t.pairs.push_back({0, 0, 0.0});
    return t;
}

}  // namespace

MergeTree build_join_tree(const ScalarField& field) {
    field.validate();
    const ScalarField norm = normalize_field(field);
    const int n_vertices = norm.size();

    const auto [lo, hi] = std::minmax_element(norm.values.begin(), norm.values.end());
    if (*lo == *hi) return degenerate_tree(field.id);

    std::vector<int> order(n_vertices);
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](int a, int b) {
        if (norm.values[a] != norm.values[b]) return norm.values[a] < norm.values[b];
        return a < b;
    });

    MergeTree t;
    t.source_id = field.id;
    UnionFind uf(n_vertices);
    std::vector<char> processed(n_vertices, 0);
    std::vector<int> comp_node(n_vertices, -1);  // per union-find root: current tree node

    auto add_node = [&](NodeKind kind, double f) {
        const int id = t.node_count();
        t.nodes.push_back({id, kind, f});
        t.parent.push_back(-1);
        return id;
    };

    int last_created_vertex = -1;
    for (int v : order) {
        std::vector<int> roots;
        for (int u : grid_neighbors(norm.dims, v)) {
            if (!processed[u]) continue;
            const int r = uf.find(u);
            if (std::find(roots.begin(), roots.end(), r) == roots.end()) roots.push_back(r);
        }
        if (roots.empty()) {
            const int node = add_node(NodeKind::minimum, norm.values[v]);
            comp_node[v] = node;
            last_created_vertex = v;
        } else if (roots.size() == 1) {
            uf.unite(v, roots[0]);
        } else {
            const int node = add_node(NodeKind::saddle, norm.values[v]);
            for (int r : roots) {
                t.parent[comp_node[r]] = node;
                uf.unite(r, v);
            }
            uf.unite(v, roots[0]);
            comp_node[uf.find(v)] = node;
            last_created_vertex = v;
        }
        processed[v] = 1;
    }

    const int top_vertex = order.back();
    const int final_comp = uf.find(top_vertex);
    if (last_created_vertex == top_vertex) {
        // The global maximum merged components itself; it is the root.
        t.nodes[comp_node[final_comp]].kind = NodeKind::root;
    } else {
        const int root = add_node(NodeKind::root, norm.values[top_vertex]);
        t.parent[comp_node[final_comp]] = root;
    }

    t.pairs = persistence_pairs(t);
    return t;
}

std::vector<PersistencePair> persistence_pairs(const MergeTree& t) {
    const int n = t.node_count();
    if (n == 1) return {{0, 0, 0.0}};

    const auto kids = t.children();
    const int root = t.root();

    // Elder key: (f, id) ascending; smaller key = older feature.
    auto older = [&](int a, int b) {
        if (t.nodes[a].f != t.nodes[b].f) return t.nodes[a].f < t.nodes[b].f;
        return a < b;
    };

    std::vector<PersistencePair> pairs;
    std::vector<int> rep(n, -1);  // surviving minimum of each subtree

    // Iterative post-order.
    std::vector<int> stack{root};
    std::vector<int> post;
    post.reserve(n);
    while (!stack.empty()) {
        const int v = stack.back();
        stack.pop_back();
        post.push_back(v);
        for (int c : kids[v]) stack.push_back(c);
    }
    for (auto it = post.rbegin(); it != post.rend(); ++it) {
        const int v = *it;
        if (kids[v].empty()) {
            rep[v] = v;
            continue;
        }
        int survivor = rep[kids[v][0]];
        for (size_t i = 1; i < kids[v].size(); ++i) {
            const int contender = rep[kids[v][i]];
            const int loser = older(survivor, contender) ? contender : survivor;
            if (!older(survivor, contender)) survivor = contender;
            pairs.push_back({loser, v, t.nodes[v].f - t.nodes[loser].f});
        }
        rep[v] = survivor;
    }
    pairs.push_back({rep[root], root, t.nodes[root].f - t.nodes[rep[root]].f});

    std::sort(pairs.begin(), pairs.end(),
              [](const PersistencePair& a, const PersistencePair& b) { return a.birth < b.birth; });
    return pairs;
}

namespace {

// Drop the given nodes, compact ids preserving relative order, rebuild pairs.
MergeTree drop_nodes(const MergeTree& t, const std::vector<char>& removed) {
    MergeTree out;
    out.source_id = t.source_id;
    const int n = t.node_count();
    std::vector<int> remap(n, -1);
    for (int v = 0; v < n; ++v) {
        if (removed[v]) continue;
        const int id = out.node_count();
        remap[v] = id;
        out.nodes.push_back({id, t.nodes[v].kind, t.nodes[v].f});
        out.parent.push_back(-1);
    }
    for (int v = 0; v < n; ++v) {
        if (removed[v]) continue;
        int p = t.parent[v];
        while (p >= 0 && removed[p]) p = t.parent[p];
        out.parent[remap[v]] = p >= 0 ? remap[p] : -1;
    }
    return out;
}

}  // namespace

MergeTree simplify(const MergeTree& t, double tau) {
    if (tau < 0.0) throw ConfigError("simplify: tau must be non-negative");

    MergeTree work = t;
    work.pairs = persistence_pairs(work);
    work.validate();
    while (work.node_count() > 2) {
        const int root = work.root();
        // The global pair is the one carrying the overall oldest minimum.
        int global_birth = work.pairs.front().birth;
        for (const auto& p : work.pairs) {
            const auto& a = work.nodes[p.birth];
            const auto& b = work.nodes[global_birth];
            if (a.f < b.f || (a.f == b.f && a.id < b.id)) global_birth = p.birth;
        }
        int pick = -1;
        for (size_t i = 0; i < work.pairs.size(); ++i) {
            const auto& p = work.pairs[i];
            if (p.birth == global_birth) continue;
            if (p.persistence >= tau) continue;
            if (pick < 0 || p.persistence < work.pairs[pick].persistence ||
                (p.persistence == work.pairs[pick].persistence &&
                 p.birth < work.pairs[pick].birth)) {
                pick = static_cast<int>(i);
            }
        }
        if (pick < 0) break;

        const int leaf = work.pairs[pick].birth;
        std::vector<char> removed(work.node_count(), 0);
        removed[leaf] = 1;
        // Contract the leaf's parent if it is left with a single child.
        const int p = work.parent[leaf];
        if (p >= 0 && p != root) {
            int remaining = 0;
            for (int v = 0; v < work.node_count(); ++v) {
                if (v != leaf && work.parent[v] == p) ++remaining;
            }
            if (remaining == 1) removed[p] = 1;
        }
        work = drop_nodes(work, removed);
        work.pairs = persistence_pairs(work);
    }
    return work;
}

std::vector<double> node_features(const MergeTree& t) {
    std::vector<double> out;
    out.reserve(t.nodes.size());
    for (const TreeNode& n : t.nodes) out.push_back(n.f);
    return out;
}

PersistenceMatrix persistence_matrix(const MergeTree& t) {
    const int n = t.node_count();
    PersistenceMatrix m;
    m.n = n;
    m.e.assign(static_cast<size_t>(n) * n, 0.0);
    for (int v = 0; v < n; ++v) {
        const int p = t.parent[v];
        if (p < 0) continue;
        const double w = std::abs(t.nodes[p].f - t.nodes[v].f);
        m.at(v, p) = w;
        m.at(p, v) = w;
    }
    for (const PersistencePair& pr : t.pairs) {
        if (pr.birth == pr.death) continue;  // degenerate single-node pair
        if (m.at(pr.birth, pr.death) != 0.0) continue;  // already a tree edge
        const double w = std::abs(t.nodes[pr.death].f - t.nodes[pr.birth].f);
        m.at(pr.birth, pr.death) = w;
        m.at(pr.death, pr.birth) = w;
    }
    return m;
}

namespace {

const char* kind_token(NodeKind k) {
    switch (k) {
        case NodeKind::minimum: return "min";
        case NodeKind::saddle: return "saddle";
        case NodeKind::root: return "root";
    }
    return "?";
}

NodeKind kind_from_token(const std::string& s, const std::string& path, int lineno) {
    if (s == "min") return NodeKind::minimum;
    if (s == "saddle") return NodeKind::saddle;
    if (s == "root") return NodeKind::root;
    throw ParseError(path + ":" + std::to_string(lineno) + ": unknown node kind '" + s + "'");
}

}  // namespace

void save_trees(const std::vector<MergeTree>& trees, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw ParseError(path + ": cannot open for writing");
    out << "trees " << trees.size() << '\n';
    for (const MergeTree& t : trees) {
        out << "tree " << t.source_id << ' ' << t.node_count() << '\n';
        for (const TreeNode& n : t.nodes) {
            out << "node " << n.id << ' ' << kind_token(n.kind) << ' ' << fmt17(n.f) << '\n';
        }
        for (int v = 0; v < t.node_count(); ++v) {
            if (t.parent[v] >= 0) out << "edge " << v << ' ' << t.parent[v] << '\n';
        }
        for (const PersistencePair& p : t.pairs) {
            out << "pair " << p.birth << ' ' << p.death << '\n';
        }
    }
    if (!out) throw ParseError(path + ": write failed");
}

std::vector<MergeTree> load_trees(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ParseError(path + ": cannot open");
    std::string line;
    int lineno = 0;

    auto next_line = [&](std::string& into) {
        if (!std::getline(in, into)) return false;
        ++lineno;
        return true;
    };
    auto fail = [&](const std::string& msg) -> ParseError {
        return ParseError(path + ":" + std::to_string(lineno) + ": " + msg);
    };

    if (!next_line(line)) throw fail("missing 'trees <count>' header");
    std::istringstream header(line);
    std::string tag;
    size_t count = 0;
    header >> tag >> count;
    if (tag != "trees") throw fail("missing 'trees <count>' header");

    std::vector<MergeTree> trees;
    trees.reserve(count);
    for (size_t k = 0; k < count; ++k) {
        if (!next_line(line)) throw fail("truncated file: expected 'tree'");
        std::istringstream th(line);
        std::string source;
        int n = 0;
        th >> tag >> source >> n;
        if (tag != "tree" || n <= 0) throw fail("expected 'tree <source_id> <n>'");

        MergeTree t;
        t.source_id = source;
        t.parent.assign(n, -1);
        for (int i = 0; i < n; ++i) {
            if (!next_line(line)) throw fail("truncated node list");
            std::istringstream ns(line);
            std::string kind;
            int id;
            std::string fval;
            ns >> tag >> id >> kind >> fval;
            if (tag != "node" || id != i) throw fail("node lines must be 'node <id> ...' in id order");
            t.nodes.push_back({id, kind_from_token(kind, path, lineno), parse_double(fval, path, lineno)});
        }
        // Edges and pairs until the next 'tree' header or EOF.
        while (in.peek() != EOF) {
            const auto pos = in.tellg();
            const int mark = lineno;
            if (!next_line(line)) break;
            std::istringstream ls(line);
            ls >> tag;
            if (tag == "edge") {
                int c, p;
                ls >> c >> p;
                if (!ls || c < 0 || c >= n || p < 0 || p >= n) throw fail("bad edge line");
                t.parent[c] = p;
            } else if (tag == "pair") {
                int b, d;
                ls >> b >> d;
                if (!ls || b < 0 || b >= n || d < 0 || d >= n) throw fail("bad pair line");
                t.pairs.push_back({b, d, t.nodes[d].f - t.nodes[b].f});
            } else if (tag == "tree") {
                in.seekg(pos);
                lineno = mark;
                break;
            } else {
                throw fail("unexpected line '" + line + "'");
            }
        }
        t.validate();
        trees.push_back(std::move(t));
    }
    return trees;
}

}  // namespace mtnn
