#pragma once

#include <string>
#include <vector>

#include "mtnn/scalar_field.hpp"

namespace mtnn {

enum class NodeKind { minimum, saddle, root };

struct TreeNode {
    int id = 0;
    NodeKind kind = NodeKind::minimum;
    double f = 0.0;
};

/// Birth/death critical nodes of one feature; persistence = f(death) - f(birth).
struct PersistencePair {
    int birth = 0;
    int death = 0;
    double persistence = 0.0;
    bool operator==(const PersistencePair& o) const {
        return birth == o.birth && death == o.death && persistence == o.persistence;
    }
};

/// Critical-node join tree of a scalar field, rooted at the global maximum.
/// Node ids are positional (nodes[i].id == i) and follow the construction
/// sweep, which visits grid vertices in ascending (value, vertex index)
/// order. Consequently (f, id) lexicographic order reproduces the total
/// order used for every tie-break, and the elder rule can be evaluated on
/// the tree alone.
struct MergeTree {
    std::vector<TreeNode> nodes;
    std::vector<int> parent;  // parent[id]; -1 at the root
    std::vector<PersistencePair> pairs;
    std::string source_id;

    int node_count() const { return static_cast<int>(nodes.size()); }
    int root() const;
    std::vector<std::vector<int>> children() const;
    std::vector<int> leaves() const;  // nodes with no children
    void validate() const;
    bool operator==(const MergeTree& o) const;
};

/// Sweep the (normalized) field in ascending (value, index) order with
/// union-find. A vertex with no processed neighbor opens a leaf; a vertex
/// joining two or more components becomes a saddle; the global maximum
/// becomes the root. Regular vertices never become nodes, so monotone
/// chains are contracted by construction. A constant field yields the
/// degenerate single-node tree.
MergeTree build_join_tree(const ScalarField& field);

/// Elder-rule pairing computed from the tree structure: at every merge the
/// subtree minimum with the larger (f, id) key dies; the surviving global
/// minimum pairs with the root. Pairs are returned sorted by birth id.
std::vector<PersistencePair> persistence_pairs(const MergeTree& t);

/// Persistence simplification: repeatedly remove the lowest-persistence
/// non-global pair with persistence < tau (delete the birth leaf, contract
/// any internal node left with a single child, recompute pairs). The global
/// pair is never removed. Idempotent for fixed tau.
MergeTree simplify(const MergeTree& t, double tau);

/// Column of per-node scalar values, in node order.
std::vector<double> node_features(const MergeTree& t);

/// Symmetric matrix of |f(u)-f(v)| over tree edges plus one entry per
/// persistence pair whose nodes are not already adjacent.
struct PersistenceMatrix {
    int n = 0;
    std::vector<double> e;  // n*n row-major

    double at(int u, int v) const { return e[static_cast<size_t>(u) * n + v]; }
    double& at(int u, int v) { return e[static_cast<size_t>(u) * n + v]; }
};

PersistenceMatrix persistence_matrix(const MergeTree& t);

void save_trees(const std::vector<MergeTree>& trees, const std::string& path);
std::vector<MergeTree> load_trees(const std::string& path);

}  // namespace mtnn
