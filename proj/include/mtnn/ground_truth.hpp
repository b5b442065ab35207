#pragma once

#include <string>
#include <utility>
#include <vector>

#include "mtnn/merge_tree.hpp"

namespace mtnn {

/// Surjective label -> node assignment (0-based labels). Every node of the
/// tree carries at least one label; surplus labels sit on the root.
struct Labeling {
    int label_count = 0;
    std::vector<int> node_of_label;
};

/// Shared labeling for a tree pair: a = max(n1, n2); each tree's nodes are
/// sorted by the canonical key (f, subtree-min f, subtree size, id) and
/// label i maps to the i-th sorted node, with surplus labels on the root.
/// Symmetric in the argument order.
std::pair<Labeling, Labeling> label_pair(const MergeTree& t1, const MergeTree& t2);

/// T(i,j) = f(LCA(pi(i), pi(j))) on the rooted tree.
struct LcaMatrix {
    int a = 0;
    std::vector<double> m;  // a*a
    double at(int i, int j) const { return m[static_cast<size_t>(i) * a + j]; }
};

LcaMatrix lca_matrix(const MergeTree& t, const Labeling& lab);

/// Labeled interleaving distance: L-infinity norm of the difference of the
/// two LCA matrices under the shared canonical labeling.
double interleaving_distance(const MergeTree& t1, const MergeTree& t2);

/// (birth, death) values of one feature; death >= birth.
struct PairValues {
    double birth = 0.0;
    double death = 0.0;
};

double relabel_cost(PairValues m, PairValues s);
double delete_cost(PairValues m);
double insert_cost(PairValues s);

struct DistanceTable {
    std::vector<std::string> ids;
    int n = 0;
    std::vector<double> raw;         // n*n symmetric, zero diagonal
    double norm_constant = 1.0;      // max off-diagonal raw entry, or 1 if all zero
    std::vector<double> normalized;  // raw / norm_constant

    double raw_at(int i, int j) const { return raw[static_cast<size_t>(i) * n + j]; }
    double at(int i, int j) const { return normalized[static_cast<size_t>(i) * n + j]; }
};

/// All-pairs interleaving distances. Cells are independent, so the result
/// is identical for any worker count.
DistanceTable pairwise_table(const std::vector<MergeTree>& trees, int workers = 1);

void save_table(const DistanceTable& table, const std::string& path);
DistanceTable load_table(const std::string& path);

}  // namespace mtnn
