#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "mtnn/autodiff.hpp"
#include "mtnn/merge_tree.hpp"

namespace mtnn {

enum class EncoderKind { gcn, gin };
enum class AttentionKind { plain, topological };

struct ModelConfig {
    EncoderKind encoder = EncoderKind::gin;
    AttentionKind attention = AttentionKind::topological;
    std::array<int, 3> layer_dims{64, 32, 16};
    int ntn_k = 16;
    int hist_bins = 16;
    std::vector<int> mlp_dims{32, 16, 8, 1};

    int embed_dim() const { return layer_dims.back(); }
    int joint_dim() const { return ntn_k + hist_bins; }
    void validate() const;
};

struct GcnLayerParams {
    ad::TensorData w;  // d_in x d_out
    ad::TensorData b;  // 1 x d_out
};

/// GIN layer: per-layer MLP Linear -> ReLU -> Linear plus the learnable eps.
struct GinLayerParams {
    ad::TensorData w1, b1;  // d_in x d_out, 1 x d_out
    ad::TensorData w2, b2;  // d_out x d_out, 1 x d_out
    ad::TensorData eps;     // 1 x 1
};

struct ModelParams {
    std::vector<GcnLayerParams> gcn;
    std::vector<GinLayerParams> gin;
    ad::TensorData w_context;  // m x m
    ad::TensorData ntn_w;      // (K*m) x m, slice k in rows [k*m, (k+1)*m)
    ad::TensorData ntn_v;      // K x 2m
    ad::TensorData ntn_b;      // K x 1
    std::vector<ad::TensorData> mlp_w;  // out x in
    std::vector<ad::TensorData> mlp_b;  // out x 1

    /// Stable enumeration used by the optimizer and the checkpoint format.
    std::vector<std::pair<std::string, ad::TensorData*>> named();
    std::vector<std::pair<std::string, const ad::TensorData*>> named() const;
};

/// Glorot-uniform weights, zero biases, zero GIN eps; deterministic in seed.
ModelParams init_params(const ModelConfig& config, uint64_t seed);

/// Per-tree constants consumed by the forward pass: features, the two
/// adjacency forms and the topological attention weights derived from the
/// persistence matrix.
struct TreeInput {
    int n = 0;
    ad::TensorData features;     // n x 1, normalized f values
    ad::TensorData gcn_adj;      // n x n, 1/sqrt(dd) normalization incl. self loops
    ad::TensorData sum_adj;      // n x n, 0/1 tree adjacency (no self loops)
    ad::TensorData topo_weight;  // n x 1, (sum_u e_un) / Norm
    bool topo_valid = false;     // false when the tree has no edges
};

TreeInput make_tree_input(const MergeTree& t);

/// ModelParams bound onto a tape (or as constants when tape == nullptr).
struct BoundParams {
    std::vector<std::vector<ad::Var>> gcn;  // per layer: {w, b}
    std::vector<std::vector<ad::Var>> gin;  // per layer: {w1, b1, w2, b2, eps}
    ad::Var w_context;
    ad::Var ntn_w, ntn_v, ntn_b;
    std::vector<ad::Var> mlp_w, mlp_b;
};

BoundParams bind_params(ad::Tape* tape, const ModelParams& params, const ModelConfig& config);

// Model building blocks. All return Vars so they work both recorded and
// constant-folded; see docs/formats.md for the exact formulas.
ad::Var gcn_layer(const ad::Var& h, const ad::Var& norm_adj, const ad::Var& w, const ad::Var& b);
ad::Var gin_layer(const ad::Var& h, const ad::Var& sum_adj, const std::vector<ad::Var>& layer);
ad::Var encode(const TreeInput& in, const BoundParams& bp, const ModelConfig& config);
ad::Var global_context_plain(const ad::Var& h, const ad::Var& w_context);
ad::Var topo_context(const ad::Var& h, const ad::Var& w_context, const TreeInput& in);
std::pair<ad::Var, ad::Var> attention_pool(const ad::Var& h, const ad::Var& context);
ad::Var ntn(const ad::Var& h1_star, const ad::Var& h2_star, const ad::Var& w_t,
            const ad::Var& v_w, const ad::Var& b_t, int k);

/// Node-similarity histogram over sigmoid(H1 H2^T) with zero-row padding to
/// the larger node count. Not differentiable: the result is a constant.
ad::TensorData node_histogram(const ad::TensorData& h1, const ad::TensorData& h2, int bins);

ad::Var mlp_head(const ad::Var& joint, const BoundParams& bp);

/// Full pair score on an optional tape. `detach_ntn` is a test hook that
/// cuts the tree-embedding branch so gradient isolation can be verified.
ad::Var forward_pair(ad::Tape* tape, const TreeInput& in1, const TreeInput& in2,
                     const ModelParams& params, const ModelConfig& config,
                     bool detach_ntn = false);

/// Convenience: tape-less score of a tree pair.
double score_pair(const MergeTree& t1, const MergeTree& t2, const ModelParams& params,
                  const ModelConfig& config);

/// Cached per-tree inference state for scoring many pairs.
struct TreeEmbedding {
    int n = 0;
    ad::TensorData h;       // n x m node embeddings
    ad::TensorData h_star;  // m x 1 tree embedding
};

TreeEmbedding embed_tree(const TreeInput& in, const ModelParams& params,
                         const ModelConfig& config);
double score_from_embeddings(const TreeEmbedding& e1, const TreeEmbedding& e2,
                             const ModelParams& params, const ModelConfig& config);

std::string to_string(EncoderKind k);
std::string to_string(AttentionKind k);
EncoderKind encoder_from_string(const std::string& s);
AttentionKind attention_from_string(const std::string& s);

}  // namespace mtnn
