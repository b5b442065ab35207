#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "mtnn/ground_truth.hpp"
#include "mtnn/model.hpp"

namespace mtnn {

struct SplitResult {
    std::vector<int> train;
    std::vector<int> test;
};

/// Deterministic shuffled 80/20 split. Needs at least 5 trees.
SplitResult split_trees(int tree_count, uint64_t seed);

struct PairDataset {
    struct Pair {
        int i = 0;  // i < j, indices into the tree collection
        int j = 0;
        double target = 0.0;  // normalized ground-truth distance
    };
    std::vector<Pair> train;
    std::vector<Pair> test;
};

/// All unordered within-split pairs with normalized targets from the table.
PairDataset make_pairs(const std::vector<MergeTree>& trees, const DistanceTable& table,
                       const SplitResult& split);

struct TrainConfig {
    int epochs = 100;
    int batch_size = 128;
    double lr = 0.001;
    double weight_decay = 0.0005;
    uint64_t seed = 0;
    ModelConfig model;
    int max_train_pairs = 0;  // 0 = use all; otherwise a seeded subsample
    int checkpoint_every = 10;
    std::string checkpoint_dir;  // empty = no checkpoints

    void validate() const;
};

struct TrainResult {
    ModelParams params;
    std::vector<double> loss_curve;  // per-epoch mean training MSE
};

/// Minimize mean squared error between pair scores and normalized targets
/// with Adam. Pair order is reshuffled every epoch from a per-epoch derived
/// seed; a non-finite loss aborts with a diagnostic. Deterministic in seed.
TrainResult train(const std::vector<MergeTree>& trees, const PairDataset& dataset,
                  const TrainConfig& config);

struct EvalReport {
    double mse = 0.0;
    double mse_scaled = 0.0;  // mse * 1000
    int pair_count = 0;
    std::vector<double> targets;
    std::vector<double> predictions;
    std::vector<double> residuals;
    std::vector<std::pair<int, int>> pair_index;
    double wall_seconds = 0.0;
    std::string config_echo;
};

EvalReport evaluate(const ModelParams& params, const ModelConfig& config,
                    const std::vector<MergeTree>& trees,
                    const std::vector<PairDataset::Pair>& pairs);

void save_eval_report(const EvalReport& report, const std::string& path);

struct BenchReport {
    int pair_count = 0;
    double exact_seconds = 0.0;
    double model_seconds = 0.0;
    double speedup = 0.0;
    double exact_us_per_pair = 0.0;
    double model_us_per_pair = 0.0;
};

/// Wall time of exact interleaving distances vs model inference over the
/// same seeded pair sample, both single-threaded. Model inference embeds
/// each distinct tree once and scores pairs from cached embeddings.
BenchReport benchmark(const ModelParams& params, const ModelConfig& config,
                      const std::vector<MergeTree>& trees, int n_pairs, uint64_t seed);

void save_bench_report(const BenchReport& report, const std::string& path);

struct MdsResult {
    std::vector<double> x;
    std::vector<double> y;
    std::vector<double> mean_dist;  // row mean of the input distances
};

/// Classical MDS of a symmetric distance matrix: double-centered squared
/// distances, top-2 eigenpairs via cyclic Jacobi, coordinates scaled by
/// sqrt(eigenvalue) (non-negative eigenvalues only).
MdsResult mds(const std::vector<double>& dist, int n);
MdsResult mds(const DistanceTable& table);

void save_mds(const MdsResult& result, const std::vector<std::string>& ids,
              const std::string& path);

struct AttentionRow {
    int tree = 0;  // 0 or 1
    int node = 0;
    double f = 0.0;
    double attention = 0.0;  // sigmoid(h_n . c)
    double weight = 0.0;     // (sum_u e_un) / Norm
};

std::vector<AttentionRow> export_attention(const ModelParams& params, const ModelConfig& config,
                                           const MergeTree& t1, const MergeTree& t2);

void save_attention(const std::vector<AttentionRow>& rows, const std::string& path);

/// Checkpoint: model config block, named parameter tensors and, when an
/// optimizer is attached, its moment buffers. Text format, 17 significant
/// digits, exact round trip.
struct Checkpoint {
    ModelConfig config;
    ModelParams params;
    uint64_t train_seed = 0;
    bool has_adam = false;
    int64_t adam_step = 0;
    std::vector<std::vector<double>> adam_m;
    std::vector<std::vector<double>> adam_v;
};

void save_checkpoint(const Checkpoint& ckpt, const std::string& path);
Checkpoint load_checkpoint(const std::string& path);

}  // namespace mtnn
