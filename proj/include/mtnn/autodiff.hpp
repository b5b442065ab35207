#pragma once

#include <cstdint>
#include <functional>
#include <memory>
#include <string>
#include <vector>

#include "mtnn/errors.hpp"

namespace mtnn::ad {

/// Dense 2D tensor of 64-bit floats. Vectors are n x 1 columns, scalars 1 x 1.
struct TensorData {
    int rows = 0;
    int cols = 0;
    std::vector<double> v;

    TensorData() = default;
    TensorData(int r, int c) : rows(r), cols(c), v(static_cast<size_t>(r) * c, 0.0) {}
    TensorData(int r, int c, std::vector<double> data);

    size_t numel() const { return v.size(); }
    double at(int i, int j) const { return v[static_cast<size_t>(i) * cols + j]; }
    double& at(int i, int j) { return v[static_cast<size_t>(i) * cols + j]; }
    std::string shape_str() const;
};

TensorData zeros(int rows, int cols);

class Tape;

/// Handle to an immutable tensor value, optionally recorded on a tape.
/// Tape-less Vars are constants: values flow forward, gradients do not flow
/// back. All ops accept any mix of recorded and constant inputs.
class Var {
public:
    Var() = default;
    Var(std::shared_ptr<const TensorData> data, Tape* tape, int node)
        : data_(std::move(data)), tape_(tape), node_(node) {}

    const TensorData& data() const { return *data_; }
    int rows() const { return data_->rows; }
    int cols() const { return data_->cols; }
    bool on_tape() const { return tape_ != nullptr; }
    Tape* tape() const { return tape_; }
    int node() const { return node_; }
    bool empty() const { return data_ == nullptr; }

private:
    std::shared_ptr<const TensorData> data_;
    Tape* tape_ = nullptr;
    int node_ = -1;
};

/// Constant (stop-gradient) wrappers.
Var constant(TensorData d);
Var constant_scalar(double x);
Var detach(const Var& x);

/// Reverse-mode tape. Records one operation per node in creation order, so
/// parents always precede children and a single reverse pass visits each
/// node exactly once. One backward per tape; a second call is an error.
class Tape {
public:
    using BackwardFn = std::function<void(Tape&, int self)>;

    Var leaf(TensorData d);

    /// Reverse accumulation from a scalar loss.
    void backward(const Var& loss);

    /// Gradient buffer of a recorded Var (empty if no gradient reached it).
    std::vector<double> grad_of(const Var& v) const;

    int node_count() const { return static_cast<int>(parents_.size()); }
    bool backward_ran() const { return backward_ran_; }

    // Used by the op implementations.
    int record(std::vector<int> parents, std::shared_ptr<const TensorData> value, BackwardFn fn);
    std::vector<double>& grad_buffer(int node, size_t numel);
    const std::vector<double>& grad_at(int node) const { return grads_[node]; }
    bool has_grad(int node) const { return !grads_[node].empty(); }

private:
    std::vector<std::vector<int>> parents_;
    std::vector<Tape::BackwardFn> backward_;
    std::vector<std::shared_ptr<const TensorData>> values_;
    std::vector<std::vector<double>> grads_;
    bool backward_ran_ = false;
};

// Op catalog. Every op validates shapes (ShapeError names the op) and
// records its backward rule when an input is on a tape.
Var matmul(const Var& a, const Var& b);
Var transpose(const Var& a);
Var add(const Var& a, const Var& b);  // equal shapes, or b a 1 x d row / 1 x 1 scalar
Var sub(const Var& a, const Var& b);  // equal shapes
Var mul(const Var& a, const Var& b);  // elementwise, equal shapes
Var smul(const Var& a, double s);
Var scale(const Var& a, const Var& s);          // elementwise a * s, s is 1 x 1
Var rowscale(const Var& a, const Var& s);       // row i of a scaled by s[i], s is n x 1
Var sum(const Var& a);
Var mean(const Var& a);
Var concat_rows(const Var& a, const Var& b);
Var relu(const Var& a);
Var sigmoid(const Var& a);
Var tanh_op(const Var& a);
Var square(const Var& a);
Var reshape(const Var& a, int rows, int cols);
Var pad_rows(const Var& a, int new_rows);
Var slice_rows(const Var& a, int row0, int row1);

double sigmoid_scalar(double x);

/// Activation-pattern recorder used by the finite-difference harness to
/// detect kink crossings (ReLU sign flips, histogram bin jumps). Scoped:
/// while an ActivationPattern is alive, nonsmooth ops feed it.
class ActivationPattern {
public:
    ActivationPattern();
    ~ActivationPattern();
    uint64_t digest() const { return hash_; }
    static void feed(uint64_t bits);

private:
    uint64_t hash_;
    ActivationPattern* prev_;
};

/// Adam with bias correction; weight decay enters as an L2 term added to
/// the gradient before the moment updates (classic, non-decoupled form).
struct AdamConfig {
    double lr = 0.001;
    double beta1 = 0.9;
    double beta2 = 0.999;
    double eps = 1e-8;
    double weight_decay = 0.0;
};

class Adam {
public:
    explicit Adam(AdamConfig cfg) : cfg_(cfg) {}

    void step(const std::vector<TensorData*>& params,
              const std::vector<std::vector<double>>& grads);

    int64_t step_count() const { return step_; }
    const AdamConfig& config() const { return cfg_; }
    const std::vector<std::vector<double>>& moment1() const { return m_; }
    const std::vector<std::vector<double>>& moment2() const { return v_; }
    void restore(int64_t step, std::vector<std::vector<double>> m,
                 std::vector<std::vector<double>> v);

private:
    AdamConfig cfg_;
    int64_t step_ = 0;
    std::vector<std::vector<double>> m_;
    std::vector<std::vector<double>> v_;
};

/// Central finite differences against tape gradients, one coordinate at a
/// time. Coordinates whose +h/-h evaluations cross a kink (activation
/// pattern changes) are reported in `flagged` and excluded from the error.
struct GradCheckReport {
    double max_rel_err = 0.0;
    int worst_coordinate = -1;
    std::vector<int> flagged;
    bool ok(double tol) const { return max_rel_err < tol; }
};

/// `f` evaluates the scalar function at x (no gradient); `g` returns the
/// analytic gradient at x via a tape.
GradCheckReport grad_check(const std::function<double(const std::vector<double>&)>& f,
                           const std::function<std::vector<double>(const std::vector<double>&)>& g,
                           const std::vector<double>& x, double h);

}  // namespace mtnn::ad
