#pragma once

#include <memory>
#include <random>
#include <span>
#include <string>
#include <vector>

namespace relspan::nn {

struct Matrix {
  int rows = 0;
  int cols = 0;
  std::vector<double> a;

  Matrix() = default;
  Matrix(int r, int c) : rows(r), cols(c), a(static_cast<std::size_t>(r) * c) {}

  double* row(int r) { return a.data() + static_cast<std::size_t>(r) * cols; }
  const double* row(int r) const {
    return a.data() + static_cast<std::size_t>(r) * cols;
  }
  double& at(int r, int c) { return a[static_cast<std::size_t>(r) * cols + c]; }
  double at(int r, int c) const {
    return a[static_cast<std::size_t>(r) * cols + c];
  }
  std::size_t size() const { return a.size(); }
  void zero() { std::fill(a.begin(), a.end(), 0.0); }
};

// One trainable tensor plus its gradient and Adam state.
struct Param {
  std::string name;
  Matrix value;
  Matrix grad;
  Matrix adam_m;
  Matrix adam_v;
  bool frozen = false;  // excluded from updates (e.g. fixed word vectors)

  Param(std::string n, int rows, int cols)
      : name(std::move(n)),
        value(rows, cols),
        grad(rows, cols),
        adam_m(rows, cols),
        adam_v(rows, cols) {}
};

using Rng = std::mt19937_64;

class ParamStore {
 public:
  Param* add(const std::string& name, int rows, int cols);
  Param* find(const std::string& name) const;  // nullptr if absent

  std::span<const std::unique_ptr<Param>> params() const { return params_; }
  std::size_t scalar_count() const;

  void zero_grads();
  void scale_grads(double s);
  // Scales gradients so the global L2 norm is at most max_norm.
  // Returns the norm after clipping.
  double clip_grad_norm(double max_norm);
  double grad_norm() const;

 private:
  std::vector<std::unique_ptr<Param>> params_;
};

// Initializers.
void init_glorot(Param& p, Rng& rng);
void init_uniform(Param& p, Rng& rng, double lo, double hi);

class AdamOptimizer {
 public:
  AdamOptimizer(ParamStore& store, double lr, double beta1 = 0.9,
                double beta2 = 0.999, double eps = 1e-8)
      : store_(store), lr_(lr), beta1_(beta1), beta2_(beta2), eps_(eps) {}

  void step();
  long steps_taken() const { return t_; }
  void set_steps_taken(long t) { t_ = t; }

 private:
  ParamStore& store_;
  double lr_, beta1_, beta2_, eps_;
  long t_ = 0;
};

// Dynamic computation graph over vector-valued nodes. Values are computed
// eagerly on node creation; backward() walks the tape in reverse and
// accumulates into Param::grad.
class Graph {
 public:
  int input(std::vector<double> v);
  int zeros(int dim);
  int lookup(Param& table, int row);
  int concat(std::span<const int> xs);
  int concat2(int a, int b);
  int concat3(int a, int b, int c);
  int affine(Param& W, Param& b, int x);  // W * x + b
  int tanh_of(int x);
  int sigmoid_of(int x);
  int add(int a, int b);
  int cmult(int a, int b);
  int slice(int x, int from, int len);
  int max_many(std::span<const int> xs);  // element-wise max
  int dropout(int x, double rate, Rng& rng);
  // Scalar node: -log(softmax(logits)[gold]), probability clamped at 1e-12.
  int nll(int logits, int gold);
  // Scalar node: s * sum of scalar inputs.
  int sum_scaled(std::span<const int> xs, double s);

  const std::vector<double>& value(int id) const { return nodes_[id].val; }
  int dim(int id) const { return static_cast<int>(nodes_[id].val.size()); }

  // Backpropagates from a scalar node into Param::grad (accumulating).
  void backward(int loss_node);

  std::size_t node_count() const { return nodes_.size(); }

 private:
  enum class Op {
    kInput,
    kLookup,
    kConcat,
    kAffine,
    kTanh,
    kSigmoid,
    kAdd,
    kCMult,
    kSlice,
    kMaxMany,
    kDropout,
    kNll,
    kSumScaled,
  };

  struct Node {
    Op op;
    std::vector<int> in;
    Param* W = nullptr;
    Param* b = nullptr;
    int aux = 0;         // lookup row / slice offset / nll gold id
    double scale = 1.0;  // sum_scaled factor
    std::vector<double> val;
    std::vector<double> grad;
    std::vector<double> aux_val;  // dropout mask / nll softmax
    std::vector<int> aux_idx;     // max_many argmax per dimension
  };

  int push(Node n);
  std::vector<Node> nodes_;
};

}  // namespace relspan::nn
