#include "relspan/nn/graph.hpp"

#include <cassert>
#include <cmath>
#include <stdexcept>

#include "relspan/nn/kernels.hpp"

namespace relspan::nn {

Param* ParamStore::add(const std::string& name, int rows, int cols) {
  if (find(name)) throw std::logic_error("duplicate parameter: " + name);
  params_.push_back(std::make_unique<Param>(name, rows, cols));
  return params_.back().get();
}

Param* ParamStore::find(const std::string& name) const {
  for (const auto& p : params_)
    if (p->name == name) return p.get();
  return nullptr;
}

std::size_t ParamStore::scalar_count() const {
  std::size_t n = 0;
  for (const auto& p : params_) n += p->value.size();
  return n;
}

void ParamStore::zero_grads() {
  for (auto& p : params_) p->grad.zero();
}

void ParamStore::scale_grads(double s) {
  for (auto& p : params_)
    for (double& g : p->grad.a) g *= s;
}

double ParamStore::grad_norm() const {
  double sq = 0.0;
  for (const auto& p : params_)
    for (double g : p->grad.a) sq += g * g;
  return std::sqrt(sq);
}

double ParamStore::clip_grad_norm(double max_norm) {
  const double norm = grad_norm();
  if (norm > max_norm && norm > 0.0) {
    scale_grads(max_norm / norm);
    return max_norm;
  }
  return norm;
}

void init_glorot(Param& p, Rng& rng) {
  const double limit =
      std::sqrt(6.0 / (static_cast<double>(p.value.rows) + p.value.cols));
  std::uniform_real_distribution<double> dist(-limit, limit);
  for (double& v : p.value.a) v = dist(rng);
}

void init_uniform(Param& p, Rng& rng, double lo, double hi) {
  std::uniform_real_distribution<double> dist(lo, hi);
  for (double& v : p.value.a) v = dist(rng);
}

void AdamOptimizer::step() {
  ++t_;
  const double bc1 = 1.0 - std::pow(beta1_, static_cast<double>(t_));
  const double bc2 = 1.0 - std::pow(beta2_, static_cast<double>(t_));
  for (const auto& p : store_.params()) {
    if (p->frozen) continue;
    for (std::size_t i = 0; i < p->value.size(); ++i) {
      const double g = p->grad.a[i];
      double& m = p->adam_m.a[i];
      double& v = p->adam_v.a[i];
      m = beta1_ * m + (1.0 - beta1_) * g;
      v = beta2_ * v + (1.0 - beta2_) * g * g;
      p->value.a[i] -= lr_ * (m / bc1) / (std::sqrt(v / bc2) + eps_);
    }
  }
}

int Graph::push(Node n) {
  nodes_.push_back(std::move(n));
  return static_cast<int>(nodes_.size()) - 1;
}

int Graph::input(std::vector<double> v) {
  Node n;
  n.op = Op::kInput;
  n.val = std::move(v);
  return push(std::move(n));
}

int Graph::zeros(int dim) { return input(std::vector<double>(dim, 0.0)); }

int Graph::lookup(Param& table, int row) {
  if (row < 0 || row >= table.value.rows)
    throw std::out_of_range("lookup row " + std::to_string(row) +
                            " out of range for " + table.name);
  Node n;
  n.op = Op::kLookup;
  n.W = &table;
  n.aux = row;
  n.val.assign(table.value.row(row), table.value.row(row) + table.value.cols);
  return push(std::move(n));
}

int Graph::concat(std::span<const int> xs) {
  Node n;
  n.op = Op::kConcat;
  n.in.assign(xs.begin(), xs.end());
  std::size_t total = 0;
  for (int x : xs) total += nodes_[x].val.size();
  n.val.reserve(total);
  for (int x : xs)
    n.val.insert(n.val.end(), nodes_[x].val.begin(), nodes_[x].val.end());
  return push(std::move(n));
}

int Graph::concat2(int a, int b) {
  const int xs[] = {a, b};
  return concat(xs);
}

int Graph::concat3(int a, int b, int c) {
  const int xs[] = {a, b, c};
  return concat(xs);
}

int Graph::affine(Param& W, Param& b, int x) {
  assert(W.value.cols == dim(x));
  assert(b.value.rows == W.value.rows && b.value.cols == 1);
  Node n;
  n.op = Op::kAffine;
  n.in = {x};
  n.W = &W;
  n.b = &b;
  n.val.resize(W.value.rows);
  kernels::matvec_add(W.value.a.data(), b.value.a.data(),
                      nodes_[x].val.data(), n.val.data(), W.value.rows,
                      W.value.cols);
  return push(std::move(n));
}

int Graph::tanh_of(int x) {
  Node n;
  n.op = Op::kTanh;
  n.in = {x};
  n.val.resize(nodes_[x].val.size());
  for (std::size_t i = 0; i < n.val.size(); ++i)
    n.val[i] = std::tanh(nodes_[x].val[i]);
  return push(std::move(n));
}

int Graph::sigmoid_of(int x) {
  Node n;
  n.op = Op::kSigmoid;
  n.in = {x};
  n.val.resize(nodes_[x].val.size());
  for (std::size_t i = 0; i < n.val.size(); ++i)
    n.val[i] = 1.0 / (1.0 + std::exp(-nodes_[x].val[i]));
  return push(std::move(n));
}

int Graph::add(int a, int b) {
  assert(dim(a) == dim(b));
  Node n;
  n.op = Op::kAdd;
  n.in = {a, b};
  n.val.resize(nodes_[a].val.size());
  for (std::size_t i = 0; i < n.val.size(); ++i)
    n.val[i] = nodes_[a].val[i] + nodes_[b].val[i];
  return push(std::move(n));
}

int Graph::cmult(int a, int b) {
  assert(dim(a) == dim(b));
  Node n;
  n.op = Op::kCMult;
  n.in = {a, b};
  n.val.resize(nodes_[a].val.size());
  for (std::size_t i = 0; i < n.val.size(); ++i)
    n.val[i] = nodes_[a].val[i] * nodes_[b].val[i];
  return push(std::move(n));
}

int Graph::slice(int x, int from, int len) {
  assert(from >= 0 && from + len <= dim(x));
  Node n;
  n.op = Op::kSlice;
  n.in = {x};
  n.aux = from;
  n.val.assign(nodes_[x].val.begin() + from,
               nodes_[x].val.begin() + from + len);
  return push(std::move(n));
}

int Graph::max_many(std::span<const int> xs) {
  assert(!xs.empty());
  Node n;
  n.op = Op::kMaxMany;
  n.in.assign(xs.begin(), xs.end());
  const std::size_t d = nodes_[xs[0]].val.size();
  n.val.assign(nodes_[xs[0]].val.begin(), nodes_[xs[0]].val.end());
  n.aux_idx.assign(d, 0);
  for (std::size_t k = 1; k < xs.size(); ++k) {
    const auto& v = nodes_[xs[k]].val;
    assert(v.size() == d);
    for (std::size_t i = 0; i < d; ++i) {
      if (v[i] > n.val[i]) {
        n.val[i] = v[i];
        n.aux_idx[i] = static_cast<int>(k);
      }
    }
  }
  return push(std::move(n));
}

int Graph::dropout(int x, double rate, Rng& rng) {
  assert(rate >= 0.0 && rate < 1.0);
  Node n;
  n.op = Op::kDropout;
  n.in = {x};
  const double keep = 1.0 - rate;
  std::bernoulli_distribution dist(keep);
  n.aux_val.resize(nodes_[x].val.size());
  n.val.resize(nodes_[x].val.size());
  for (std::size_t i = 0; i < n.val.size(); ++i) {
    n.aux_val[i] = dist(rng) ? 1.0 / keep : 0.0;
    n.val[i] = nodes_[x].val[i] * n.aux_val[i];
  }
  return push(std::move(n));
}

int Graph::nll(int logits, int gold) {
  assert(gold >= 0 && gold < dim(logits));
  Node n;
  n.op = Op::kNll;
  n.in = {logits};
  n.aux = gold;
  n.aux_val.resize(nodes_[logits].val.size());
  kernels::softmax(nodes_[logits].val, n.aux_val);
  n.val = {-std::log(std::max(n.aux_val[gold], 1e-12))};
  return push(std::move(n));
}

int Graph::sum_scaled(std::span<const int> xs, double s) {
  Node n;
  n.op = Op::kSumScaled;
  n.in.assign(xs.begin(), xs.end());
  n.scale = s;
  double acc = 0.0;
  for (int x : xs) {
    assert(dim(x) == 1);
    acc += nodes_[x].val[0];
  }
  n.val = {s * acc};
  return push(std::move(n));
}

void Graph::backward(int loss_node) {
  if (dim(loss_node) != 1)
    throw std::logic_error("backward requires a scalar node");
  for (auto& n : nodes_) n.grad.assign(n.val.size(), 0.0);
  nodes_[loss_node].grad[0] = 1.0;

  for (int id = loss_node; id >= 0; --id) {
    Node& n = nodes_[id];
    bool any = false;
    for (double g : n.grad)
      if (g != 0.0) {
        any = true;
        break;
      }
    if (!any) continue;
    switch (n.op) {
      case Op::kInput:
        break;
      case Op::kLookup:
        if (!n.W->frozen) {
          double* g = n.W->grad.row(n.aux);
          for (std::size_t i = 0; i < n.grad.size(); ++i) g[i] += n.grad[i];
        }
        break;
      case Op::kConcat: {
        std::size_t off = 0;
        for (int x : n.in) {
          auto& gx = nodes_[x].grad;
          for (std::size_t i = 0; i < gx.size(); ++i) gx[i] += n.grad[off + i];
          off += gx.size();
        }
        break;
      }
      case Op::kAffine: {
        Node& x = nodes_[n.in[0]];
        kernels::outer_acc(n.grad.data(), x.val.data(), n.W->grad.a.data(),
                           n.W->value.rows, n.W->value.cols);
        for (int i = 0; i < n.b->value.rows; ++i)
          n.b->grad.a[i] += n.grad[i];
        kernels::matvec_t_acc(n.W->value.a.data(), n.grad.data(),
                              x.grad.data(), n.W->value.rows, n.W->value.cols);
        break;
      }
      case Op::kTanh: {
        auto& gx = nodes_[n.in[0]].grad;
        for (std::size_t i = 0; i < gx.size(); ++i)
          gx[i] += n.grad[i] * (1.0 - n.val[i] * n.val[i]);
        break;
      }
      case Op::kSigmoid: {
        auto& gx = nodes_[n.in[0]].grad;
        for (std::size_t i = 0; i < gx.size(); ++i)
          gx[i] += n.grad[i] * n.val[i] * (1.0 - n.val[i]);
        break;
      }
      case Op::kAdd: {
        for (int x : n.in) {
          auto& gx = nodes_[x].grad;
          for (std::size_t i = 0; i < gx.size(); ++i) gx[i] += n.grad[i];
        }
        break;
      }
      case Op::kCMult: {
        auto& ga = nodes_[n.in[0]].grad;
        auto& gb = nodes_[n.in[1]].grad;
        const auto& va = nodes_[n.in[0]].val;
        const auto& vb = nodes_[n.in[1]].val;
        for (std::size_t i = 0; i < ga.size(); ++i) {
          ga[i] += n.grad[i] * vb[i];
          gb[i] += n.grad[i] * va[i];
        }
        break;
      }
      case Op::kSlice: {
        auto& gx = nodes_[n.in[0]].grad;
        for (std::size_t i = 0; i < n.grad.size(); ++i)
          gx[n.aux + i] += n.grad[i];
        break;
      }
      case Op::kMaxMany: {
        for (std::size_t i = 0; i < n.grad.size(); ++i)
          nodes_[n.in[n.aux_idx[i]]].grad[i] += n.grad[i];
        break;
      }
      case Op::kDropout: {
        auto& gx = nodes_[n.in[0]].grad;
        for (std::size_t i = 0; i < gx.size(); ++i)
          gx[i] += n.grad[i] * n.aux_val[i];
        break;
      }
      case Op::kNll: {
        auto& gx = nodes_[n.in[0]].grad;
        const double g = n.grad[0];
        for (std::size_t i = 0; i < gx.size(); ++i) {
          const double onehot = (static_cast<int>(i) == n.aux) ? 1.0 : 0.0;
          gx[i] += g * (n.aux_val[i] - onehot);
        }
        break;
      }
      case Op::kSumScaled: {
        for (int x : n.in) nodes_[x].grad[0] += n.scale * n.grad[0];
        break;
      }
    }
  }
}

}  // namespace relspan::nn
