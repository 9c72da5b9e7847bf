#include "relspan/nn/kernels.hpp"

#include <algorithm>
#include <cmath>

namespace relspan::kernels {

Config& config() {
  static Config cfg;
  return cfg;
}

namespace serial {

void matvec_add(const double* W, const double* b, const double* x, double* y,
                int rows, int cols) {
  for (int i = 0; i < rows; ++i) {
    const double* w = W + static_cast<std::size_t>(i) * cols;
    double acc = b ? b[i] : 0.0;
    for (int j = 0; j < cols; ++j) acc += w[j] * x[j];
    y[i] = acc;
  }
}

void matvec_t_acc(const double* W, const double* dy, double* dx, int rows,
                  int cols) {
  // per-column accumulation runs over i in ascending order in both variants
  for (int j = 0; j < cols; ++j) {
    double acc = 0.0;
    for (int i = 0; i < rows; ++i)
      acc += W[static_cast<std::size_t>(i) * cols + j] * dy[i];
    dx[j] += acc;
  }
}

void outer_acc(const double* dy, const double* x, double* dW, int rows,
               int cols) {
  for (int i = 0; i < rows; ++i) {
    double* w = dW + static_cast<std::size_t>(i) * cols;
    const double d = dy[i];
    for (int j = 0; j < cols; ++j) w[j] += d * x[j];
  }
}

}  // namespace serial

namespace omp {

void matvec_add(const double* W, const double* b, const double* x, double* y,
                int rows, int cols) {
#pragma omp parallel for schedule(static)
  for (int i = 0; i < rows; ++i) {
    const double* w = W + static_cast<std::size_t>(i) * cols;
    double acc = b ? b[i] : 0.0;
    for (int j = 0; j < cols; ++j) acc += w[j] * x[j];
    y[i] = acc;
  }
}

void matvec_t_acc(const double* W, const double* dy, double* dx, int rows,
                  int cols) {
#pragma omp parallel for schedule(static)
  for (int j = 0; j < cols; ++j) {
    double acc = 0.0;
    for (int i = 0; i < rows; ++i)
      acc += W[static_cast<std::size_t>(i) * cols + j] * dy[i];
    dx[j] += acc;
  }
}

void outer_acc(const double* dy, const double* x, double* dW, int rows,
               int cols) {
#pragma omp parallel for schedule(static)
  for (int i = 0; i < rows; ++i) {
    double* w = dW + static_cast<std::size_t>(i) * cols;
    const double d = dy[i];
    for (int j = 0; j < cols; ++j) w[j] += d * x[j];
  }
}

}  // namespace omp

namespace {

inline bool use_parallel(int rows, int cols) {
  const Config& cfg = config();
  return cfg.parallel &&
         static_cast<std::size_t>(rows) * static_cast<std::size_t>(cols) >=
             cfg.min_work;
}

}  // namespace

void matvec_add(const double* W, const double* b, const double* x, double* y,
                int rows, int cols) {
  if (use_parallel(rows, cols))
    omp::matvec_add(W, b, x, y, rows, cols);
  else
    serial::matvec_add(W, b, x, y, rows, cols);
}

void matvec_t_acc(const double* W, const double* dy, double* dx, int rows,
                  int cols) {
  if (use_parallel(rows, cols))
    omp::matvec_t_acc(W, dy, dx, rows, cols);
  else
    serial::matvec_t_acc(W, dy, dx, rows, cols);
}

void outer_acc(const double* dy, const double* x, double* dW, int rows,
               int cols) {
  if (use_parallel(rows, cols))
    omp::outer_acc(dy, x, dW, rows, cols);
  else
    serial::outer_acc(dy, x, dW, rows, cols);
}

void softmax(std::span<const double> logits, std::span<double> out) {
  double mx = logits[0];
  for (double v : logits) mx = std::max(mx, v);
  double sum = 0.0;
  for (std::size_t i = 0; i < logits.size(); ++i) {
    out[i] = std::exp(logits[i] - mx);
    sum += out[i];
  }
  for (std::size_t i = 0; i < out.size(); ++i) out[i] /= sum;
}

int argmax(std::span<const double> v) {
  int best = 0;
  for (int i = 1; i < static_cast<int>(v.size()); ++i)
    if (v[i] > v[best]) best = i;
  return best;
}

}  // namespace relspan::kernels
