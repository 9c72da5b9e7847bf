#pragma once

#include <cstddef>
#include <span>

namespace relspan::kernels {

// Runtime switch for the OpenMP code paths. Both variants accumulate each
// output element in the same order, so serial and parallel results are
// bitwise equal and flipping the switch never changes numeric output.
struct Config {
  bool parallel = true;
  // below this many multiply-adds the parallel dispatch falls back to serial
  std::size_t min_work = 1u << 14;
};

Config& config();

namespace serial {

// y = W * x + b   (W is rows x cols, row-major; b may be null)
void matvec_add(const double* W, const double* b, const double* x, double* y,
                int rows, int cols);

// dx += W^T * dy
void matvec_t_acc(const double* W, const double* dy, double* dx, int rows,
                  int cols);

// dW += dy * x^T
void outer_acc(const double* dy, const double* x, double* dW, int rows,
               int cols);

}  // namespace serial

namespace omp {

void matvec_add(const double* W, const double* b, const double* x, double* y,
                int rows, int cols);
void matvec_t_acc(const double* W, const double* dy, double* dx, int rows,
                  int cols);
void outer_acc(const double* dy, const double* x, double* dW, int rows,
               int cols);

}  // namespace omp

// Dispatching entry points used by the graph layer.
void matvec_add(const double* W, const double* b, const double* x, double* y,
                int rows, int cols);
void matvec_t_acc(const double* W, const double* dy, double* dx, int rows,
                  int cols);
void outer_acc(const double* dy, const double* x, double* dW, int rows,
               int cols);

// Numerically stable softmax; out may alias logits.
void softmax(std::span<const double> logits, std::span<double> out);

// Index of the maximum value; ties resolve to the lowest index.
int argmax(std::span<const double> v);

}  // namespace relspan::kernels
