#pragma once

#include <span>
#include <string>
#include <vector>

#include "relspan/nn/graph.hpp"

namespace relspan::nn {

// Single-direction LSTM cell. Gate weights are packed row-wise as
// [input; forget; output; candidate], each block `hidden` rows, applied to
// the concatenation [x_t; h_prev].
struct LstmCell {
  Param* W = nullptr;  // (4*hidden) x (input_dim + hidden)
  Param* b = nullptr;  // (4*hidden) x 1
  int input_dim = 0;
  int hidden = 0;
};

LstmCell make_lstm_cell(ParamStore& store, const std::string& prefix,
                        int input_dim, int hidden, Rng& rng);

struct BiLstm {
  LstmCell fwd;
  LstmCell bwd;
};

BiLstm make_bilstm(ParamStore& store, const std::string& prefix, int input_dim,
                   int hidden, Rng& rng);

// Hidden states in input order; `reverse` runs right-to-left but still
// returns states aligned with the input positions.
std::vector<int> run_lstm(Graph& g, const LstmCell& cell,
                          std::span<const int> inputs, bool reverse);

// Per-position concat of forward and backward states (2*hidden each).
std::vector<int> run_bilstm(Graph& g, const BiLstm& net,
                            std::span<const int> inputs);

}  // namespace relspan::nn
