#include "relspan/nn/lstm.hpp"

namespace relspan::nn {

LstmCell make_lstm_cell(ParamStore& store, const std::string& prefix,
                        int input_dim, int hidden, Rng& rng) {
  LstmCell cell;
  cell.input_dim = input_dim;
  cell.hidden = hidden;
  cell.W = store.add(prefix + "/W", 4 * hidden, input_dim + hidden);
  cell.b = store.add(prefix + "/b", 4 * hidden, 1);
  init_glorot(*cell.W, rng);
  cell.b->value.zero();
  // forget-gate bias starts at 1
  for (int i = hidden; i < 2 * hidden; ++i) cell.b->value.a[i] = 1.0;
  return cell;
}

BiLstm make_bilstm(ParamStore& store, const std::string& prefix, int input_dim,
                   int hidden, Rng& rng) {
  BiLstm net;
  net.fwd = make_lstm_cell(store, prefix + "/fwd", input_dim, hidden, rng);
  net.bwd = make_lstm_cell(store, prefix + "/bwd", input_dim, hidden, rng);
  return net;
}

std::vector<int> run_lstm(Graph& g, const LstmCell& cell,
                          std::span<const int> inputs, bool reverse) {
  const int n = static_cast<int>(inputs.size());
  const int H = cell.hidden;
  std::vector<int> states(n);
  int h = g.zeros(H);
  int c = g.zeros(H);
  for (int step = 0; step < n; ++step) {
    const int t = reverse ? n - 1 - step : step;
    const int z = g.affine(*cell.W, *cell.b, g.concat2(inputs[t], h));
    const int gi = g.sigmoid_of(g.slice(z, 0, H));
    const int gf = g.sigmoid_of(g.slice(z, H, H));
    const int go = g.sigmoid_of(g.slice(z, 2 * H, H));
    const int gc = g.tanh_of(g.slice(z, 3 * H, H));
    c = g.add(g.cmult(gf, c), g.cmult(gi, gc));
    h = g.cmult(go, g.tanh_of(c));
    states[t] = h;
  }
  return states;
}

std::vector<int> run_bilstm(Graph& g, const BiLstm& net,
                            std::span<const int> inputs) {
  const std::vector<int> f = run_lstm(g, net.fwd, inputs, false);
  const std::vector<int> b = run_lstm(g, net.bwd, inputs, true);
  std::vector<int> out(inputs.size());
  for (std::size_t i = 0; i < inputs.size(); ++i)
    out[i] = g.concat2(f[i], b[i]);
  return out;
}

}  // namespace relspan::nn
