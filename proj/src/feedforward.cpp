#include "statnet/feedforward.hpp"

#include <cmath>
#include <map>
#include <random>
#include <stdexcept>

#include "statnet/meanfield.hpp"

namespace statnet {

Layer::Layer(Matrix weights, std::string activation, double gain, std::size_t linear_units,
             std::optional<int> shared_group)
    : weights_(std::move(weights)),
      activation_(std::move(activation)),
      gain_(gain),
      linear_units_(linear_units),
      shared_group_(shared_group) {
  if (weights_.rows() == 0 || weights_.cols() < 1) {
    throw std::invalid_argument("Layer: weight matrix needs at least one row and a bias column");
  }
  if (!weights_.allFinite()) throw std::invalid_argument("Layer: non-finite weight");
  if (linear_units_ > outputs()) throw std::invalid_argument("Layer: more linear units than outputs");
  if (activation_ != "softmax") {
    elementwise_ = activation_by_name(activation_, gain_);
  } else {
    InverseTemperature check(gain_);
    (void)check;
  }
}

Vector Layer::activate(const Vector& u) const {
  const Eigen::Index head = u.size() - static_cast<Eigen::Index>(linear_units_);
  Vector v = u;
  if (elementwise_) {
    for (Eigen::Index i = 0; i < head; ++i) v(i) = elementwise_->g(u(i));
  } else if (head > 0) {
    v.head(head) = softmax_activation(u.head(head), InverseTemperature(gain_));
  }
  return v;
}

Vector Layer::backward(const Vector& u, const Vector& v, const Vector& grad_v) const {
  const Eigen::Index head = u.size() - static_cast<Eigen::Index>(linear_units_);
  Vector delta = grad_v;
  if (elementwise_) {
    for (Eigen::Index i = 0; i < head; ++i) delta(i) = elementwise_->g_prime(u(i)) * grad_v(i);
  } else if (head > 0) {
    // Softmax Jacobian gain * (diag(v) - v v^T) is symmetric.
    const auto vh = v.head(head);
    const auto gh = grad_v.head(head);
    delta.head(head) = gain_ * (vh.cwiseProduct(gh) - vh * vh.dot(gh));
  }
  return delta;
}

void TrainingConfig::validate() const {
  if (!(eta > 0.0) || !std::isfinite(eta)) throw std::invalid_argument("TrainingConfig: eta must be positive");
  if (!(lambda >= 0.0) || !std::isfinite(lambda)) {
    throw std::invalid_argument("TrainingConfig: lambda must be nonnegative");
  }
  if (epochs < 1) throw std::invalid_argument("TrainingConfig: epochs must be >= 1");
}

LayeredNetwork::LayeredNetwork(std::vector<Layer> layers, std::size_t readout)
    : layers_(std::move(layers)), readout_(readout) {
  if (layers_.empty()) throw std::invalid_argument("LayeredNetwork: no layers");
  if (readout_ == 0) readout_ = layers_.back().outputs();
  validate();
}

void LayeredNetwork::validate() const {
  for (std::size_t l = 1; l < layers_.size(); ++l) {
    if (layers_[l].inputs() != layers_[l - 1].outputs()) {
      throw std::invalid_argument("LayeredNetwork: layer " + std::to_string(l + 1) + " expects " +
                                  std::to_string(layers_[l].inputs()) + " inputs but layer " +
                                  std::to_string(l) + " has " + std::to_string(layers_[l - 1].outputs()) +
                                  " outputs");
    }
  }
  if (readout_ > output_width()) throw std::invalid_argument("LayeredNetwork: readout exceeds output width");
  std::map<int, std::size_t> first;
  for (std::size_t l = 0; l < layers_.size(); ++l) {
    const auto& g = layers_[l].shared_group();
    if (!g) continue;
    auto [it, inserted] = first.emplace(*g, l);
    if (inserted) continue;
    const Matrix& a = layers_[it->second].weights();
    const Matrix& b = layers_[l].weights();
    if (a.rows() != b.rows() || a.cols() != b.cols()) {
      throw std::invalid_argument("LayeredNetwork: shared group " + std::to_string(*g) +
                                  " has layers of different shapes");
    }
    if (a != b) {
      throw std::invalid_argument("LayeredNetwork: shared group " + std::to_string(*g) +
                                  " has layers with different weights");
    }
  }
}

LayeredNetwork LayeredNetwork::random(const std::vector<std::size_t>& widths,
                                      const std::vector<std::string>& activations, std::uint64_t seed,
                                      double gain) {
  if (widths.size() < 2) throw std::invalid_argument("LayeredNetwork::random: need at least two widths");
  if (activations.size() != widths.size() - 1) {
    throw std::invalid_argument("LayeredNetwork::random: one activation per layer required");
  }
  std::mt19937_64 rng(seed);
  std::vector<Layer> layers;
  for (std::size_t l = 1; l < widths.size(); ++l) {
    if (widths[l] == 0 || widths[l - 1] == 0) throw std::invalid_argument("LayeredNetwork::random: zero width");
    const double bound = 1.0 / std::sqrt(static_cast<double>(widths[l - 1]));
    std::uniform_real_distribution<double> dist(-bound, bound);
    Matrix w(static_cast<Eigen::Index>(widths[l]), static_cast<Eigen::Index>(widths[l - 1] + 1));
    for (Eigen::Index r = 0; r < w.rows(); ++r) {
      for (Eigen::Index c = 0; c < w.cols(); ++c) w(r, c) = dist(rng);
    }
    layers.emplace_back(std::move(w), activations[l - 1], gain);
  }
  return LayeredNetwork(std::move(layers));
}

std::vector<std::size_t> LayeredNetwork::group_members(std::size_t l) const {
  const auto& g = layers_.at(l).shared_group();
  if (!g) return {l};
  std::vector<std::size_t> out;
  for (std::size_t k = 0; k < layers_.size(); ++k) {
    if (layers_[k].shared_group() == g) out.push_back(k);
  }
  return out;
}

std::vector<std::size_t> LayeredNetwork::parameter_owners() const {
  std::vector<std::size_t> owners;
  for (std::size_t l = 0; l < layers_.size(); ++l) {
    if (group_members(l).front() == l) owners.push_back(l);
  }
  return owners;
}

LayeredNetwork LayeredNetwork::with_parameter(std::size_t layer, Eigen::Index row, Eigen::Index col,
                                              double value) const {
  LayeredNetwork out = *this;
  for (std::size_t k : group_members(layer)) out.layers_[k].weights()(row, col) = value;
  return out;
}

LayeredNetwork LayeredNetwork::unshared() const {
  LayeredNetwork out = *this;
  for (auto& l : out.layers_) l.set_shared_group(std::nullopt);
  return out;
}

namespace {

Vector with_bias(const Vector& v) {
  Vector out(v.size() + 1);
  out.head(v.size()) = v;
  out(v.size()) = 1.0;
  return out;
}

}  // namespace

ForwardTrace forward(const LayeredNetwork& net, const Vector& x) {
  if (static_cast<std::size_t>(x.size()) != net.input_width()) {
    throw std::invalid_argument("forward: input has width " + std::to_string(x.size()) + ", network expects " +
                                std::to_string(net.input_width()));
  }
  ForwardTrace trace;
  trace.v.push_back(with_bias(x));
  for (const Layer& layer : net.layers()) {
    Vector u = layer.weights() * trace.v.back();
    trace.v.push_back(with_bias(layer.activate(u)));
    trace.u.push_back(std::move(u));
  }
  return trace;
}

BackpropState backprop(const LayeredNetwork& net, const Vector& x, const Vector& y) {
  const std::size_t readout = net.readout_width();
  if (static_cast<std::size_t>(y.size()) != readout) {
    throw std::invalid_argument("backprop: target has width " + std::to_string(y.size()) + ", expected " +
                                std::to_string(readout));
  }
  const ForwardTrace trace = forward(net, x);
  const auto& layers = net.layers();
  const std::size_t depth = layers.size();

  Vector out = trace.output();
  Vector grad_v = Vector::Zero(out.size());
  const auto r = static_cast<Eigen::Index>(readout);
  grad_v.head(r) = out.head(r) - y;

  BackpropState st;
  st.loss = 0.5 * grad_v.squaredNorm();
  st.deltas.resize(depth);
  st.grads.resize(depth);
  for (std::size_t l = depth; l-- > 0;) {
    const Layer& layer = layers[l];
    const Vector& u = trace.u[l];
    const Vector v = trace.v[l + 1].head(u.size());
    st.deltas[l] = layer.backward(u, v, grad_v);
    st.grads[l] = st.deltas[l] * trace.v[l].transpose();
    if (l > 0) {
      const auto in = static_cast<Eigen::Index>(layer.inputs());
      grad_v = layer.weights().leftCols(in).transpose() * st.deltas[l];
    }
  }
  return st;
}

void validate_batch(const LayeredNetwork& net, const TrainingBatch& batch) {
  if (batch.inputs.empty()) throw std::invalid_argument("training batch is empty");
  if (batch.inputs.size() != batch.targets.size()) {
    throw std::invalid_argument("training batch has mismatched input and target counts");
  }
  for (std::size_t p = 0; p < batch.size(); ++p) {
    if (static_cast<std::size_t>(batch.inputs[p].size()) != net.input_width() ||
        static_cast<std::size_t>(batch.targets[p].size()) != net.readout_width()) {
      throw std::invalid_argument("training pattern " + std::to_string(p) + " has the wrong width");
    }
  }
}

double loss(const LayeredNetwork& net, const TrainingBatch& batch, double lambda) {
  validate_batch(net, batch);
  const auto r = static_cast<Eigen::Index>(net.readout_width());
  double data = 0.0;
  for (std::size_t p = 0; p < batch.size(); ++p) {
    const Vector out = forward(net, batch.inputs[p]).output();
    data += 0.5 * (out.head(r) - batch.targets[p]).squaredNorm();
  }
  if (lambda == 0.0) return data;
  double reg = 0.0;
  for (std::size_t l : net.parameter_owners()) reg += net.layers()[l].weights().squaredNorm();
  return data + 0.5 * lambda * reg;
}

std::vector<Matrix> batch_gradient(const LayeredNetwork& net, const TrainingBatch& batch) {
  validate_batch(net, batch);
  std::vector<Matrix> sum;
  for (std::size_t p = 0; p < batch.size(); ++p) {
    BackpropState st = backprop(net, batch.inputs[p], batch.targets[p]);
    if (sum.empty()) {
      sum = std::move(st.grads);
    } else {
      for (std::size_t l = 0; l < sum.size(); ++l) sum[l] += st.grads[l];
    }
  }
  return sum;
}

std::vector<Matrix> parameter_gradients(const LayeredNetwork& net, const std::vector<Matrix>& grads) {
  if (grads.size() != net.depth()) throw std::invalid_argument("parameter_gradients: one gradient per layer");
  std::vector<Matrix> out(grads.size());
  for (std::size_t l = 0; l < grads.size(); ++l) {
    const auto members = net.group_members(l);
    out[l] = grads[members.front()];
    for (std::size_t k = 1; k < members.size(); ++k) out[l] += grads[members[k]];
  }
  return out;
}

LayeredNetwork apply_update(const LayeredNetwork& net, const std::vector<Matrix>& grads,
                            const TrainingConfig& cfg) {
  cfg.validate();
  for (std::size_t l = 0; l < grads.size() && l < net.depth(); ++l) {
    const Matrix& w = net.layers()[l].weights();
    if (grads[l].rows() != w.rows() || grads[l].cols() != w.cols()) {
      throw std::invalid_argument("apply_update: gradient shape mismatch at layer " + std::to_string(l));
    }
  }
  const std::vector<Matrix> g = parameter_gradients(net, grads);
  LayeredNetwork out = net;
  for (std::size_t l = 0; l < net.depth(); ++l) {
    const Matrix& w = net.layers()[l].weights();
    out.layers_[l].weights() = w - cfg.eta * g[l] - (cfg.eta * cfg.lambda) * w;
  }
  return out;
}

TrainingResult train(const LayeredNetwork& net, const TrainingBatch& batch, const TrainingConfig& cfg,
                     const std::function<void(std::size_t, double)>& on_epoch) {
  cfg.validate();
  validate_batch(net, batch);
  TrainingResult res{net, {}};
  std::mt19937_64 rng(cfg.seed);
  std::vector<std::size_t> order(batch.size());
  for (std::size_t p = 0; p < order.size(); ++p) order[p] = p;

  for (std::size_t epoch = 1; epoch <= cfg.epochs; ++epoch) {
    if (cfg.batch_mode == BatchMode::full_batch) {
      res.net = apply_update(res.net, batch_gradient(res.net, batch), cfg);
    } else {
      for (std::size_t k = order.size(); k > 1; --k) {
        std::uniform_int_distribution<std::size_t> pick(0, k - 1);
        std::swap(order[k - 1], order[pick(rng)]);
      }
      for (std::size_t p : order) {
        const BackpropState st = backprop(res.net, batch.inputs[p], batch.targets[p]);
        res.net = apply_update(res.net, st.grads, cfg);
      }
    }
    const double e = loss(res.net, batch, cfg.lambda);
    if (!std::isfinite(e)) throw NumericalError("train: loss became non-finite", epoch);
    res.epoch_loss.push_back(e);
    if (on_epoch) on_epoch(epoch, e);
  }
  return res;
}

LayeredNetwork unroll(const ConnectionMatrix& t, const FieldVector& h, const ActivationFunction& g,
                      const IntegratorConfig& cfg, std::size_t k) {
  const std::size_t n = t.size();
  check_field(h, n);
  cfg.validate(n);
  if (k < 1) throw std::invalid_argument("unroll: need at least one step");
  const auto dim = static_cast<Eigen::Index>(n);
  const Vector r = (cfg.dt / cfg.tau.array()).matrix();
  const bool plain = (r.array() == 1.0).all();

  Matrix w;
  std::size_t linear = 0;
  if (plain) {
    w.resize(dim, dim + 1);
    w.leftCols(dim) = t.matrix();
    w.col(dim) = h;
  } else {
    Matrix block(dim, 2 * dim + 1);
    block.leftCols(dim) = r.asDiagonal() * t.matrix();
    block.middleCols(dim, dim) = (1.0 - r.array()).matrix().asDiagonal();
    block.col(2 * dim) = r.cwiseProduct(h);
    w.resize(2 * dim, 2 * dim + 1);
    w.topRows(dim) = block;
    w.bottomRows(dim) = block;
    linear = n;
  }
  std::vector<Layer> layers;
  for (std::size_t i = 0; i < k; ++i) layers.emplace_back(w, g.name, g.gain, linear, 0);
  return LayeredNetwork(std::move(layers), n);
}

Vector unroll_input(const LayeredNetwork& unrolled, const NeuronState& state) {
  const auto n = state.v.size();
  if (static_cast<std::size_t>(n) == unrolled.input_width()) return state.v;
  if (static_cast<std::size_t>(2 * n) != unrolled.input_width()) {
    throw std::invalid_argument("unroll_input: state width does not match the network");
  }
  Vector x(2 * n);
  x.head(n) = state.v;
  x.tail(n) = state.u;
  return x;
}

}  // namespace statnet
