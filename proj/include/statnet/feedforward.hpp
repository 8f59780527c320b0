#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "statnet/activation.hpp"
#include "statnet/dynamics.hpp"
#include "statnet/spin.hpp"

namespace statnet {

/// One layer u = W [v_prev; 1], v = act(u). The last column of W is the
/// bias, applied to an always-one input unit. The trailing `linear_units`
/// outputs skip the activation and pass u through unchanged.
class Layer {
 public:
  /// activation: "identity", "tanh", "logistic" or "softmax".
  Layer(Matrix weights, std::string activation, double gain = 1.0, std::size_t linear_units = 0,
        std::optional<int> shared_group = std::nullopt);

  const Matrix& weights() const { return weights_; }
  Matrix& weights() { return weights_; }
  const std::string& activation() const { return activation_; }
  double gain() const { return gain_; }
  std::size_t linear_units() const { return linear_units_; }
  const std::optional<int>& shared_group() const { return shared_group_; }
  void set_shared_group(std::optional<int> g) { shared_group_ = g; }

  std::size_t inputs() const { return static_cast<std::size_t>(weights_.cols()) - 1; }
  std::size_t outputs() const { return static_cast<std::size_t>(weights_.rows()); }

  Vector activate(const Vector& u) const;
  /// dE/du given u, v = activate(u) and dE/dv.
  Vector backward(const Vector& u, const Vector& v, const Vector& grad_v) const;

 private:
  Matrix weights_;
  std::string activation_;
  double gain_;
  std::size_t linear_units_;
  std::optional<int> shared_group_;
  std::optional<ActivationFunction> elementwise_;  // unset for softmax
};

/// Activations of every layer for one input.
struct ForwardTrace {
  std::vector<Vector> u;  // u[l-1] is the net input of layer l, l = 1..L
  std::vector<Vector> v;  // v[l] is layer l's output with a trailing 1; v[0] is the input

  Vector output() const { return v.back().head(v.back().size() - 1); }
};

/// Per-layer error signals and free-weight gradients for one pattern.
struct BackpropState {
  std::vector<Vector> deltas;  // dE_p/du for layers 1..L
  std::vector<Matrix> grads;   // dE_p/dW = delta [v_prev; 1]^T
  double loss = 0.0;           // E_p
};

struct TrainingBatch {
  std::vector<Vector> inputs;
  std::vector<Vector> targets;

  std::size_t size() const { return inputs.size(); }
};

enum class BatchMode { full_batch, stochastic };

struct TrainingConfig {
  double eta = 0.1;
  double lambda = 0.0;
  BatchMode batch_mode = BatchMode::full_batch;
  std::size_t epochs = 100;
  std::uint64_t seed = 0;

  void validate() const;
};

class LayeredNetwork {
 public:
  /// `readout` is the number of leading outputs scored by the loss; zero
  /// means all of them.
  explicit LayeredNetwork(std::vector<Layer> layers, std::size_t readout = 0);

  /// widths = {J_0, ..., J_L}; one activation name per layer. Weights are
  /// uniform in [-1/sqrt(J_{l-1}), 1/sqrt(J_{l-1})].
  static LayeredNetwork random(const std::vector<std::size_t>& widths,
                               const std::vector<std::string>& activations, std::uint64_t seed,
                               double gain = 1.0);

  const std::vector<Layer>& layers() const { return layers_; }
  std::size_t depth() const { return layers_.size(); }
  std::size_t input_width() const { return layers_.front().inputs(); }
  std::size_t output_width() const { return layers_.back().outputs(); }
  std::size_t readout_width() const { return readout_; }

  /// Sets one weight entry in `layer` and in every layer sharing its group.
  LayeredNetwork with_parameter(std::size_t layer, Eigen::Index row, Eigen::Index col,
                                double value) const;
  /// Same weights with every shared-group tag removed.
  LayeredNetwork unshared() const;

  /// Index of the first layer of each distinct parameter matrix.
  std::vector<std::size_t> parameter_owners() const;
  /// Indices of the layers sharing layer l's parameters (just {l} if unshared).
  std::vector<std::size_t> group_members(std::size_t l) const;

 private:
  friend LayeredNetwork apply_update(const LayeredNetwork&, const std::vector<Matrix>&,
                                     const TrainingConfig&);
  void validate() const;

  std::vector<Layer> layers_;
  std::size_t readout_;
};

ForwardTrace forward(const LayeredNetwork& net, const Vector& x);

/// E = sum_p 1/2 |v_L - y|^2 + lambda/2 sum of squared parameters, where a
/// shared parameter matrix is counted once.
double loss(const LayeredNetwork& net, const TrainingBatch& batch, double lambda = 0.0);

/// Generalized delta rule for one pattern:
///   delta_L = act_L'(u_L)^T (v_L - y)
///   delta_{l-1} = act_{l-1}'(u_{l-1})^T (W_l without its bias column)^T delta_l
///   grad_l = delta_l [v_{l-1}; 1]^T
BackpropState backprop(const LayeredNetwork& net, const Vector& x, const Vector& y);

/// Free-weight gradients summed over patterns in ascending order.
std::vector<Matrix> batch_gradient(const LayeredNetwork& net, const TrainingBatch& batch);

/// Gradient per layer with respect to that layer's parameter matrix: for a
/// shared group every member receives the sum of the members' free-weight
/// gradients.
std::vector<Matrix> parameter_gradients(const LayeredNetwork& net, const std::vector<Matrix>& grads);

/// W <- W - eta G - eta lambda W, where G is the parameter gradient.
LayeredNetwork apply_update(const LayeredNetwork& net, const std::vector<Matrix>& grads,
                            const TrainingConfig& cfg);

struct TrainingResult {
  LayeredNetwork net;
  std::vector<double> epoch_loss;  // regularized loss after each epoch
};

/// Gradient descent. Full batch takes one step per epoch on the summed
/// gradient; stochastic takes one step per pattern in an order reshuffled
/// every epoch from the seed.
TrainingResult train(const LayeredNetwork& net, const TrainingBatch& batch, const TrainingConfig& cfg,
                     const std::function<void(std::size_t, double)>& on_epoch = {});

/// K-layer shared-weight network whose forward pass performs K Euler steps
/// of the analog dynamics. With dt == tau each layer is [T | h] with
/// activation g. Otherwise each layer carries n extra linear units holding
/// u, with weights [r T | 1 - r | r h] for both halves, r = dt/tau.
LayeredNetwork unroll(const ConnectionMatrix& t, const FieldVector& h, const ActivationFunction& g,
                      const IntegratorConfig& cfg, std::size_t k);

/// Input vector for an unrolled network: v, or [v; u] with auxiliary units.
Vector unroll_input(const LayeredNetwork& unrolled, const NeuronState& state);

void validate_batch(const LayeredNetwork& net, const TrainingBatch& batch);

}  // namespace statnet
