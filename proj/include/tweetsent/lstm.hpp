#ifndef TWEETSENT_LSTM_HPP
#define TWEETSENT_LSTM_HPP

#include <Eigen/Dense>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "tweetsent/corpus.hpp"
#include "tweetsent/embeddings.hpp"
#include "tweetsent/rng.hpp"

namespace tweetsent {

// Candidate/cell activation. Gates are always sigmoid.
enum class Activation { Relu, Tanh };

const char* to_string(Activation a);
std::optional<Activation> activation_from_string(std::string_view s);

// One gate's weights: pre-activation is w^T x + u^T h_prev + b.
struct GateParams {
  Eigen::MatrixXd w;  // input_dim x hidden_dim
  Eigen::MatrixXd u;  // hidden_dim x hidden_dim
  Eigen::VectorXd b;  // hidden_dim
};

// All trainable weights of the single-layer LSTM plus the dense output
// head. The same structure doubles as the gradient container and as the
// Adam moment accumulators.
struct LstmParams {
  int input_dim = 0;
  int hidden_dim = 0;
  GateParams input_gate, forget_gate, output_gate, candidate;
  Eigen::MatrixXd w_out;  // hidden_dim x 3
  Eigen::VectorXd b_out;  // 3

  static LstmParams zeros(int input_dim, int hidden_dim);
  bool all_finite() const;
  std::int64_t parameter_count() const;
};

struct ArrayRef {
  double* data;
  std::ptrdiff_t size;
};
struct ConstArrayRef {
  const double* data;
  std::ptrdiff_t size;
};

// The 14 parameter arrays in fixed order:
// W_i,U_i,b_i, W_f,U_f,b_f, W_o,U_o,b_o, W_c,U_c,b_c, W_y,b_y.
// This order is shared by Adam updates, initialization draws, and the
// checkpoint layout.
std::vector<ArrayRef> param_arrays(LstmParams& p);
std::vector<ConstArrayRef> param_arrays(const LstmParams& p);

// dst += scale * src, array by array.
void add_scaled(LstmParams& dst, const LstmParams& src, double scale);

// p *= scale, elementwise.
void scale_params(LstmParams& p, double scale);

struct AdamConfig {
  double learning_rate = 0.001;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double epsilon = 1e-8;
};

struct AdamState {
  LstmParams m;  // first moments
  LstmParams v;  // second moments
  std::int64_t step = 0;

  static AdamState zeros_like(const LstmParams& p);
};

struct TrainConfig {
  int epochs = 50;
  int batch_size = 256;
  AdamConfig adam;
  std::uint64_t seed = 0;
  int max_len = 64;
  int hidden_size = 100;
  Activation activation = Activation::Relu;
  int num_threads = 1;

  void validate() const;  // throws std::invalid_argument
};

// Glorot-uniform weights (+-sqrt(6/(fan_in+fan_out))), zero biases except
// the forget-gate bias, which is 1. Draws come from `rng` in the fixed
// array order above, row-major within each array.
LstmParams init_params(int input_dim, int hidden_dim, Rng& rng);
LstmParams init_params(int input_dim, int hidden_dim, std::uint64_t seed);

struct CellOutput {
  Eigen::VectorXd h, c;                      // new hidden / cell state
  Eigen::VectorXd i, f, o, g;                // gate values (post-activation)
  Eigen::VectorXd candidate_pre;             // pre-activation of g
};

// i = sigmoid(W_i^T x + U_i^T h_prev + b_i), same for f and o;
// g = phi(W_c^T x + U_c^T h_prev + b_c);
// c = f . c_prev + i . g;  h = o . phi(c).
CellOutput cell_step(const LstmParams& params, const Eigen::VectorXd& x,
                     const Eigen::VectorXd& h_prev,
                     const Eigen::VectorXd& c_prev, Activation act);

// Everything the backward pass needs, one entry per real (true-mask) step.
struct ForwardCache {
  std::vector<Eigen::VectorXd> x, i, f, o, g, candidate_pre, c, c_act, h;
  std::vector<std::uint8_t> mask;
  Activation act = Activation::Relu;
  int steps = 0;
};

struct ForwardResult {
  Eigen::VectorXd last_hidden;
  ForwardCache cache;
};

// Iterates cell_step over the true-mask prefix from zero initial state;
// padding steps pass state through unchanged. All-false mask gives the
// zero vector. Throws if any intermediate goes non-finite.
ForwardResult lstm_forward(const LstmParams& params, const EmbeddedSequence& seq,
                           Activation act);

struct Prediction {
  Eigen::Vector3d scores;  // sigmoid outputs, order Positive/Negative/Neutral
  SentimentLabel label;    // argmax, ties to the lowest index
};

Prediction predict(const LstmParams& params, const EmbeddedSequence& seq,
                   Activation act);
Prediction predict_from_hidden(const LstmParams& params,
                               const Eigen::VectorXd& last_hidden);

// Categorical cross-entropy over the sigmoid scores normalized to sum 1:
// L = -log(clamp(p_target, 1e-7, 1 - 1e-7)).
double loss(const Eigen::Vector3d& scores, SentimentLabel target);

// Exact gradients of loss() w.r.t. every parameter, by backpropagation
// through time over the cached steps.
LstmParams backward(const ForwardCache& cache, const LstmParams& params,
                    SentimentLabel target);

// Bias-corrected Adam update; increments state.step.
void adam_step(LstmParams& params, const LstmParams& grads, AdamState& state,
               const AdamConfig& config);

struct EpochStats {
  double mean_loss = 0.0;
  double accuracy = 0.0;
};

struct TrainResult {
  LstmParams params;
  std::vector<EpochStats> history;  // one entry per epoch
};

// Mini-batch training loop. Deterministic given config.seed, including
// with num_threads > 1: per-example gradients are summed in a fixed
// subchunk order that does not depend on the worker count. Tweet text is
// assumed to be normalized already; tokens beyond config.max_len are
// dropped.
TrainResult train(const std::vector<LabeledTweet>& examples,
                  const TrainConfig& config, const EmbeddingTable& table);

class CheckpointError : public std::runtime_error {
 public:
  enum class Kind { BadMagic, BadVersion, Truncated, BadShape, Io };

  CheckpointError(Kind kind, const std::string& msg)
      : std::runtime_error(msg), kind_(kind) {}
  Kind kind() const { return kind_; }

 private:
  Kind kind_;
};

// Binary checkpoint: "LSTM" magic, format version, dims, then the
// parameter arrays row-major as 64-bit little-endian IEEE-754, then a
// length-prefixed UTF-8 metadata blob. load(save(x)) is bit-identical.
void save_checkpoint(const std::string& path, const LstmParams& params,
                     const std::string& meta);

struct Checkpoint {
  LstmParams params;
  std::string meta;
};

Checkpoint load_checkpoint(const std::string& path);

}  // namespace tweetsent

#endif  // TWEETSENT_LSTM_HPP
