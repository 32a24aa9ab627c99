#include "tweetsent/lstm.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <thread>

#include "tweetsent/normalize.hpp"

namespace tweetsent {

namespace {

constexpr double kLossClamp = 1e-7;

// Summation granularity for batch gradients. Partial sums are taken per
// subchunk and then reduced in subchunk order, so results do not depend
// on how many worker threads ran.
constexpr int kGradSubchunk = 16;

Eigen::VectorXd sigmoid_vec(const Eigen::VectorXd& x) {
  return x.unaryExpr([](double v) { return 1.0 / (1.0 + std::exp(-v)); });
}

double apply_act(Activation act, double x) {
  return act == Activation::Relu ? (x > 0.0 ? x : 0.0) : std::tanh(x);
}

Eigen::VectorXd apply_act_vec(Activation act, const Eigen::VectorXd& x) {
  return x.unaryExpr([act](double v) { return apply_act(act, v); });
}

// Derivative of the activation at pre-activation value x.
double act_grad(Activation act, double x) {
  if (act == Activation::Relu) return x > 0.0 ? 1.0 : 0.0;
  const double t = std::tanh(x);
  return 1.0 - t * t;
}

Eigen::VectorXd act_grad_vec(Activation act, const Eigen::VectorXd& x) {
  return x.unaryExpr([act](double v) { return act_grad(act, v); });
}

GateParams zero_gate(int d, int h) {
  return GateParams{Eigen::MatrixXd::Zero(d, h), Eigen::MatrixXd::Zero(h, h),
                    Eigen::VectorXd::Zero(h)};
}

void fill_uniform_rowmajor(Eigen::MatrixXd& m, double limit, Rng& rng) {
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    for (Eigen::Index c = 0; c < m.cols(); ++c) {
      m(r, c) = rng.next_double(-limit, limit);
    }
  }
}

}  // namespace

const char* to_string(Activation a) {
  return a == Activation::Relu ? "relu" : "tanh";
}

std::optional<Activation> activation_from_string(std::string_view s) {
  if (s == "relu") return Activation::Relu;
  if (s == "tanh") return Activation::Tanh;
  return std::nullopt;
}

LstmParams LstmParams::zeros(int input_dim, int hidden_dim) {
  LstmParams p;
  p.input_dim = input_dim;
  p.hidden_dim = hidden_dim;
  p.input_gate = zero_gate(input_dim, hidden_dim);
  p.forget_gate = zero_gate(input_dim, hidden_dim);
  p.output_gate = zero_gate(input_dim, hidden_dim);
  p.candidate = zero_gate(input_dim, hidden_dim);
  p.w_out = Eigen::MatrixXd::Zero(hidden_dim, 3);
  p.b_out = Eigen::VectorXd::Zero(3);
  return p;
}

bool LstmParams::all_finite() const {
  for (const ConstArrayRef& a : param_arrays(*this)) {
    for (std::ptrdiff_t k = 0; k < a.size; ++k) {
      if (!std::isfinite(a.data[k])) return false;
    }
  }
  return true;
}

std::int64_t LstmParams::parameter_count() const {
  std::int64_t n = 0;
  for (const ConstArrayRef& a : param_arrays(*this)) n += a.size;
  return n;
}

std::vector<ArrayRef> param_arrays(LstmParams& p) {
  std::vector<ArrayRef> refs;
  refs.reserve(14);
  for (GateParams* g :
       {&p.input_gate, &p.forget_gate, &p.output_gate, &p.candidate}) {
    refs.push_back({g->w.data(), g->w.size()});
    refs.push_back({g->u.data(), g->u.size()});
    refs.push_back({g->b.data(), g->b.size()});
  }
  refs.push_back({p.w_out.data(), p.w_out.size()});
  refs.push_back({p.b_out.data(), p.b_out.size()});
  return refs;
}

std::vector<ConstArrayRef> param_arrays(const LstmParams& p) {
  std::vector<ConstArrayRef> refs;
  refs.reserve(14);
  for (const GateParams* g :
       {&p.input_gate, &p.forget_gate, &p.output_gate, &p.candidate}) {
    refs.push_back({g->w.data(), g->w.size()});
    refs.push_back({g->u.data(), g->u.size()});
    refs.push_back({g->b.data(), g->b.size()});
  }
  refs.push_back({p.w_out.data(), p.w_out.size()});
  refs.push_back({p.b_out.data(), p.b_out.size()});
  return refs;
}

void add_scaled(LstmParams& dst, const LstmParams& src, double scale) {
  auto d = param_arrays(dst);
  auto s = param_arrays(src);
  for (std::size_t a = 0; a < d.size(); ++a) {
    for (std::ptrdiff_t k = 0; k < d[a].size; ++k) {
      d[a].data[k] += scale * s[a].data[k];
    }
  }
}

void scale_params(LstmParams& p, double scale) {
  for (ArrayRef& a : param_arrays(p)) {
    for (std::ptrdiff_t k = 0; k < a.size; ++k) a.data[k] *= scale;
  }
}

void TrainConfig::validate() const {
  if (epochs < 1) throw std::invalid_argument("epochs must be >= 1");
  if (batch_size < 1) throw std::invalid_argument("batch_size must be >= 1");
  if (!(adam.learning_rate > 0.0))
    throw std::invalid_argument("learning_rate must be > 0");
  if (!(adam.beta1 > 0.0 && adam.beta1 < 1.0))
    throw std::invalid_argument("beta1 must be in (0,1)");
  if (!(adam.beta2 > 0.0 && adam.beta2 < 1.0))
    throw std::invalid_argument("beta2 must be in (0,1)");
  if (!(adam.epsilon > 0.0)) throw std::invalid_argument("epsilon must be > 0");
  if (max_len < 1) throw std::invalid_argument("max_len must be >= 1");
  if (hidden_size < 1) throw std::invalid_argument("hidden_size must be >= 1");
  if (num_threads < 1) throw std::invalid_argument("num_threads must be >= 1");
}

LstmParams init_params(int input_dim, int hidden_dim, Rng& rng) {
  if (input_dim < 1 || hidden_dim < 1) {
    throw std::invalid_argument("init_params: dims must be >= 1");
  }
  LstmParams p = LstmParams::zeros(input_dim, hidden_dim);
  const double limit_w =
      std::sqrt(6.0 / static_cast<double>(input_dim + hidden_dim));
  const double limit_u = std::sqrt(6.0 / static_cast<double>(2 * hidden_dim));
  for (GateParams* g :
       {&p.input_gate, &p.forget_gate, &p.output_gate, &p.candidate}) {
    fill_uniform_rowmajor(g->w, limit_w, rng);
    fill_uniform_rowmajor(g->u, limit_u, rng);
  }
  p.forget_gate.b.setOnes();
  const double limit_head = std::sqrt(6.0 / static_cast<double>(hidden_dim + 3));
  fill_uniform_rowmajor(p.w_out, limit_head, rng);
  return p;
}

LstmParams init_params(int input_dim, int hidden_dim, std::uint64_t seed) {
  Rng rng(seed);
  return init_params(input_dim, hidden_dim, rng);
}

CellOutput cell_step(const LstmParams& params, const Eigen::VectorXd& x,
                     const Eigen::VectorXd& h_prev,
                     const Eigen::VectorXd& c_prev, Activation act) {
  CellOutput out;
  out.i = sigmoid_vec(params.input_gate.w.transpose() * x +
                      params.input_gate.u.transpose() * h_prev +
                      params.input_gate.b);
  out.f = sigmoid_vec(params.forget_gate.w.transpose() * x +
                      params.forget_gate.u.transpose() * h_prev +
                      params.forget_gate.b);
  out.o = sigmoid_vec(params.output_gate.w.transpose() * x +
                      params.output_gate.u.transpose() * h_prev +
                      params.output_gate.b);
  out.candidate_pre = params.candidate.w.transpose() * x +
                      params.candidate.u.transpose() * h_prev +
                      params.candidate.b;
  out.g = apply_act_vec(act, out.candidate_pre);
  out.c = out.f.cwiseProduct(c_prev) + out.i.cwiseProduct(out.g);
  out.h = out.o.cwiseProduct(apply_act_vec(act, out.c));
  return out;
}

ForwardResult lstm_forward(const LstmParams& params, const EmbeddedSequence& seq,
                           Activation act) {
  const int h = params.hidden_dim;
  ForwardResult res;
  res.cache.mask = seq.mask;
  res.cache.act = act;

  Eigen::VectorXd h_state = Eigen::VectorXd::Zero(h);
  Eigen::VectorXd c_state = Eigen::VectorXd::Zero(h);
  for (int t = 0; t < seq.length; ++t) {
    const Eigen::VectorXd x = seq.vectors.row(t).transpose();
    CellOutput step = cell_step(params, x, h_state, c_state, act);
    if (!step.h.allFinite() || !step.c.allFinite()) {
      throw std::runtime_error("lstm_forward: non-finite state at step " +
                               std::to_string(t));
    }
    res.cache.x.push_back(x);
    res.cache.i.push_back(step.i);
    res.cache.f.push_back(step.f);
    res.cache.o.push_back(step.o);
    res.cache.g.push_back(step.g);
    res.cache.candidate_pre.push_back(step.candidate_pre);
    res.cache.c.push_back(step.c);
    res.cache.c_act.push_back(apply_act_vec(act, step.c));
    res.cache.h.push_back(step.h);
    h_state = std::move(step.h);
    c_state = std::move(step.c);
  }
  res.cache.steps = seq.length;
  res.last_hidden = std::move(h_state);
  return res;
}

Prediction predict_from_hidden(const LstmParams& params,
                               const Eigen::VectorXd& last_hidden) {
  const Eigen::Vector3d z = params.w_out.transpose() * last_hidden + params.b_out;
  Prediction pred;
  pred.scores = sigmoid_vec(z);
  int best = 0;
  for (int k = 1; k < 3; ++k) {
    if (pred.scores(k) > pred.scores(best)) best = k;
  }
  pred.label = static_cast<SentimentLabel>(best);
  return pred;
}

Prediction predict(const LstmParams& params, const EmbeddedSequence& seq,
                   Activation act) {
  return predict_from_hidden(params, lstm_forward(params, seq, act).last_hidden);
}

double loss(const Eigen::Vector3d& scores, SentimentLabel target) {
  const double sum = scores.sum();
  const double p = scores(static_cast<int>(target)) / sum;
  return -std::log(std::clamp(p, kLossClamp, 1.0 - kLossClamp));
}

LstmParams backward(const ForwardCache& cache, const LstmParams& params,
                    SentimentLabel target) {
  const int h = params.hidden_dim;
  const int T = cache.steps;
  LstmParams grads = LstmParams::zeros(params.input_dim, h);

  const Eigen::VectorXd zero_h = Eigen::VectorXd::Zero(h);
  const Eigen::VectorXd& h_last = T > 0 ? cache.h[T - 1] : zero_h;

  // Output head: scores s = sigmoid(z), p = s / sum(s),
  // L = -log(clamp(p_target)).
  const Eigen::Vector3d z = params.w_out.transpose() * h_last + params.b_out;
  const Eigen::Vector3d s = sigmoid_vec(z);
  const double sum_s = s.sum();
  const int tgt = static_cast<int>(target);
  const double p_t = s(tgt) / sum_s;

  Eigen::Vector3d dz = Eigen::Vector3d::Zero();
  if (p_t > kLossClamp && p_t < 1.0 - kLossClamp) {
    const double dL_dpt = -1.0 / p_t;
    for (int k = 0; k < 3; ++k) {
      const double dpt_dsk =
          (k == tgt ? 1.0 / sum_s : 0.0) - s(tgt) / (sum_s * sum_s);
      dz(k) = dL_dpt * dpt_dsk * s(k) * (1.0 - s(k));
    }
  }
  grads.b_out = dz;
  grads.w_out = h_last * dz.transpose();

  Eigen::VectorXd dh = params.w_out * dz;
  Eigen::VectorXd dc = Eigen::VectorXd::Zero(h);

  for (int t = T - 1; t >= 0; --t) {
    const Eigen::VectorXd& c_prev = t > 0 ? cache.c[t - 1] : zero_h;
    const Eigen::VectorXd& h_prev = t > 0 ? cache.h[t - 1] : zero_h;
    const Eigen::VectorXd& i = cache.i[t];
    const Eigen::VectorXd& f = cache.f[t];
    const Eigen::VectorXd& o = cache.o[t];
    const Eigen::VectorXd& g = cache.g[t];

    const Eigen::VectorXd d_o = dh.cwiseProduct(cache.c_act[t]);
    const Eigen::VectorXd da_o =
        d_o.cwiseProduct(o).cwiseProduct(Eigen::VectorXd::Ones(h) - o);

    // h = o . phi(c): route the hidden gradient into the cell state.
    dc += dh.cwiseProduct(o).cwiseProduct(
        cache.c[t].unaryExpr([&](double v) { return act_grad(cache.act, v); }));

    const Eigen::VectorXd di = dc.cwiseProduct(g);
    const Eigen::VectorXd da_i =
        di.cwiseProduct(i).cwiseProduct(Eigen::VectorXd::Ones(h) - i);
    const Eigen::VectorXd df = dc.cwiseProduct(c_prev);
    const Eigen::VectorXd da_f =
        df.cwiseProduct(f).cwiseProduct(Eigen::VectorXd::Ones(h) - f);
    const Eigen::VectorXd dg = dc.cwiseProduct(i);
    const Eigen::VectorXd da_c =
        dg.cwiseProduct(act_grad_vec(cache.act, cache.candidate_pre[t]));

    grads.input_gate.w += cache.x[t] * da_i.transpose();
    grads.input_gate.u += h_prev * da_i.transpose();
    grads.input_gate.b += da_i;
    grads.forget_gate.w += cache.x[t] * da_f.transpose();
    grads.forget_gate.u += h_prev * da_f.transpose();
    grads.forget_gate.b += da_f;
    grads.output_gate.w += cache.x[t] * da_o.transpose();
    grads.output_gate.u += h_prev * da_o.transpose();
    grads.output_gate.b += da_o;
    grads.candidate.w += cache.x[t] * da_c.transpose();
    grads.candidate.u += h_prev * da_c.transpose();
    grads.candidate.b += da_c;

    dh = params.input_gate.u * da_i + params.forget_gate.u * da_f +
         params.output_gate.u * da_o + params.candidate.u * da_c;
    dc = dc.cwiseProduct(f);
  }
  return grads;
}

void adam_step(LstmParams& params, const LstmParams& grads, AdamState& state,
               const AdamConfig& config) {
  state.step += 1;
  const double t = static_cast<double>(state.step);
  const double m_corr = 1.0 - std::pow(config.beta1, t);
  const double v_corr = 1.0 - std::pow(config.beta2, t);

  auto p = param_arrays(params);
  auto g = param_arrays(grads);
  auto m = param_arrays(state.m);
  auto v = param_arrays(state.v);
  for (std::size_t a = 0; a < p.size(); ++a) {
    for (std::ptrdiff_t k = 0; k < p[a].size; ++k) {
      const double grad = g[a].data[k];
      double& m_k = m[a].data[k];
      double& v_k = v[a].data[k];
      m_k = config.beta1 * m_k + (1.0 - config.beta1) * grad;
      v_k = config.beta2 * v_k + (1.0 - config.beta2) * grad * grad;
      const double m_hat = m_k / m_corr;
      const double v_hat = v_k / v_corr;
      p[a].data[k] -=
          config.learning_rate * m_hat / (std::sqrt(v_hat) + config.epsilon);
    }
  }
}

AdamState AdamState::zeros_like(const LstmParams& p) {
  AdamState s;
  s.m = LstmParams::zeros(p.input_dim, p.hidden_dim);
  s.v = LstmParams::zeros(p.input_dim, p.hidden_dim);
  s.step = 0;
  return s;
}

namespace {

struct BatchPartial {
  LstmParams grads;
  double loss_sum = 0.0;
  std::int64_t correct = 0;
};

}  // namespace

TrainResult train(const std::vector<LabeledTweet>& examples,
                  const TrainConfig& config, const EmbeddingTable& table) {
  config.validate();
  if (examples.empty()) throw std::invalid_argument("train: empty train set");

  const std::size_t n = examples.size();
  std::vector<TokenSequence> tokens(n);
  for (std::size_t k = 0; k < n; ++k) {
    tokens[k] = tokenize(NormalizedText{examples[k].text});
  }

  Rng rng(config.seed);
  LstmParams params = init_params(table.dim, config.hidden_size, rng);
  AdamState state = AdamState::zeros_like(params);

  std::vector<std::size_t> order(n);
  for (std::size_t k = 0; k < n; ++k) order[k] = k;

  TrainResult result;
  result.history.reserve(static_cast<std::size_t>(config.epochs));

  for (int epoch = 0; epoch < config.epochs; ++epoch) {
    rng.shuffle(order);
    double epoch_loss = 0.0;
    std::int64_t epoch_correct = 0;

    const std::size_t batch_size = static_cast<std::size_t>(config.batch_size);
    for (std::size_t start = 0; start < n; start += batch_size) {
      const std::size_t count = std::min(batch_size, n - start);
      const std::size_t n_sub =
          (count + kGradSubchunk - 1) / kGradSubchunk;
      std::vector<BatchPartial> partials(n_sub);

      auto process_subchunk = [&](std::size_t sub) {
        BatchPartial& part = partials[sub];
        part.grads = LstmParams::zeros(params.input_dim, params.hidden_dim);
        const std::size_t lo = sub * kGradSubchunk;
        const std::size_t hi =
            std::min(lo + static_cast<std::size_t>(kGradSubchunk), count);
        for (std::size_t b = lo; b < hi; ++b) {
          const std::size_t idx = order[start + b];
          const EmbeddedSequence seq =
              embed(tokens[idx], table, config.max_len);
          ForwardResult fwd = lstm_forward(params, seq, config.activation);
          const Prediction pred = predict_from_hidden(params, fwd.last_hidden);
          part.loss_sum += loss(pred.scores, examples[idx].label);
          if (pred.label == examples[idx].label) ++part.correct;
          add_scaled(part.grads, backward(fwd.cache, params, examples[idx].label),
                     1.0);
        }
      };

      const int workers =
          std::min<int>(config.num_threads, static_cast<int>(n_sub));
      if (workers <= 1) {
        for (std::size_t sub = 0; sub < n_sub; ++sub) process_subchunk(sub);
      } else {
        std::atomic<std::size_t> next{0};
        std::vector<std::thread> pool;
        pool.reserve(static_cast<std::size_t>(workers));
        for (int w = 0; w < workers; ++w) {
          pool.emplace_back([&] {
            while (true) {
              const std::size_t sub = next.fetch_add(1);
              if (sub >= n_sub) break;
              process_subchunk(sub);
            }
          });
        }
        for (std::thread& th : pool) th.join();
      }

      // Reduce in subchunk order so the sum is independent of scheduling.
      LstmParams batch_grads =
          LstmParams::zeros(params.input_dim, params.hidden_dim);
      double batch_loss = 0.0;
      for (std::size_t sub = 0; sub < n_sub; ++sub) {
        add_scaled(batch_grads, partials[sub].grads, 1.0);
        batch_loss += partials[sub].loss_sum;
        epoch_correct += partials[sub].correct;
      }
      if (!std::isfinite(batch_loss)) {
        throw std::runtime_error(
            "train: non-finite loss at epoch " + std::to_string(epoch + 1) +
            ", batch " + std::to_string(start / batch_size + 1));
      }
      epoch_loss += batch_loss;

      scale_params(batch_grads, 1.0 / static_cast<double>(count));
      adam_step(params, batch_grads, state, config.adam);
    }

    EpochStats stats;
    stats.mean_loss = epoch_loss / static_cast<double>(n);
    stats.accuracy =
        static_cast<double>(epoch_correct) / static_cast<double>(n);
    result.history.push_back(stats);
  }

  result.params = std::move(params);
  return result;
}

}  // namespace tweetsent
