#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <istream>
#include <ostream>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "adhocnet/errors.hpp"
#include "adhocnet/rng.hpp"

namespace adhocnet {

// Row-major dense matrix; vectors are stored as rows x 1.
struct Tensor {
  std::size_t rows = 0;
  std::size_t cols = 0;
  std::vector<double> data;

  Tensor() = default;
  Tensor(std::size_t r, std::size_t c, double fill = 0.0) : rows(r), cols(c), data(r * c, fill) {}

  double& operator()(std::size_t r, std::size_t c) { return data[r * cols + c]; }
  double operator()(std::size_t r, std::size_t c) const { return data[r * cols + c]; }
  double& operator[](std::size_t i) { return data[i]; }
  double operator[](std::size_t i) const { return data[i]; }
  std::size_t size() const { return data.size(); }

  bool operator==(const Tensor&) const = default;
};

// Two weight layers: in -> hidden (ReLU) -> out (linear), one output per action.
struct QNetParams {
  Tensor w1;  // hidden x in
  Tensor b1;  // hidden x 1
  Tensor w2;  // out x hidden
  Tensor b2;  // out x 1

  static QNetParams zeros(std::size_t in, std::size_t hidden, std::size_t out) {
    return {Tensor(hidden, in), Tensor(hidden, 1), Tensor(out, hidden), Tensor(out, 1)};
  }

  std::size_t inputs() const { return w1.cols; }
  std::size_t hidden() const { return w1.rows; }
  std::size_t outputs() const { return w2.rows; }

  template <typename Self, typename Fn>
  static void for_each(Self& self, Fn&& fn) {
    fn("w1", self.w1);
    fn("b1", self.b1);
    fn("w2", self.w2);
    fn("b2", self.b2);
  }

  bool all_finite() const {
    bool ok = true;
    for_each(*this, [&](const char*, const Tensor& t) {
      for (double v : t.data) ok = ok && std::isfinite(v);
    });
    return ok;
  }

  bool operator==(const QNetParams&) const = default;
};

// Glorot-uniform weights, zero biases.
inline QNetParams init_params(RandomStream& rng, std::size_t in = 1, std::size_t hidden = 32,
                              std::size_t out = 21) {
  QNetParams p = QNetParams::zeros(in, hidden, out);
  const double l1 = std::sqrt(6.0 / static_cast<double>(in + hidden));
  const double l2 = std::sqrt(6.0 / static_cast<double>(hidden + out));
  for (double& w : p.w1.data) w = uniform(rng, -l1, l1);
  for (double& w : p.w2.data) w = uniform(rng, -l2, l2);
  return p;
}

struct ForwardCache {
  std::vector<double> pre;     // hidden pre-activations
  std::vector<double> hidden;  // relu(pre)
  std::vector<double> q;
};

inline ForwardCache forward_cached(const QNetParams& p, std::span<const double> input) {
  ForwardCache c;
  const std::size_t nh = p.hidden();
  const std::size_t no = p.outputs();
  c.pre.assign(nh, 0.0);
  c.hidden.assign(nh, 0.0);
  for (std::size_t j = 0; j < nh; ++j) {
    double z = p.b1[j];
    for (std::size_t k = 0; k < p.inputs(); ++k) z += p.w1(j, k) * input[k];
    c.pre[j] = z;
    c.hidden[j] = z > 0.0 ? z : 0.0;
  }
  c.q.assign(no, 0.0);
  for (std::size_t a = 0; a < no; ++a) {
    double q = p.b2[a];
    for (std::size_t j = 0; j < nh; ++j) q += p.w2(a, j) * c.hidden[j];
    c.q[a] = q;
  }
  return c;
}

inline std::vector<double> forward(const QNetParams& p, double scaled_state) {
  const double in[1] = {scaled_state};
  return forward_cached(p, in).q;
}

// Lowest index among the maxima.
inline std::size_t argmax(std::span<const double> values) {
  return static_cast<std::size_t>(std::max_element(values.begin(), values.end()) - values.begin());
}

// Parameter gradient when only output `action` carries loss; `dq` is
// dL/dq_action.
inline QNetParams backprop_selected(const QNetParams& p, const ForwardCache& c,
                                    std::span<const double> input, std::size_t action, double dq) {
  QNetParams g = QNetParams::zeros(p.inputs(), p.hidden(), p.outputs());
  g.b2[action] = dq;
  for (std::size_t j = 0; j < p.hidden(); ++j) {
    g.w2(action, j) = dq * c.hidden[j];
    if (c.pre[j] <= 0.0) continue;
    const double dz = dq * p.w2(action, j);
    g.b1[j] = dz;
    for (std::size_t k = 0; k < p.inputs(); ++k) g.w1(j, k) = dz * input[k];
  }
  return g;
}

struct RmsProp {
  double lr = 0.01;
  double decay = 0.9;
  double epsilon = 1e-8;
  QNetParams mean_square;  // running average of squared gradients

  void apply(QNetParams& params, const QNetParams& grad) {
    step(params.w1, grad.w1, mean_square.w1);
    step(params.b1, grad.b1, mean_square.b1);
    step(params.w2, grad.w2, mean_square.w2);
    step(params.b2, grad.b2, mean_square.b2);
  }

 private:
  void step(Tensor& w, const Tensor& g, Tensor& ms) const {
    for (std::size_t i = 0; i < w.size(); ++i) {
      ms[i] = decay * ms[i] + (1.0 - decay) * g[i] * g[i];
      w[i] -= lr * g[i] / (std::sqrt(ms[i]) + epsilon);
    }
  }
};

struct DdqnOptions {
  std::size_t hidden = 32;
  std::size_t actions = 21;
  std::size_t sync_interval = 100;
  double lr = 0.01;
  double rms_decay = 0.9;
  double rms_epsilon = 1e-8;
  // Starting value of the squared-gradient average. At 0 the first step is
  // lr / sqrt(1 - decay) per weight regardless of gradient size.
  double rms_initial = 1.0;
};

// Online network, periodically synced target network, and optimizer state.
struct Ddqn {
  QNetParams online;
  QNetParams target;
  RmsProp optimizer;
  std::uint64_t update_count = 0;
  std::uint64_t sync_interval = 100;

  static Ddqn create(const QNetParams& initial, const DdqnOptions& opt) {
    Ddqn d;
    d.online = initial;
    d.target = initial;
    d.optimizer.lr = opt.lr;
    d.optimizer.decay = opt.rms_decay;
    d.optimizer.epsilon = opt.rms_epsilon;
    d.optimizer.mean_square =
        QNetParams::zeros(initial.inputs(), initial.hidden(), initial.outputs());
    QNetParams::for_each(d.optimizer.mean_square, [&](const char*, Tensor& t) {
      std::fill(t.data.begin(), t.data.end(), opt.rms_initial);
    });
    d.sync_interval = opt.sync_interval;
    return d;
  }

  static Ddqn create(RandomStream& init_rng, const DdqnOptions& opt) {
    return create(init_params(init_rng, 1, opt.hidden, opt.actions), opt);
  }
};

// r + gamma * Q_target(s', argmax_a' Q_online(s', a')).
inline double td_target(double reward_scaled, double gamma, double next_scaled_state,
                        const Ddqn& ddqn) {
  const auto q_online = forward(ddqn.online, next_scaled_state);
  const std::size_t best = argmax(q_online);
  const auto q_target = forward(ddqn.target, next_scaled_state);
  return reward_scaled + gamma * q_target[best];
}

struct TrainResult {
  double loss = 0.0;
  double td_target = 0.0;
  double q_before = 0.0;
};

// Analytic gradient of (y - Q(s, a))^2 w.r.t. online params, y held fixed.
inline QNetParams loss_gradient(const QNetParams& params, double scaled_state,
                                std::size_t action, double target) {
  const double in[1] = {scaled_state};
  const auto cache = forward_cached(params, in);
  return backprop_selected(params, cache, in, action, -2.0 * (target - cache.q[action]));
}

// One semi-gradient DDQN step on a single transition.
inline TrainResult train_step(Ddqn& ddqn, double scaled_state, std::size_t action_index,
                              double reward_scaled, double next_scaled_state, double gamma) {
  if (action_index >= ddqn.online.outputs())
    throw std::out_of_range("train_step: action index " + std::to_string(action_index) +
                            " out of range");
  TrainResult r;
  r.td_target = td_target(reward_scaled, gamma, next_scaled_state, ddqn);
  const double in[1] = {scaled_state};
  const auto cache = forward_cached(ddqn.online, in);
  r.q_before = cache.q[action_index];
  const double residual = r.td_target - r.q_before;
  r.loss = residual * residual;
  const auto grad = backprop_selected(ddqn.online, cache, in, action_index, -2.0 * residual);
  if (!std::isfinite(r.loss) || !grad.all_finite())
    throw DiagnosticError("non-finite loss or gradient in DDQN update");
  ddqn.optimizer.apply(ddqn.online, grad);
  if (!ddqn.online.all_finite()) throw DiagnosticError("non-finite parameters after update");
  ++ddqn.update_count;
  if (ddqn.sync_interval > 0 && ddqn.update_count % ddqn.sync_interval == 0)
    ddqn.target = ddqn.online;
  return r;
}

// Text checkpoint. Each tensor is a header line "<name> <rows> <cols>"
// followed by one hexfloat value per line, which round-trips bit-exactly.
//
//   adhocnet-qnet 1
//   w1 32 1
//   0x1.8p-3
//   ...
inline void save_params(std::ostream& os, const QNetParams& p) {
  os << "adhocnet-qnet 1\n";
  QNetParams::for_each(p, [&](const char* name, const Tensor& t) {
    os << name << ' ' << t.rows << ' ' << t.cols << '\n';
    char buf[64];
    for (double v : t.data) {
      std::snprintf(buf, sizeof buf, "%a\n", v);
      os << buf;
    }
  });
  if (!os) throw IoError("failed writing parameter checkpoint");
}

inline QNetParams load_params(std::istream& is) {
  std::string magic;
  int version = 0;
  if (!(is >> magic >> version) || magic != "adhocnet-qnet" || version != 1)
    throw IoError("not an adhocnet-qnet v1 checkpoint");
  QNetParams p;
  QNetParams::for_each(p, [&](const char* name, Tensor& t) {
    std::string got;
    std::size_t rows = 0;
    std::size_t cols = 0;
    if (!(is >> got >> rows >> cols) || got != name)
      throw IoError(std::string("checkpoint: expected tensor ") + name);
    t = Tensor(rows, cols);
    for (double& v : t.data) {
      std::string tok;
      if (!(is >> tok)) throw IoError(std::string("checkpoint: truncated tensor ") + name);
      v = std::strtod(tok.c_str(), nullptr);
    }
  });
  if (p.w1.rows != p.b1.rows || p.w2.cols != p.w1.rows || p.w2.rows != p.b2.rows ||
      p.b1.cols != 1 || p.b2.cols != 1)
    throw IoError("checkpoint: inconsistent tensor shapes");
  return p;
}

}  // namespace adhocnet
