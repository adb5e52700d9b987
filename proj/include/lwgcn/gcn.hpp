// Single graph-convolution block with a learned K-matrix adjacency basis,
// followed by a flatten + affine classifier head and softmax cross-entropy.
//
//   pre    = sum_k A_k U^T W_k           (n x C)
//   hidden = f(pre)                        (relu or identity)
//   logits = head^T vec(hidden) + bias     (vec is row-major)
#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <limits>
#include <optional>
#include <random>
#include <string_view>
#include <vector>

#include "lwgcn/connectivity.hpp"
#include "lwgcn/numkit.hpp"

namespace lwgcn {

enum class Activation { Relu, Identity };

inline std::string_view activation_name(Activation a) { return a == Activation::Relu ? "relu" : "identity"; }

inline std::optional<Activation> parse_activation(std::string_view s) {
  if (s == "relu") return Activation::Relu;
  if (s == "identity") return Activation::Identity;
  return std::nullopt;
}

struct GcnModel {
  AdjacencyBasis basis;
  std::vector<Mat> filters;  // K matrices, s x C
  Mat head;                  // (n*C) x classes
  std::vector<double> bias;  // classes
  Activation activation = Activation::Relu;
  bool learn_basis = true;         // false for the handcrafted baseline
  std::optional<Tensor3> mask;     // fixed 0/1 mask on the effective basis

  std::size_t k() const noexcept { return basis.k(); }
  std::size_t n() const noexcept { return basis.n(); }
  std::size_t signal_dim() const noexcept { return filters.empty() ? 0 : filters[0].rows(); }
  std::size_t channels() const noexcept { return filters.empty() ? 0 : filters[0].cols(); }
  std::size_t num_classes() const noexcept { return bias.size(); }

  void validate() const {
    basis.validate();
    if (filters.size() != basis.k()) throw ShapeError("GcnModel: need one filter matrix per basis matrix");
    for (const auto& w : filters)
      if (!w.same_shape(filters[0])) throw ShapeError("GcnModel: filters must share one shape");
    if (head.rows() != n() * channels()) throw ShapeError("GcnModel: head input must be n * C");
    if (head.cols() != bias.size()) throw ShapeError("GcnModel: head/bias class count mismatch");
    if (mask && !mask->same_shape(basis.ahat)) throw ShapeError("GcnModel: mask shape mismatch");
  }
};

struct ModelShape {
  std::size_t k = 4;
  std::size_t n = 21;
  std::size_t signal_dim = 12;
  std::size_t channels = 16;
  std::size_t classes = 45;
};

/// Filters and head uniform in +-1/sqrt(fan_in); bias zero; Ahat uniform [0,1]
/// with the crispmax hypotheses enforced for the given mode.
inline GcnModel init_model(const ModelShape& shape, ConstraintMode mode, double gamma_max, double epsilon,
                           double delta, std::mt19937_64& rng, Activation act = Activation::Relu) {
  GcnModel m;
  m.activation = act;
  m.basis.mode = mode;
  m.basis.gamma_max = gamma_max;
  m.basis.gamma_stoch = gamma_max;
  m.basis.epsilon = epsilon;
  m.basis.delta = delta;
  m.basis.ahat = Tensor3(shape.k, shape.n, shape.n);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  for (double& v : m.basis.ahat.data()) v = unit(rng);
  enforce_orth_hypotheses(m.basis.ahat, mode, delta);

  const double wb = 1.0 / std::sqrt(static_cast<double>(shape.signal_dim));
  std::uniform_real_distribution<double> wdist(-wb, wb);
  for (std::size_t k = 0; k < shape.k; ++k) {
    Mat w(shape.signal_dim, shape.channels);
    for (double& v : w.data()) v = wdist(rng);
    m.filters.push_back(std::move(w));
  }
  const double hb = 1.0 / std::sqrt(static_cast<double>(shape.n * shape.channels));
  std::uniform_real_distribution<double> hdist(-hb, hb);
  m.head = Mat(shape.n * shape.channels, shape.classes);
  for (double& v : m.head.data()) v = hdist(rng);
  m.bias.assign(shape.classes, 0.0);
  m.validate();
  return m;
}

inline double activate(Activation a, double x) { return a == Activation::Relu ? (x > 0.0 ? x : 0.0) : x; }
inline double activate_grad(Activation a, double x) { return a == Activation::Relu ? (x > 0.0 ? 1.0 : 0.0) : 1.0; }

/// sum_k A_k U^T W_k, before the activation.
inline Mat gc_preactivation(const Tensor3& a, const Mat& u, const std::vector<Mat>& filters) {
  if (filters.size() != a.k()) throw ShapeError("gc_block: filter count != basis size");
  if (u.cols() != a.rows() || a.rows() != a.cols()) throw ShapeError("gc_block: signal/basis node mismatch");
  const Mat ut = transpose(u);
  Mat pre(a.rows(), filters.empty() ? 0 : filters[0].cols());
  for (std::size_t k = 0; k < a.k(); ++k) {
    if (filters[k].rows() != u.rows()) throw ShapeError("gc_block: filter rows != signal dimension");
    pre = add(pre, matmul(a.slice(k), matmul(ut, filters[k])));
  }
  return pre;
}

inline Mat gc_block(const EffectiveBasis& eff, const Mat& u, const std::vector<Mat>& filters,
                    Activation act = Activation::Relu) {
  Mat out = gc_preactivation(eff.a, u, filters);
  for (double& v : out.data()) v = activate(act, v);
  return out;
}

struct ForwardTrace {
  BasisForward basis;
  Tensor3 a_used;  // effective basis after the optional prune mask
  Mat u;
  Mat pre_activation;
  Mat hidden;
  std::vector<double> logits;
};

struct Gradients {
  Tensor3 d_ahat;
  std::vector<Mat> d_filters;
  Mat d_head;
  std::vector<double> d_bias;

  static Gradients zeros_like(const GcnModel& m) {
    Gradients g;
    g.d_ahat = Tensor3(m.k(), m.n(), m.n());
    for (const auto& w : m.filters) g.d_filters.emplace_back(w.rows(), w.cols());
    g.d_head = Mat(m.head.rows(), m.head.cols());
    g.d_bias.assign(m.bias.size(), 0.0);
    return g;
  }

  void accumulate(const Gradients& o, double weight = 1.0) {
    auto axpy = [weight](std::span<double> y, std::span<const double> x) {
      for (std::size_t t = 0; t < y.size(); ++t) y[t] += weight * x[t];
    };
    axpy(d_ahat.data(), o.d_ahat.data());
    for (std::size_t k = 0; k < d_filters.size(); ++k) axpy(d_filters[k].data(), o.d_filters[k].data());
    axpy(d_head.data(), o.d_head.data());
    axpy(d_bias, o.d_bias);
  }
};

/// Effective basis with the optional prune mask applied.
inline Tensor3 masked_basis(const GcnModel& model, const BasisForward& fwd) {
  Tensor3 a = fwd.eff.a;
  if (model.mask) {
    auto av = a.data();
    auto mk = model.mask->data();
    for (std::size_t q = 0; q < av.size(); ++q) av[q] *= mk[q];
  }
  return a;
}

/// Block + head for one signal, given an already evaluated basis.
inline void forward_signal(const GcnModel& model, const Tensor3& a_used, const Mat& u, ForwardTrace& t) {
  if (u.cols() != model.n() || u.rows() != model.signal_dim())
    throw ShapeError("model_forward: sample is " + detail::shape_str(u) + ", model expects " +
                     std::to_string(model.signal_dim()) + "x" + std::to_string(model.n()));
  t.u = u;
  t.pre_activation = gc_preactivation(a_used, u, model.filters);
  t.hidden = t.pre_activation;
  for (double& v : t.hidden.data()) v = activate(model.activation, v);
  t.logits = model.bias;
  auto h = t.hidden.data();
  for (std::size_t p = 0; p < h.size(); ++p) {
    if (h[p] == 0.0) continue;
    for (std::size_t c = 0; c < t.logits.size(); ++c) t.logits[c] += model.head(p, c) * h[p];
  }
}

inline ForwardTrace model_forward(const GcnModel& model, const Mat& u, double gamma_eff) {
  ForwardTrace t;
  t.basis = basis_forward(model.basis, gamma_eff);
  t.a_used = masked_basis(model, t.basis);
  forward_signal(model, t.a_used, u, t);
  return t;
}

struct LossResult {
  double loss = 0.0;
  std::vector<double> d_logits;
};

inline std::vector<double> softmax(std::span<const double> z) {
  std::vector<double> p(z.begin(), z.end());
  if (p.empty()) return p;
  const double zmax = *std::max_element(p.begin(), p.end());
  double total = 0.0;
  for (double& v : p) {
    v = std::exp(v - zmax);
    total += v;
  }
  for (double& v : p) v /= total;
  return p;
}

inline LossResult cross_entropy(std::span<const double> logits, std::size_t label) {
  if (label >= logits.size()) throw InputError("cross_entropy: label out of range");
  const double zmax = *std::max_element(logits.begin(), logits.end());
  double total = 0.0;
  for (double z : logits) total += std::exp(z - zmax);
  const double log_norm = zmax + std::log(total);
  LossResult r;
  r.loss = log_norm - logits[label];
  r.d_logits.resize(logits.size());
  for (std::size_t c = 0; c < logits.size(); ++c) r.d_logits[c] = std::exp(logits[c] - log_norm);
  r.d_logits[label] -= 1.0;
  return r;
}

inline std::size_t argmax(std::span<const double> v) {
  return static_cast<std::size_t>(std::max_element(v.begin(), v.end()) - v.begin());
}

/// Accumulates weight * (gradients of one signal) into `acc`, leaving the
/// basis part as d_loss/d_A in `d_a`; basis_gradient finishes it.
inline void backward_signal(const GcnModel& model, const ForwardTrace& trace, std::span<const double> d_logits,
                            Gradients& acc, Tensor3& d_a, double weight = 1.0) {
  if (d_logits.size() != model.num_classes() || trace.logits.size() != model.num_classes())
    throw ShapeError("model_backward: class count mismatch");
  if (!trace.a_used.same_shape(model.basis.ahat)) throw InputError("model_backward: trace does not belong to this model");
  const std::size_t n = model.n(), C = model.channels(), K = model.k();
  for (std::size_t c = 0; c < d_logits.size(); ++c) acc.d_bias[c] += weight * d_logits[c];

  auto h = trace.hidden.data();
  Mat d_pre(n, C);
  auto dp = d_pre.data();
  for (std::size_t p = 0; p < h.size(); ++p) {
    double back = 0.0;
    for (std::size_t c = 0; c < d_logits.size(); ++c) {
      acc.d_head(p, c) += weight * h[p] * d_logits[c];
      back += model.head(p, c) * d_logits[c];
    }
    dp[p] = weight * back * activate_grad(model.activation, trace.pre_activation.data()[p]);
  }

  // d_W_k = U A_k^T d_pre ; d_A_k = d_pre W_k^T U
  for (std::size_t k = 0; k < K; ++k) {
    const Mat dw = matmul(trace.u, matmul(transpose(trace.a_used.slice(k)), d_pre));
    auto dst = acc.d_filters[k].data();
    auto src = dw.data();
    for (std::size_t q = 0; q < dst.size(); ++q) dst[q] += src[q];
    const Mat da = matmul(d_pre, matmul(transpose(model.filters[k]), trace.u));
    auto ddst = d_a.slice_span(k);
    auto dsrc = da.data();
    for (std::size_t q = 0; q < ddst.size(); ++q) ddst[q] += dsrc[q];
  }
}

/// Pushes d_loss/d_A through the prune mask and the basis reparametrization.
inline Tensor3 basis_gradient(const GcnModel& model, const BasisForward& fwd, Tensor3 d_a) {
  if (model.mask) {
    auto da = d_a.data();
    auto mk = model.mask->data();
    for (std::size_t q = 0; q < da.size(); ++q) da[q] *= mk[q];
  }
  if (!model.learn_basis) return Tensor3(model.k(), model.n(), model.n());
  return basis_vjp(model.basis, fwd, d_a);
}

inline Gradients model_backward(const GcnModel& model, const ForwardTrace& trace, std::span<const double> d_logits) {
  if (trace.basis.eff.mode != model.basis.mode) throw InputError("model_backward: trace does not belong to this model");
  Gradients g = Gradients::zeros_like(model);
  Tensor3 d_a(model.k(), model.n(), model.n());
  backward_signal(model, trace, d_logits, g, d_a);
  g.d_ahat = basis_gradient(model, trace.basis, std::move(d_a));
  return g;
}

/// Loss and gradients for one labelled signal.
inline std::pair<double, Gradients> loss_and_gradients(const GcnModel& model, const Mat& u, std::size_t label,
                                                       double gamma_eff) {
  const auto trace = model_forward(model, u, gamma_eff);
  const auto ce = cross_entropy(trace.logits, label);
  return {ce.loss, model_backward(model, trace, ce.d_logits)};
}

// ---------------------------------------------------------------------------
// Finite-difference oracle

enum class ParamGroup { Ahat, Filters, Head, Bias };

inline std::string_view group_name(ParamGroup g) {
  switch (g) {
    case ParamGroup::Ahat: return "ahat";
    case ParamGroup::Filters: return "filters";
    case ParamGroup::Head: return "head";
    case ParamGroup::Bias: return "bias";
  }
  return "?";
}

/// Mutable flat views over one parameter group.
inline std::vector<std::span<double>> group_views(GcnModel& m, ParamGroup g) {
  switch (g) {
    case ParamGroup::Ahat: return {m.basis.ahat.data()};
    case ParamGroup::Filters: {
      std::vector<std::span<double>> v;
      for (auto& w : m.filters) v.push_back(w.data());
      return v;
    }
    case ParamGroup::Head: return {m.head.data()};
    case ParamGroup::Bias: return {std::span<double>(m.bias)};
  }
  return {};
}

inline std::vector<double> flatten_group(const Gradients& grads, ParamGroup g) {
  std::vector<double> out;
  auto put = [&out](std::span<const double> s) { out.insert(out.end(), s.begin(), s.end()); };
  switch (g) {
    case ParamGroup::Ahat: put(grads.d_ahat.data()); break;
    case ParamGroup::Filters:
      for (const auto& w : grads.d_filters) put(w.data());
      break;
    case ParamGroup::Head: put(grads.d_head.data()); break;
    case ParamGroup::Bias: put(grads.d_bias); break;
  }
  return out;
}

/// Central differences (E(theta+h) - E(theta-h)) / 2h over every scalar of a
/// parameter group, in flatten_group order. `loss` maps a model to a scalar.
inline std::vector<double> finite_diff_oracle(const GcnModel& model, ParamGroup group, double step,
                                              const std::function<double(const GcnModel&)>& loss) {
  if (!(step > 0.0)) throw DomainError("finite_diff_oracle: step must be positive");
  GcnModel probe = model;
  std::vector<double> out;
  for (auto view : group_views(probe, group))
    for (double& theta : view) {
      const double saved = theta;
      theta = saved + step;
      const double up = loss(probe);
      theta = saved - step;
      const double down = loss(probe);
      theta = saved;
      out.push_back((up - down) / (2.0 * step));
    }
  return out;
}

inline std::vector<double> finite_diff_oracle(const GcnModel& model, const Mat& u, std::size_t label,
                                              double gamma_eff, ParamGroup group, double step) {
  return finite_diff_oracle(model, group, step, [&](const GcnModel& m) {
    return cross_entropy(model_forward(m, u, gamma_eff).logits, label).loss;
  });
}

/// ||analytic - numeric||_inf / max(||analytic||_inf, ||numeric||_inf, floor).
inline double relative_error(std::span<const double> analytic, std::span<const double> numeric,
                             double floor = 1e-8) {
  if (analytic.size() != numeric.size()) throw ShapeError("relative_error: length mismatch");
  double diff = 0.0;
  for (std::size_t t = 0; t < analytic.size(); ++t) diff = std::max(diff, std::abs(analytic[t] - numeric[t]));
  return diff / std::max({max_abs(analytic), max_abs(numeric), floor});
}

struct GroupError {
  ParamGroup group;
  double rel_error;
};

/// Analytic vs central-difference gradients for every parameter group.
/// `tamper` lets callers corrupt the analytic side (negative controls).
inline std::vector<GroupError> gradient_check(const GcnModel& model, const Mat& u, std::size_t label, double gamma_eff,
                                              double step,
                                              const std::function<void(Gradients&)>& tamper = nullptr) {
  auto grads = loss_and_gradients(model, u, label, gamma_eff).second;
  if (tamper) tamper(grads);
  std::vector<GroupError> out;
  for (auto g : {ParamGroup::Ahat, ParamGroup::Filters, ParamGroup::Head, ParamGroup::Bias}) {
    if (g == ParamGroup::Ahat && !model.learn_basis) continue;
    const auto analytic = flatten_group(grads, g);
    const auto numeric = finite_diff_oracle(model, u, label, gamma_eff, g, step);
    out.push_back({g, relative_error(analytic, numeric)});
  }
  return out;
}

/// Random instance for gradient checking: Ahat and filters as in init_model,
/// signal uniform in [-1, 1], uniform label.
struct GradCheckInstance {
  GcnModel model;
  Mat u;
  std::size_t label = 0;
};

inline GradCheckInstance random_instance(const ModelShape& shape, ConstraintMode mode, double gamma_max,
                                         std::uint64_t seed, Activation act = Activation::Relu) {
  std::mt19937_64 rng(seed);
  GradCheckInstance inst{init_model(shape, mode, gamma_max, 0.01, 0.01, rng, act), Mat(shape.signal_dim, shape.n), 0};
  std::uniform_real_distribution<double> sym(-1.0, 1.0);
  for (double& v : inst.model.bias) v = 0.1 * sym(rng);
  for (double& v : inst.u.data()) v = sym(rng);
  inst.label = std::uniform_int_distribution<std::size_t>(0, shape.classes - 1)(rng);
  return inst;
}

}  // namespace lwgcn
