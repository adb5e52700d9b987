// End-to-end optimization of a GcnModel: Adam with a loss-speed driven
// global learning rate, per-epoch temperature annealing and noise injection,
// evaluation by mean per-class accuracy, magnitude pruning with fine-tuning,
// and the Table-style ablation grid.
#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <numeric>
#include <optional>
#include <random>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "lwgcn/connectivity.hpp"
#include "lwgcn/gcn.hpp"
#include "lwgcn/log.hpp"
#include "lwgcn/skeleton.hpp"

namespace lwgcn {

struct DivergenceError : std::runtime_error {
  DivergenceError(const std::string& what, std::string dump) : std::runtime_error(what), state(std::move(dump)) {}
  std::string state;
};

// ---------------------------------------------------------------------------
// Adam

struct AdamHyper {
  double beta1 = 0.9;
  double beta2 = 0.999;
  double eps = 1e-8;
};

struct AdamState {
  std::vector<double> m;
  std::vector<double> v;
  std::size_t t = 0;
};

inline void adam_step(std::span<double> params, std::span<const double> grads, AdamState& st, double nu,
                      const AdamHyper& hp = {}) {
  if (params.size() != grads.size()) throw ShapeError("adam_step: params/grads length mismatch");
  if (st.m.empty()) {
    st.m.assign(params.size(), 0.0);
    st.v.assign(params.size(), 0.0);
  }
  if (st.m.size() != params.size()) throw ShapeError("adam_step: optimizer state length mismatch");
  ++st.t;
  const double c1 = 1.0 - std::pow(hp.beta1, static_cast<double>(st.t));
  const double c2 = 1.0 - std::pow(hp.beta2, static_cast<double>(st.t));
  for (std::size_t q = 0; q < params.size(); ++q) {
    st.m[q] = hp.beta1 * st.m[q] + (1.0 - hp.beta1) * grads[q];
    st.v[q] = hp.beta2 * st.v[q] + (1.0 - hp.beta2) * grads[q] * grads[q];
    params[q] -= nu * (st.m[q] / c1) / (std::sqrt(st.v[q] / c2) + hp.eps);
  }
}

/// speed_t = |L_t - L_{t-1}|. A rising speed shrinks nu by `factor`, a
/// falling (or equal) one grows it by 1/factor; the result is clamped.
inline double adapt_lr(std::span<const double> loss_history, double nu_prev, double factor,
                       std::pair<double, double> bounds) {
  const std::size_t L = loss_history.size();
  if (L < 3) return std::clamp(nu_prev, bounds.first, bounds.second);
  const double speed = std::abs(loss_history[L - 1] - loss_history[L - 2]);
  const double prev_speed = std::abs(loss_history[L - 2] - loss_history[L - 3]);
  const double nu = speed > prev_speed ? nu_prev * factor : nu_prev / factor;
  return std::clamp(nu, bounds.first, bounds.second);
}

// ---------------------------------------------------------------------------
// Configuration and metrics

struct PruneSpec {
  double rate = 0.0;                 // percent of effective-basis entries zeroed
  std::size_t fine_tune_epochs = 0;  // 0 selects 10% of max_epochs
};

struct TrainConfig {
  std::size_t max_epochs = 2800;
  std::size_t batch_size = 600;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double adam_eps = 1e-8;
  double lr_init = 1e-2;
  double lr_factor = 0.99;
  double lr_min = 1e-5;
  double lr_max = 1e-1;
  ConstraintMode mode = ConstraintMode::OrthStoch;
  double gamma_max = 0.0;        // <= 0 selects epsilon_orth_bound(K, delta, epsilon)
  double gamma_stoch = 0.0;      // <= 0 couples it to gamma_max
  double epsilon = 0.01;
  double delta = 0.01;
  double noise_magnitude = -1.0; // < 0 selects delta / 2
  bool enforce_hypotheses = true;
  std::uint64_t seed = 0;
  std::optional<PruneSpec> prune;
  double sparsity_threshold = 1e-2;
  std::size_t channels = 16;
  Activation activation = Activation::Relu;
  std::size_t checkpoint_every = 0;  // 0 disables periodic checkpoints

  void validate() const {
    if (batch_size == 0) throw DomainError("TrainConfig: batch_size must be >= 1");
    if (!(lr_factor > 0.0 && lr_factor < 1.0)) throw DomainError("TrainConfig: lr_factor must lie in (0, 1)");
    if (!(lr_min <= lr_init && lr_init <= lr_max)) throw DomainError("TrainConfig: need lr_min <= lr_init <= lr_max");
    if (!(lr_min > 0.0)) throw DomainError("TrainConfig: lr_min must be positive");
    if (!(epsilon > 0.0 && epsilon < 0.5)) throw DomainError("TrainConfig: epsilon must lie in (0, 0.5)");
    if (!(delta > 0.0)) throw DomainError("TrainConfig: delta must be positive");
    if (!(sparsity_threshold > 0.0)) throw DomainError("TrainConfig: sparsity_threshold must be positive");
    if (channels == 0) throw DomainError("TrainConfig: channels must be >= 1");
    if (prune && !(prune->rate >= 0.0 && prune->rate < 100.0)) throw DomainError("TrainConfig: prune rate must lie in [0, 100)");
  }

  AdamHyper adam() const { return {beta1, beta2, adam_eps}; }

  double resolved_gamma_max(std::size_t k) const {
    return gamma_max > 0.0 ? gamma_max : epsilon_orth_bound(std::max<std::size_t>(k, 2), delta, epsilon);
  }
  double resolved_noise() const { return noise_magnitude >= 0.0 ? noise_magnitude : delta / 2.0; }
  std::size_t resolved_fine_tune_epochs() const {
    if (prune && prune->fine_tune_epochs > 0) return prune->fine_tune_epochs;
    return std::max<std::size_t>(1, max_epochs / 10);
  }
};

struct EpochRecord {
  std::size_t epoch = 0;
  double loss = 0.0;
  double nu = 0.0;
  double gamma_eff = 0.0;
  double max_cross_orth = 0.0;
  double max_colsum_dev = 0.0;
  double pruning_rate = 0.0;
};

struct RunMetrics {
  std::vector<EpochRecord> epochs;
  std::vector<std::optional<double>> per_class;
  double mean_accuracy = 0.0;
  std::string speed_definition = "abs_one_step_loss_difference";
};

/// Builds a model shaped for the dataset, with constraint settings from config.
inline GcnModel init_model_for(const Dataset& ds, const TrainConfig& cfg, std::size_t k) {
  std::mt19937_64 rng(cfg.seed);
  ModelShape shape{k, ds.n(), ds.signal_dim(), cfg.channels, ds.num_classes};
  const double gmax = cfg.resolved_gamma_max(k);
  GcnModel m = init_model(shape, cfg.mode, gmax, cfg.epsilon, cfg.delta, rng, cfg.activation);
  m.basis.gamma_stoch = cfg.gamma_stoch > 0.0 ? cfg.gamma_stoch : gmax;
  if (cfg.enforce_hypotheses) enforce_orth_hypotheses(m.basis.ahat, m.basis.mode, m.basis.delta, gmax);
  return m;
}

/// Handcrafted power-map baseline: A_k = A^(k), frozen.
inline GcnModel init_power_map_model(const Dataset& ds, const TrainConfig& cfg, std::size_t k) {
  TrainConfig c = cfg;
  c.mode = ConstraintMode::None;
  GcnModel m = init_model_for(ds, c, k);
  m.basis.ahat = power_map_basis(handcrafted_adjacency(ds.graph), k);
  m.learn_basis = false;
  return m;
}

// ---------------------------------------------------------------------------
// Batch gradient

struct BatchResult {
  double loss_sum = 0.0;
  Gradients grads;  // mean over the batch
};

/// Mean loss gradient over `indices` (processed in ascending index order).
inline BatchResult batch_gradients(const GcnModel& model, const Dataset& ds, std::vector<std::size_t> indices,
                                   double gamma_eff) {
  std::sort(indices.begin(), indices.end());
  BatchResult r;
  r.grads = Gradients::zeros_like(model);
  const auto fwd = basis_forward(model.basis, gamma_eff);
  const Tensor3 a_used = masked_basis(model, fwd);
  Tensor3 d_a(model.k(), model.n(), model.n());
  const double w = indices.empty() ? 0.0 : 1.0 / static_cast<double>(indices.size());
  ForwardTrace trace;
  for (std::size_t idx : indices) {
    const auto& s = ds.samples[idx];
    forward_signal(model, a_used, s.u, trace);
    trace.a_used = a_used;
    const auto ce = cross_entropy(trace.logits, s.label);
    r.loss_sum += ce.loss;
    backward_signal(model, trace, ce.d_logits, r.grads, d_a, w);
  }
  r.grads.d_ahat = basis_gradient(model, fwd, std::move(d_a));
  return r;
}

// ---------------------------------------------------------------------------
// Evaluation

struct EvalResult {
  double mean_class_accuracy = 0.0;
  std::vector<std::optional<double>> per_class;     // nullopt for classes absent from the split
  std::vector<std::vector<std::size_t>> confusion;  // [true][predicted]
};

/// Mean over classes (not samples) of per-class accuracy.
inline EvalResult score_predictions(std::span<const std::size_t> labels, std::span<const std::size_t> predicted,
                                    std::size_t num_classes) {
  if (labels.empty()) throw InputError("evaluate: empty split");
  if (labels.size() != predicted.size()) throw ShapeError("evaluate: labels/predictions length mismatch");
  EvalResult r;
  r.confusion.assign(num_classes, std::vector<std::size_t>(num_classes, 0));
  for (std::size_t t = 0; t < labels.size(); ++t) {
    if (labels[t] >= num_classes || predicted[t] >= num_classes) throw InputError("evaluate: class index out of range");
    ++r.confusion[labels[t]][predicted[t]];
  }
  r.per_class.resize(num_classes);
  double sum = 0.0;
  std::size_t present = 0;
  for (std::size_t c = 0; c < num_classes; ++c) {
    const auto total = std::accumulate(r.confusion[c].begin(), r.confusion[c].end(), std::size_t{0});
    if (total == 0) {
      log::warn("evaluate: class " + std::to_string(c) + " absent from split; excluded from the mean");
      continue;
    }
    r.per_class[c] = static_cast<double>(r.confusion[c][c]) / static_cast<double>(total);
    sum += *r.per_class[c];
    ++present;
  }
  r.mean_class_accuracy = sum / static_cast<double>(present);
  return r;
}

enum class Split { Train, Test };

inline std::vector<std::size_t> predict(const GcnModel& model, const Dataset& ds, std::span<const std::size_t> idx,
                                        double gamma_eff) {
  const auto fwd = basis_forward(model.basis, gamma_eff);
  const Tensor3 a_used = masked_basis(model, fwd);
  std::vector<std::size_t> out;
  out.reserve(idx.size());
  ForwardTrace trace;
  for (std::size_t i : idx) {
    forward_signal(model, a_used, ds.samples[i].u, trace);
    out.push_back(argmax(trace.logits));
  }
  return out;
}

/// Evaluates at the model's final temperature unless gamma_eff is given.
inline EvalResult evaluate(const GcnModel& model, const Dataset& ds, Split split,
                           std::optional<double> gamma_eff = std::nullopt) {
  const auto& idx = split == Split::Train ? ds.train : ds.test;
  if (idx.empty()) throw InputError("evaluate: empty split");
  const auto pred = predict(model, ds, idx, gamma_eff.value_or(model.basis.gamma_max));
  std::vector<std::size_t> labels;
  for (std::size_t i : idx) labels.push_back(ds.samples[i].label);
  return score_predictions(labels, pred, ds.num_classes);
}

// ---------------------------------------------------------------------------
// Training

struct TrainHooks {
  std::function<void(const EpochRecord&, const GcnModel&)> on_epoch;
};

struct TrainResult {
  GcnModel model;
  RunMetrics metrics;
};

namespace detail {

inline std::vector<std::span<double>> param_views(GcnModel& m) {
  std::vector<std::span<double>> v{m.basis.ahat.data()};
  for (auto& w : m.filters) v.push_back(w.data());
  v.push_back(m.head.data());
  v.push_back(std::span<double>(m.bias));
  return v;
}

inline std::vector<std::span<const double>> grad_views(const Gradients& g) {
  std::vector<std::span<const double>> v{g.d_ahat.data()};
  for (const auto& w : g.d_filters) v.push_back(w.data());
  v.push_back(g.d_head.data());
  v.push_back(std::span<const double>(g.d_bias));
  return v;
}

inline EpochRecord measure(const GcnModel& model, double gamma_eff, double threshold) {
  EpochRecord r;
  r.gamma_eff = gamma_eff;
  const auto fwd = basis_forward(model.basis, gamma_eff);
  const Tensor3 a = masked_basis(model, fwd);
  r.max_cross_orth = check_epsilon_orth(a, model.basis.epsilon).max_violation;
  r.max_colsum_dev = max_colsum_deviation(a);
  r.pruning_rate = sparsity_report(a, model.basis.mode, threshold).pruning_rate_percent;
  return r;
}

inline std::string dump_state(const GcnModel& m, std::size_t epoch, double gamma, double nu, double loss) {
  std::ostringstream os;
  os.precision(17);
  os << "epoch=" << epoch << " gamma_eff=" << gamma << " nu=" << nu << " loss=" << loss
     << " mode=" << mode_name(m.basis.mode) << " max|ahat|=" << max_abs(m.basis.ahat.data())
     << " max|head|=" << max_abs(m.head.data());
  for (std::size_t k = 0; k < m.filters.size(); ++k) os << " max|W" << k << "|=" << max_abs(m.filters[k].data());
  return os.str();
}

/// Shared epoch loop. `gamma_at(epoch)` gives the temperature for 1-based
/// epochs; `perturb_basis` toggles per-epoch noise on crispmax modes.
inline void run_epochs(const Dataset& ds, GcnModel& model, const TrainConfig& cfg, std::size_t epochs,
                       const std::function<double(std::size_t)>& gamma_at, bool perturb_basis, std::mt19937_64& rng,
                       RunMetrics& metrics, const TrainHooks& hooks, std::size_t epoch_offset) {
  if (ds.train.empty()) throw InputError("train: empty training split");
  std::vector<AdamState> states(param_views(model).size());
  const AdamHyper hp = cfg.adam();
  double nu = cfg.lr_init;
  std::vector<double> history;
  std::vector<std::size_t> order = ds.train;
  const double noise = cfg.resolved_noise();
  const bool crisp = uses_crispmax(model.basis.mode) && model.learn_basis;

  for (std::size_t e = 1; e <= epochs; ++e) {
    if (crisp && perturb_basis) {
      if (noise > 0.0) model.basis.ahat = perturb(model.basis.ahat, noise, rng);
      if (cfg.enforce_hypotheses)
        enforce_orth_hypotheses(model.basis.ahat, model.basis.mode, model.basis.delta, model.basis.gamma_max);
    }
    const double gamma = gamma_at(e);
    std::shuffle(order.begin(), order.end(), rng);
    double loss_sum = 0.0;
    for (std::size_t b = 0; b < order.size(); b += cfg.batch_size) {
      const std::size_t end = std::min(order.size(), b + cfg.batch_size);
      std::vector<std::size_t> batch(order.begin() + static_cast<std::ptrdiff_t>(b),
                                     order.begin() + static_cast<std::ptrdiff_t>(end));
      auto br = batch_gradients(model, ds, std::move(batch), gamma);
      loss_sum += br.loss_sum;
      auto params = param_views(model);
      auto grads = grad_views(br.grads);
      for (std::size_t g = 0; g < params.size(); ++g) {
        if (g == 0 && !model.learn_basis) continue;
        adam_step(params[g], grads[g], states[g], nu, hp);
      }
    }
    const double loss = loss_sum / static_cast<double>(order.size());
    bool finite = std::isfinite(loss);
    for (auto view : param_views(model)) finite = finite && all_finite(view);
    if (!finite)
      throw DivergenceError("training diverged at epoch " + std::to_string(epoch_offset + e),
                            dump_state(model, epoch_offset + e, gamma, nu, loss));

    EpochRecord rec = measure(model, gamma, cfg.sparsity_threshold);
    rec.epoch = epoch_offset + e;
    rec.loss = loss;
    rec.nu = nu;
    metrics.epochs.push_back(rec);
    if (hooks.on_epoch) hooks.on_epoch(rec, model);

    history.push_back(loss);
    nu = adapt_lr(history, nu, cfg.lr_factor, {cfg.lr_min, cfg.lr_max});
  }
}

}  // namespace detail

/// Magnitude pruning on the effective basis (evaluated at gamma_eff, default
/// the model's final temperature). Zeroes ceil(rate% of K*n*n) entries of
/// smallest magnitude; the mask stays fixed from then on.
inline GcnModel magnitude_prune(const GcnModel& model, double rate, std::optional<double> gamma_eff = std::nullopt) {
  if (!(rate >= 0.0 && rate < 100.0)) throw DomainError("magnitude_prune: rate must lie in [0, 100)");
  GcnModel out = model;
  if (rate == 0.0) return out;
  const auto fwd = basis_forward(model.basis, gamma_eff.value_or(model.basis.gamma_max));
  const Tensor3 a = masked_basis(model, fwd);
  const std::size_t total = a.size();
  const auto zeros = static_cast<std::size_t>(std::ceil(rate * static_cast<double>(total) / 100.0 - 1e-9));
  std::vector<std::size_t> idx(total);
  std::iota(idx.begin(), idx.end(), 0);
  auto av = a.data();
  std::stable_sort(idx.begin(), idx.end(),
                   [&](std::size_t x, std::size_t y) { return std::abs(av[x]) < std::abs(av[y]); });
  Tensor3 mask = model.mask.value_or(Tensor3(a.k(), a.rows(), a.cols(), 1.0));
  for (std::size_t q = 0; q < zeros && q < total; ++q) mask.data()[idx[q]] = 0.0;
  out.mask = std::move(mask);
  return out;
}

/// Continues training at the final temperature with a fresh optimizer and
/// learning-rate history; the prune mask is respected throughout.
inline TrainResult fine_tune(const Dataset& ds, GcnModel model, const TrainConfig& cfg, std::size_t epochs,
                             const TrainHooks& hooks = {}, std::size_t epoch_offset = 0) {
  cfg.validate();
  model.validate();
  TrainResult r;
  std::mt19937_64 rng(cfg.seed ^ 0x9e3779b97f4a7c15ULL);
  const double gmax = model.basis.gamma_max;
  detail::run_epochs(ds, model, cfg, epochs, [gmax](std::size_t) { return gmax; }, false, rng, r.metrics, hooks,
                     epoch_offset);
  const auto ev = evaluate(model, ds, Split::Test);
  r.metrics.per_class = ev.per_class;
  r.metrics.mean_accuracy = ev.mean_class_accuracy;
  r.model = std::move(model);
  return r;
}

/// Full protocol: annealed training for cfg.max_epochs, then, if cfg.prune is
/// set, magnitude pruning followed by fine-tuning.
inline TrainResult train(const Dataset& ds, GcnModel model, const TrainConfig& cfg, const TrainHooks& hooks = {}) {
  cfg.validate();
  model.validate();
  ds.validate();
  if (model.n() != ds.n() || model.signal_dim() != ds.signal_dim() || model.num_classes() != ds.num_classes)
    throw ShapeError("train: model and dataset shapes disagree");
  TrainResult r;
  std::mt19937_64 rng(cfg.seed);
  const double gmax = model.basis.gamma_max;
  const std::size_t E = cfg.max_epochs;
  if (E > 0)
    detail::run_epochs(ds, model, cfg, E, [gmax, E](std::size_t e) { return anneal(gmax, e, E); }, true, rng,
                       r.metrics, hooks, 0);
  if (cfg.prune) {
    model = magnitude_prune(model, cfg.prune->rate);
    auto ft = fine_tune(ds, std::move(model), cfg, cfg.resolved_fine_tune_epochs(), hooks, E);
    r.metrics.epochs.insert(r.metrics.epochs.end(), ft.metrics.epochs.begin(), ft.metrics.epochs.end());
    model = std::move(ft.model);
  }
  if (!ds.test.empty()) {
    const auto ev = evaluate(model, ds, Split::Test);
    r.metrics.per_class = ev.per_class;
    r.metrics.mean_accuracy = ev.mean_class_accuracy;
  }
  r.model = std::move(model);
  return r;
}

// ---------------------------------------------------------------------------
// Ablation grid

enum class AblationMode { H, L, LOrth, LMPOrth, LStc, LOrthStc, LMPStc };

inline std::string_view ablation_name(AblationMode m) {
  switch (m) {
    case AblationMode::H: return "H";
    case AblationMode::L: return "L";
    case AblationMode::LOrth: return "L+orth";
    case AblationMode::LMPOrth: return "L+MP@orth";
    case AblationMode::LStc: return "L+stc";
    case AblationMode::LOrthStc: return "L+orth+stc";
    case AblationMode::LMPStc: return "L+MP@stc";
  }
  return "?";
}

inline std::optional<AblationMode> parse_ablation_mode(std::string_view s) {
  for (auto m : {AblationMode::H, AblationMode::L, AblationMode::LOrth, AblationMode::LMPOrth, AblationMode::LStc,
                 AblationMode::LOrthStc, AblationMode::LMPStc})
    if (s == ablation_name(m)) return m;
  if (s == "none") return AblationMode::L;
  if (s == "orth") return AblationMode::LOrth;
  if (s == "stc") return AblationMode::LStc;
  if (s == "orth+stc") return AblationMode::LOrthStc;
  return std::nullopt;
}

/// The six Table-1 columns.
inline std::vector<AblationMode> table_modes() {
  return {AblationMode::H,     AblationMode::L,        AblationMode::LOrth,
          AblationMode::LMPOrth, AblationMode::LOrthStc, AblationMode::LMPStc};
}

struct AblationRow {
  std::size_t k = 0;
  std::string mode;
  double accuracy = 0.0;
  std::optional<double> pruning_rate;  // nullopt prints as "none"
  std::optional<double> target_rate;
};

inline std::vector<AblationRow> run_ablation(const Dataset& ds, const TrainConfig& base,
                                             std::span<const std::size_t> k_values,
                                             std::span<const AblationMode> modes) {
  std::vector<AblationRow> rows;
  for (std::size_t k : k_values) {
    std::optional<GcnModel> learned;  // shared by L and both MP baselines
    auto learned_model = [&]() -> const GcnModel& {
      if (!learned) {
        TrainConfig c = base;
        c.mode = ConstraintMode::None;
        c.prune.reset();
        learned = train(ds, init_model_for(ds, c, k), c).model;
      }
      return *learned;
    };
    auto constrained = [&](ConstraintMode mode) {
      TrainConfig c = base;
      c.mode = mode;
      c.prune.reset();
      auto r = train(ds, init_model_for(ds, c, k), c);
      const auto eff = basis_forward(r.model.basis, r.model.basis.gamma_max);
      const auto sp = sparsity_report(eff.eff, base.sparsity_threshold);
      return AblationRow{k, std::string(mode_name(mode)), r.metrics.mean_accuracy, sp.pruning_rate_percent,
                         sp.target_rate_percent};
    };
    auto pruned = [&](double rate, std::string label) {
      TrainConfig c = base;
      c.mode = ConstraintMode::None;
      c.prune = PruneSpec{rate, base.prune ? base.prune->fine_tune_epochs : 0};
      auto m = magnitude_prune(learned_model(), rate);
      auto r = fine_tune(ds, std::move(m), c, c.resolved_fine_tune_epochs());
      const auto fwd = basis_forward(r.model.basis, r.model.basis.gamma_max);
      const auto sp = sparsity_report(masked_basis(r.model, fwd), ConstraintMode::None, base.sparsity_threshold);
      return AblationRow{k, std::move(label), r.metrics.mean_accuracy, sp.pruning_rate_percent, rate};
    };
    for (auto mode : modes) {
      switch (mode) {
        case AblationMode::H: {
          TrainConfig c = base;
          c.prune.reset();
          auto r = train(ds, init_power_map_model(ds, c, k), c);
          rows.push_back({k, "H", r.metrics.mean_accuracy, std::nullopt, std::nullopt});
          break;
        }
        case AblationMode::L: {
          const auto ev = evaluate(learned_model(), ds, Split::Test);
          rows.push_back({k, "L", ev.mean_class_accuracy, std::nullopt, std::nullopt});
          break;
        }
        case AblationMode::LOrth: rows.push_back(constrained(ConstraintMode::Orth)); break;
        case AblationMode::LStc: rows.push_back(constrained(ConstraintMode::Stoch)); break;
        case AblationMode::LOrthStc: rows.push_back(constrained(ConstraintMode::OrthStoch)); break;
        case AblationMode::LMPOrth:
          rows.push_back(pruned(target_pruning_rate(ConstraintMode::Orth, k, ds.n()), "L+MP@orth"));
          break;
        case AblationMode::LMPStc:
          rows.push_back(pruned(target_pruning_rate(ConstraintMode::OrthStoch, k, ds.n()), "L+MP@stc"));
          break;
      }
    }
  }
  return rows;
}

}  // namespace lwgcn
