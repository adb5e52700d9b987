// Command-line front end: train, eval, prune, gradcheck, bound, ablate.
//
// Options are declared once on the top-level app and fall through from the
// subcommands, so a flat `key = value` config file (--config) can carry any
// of them; explicit flags always win over config values.
//
// Exit codes: 0 ok, 1 check failed, 2 usage / bad input, 3 divergence.
// LWGCN_OUTPUT_ROOT, when set, prefixes relative --out directories.
#pragma once

#include <algorithm>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "lwgcn/checkpoint.hpp"
#include "lwgcn/connectivity.hpp"
#include "lwgcn/gcn.hpp"
#include "lwgcn/log.hpp"
#include "lwgcn/skeleton.hpp"
#include "lwgcn/trainer.hpp"

namespace lwgcn::cli {

enum ExitCode : int { kOk = 0, kCheckFailed = 1, kUsage = 2, kDiverged = 3 };

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Fully merged run description; every field holds a value after resolve().
struct RunSpec {
  std::string command;
  // data
  std::string manifest;  // empty: synthetic
  std::optional<std::size_t> classes;
  std::optional<std::size_t> joints;
  std::size_t per_class = 20;
  double data_noise = 0.05;
  std::optional<std::uint64_t> data_seed;
  std::size_t frames = 32;
  std::size_t chunks = 4;
  bool center = false;
  // model / training
  std::vector<std::size_t> k;
  std::optional<std::size_t> channels;
  std::string mode = "orth+stc";
  std::string activation = "relu";
  TrainConfig train;
  double prune_rate = -1.0;  // < 0: no pruning
  std::size_t fine_tune_epochs = 0;
  // io
  std::string out;
  std::string checkpoint;
  // gradcheck
  std::size_t gc_seeds = 20;
  std::size_t signal_dim = 4;
  double gc_gamma = 2.0;
  double gc_step = 1e-5;
  double gc_tol = 1e-6;
  bool inject_fault = false;
  bool mode_given = false;
  // bound
  std::size_t trials = 1000;
  // ablate
  std::vector<std::string> modes;
};

namespace detail {

inline std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

inline std::size_t single_k(const RunSpec& s, std::size_t fallback) {
  if (s.k.empty()) return fallback;
  if (s.k.size() != 1) throw UsageError("--k takes a single value for '" + s.command + "'");
  return s.k[0];
}

inline ConstraintMode resolve_mode(const std::string& name) {
  const auto m = parse_mode(name);
  if (!m) throw UsageError("unknown --mode '" + name + "' (none, orth, stc, orth+stc)");
  return *m;
}

inline std::filesystem::path output_dir(const RunSpec& s) {
  std::filesystem::path p = s.out.empty() ? std::filesystem::path("runs") / s.command : std::filesystem::path(s.out);
  if (const char* root = std::getenv("LWGCN_OUTPUT_ROOT"); root && *root && p.is_relative())
    p = std::filesystem::path(root) / p;
  std::filesystem::create_directories(p);
  return p;
}

inline Dataset build_dataset(const RunSpec& s) {
  if (s.manifest.empty()) {
    SynthOptions o;
    o.num_classes = s.classes.value_or(5);
    o.n = s.joints.value_or(12);
    o.per_class = s.per_class;
    o.noise = s.data_noise;
    o.seed = s.data_seed.value_or(s.train.seed);
    o.frames = s.frames;
    o.chunks = s.chunks;
    return synth_dataset(o);
  }
  const std::size_t n = s.joints.value_or(21);
  const SkeletonGraph g = n == 21 ? SkeletonGraph::hand21() : SkeletonGraph::chain(n);
  return load_split(s.manifest, g, s.chunks, s.classes, s.center);
}

inline TrainConfig resolved_config(const RunSpec& s) {
  TrainConfig c = s.train;
  c.mode = resolve_mode(s.mode);
  c.channels = s.channels.value_or(16);
  const auto act = parse_activation(s.activation);
  if (!act) throw UsageError("unknown --activation '" + s.activation + "' (relu, identity)");
  c.activation = *act;
  if (s.prune_rate >= 0.0) c.prune = PruneSpec{s.prune_rate, s.fine_tune_epochs};
  c.validate();
  return c;
}

/// key = value echo of the merged spec; loadable again through --config.
inline std::string runspec_text(const RunSpec& s) {
  const TrainConfig& c = s.train;
  std::ostringstream o;
  auto kv = [&o](const char* key, const std::string& v) { o << key << " = " << v << '\n'; };
  auto list = [](const auto& xs) {
    std::ostringstream l;
    l << '[';
    for (std::size_t t = 0; t < xs.size(); ++t) l << (t ? "," : "") << '"' << xs[t] << '"';
    l << ']';
    return l.str();
  };
  o << "# command: " << s.command << '\n';
  if (s.manifest.empty()) {
    kv("synthetic", "true");
  } else {
    kv("fpha", '"' + s.manifest + '"');
  }
  kv("classes", s.classes ? std::to_string(*s.classes) : (s.manifest.empty() ? "5" : "\"from-manifest\""));
  kv("joints", std::to_string(s.joints.value_or(s.manifest.empty() ? 12 : 21)));
  kv("per-class", std::to_string(s.per_class));
  kv("data-noise", num(s.data_noise));
  kv("data-seed", std::to_string(s.data_seed.value_or(c.seed)));
  kv("frames", std::to_string(s.frames));
  kv("chunks", std::to_string(s.chunks));
  kv("center", s.center ? "true" : "false");
  std::vector<std::string> ks;
  for (auto k : s.k) ks.push_back(std::to_string(k));
  if (!ks.empty()) kv("k", list(ks));
  kv("channels", std::to_string(s.channels.value_or(16)));
  kv("mode", '"' + s.mode + '"');
  kv("activation", s.activation);
  kv("epochs", std::to_string(c.max_epochs));
  kv("batch", std::to_string(c.batch_size));
  kv("beta1", num(c.beta1));
  kv("beta2", num(c.beta2));
  kv("adam-eps", num(c.adam_eps));
  kv("lr", num(c.lr_init));
  kv("lr-factor", num(c.lr_factor));
  kv("lr-min", num(c.lr_min));
  kv("lr-max", num(c.lr_max));
  kv("gamma-max", num(c.gamma_max));
  kv("gamma-stoch", num(c.gamma_stoch));
  kv("eps", num(c.epsilon));
  kv("delta", num(c.delta));
  kv("noise", num(c.noise_magnitude));
  kv("no-repair", c.enforce_hypotheses ? "false" : "true");
  kv("seed", std::to_string(c.seed));
  kv("threshold", num(c.sparsity_threshold));
  kv("checkpoint-every", std::to_string(c.checkpoint_every));
  kv("prune-rate", num(s.prune_rate));
  kv("fine-tune-epochs", std::to_string(s.fine_tune_epochs));
  if (!s.checkpoint.empty()) kv("checkpoint", '"' + s.checkpoint + '"');
  if (!s.modes.empty()) kv("modes", list(s.modes));
  return o.str();
}

inline void write_text(const std::filesystem::path& p, const std::string& text) {
  std::ofstream f(p, std::ios::binary);
  if (!f) throw std::runtime_error("cannot write " + p.string());
  f << text;
}

inline void write_metrics_csv(const std::filesystem::path& p, const RunMetrics& m) {
  std::ostringstream o;
  o << "epoch,loss,nu,gamma_eff,max_cross_orth,max_colsum_dev,pruning_rate\n";
  for (const auto& r : m.epochs)
    o << r.epoch << ',' << num(r.loss) << ',' << num(r.nu) << ',' << num(r.gamma_eff) << ',' << num(r.max_cross_orth)
      << ',' << num(r.max_colsum_dev) << ',' << num(r.pruning_rate) << '\n';
  write_text(p, o.str());
}

inline nlohmann::ordered_json per_class_json(const std::vector<std::optional<double>>& pc) {
  auto a = nlohmann::ordered_json::array();
  for (const auto& v : pc) a.push_back(v ? nlohmann::ordered_json(*v) : nlohmann::ordered_json(nullptr));
  return a;
}

inline nlohmann::ordered_json summary_json(const RunSpec& s, const GcnModel& m, const TrainConfig& c,
                                           const RunMetrics& metrics) {
  const double g = m.basis.gamma_max;
  const auto fwd = basis_forward(m.basis, g);
  const Tensor3 a = masked_basis(m, fwd);
  const auto orth = check_epsilon_orth(a, m.basis.epsilon);
  const auto sp = sparsity_report(a, m.basis.mode, c.sparsity_threshold);
  nlohmann::ordered_json j;
  j["command"] = s.command;
  j["mode"] = mode_name(m.basis.mode);
  j["K"] = m.k();
  j["n"] = m.n();
  j["classes"] = m.num_classes();
  j["seed"] = c.seed;
  j["epochs_executed"] = metrics.epochs.size();
  j["mean_class_accuracy"] = metrics.mean_accuracy;
  j["per_class_accuracy"] = per_class_json(metrics.per_class);
  j["threshold"] = c.sparsity_threshold;
  j["pruning_rate"] = sp.pruning_rate_percent;
  j["target_pruning_rate"] = sp.target_rate_percent;
  j["gamma_max"] = g;
  j["epsilon"] = m.basis.epsilon;
  j["max_cross_orth"] = orth.max_violation;
  j["epsilon_orthogonal"] = orth.ok;
  j["max_colsum_dev"] = max_colsum_deviation(a);
  j["pruned"] = m.mask.has_value();
  j["final_loss"] = metrics.epochs.empty() ? nlohmann::ordered_json(nullptr) : nlohmann::ordered_json(metrics.epochs.back().loss);
  j["speed_definition"] = metrics.speed_definition;
  return j;
}

inline TrainHooks checkpoint_hooks(const TrainConfig& c, const std::filesystem::path& dir) {
  TrainHooks h;
  if (c.checkpoint_every > 0)
    h.on_epoch = [every = c.checkpoint_every, dir](const EpochRecord& r, const GcnModel& m) {
      if (r.epoch % every == 0) save_model(dir / ("checkpoint_epoch_" + std::to_string(r.epoch) + ".json"), m, r.epoch);
    };
  return h;
}

inline int finish_training(const RunSpec& s, const TrainConfig& c, const TrainResult& r, std::size_t epoch,
                           const std::filesystem::path& dir, std::ostream& out) {
  save_model(dir / "checkpoint.json", r.model, epoch);
  write_metrics_csv(dir / "metrics.csv", r.metrics);
  const auto summary = summary_json(s, r.model, c, r.metrics);
  write_text(dir / "summary.json", summary.dump(1) + "\n");
  out << "mode=" << summary["mode"].get<std::string>() << " K=" << r.model.k()
      << " accuracy=" << num(r.metrics.mean_accuracy) << " pruning_rate=" << num(summary["pruning_rate"].get<double>())
      << " target=" << num(summary["target_pruning_rate"].get<double>()) << " out=" << dir.string() << '\n';
  return kOk;
}

}  // namespace detail

// ---------------------------------------------------------------------------
// Subcommands

inline int cmd_train(const RunSpec& s, std::ostream& out) {
  const TrainConfig c = detail::resolved_config(s);
  const Dataset ds = detail::build_dataset(s);
  const auto dir = detail::output_dir(s);
  detail::write_text(dir / "runspec.txt", detail::runspec_text(s));
  GcnModel model = init_model_for(ds, c, detail::single_k(s, 4));
  auto r = train(ds, std::move(model), c, detail::checkpoint_hooks(c, dir));
  return detail::finish_training(s, c, r, r.metrics.epochs.size(), dir, out);
}

inline int cmd_eval(const RunSpec& s, std::ostream& out) {
  const auto dir = detail::output_dir(s);
  const auto ckpt = s.checkpoint.empty() ? dir / "checkpoint.json" : std::filesystem::path(s.checkpoint);
  const auto loaded = load_model(ckpt);
  const Dataset ds = detail::build_dataset(s);
  if (loaded.model.n() != ds.n() || loaded.model.signal_dim() != ds.signal_dim() ||
      loaded.model.num_classes() != ds.num_classes)
    throw ShapeError("eval: checkpoint shape does not match the dataset");
  const auto ev = evaluate(loaded.model, ds, Split::Test);
  nlohmann::ordered_json j;
  j["checkpoint"] = ckpt.string();
  j["epoch"] = loaded.epoch;
  j["mean_class_accuracy"] = ev.mean_class_accuracy;
  j["per_class_accuracy"] = detail::per_class_json(ev.per_class);
  j["confusion"] = ev.confusion;
  detail::write_text(dir / "eval.json", j.dump(1) + "\n");
  out << "accuracy=" << detail::num(ev.mean_class_accuracy) << '\n';
  return kOk;
}

inline int cmd_prune(const RunSpec& s, std::ostream& out) {
  if (s.checkpoint.empty()) throw UsageError("prune: --checkpoint is required");
  if (s.prune_rate < 0.0) throw UsageError("prune: --prune-rate is required");
  const TrainConfig c = detail::resolved_config(s);
  auto loaded = load_model(s.checkpoint);
  const Dataset ds = detail::build_dataset(s);
  const auto dir = detail::output_dir(s);
  detail::write_text(dir / "runspec.txt", detail::runspec_text(s));
  auto pruned = magnitude_prune(loaded.model, s.prune_rate);
  const std::size_t epochs = c.resolved_fine_tune_epochs();
  auto r = fine_tune(ds, std::move(pruned), c, epochs, detail::checkpoint_hooks(c, dir), loaded.epoch);
  return detail::finish_training(s, c, r, loaded.epoch + epochs, dir, out);
}

inline int cmd_gradcheck(const RunSpec& s, std::ostream& out) {
  std::vector<ConstraintMode> modes{ConstraintMode::None, ConstraintMode::Orth, ConstraintMode::Stoch,
                                    ConstraintMode::OrthStoch};
  if (s.mode_given) modes = {detail::resolve_mode(s.mode)};
  const ModelShape shape{detail::single_k(s, 3), s.joints.value_or(5), s.signal_dim, s.channels.value_or(3),
                         s.classes.value_or(3)};
  const auto act = parse_activation(s.activation);
  if (!act) throw UsageError("unknown --activation '" + s.activation + "'");
  std::function<void(Gradients&)> tamper;
  if (s.inject_fault)
    tamper = [](Gradients& g) {
      for (double& v : g.d_head.data()) v = -v;
    };
  bool ok = true;
  for (auto mode : modes) {
    std::vector<double> worst(4, 0.0);
    for (std::size_t seed = 0; seed < s.gc_seeds; ++seed) {
      const auto inst = random_instance(shape, mode, s.gc_gamma, s.train.seed + seed, *act);
      for (const auto& e : gradient_check(inst.model, inst.u, inst.label, s.gc_gamma, s.gc_step, tamper))
        worst[static_cast<std::size_t>(e.group)] = std::max(worst[static_cast<std::size_t>(e.group)], e.rel_error);
    }
    for (auto g : {ParamGroup::Ahat, ParamGroup::Filters, ParamGroup::Head, ParamGroup::Bias}) {
      const double e = worst[static_cast<std::size_t>(g)];
      const bool pass = e <= s.gc_tol;
      ok = ok && pass;
      out << mode_name(mode) << ' ' << group_name(g) << " max_rel_error=" << detail::num(e)
          << (pass ? " ok" : " FAIL") << '\n';
    }
  }
  return ok ? kOk : kCheckFailed;
}

inline int cmd_bound(const RunSpec& s, std::ostream& out) {
  const std::size_t k = detail::single_k(s, 2);
  const double delta = s.train.delta, eps = s.train.epsilon;
  const double gamma = epsilon_orth_bound(k, delta, eps);
  std::mt19937_64 rng(s.train.seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  const std::size_t n = s.joints.value_or(8);
  std::size_t passed = 0;
  double worst = 0.0;
  for (std::size_t t = 0; t < s.trials; ++t) {
    Tensor3 a(k, n, n);
    for (double& v : a.data()) v = unit(rng);
    enforce_delta_gap(a, delta);
    const auto r = check_epsilon_orth(crispmax_forward(a, gamma), eps);
    passed += r.ok;
    worst = std::max(worst, r.max_violation);
  }
  out << "bound=" << detail::num(gamma) << '\n';
  out << "verification: " << passed << '/' << s.trials << " delta-gapped bases " << eps
      << "-orthogonal at gamma=bound (worst " << detail::num(worst) << ")\n";
  return passed == s.trials ? kOk : kCheckFailed;
}

inline int cmd_ablate(const RunSpec& s, std::ostream& out) {
  const TrainConfig c = detail::resolved_config(s);
  const Dataset ds = detail::build_dataset(s);
  const auto dir = detail::output_dir(s);
  detail::write_text(dir / "runspec.txt", detail::runspec_text(s));
  std::vector<std::size_t> ks = s.k.empty() ? std::vector<std::size_t>{2, 4, 8} : s.k;
  std::vector<AblationMode> modes;
  if (s.modes.empty()) modes = table_modes();
  for (const auto& name : s.modes) {
    const auto m = parse_ablation_mode(name);
    if (!m) throw UsageError("unknown ablation mode '" + name + "' (H, L, L+orth, L+MP@orth, L+stc, L+orth+stc, L+MP@stc)");
    modes.push_back(*m);
  }
  const auto rows = run_ablation(ds, c, ks, modes);
  std::ostringstream csv;
  csv << "K,mode,accuracy,pruning_rate,target_rate\n";
  auto j = nlohmann::ordered_json::array();
  for (const auto& r : rows) {
    const std::string rate = r.pruning_rate ? detail::num(*r.pruning_rate) : "none";
    const std::string target = r.target_rate ? detail::num(*r.target_rate) : "none";
    csv << r.k << ',' << r.mode << ',' << detail::num(r.accuracy) << ',' << rate << ',' << target << '\n';
    nlohmann::ordered_json row;
    row["K"] = r.k;
    row["mode"] = r.mode;
    row["accuracy"] = r.accuracy;
    row["pruning_rate"] = r.pruning_rate ? nlohmann::ordered_json(*r.pruning_rate) : nlohmann::ordered_json("none");
    row["target_rate"] = r.target_rate ? nlohmann::ordered_json(*r.target_rate) : nlohmann::ordered_json("none");
    j.push_back(std::move(row));
  }
  detail::write_text(dir / "ablation.csv", csv.str());
  detail::write_text(dir / "ablation.json", j.dump(1) + "\n");
  out << csv.str();
  return kOk;
}

// ---------------------------------------------------------------------------
// Parsing

inline int run_cli(std::vector<std::string> args, std::ostream& out = std::cout, std::ostream& err = std::cerr) {
  CLI::App app{"lwgcn: lightweight GCNs with learned, constrained connectivity", "lwgcn"};
  app.set_config("--config", "", "flat key = value config file (keys are the long flag names)");
  app.allow_config_extras(CLI::config_extras_mode::error);
  app.require_subcommand(1, 1);

  RunSpec s;
  TrainConfig& c = s.train;
  double prune_rate = -1.0;

  auto* synth = app.add_flag("--synthetic", "use the built-in synthetic gesture task (default)")->group("Data");
  auto* fpha = app.add_option("--fpha", s.manifest, "FPHA-style manifest CSV (path,label,split)")->group("Data");
  synth->excludes(fpha);
  fpha->excludes(synth);
  app.add_option("--classes", s.classes, "number of classes (synthetic default 5)")->group("Data");
  app.add_option("--n,--joints", s.joints, "joints per skeleton (synthetic 12, FPHA 21)")->group("Data");
  app.add_option("--per-class", s.per_class, "synthetic sequences per class")->group("Data");
  app.add_option("--data-noise", s.data_noise, "synthetic coordinate noise sigma")->group("Data");
  app.add_option("--data-seed", s.data_seed, "synthetic data seed (default: --seed)")->group("Data");
  app.add_option("--frames", s.frames, "synthetic frames per sequence")->group("Data");
  app.add_option("--chunks", s.chunks, "temporal chunks M")->group("Data");
  app.add_flag("--center", s.center, "subtract each sequence's mean position")->group("Data");

  app.add_option("--k", s.k, "basis size K (ablate: comma list)")->delimiter(',')->group("Model");
  app.add_option("--channels", s.channels, "filters per block C (default 16)")->group("Model");
  auto* mode_opt = app.add_option("--mode", s.mode, "none | orth | stc | orth+stc")->group("Model");
  app.add_option("--activation", s.activation, "relu | identity")->group("Model");

  app.add_option("--epochs", c.max_epochs, "training epochs")->group("Training");
  app.add_option("--batch", c.batch_size, "batch size")->group("Training");
  app.add_option("--beta1", c.beta1)->group("Training");
  app.add_option("--beta2", c.beta2)->group("Training");
  app.add_option("--adam-eps", c.adam_eps)->group("Training");
  app.add_option("--lr", c.lr_init, "initial learning rate")->group("Training");
  app.add_option("--lr-factor", c.lr_factor)->group("Training");
  app.add_option("--lr-min", c.lr_min)->group("Training");
  app.add_option("--lr-max", c.lr_max)->group("Training");
  app.add_option("--gamma-max", c.gamma_max, "final crispmax sharpness (0: orthogonality bound)")->group("Training");
  app.add_option("--gamma-stoch", c.gamma_stoch, "final column-stage sharpness (0: same as gamma-max)")
      ->group("Training");
  app.add_option("--eps", c.epsilon, "orthogonality tolerance epsilon")->group("Training");
  app.add_option("--delta", c.delta, "gap delta")->group("Training");
  app.add_option("--noise", c.noise_magnitude, "per-epoch uniform noise on Ahat (<0: delta/2)")->group("Training");
  bool no_repair = false;
  app.add_flag("--no-repair", no_repair, "do not restore the gap hypotheses after noise")->group("Training");
  app.add_option("--seed", c.seed, "run seed")->group("Training");
  app.add_option("--threshold", c.sparsity_threshold, "sparsity threshold")->group("Training");
  app.add_option("--checkpoint-every", c.checkpoint_every, "periodic checkpoint interval (0: off)")->group("Training");
  app.add_option("--prune-rate", prune_rate, "magnitude-prune percentage, then fine-tune")->group("Training");
  app.add_option("--fine-tune-epochs", s.fine_tune_epochs, "fine-tune epochs (0: 10% of --epochs)")->group("Training");

  app.add_option("--out", s.out, "output directory")->group("IO");
  app.add_option("--checkpoint", s.checkpoint, "input checkpoint (eval, prune)")->group("IO");

  app.add_option("--seeds", s.gc_seeds, "gradcheck: random instances per mode")->group("Checks");
  app.add_option("--signal-dim", s.signal_dim, "gradcheck: signal dimension s")->group("Checks");
  app.add_option("--gamma", s.gc_gamma, "gradcheck: sharpness used for the check")->group("Checks");
  app.add_option("--step", s.gc_step, "gradcheck: finite-difference step")->group("Checks");
  app.add_option("--tol", s.gc_tol, "gradcheck: relative error tolerance")->group("Checks");
  app.add_flag("--inject-fault", s.inject_fault, "gradcheck: corrupt the analytic gradient (negative control)")
      ->group("Checks");
  app.add_option("--trials", s.trials, "bound: random verification trials")->group("Checks");
  app.add_option("--modes", s.modes, "ablate: comma list of H, L, L+orth, L+MP@orth, L+stc, L+orth+stc, L+MP@stc")
      ->delimiter(',')
      ->group("Checks");

  const std::vector<std::pair<std::string, std::string>> commands{
      {"train", "train a model and write checkpoint, metrics and summary"},
      {"eval", "evaluate a checkpoint on the test split"},
      {"prune", "magnitude-prune a checkpoint's effective basis and fine-tune"},
      {"gradcheck", "compare analytic gradients with central differences"},
      {"bound", "print the orthogonality bound on gamma and verify it empirically"},
      {"ablate", "run the (K, mode) ablation grid"},
  };
  for (const auto& [name, help] : commands) app.add_subcommand(name, help)->fallthrough();

  std::reverse(args.begin(), args.end());
  try {
    app.parse(args);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e, out, err);
    return rc == 0 ? kOk : kUsage;
  }

  s.command = app.get_subcommands().front()->get_name();
  s.mode_given = mode_opt->count() > 0;
  s.prune_rate = prune_rate;
  c.enforce_hypotheses = !no_repair;

  try {
    if (s.command == "train") return cmd_train(s, out);
    if (s.command == "eval") return cmd_eval(s, out);
    if (s.command == "prune") return cmd_prune(s, out);
    if (s.command == "gradcheck") return cmd_gradcheck(s, out);
    if (s.command == "bound") return cmd_bound(s, out);
    if (s.command == "ablate") return cmd_ablate(s, out);
  } catch (const DivergenceError& e) {
    err << "error: " << e.what() << "\nstate: " << e.state << '\n';
    return kDiverged;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kUsage;
  }
  return kUsage;
}

inline int run_cli(int argc, const char* const* argv, std::ostream& out = std::cout, std::ostream& err = std::cerr) {
  std::vector<std::string> args;
  for (int i = 1; i < argc; ++i) args.emplace_back(argv[i]);
  return run_cli(std::move(args), out, err);
}

}  // namespace lwgcn::cli
