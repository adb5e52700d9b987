// Versioned JSON checkpoints. Field order is fixed: format tag, version,
// mode, K, n, the gamma values, then row-major payloads.
#pragma once

#include <filesystem>
#include <fstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "json.hpp"

#include "lwgcn/connectivity.hpp"
#include "lwgcn/gcn.hpp"

namespace lwgcn {

struct CheckpointError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

inline constexpr int kCheckpointVersion = 1;

namespace detail {

using ojson = nlohmann::ordered_json;

inline std::vector<double> to_vec(std::span<const double> s) { return {s.begin(), s.end()}; }

inline ConstraintMode mode_from(const ojson& j) {
  const auto m = parse_mode(j.at("mode").get<std::string>());
  if (!m) throw CheckpointError("checkpoint: unknown mode '" + j.at("mode").get<std::string>() + "'");
  return *m;
}

inline void check_header(const ojson& j, std::string_view kind) {
  if (!j.is_object() || j.value("format", "") != kind)
    throw CheckpointError("checkpoint: expected format '" + std::string(kind) + "'");
  const int v = j.at("version").get<int>();
  if (v != kCheckpointVersion)
    throw CheckpointError("checkpoint: unsupported version " + std::to_string(v));
}

inline Tensor3 tensor_from(const ojson& j, std::size_t k, std::size_t n, const char* key) {
  auto v = j.at(key).get<std::vector<double>>();
  if (v.size() != k * n * n) throw CheckpointError(std::string("checkpoint: '") + key + "' has wrong length");
  return Tensor3(k, n, n, std::move(v));
}

}  // namespace detail

inline nlohmann::ordered_json to_json(const AdjacencyBasis& b) {
  detail::ojson j;
  j["format"] = "lwgcn-basis";
  j["version"] = kCheckpointVersion;
  j["mode"] = mode_name(b.mode);
  j["K"] = b.k();
  j["n"] = b.n();
  j["gamma_max"] = b.gamma_max;
  j["gamma_stoch"] = b.gamma_stoch;
  j["epsilon"] = b.epsilon;
  j["delta"] = b.delta;
  j["ahat"] = detail::to_vec(b.ahat.data());
  return j;
}

inline AdjacencyBasis basis_from_json(const nlohmann::ordered_json& j) {
  try {
    detail::check_header(j, "lwgcn-basis");
    AdjacencyBasis b;
    b.mode = detail::mode_from(j);
    const auto k = j.at("K").get<std::size_t>(), n = j.at("n").get<std::size_t>();
    b.gamma_max = j.at("gamma_max").get<double>();
    b.gamma_stoch = j.at("gamma_stoch").get<double>();
    b.epsilon = j.at("epsilon").get<double>();
    b.delta = j.at("delta").get<double>();
    b.ahat = detail::tensor_from(j, k, n, "ahat");
    b.validate();
    return b;
  } catch (const nlohmann::json::exception& e) {
    throw CheckpointError(std::string("checkpoint: ") + e.what());
  }
}

inline nlohmann::ordered_json to_json(const EffectiveBasis& e) {
  detail::ojson j;
  j["format"] = "lwgcn-effective";
  j["version"] = kCheckpointVersion;
  j["mode"] = mode_name(e.mode);
  j["K"] = e.a.k();
  j["n"] = e.a.rows();
  j["gamma_eff"] = e.gamma_eff;
  j["a"] = detail::to_vec(e.a.data());
  return j;
}

inline EffectiveBasis effective_from_json(const nlohmann::ordered_json& j) {
  try {
    detail::check_header(j, "lwgcn-effective");
    EffectiveBasis e;
    e.mode = detail::mode_from(j);
    const auto k = j.at("K").get<std::size_t>(), n = j.at("n").get<std::size_t>();
    e.gamma_eff = j.at("gamma_eff").get<double>();
    e.a = detail::tensor_from(j, k, n, "a");
    return e;
  } catch (const nlohmann::json::exception& ex) {
    throw CheckpointError(std::string("checkpoint: ") + ex.what());
  }
}

struct ModelCheckpoint {
  GcnModel model;
  std::size_t epoch = 0;
};

inline nlohmann::ordered_json to_json(const GcnModel& m, std::size_t epoch) {
  m.validate();
  detail::ojson j;
  j["format"] = "lwgcn-model";
  j["version"] = kCheckpointVersion;
  j["mode"] = mode_name(m.basis.mode);
  j["K"] = m.k();
  j["n"] = m.n();
  j["gamma_max"] = m.basis.gamma_max;
  j["gamma_stoch"] = m.basis.gamma_stoch;
  j["epsilon"] = m.basis.epsilon;
  j["delta"] = m.basis.delta;
  j["ahat"] = detail::to_vec(m.basis.ahat.data());
  j["signal_dim"] = m.signal_dim();
  j["channels"] = m.channels();
  j["classes"] = m.num_classes();
  j["activation"] = activation_name(m.activation);
  j["learn_basis"] = m.learn_basis;
  j["epoch"] = epoch;
  auto filters = detail::ojson::array();
  for (const auto& w : m.filters) filters.push_back(detail::to_vec(w.data()));
  j["filters"] = std::move(filters);
  j["head"] = detail::to_vec(m.head.data());
  j["bias"] = m.bias;
  j["mask"] = m.mask ? detail::ojson(detail::to_vec(m.mask->data())) : detail::ojson(nullptr);
  return j;
}

inline ModelCheckpoint model_from_json(const nlohmann::ordered_json& j) {
  try {
    detail::check_header(j, "lwgcn-model");
    ModelCheckpoint c;
    GcnModel& m = c.model;
    m.basis.mode = detail::mode_from(j);
    const auto k = j.at("K").get<std::size_t>(), n = j.at("n").get<std::size_t>();
    m.basis.gamma_max = j.at("gamma_max").get<double>();
    m.basis.gamma_stoch = j.at("gamma_stoch").get<double>();
    m.basis.epsilon = j.at("epsilon").get<double>();
    m.basis.delta = j.at("delta").get<double>();
    m.basis.ahat = detail::tensor_from(j, k, n, "ahat");
    const auto s = j.at("signal_dim").get<std::size_t>();
    const auto ch = j.at("channels").get<std::size_t>();
    const auto classes = j.at("classes").get<std::size_t>();
    const auto act = parse_activation(j.at("activation").get<std::string>());
    if (!act) throw CheckpointError("checkpoint: unknown activation");
    m.activation = *act;
    m.learn_basis = j.at("learn_basis").get<bool>();
    c.epoch = j.at("epoch").get<std::size_t>();
    const auto& fs = j.at("filters");
    if (fs.size() != k) throw CheckpointError("checkpoint: expected one filter matrix per basis matrix");
    for (const auto& f : fs) {
      auto v = f.get<std::vector<double>>();
      if (v.size() != s * ch) throw CheckpointError("checkpoint: filter has wrong length");
      m.filters.emplace_back(s, ch, std::move(v));
    }
    auto head = j.at("head").get<std::vector<double>>();
    if (head.size() != n * ch * classes) throw CheckpointError("checkpoint: head has wrong length");
    m.head = Mat(n * ch, classes, std::move(head));
    m.bias = j.at("bias").get<std::vector<double>>();
    if (!j.at("mask").is_null()) m.mask = detail::tensor_from(j, k, n, "mask");
    m.validate();
    return c;
  } catch (const nlohmann::json::exception& e) {
    throw CheckpointError(std::string("checkpoint: ") + e.what());
  }
}

inline void write_json_file(const std::filesystem::path& path, const nlohmann::ordered_json& j) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw CheckpointError("cannot write " + path.string());
  out << j.dump(1) << '\n';
  if (!out) throw CheckpointError("write failed: " + path.string());
}

inline nlohmann::ordered_json read_json_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw CheckpointError("cannot open " + path.string());
  try {
    return nlohmann::ordered_json::parse(in);
  } catch (const nlohmann::json::exception& e) {
    throw CheckpointError(path.string() + ": " + e.what());
  }
}

inline void save_model(const std::filesystem::path& path, const GcnModel& m, std::size_t epoch) {
  write_json_file(path, to_json(m, epoch));
}

inline ModelCheckpoint load_model(const std::filesystem::path& path) { return model_from_json(read_json_file(path)); }

}  // namespace lwgcn
