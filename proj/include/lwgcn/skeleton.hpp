// Skeleton graphs, temporal chunking of joint trajectories, handcrafted
// adjacency baselines, sequence/manifest ingestion and a seeded synthetic
// gesture generator.
#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <filesystem>
#include <fstream>
#include <map>
#include <numbers>
#include <optional>
#include <random>
#include <set>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "lwgcn/numkit.hpp"

namespace lwgcn {

struct ParseError : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct FormatError : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct ManifestError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct SkeletonGraph {
  std::size_t n = 0;
  std::vector<std::pair<std::size_t, std::size_t>> edges;
  std::vector<std::string> node_names;

  void validate() const {
    for (auto [a, b] : edges) {
      if (a >= n || b >= n) throw InputError("SkeletonGraph: edge endpoint out of range");
      if (a == b) throw InputError("SkeletonGraph: self-loop in edge list");
    }
    if (!node_names.empty() && node_names.size() != n) throw InputError("SkeletonGraph: node_names size != n");
  }

  /// Simple chain 0-1-...-(n-1).
  static SkeletonGraph chain(std::size_t n) {
    SkeletonGraph g;
    g.n = n;
    for (std::size_t i = 0; i + 1 < n; ++i) g.edges.emplace_back(i, i + 1);
    return g;
  }

  /// The 21-joint hand layout used by FPHA skeleton files: wrist, then the
  /// MCP joints of the five fingers, then PIP, DIP and TIP rows.
  static SkeletonGraph hand21() {
    SkeletonGraph g;
    g.n = 21;
    for (std::size_t f = 0; f < 5; ++f) {
      const std::size_t mcp = 1 + f, pip = 6 + 3 * f, dip = pip + 1, tip = pip + 2;
      g.edges.emplace_back(0, mcp);
      g.edges.emplace_back(mcp, pip);
      g.edges.emplace_back(pip, dip);
      g.edges.emplace_back(dip, tip);
    }
    return g;
  }
};

using Point3 = std::array<double, 3>;

struct Trajectory {
  std::vector<Point3> points;
  std::vector<double> times;  // same length as points, nondecreasing

  static Trajectory uniform(std::vector<Point3> pts) {
    Trajectory t;
    t.times.resize(pts.size());
    for (std::size_t i = 0; i < pts.size(); ++i) t.times[i] = static_cast<double>(i);
    t.points = std::move(pts);
    return t;
  }
};

struct GraphSample {
  Mat u;  // s x n, s = 3m
  std::size_t label = 0;
  std::string sequence_id;
};

struct Dataset {
  std::vector<GraphSample> samples;
  SkeletonGraph graph;
  std::size_t num_classes = 0;
  std::vector<std::size_t> train;
  std::vector<std::size_t> test;

  std::size_t n() const noexcept { return graph.n; }
  std::size_t signal_dim() const noexcept { return samples.empty() ? 0 : samples[0].u.rows(); }

  void validate() const {
    std::set<std::size_t> seen;
    for (auto idx : {&train, &test})
      for (std::size_t i : *idx) {
        if (i >= samples.size()) throw ManifestError("Dataset: split index out of range");
        if (!seen.insert(i).second) throw ManifestError("Dataset: split indices overlap");
      }
    for (const auto& s : samples)
      if (s.label >= num_classes) throw ManifestError("Dataset: label out of range");
  }
};

/// Splits [t_first, t_last] into m equal intervals, assigns each point by its
/// timestamp, and concatenates the per-interval coordinate means. An empty
/// interval repeats the previous mean; a leading empty interval uses the
/// whole-sequence mean.
inline std::vector<double> temporal_chunking(const Trajectory& traj, std::size_t m) {
  if (traj.points.empty()) throw InputError("temporal_chunking: empty trajectory");
  if (m == 0) throw InputError("temporal_chunking: need at least one chunk");
  if (traj.times.size() != traj.points.size()) throw InputError("temporal_chunking: times/points length mismatch");
  for (const auto& p : traj.points)
    for (double c : p)
      if (!std::isfinite(c)) throw InputError("temporal_chunking: non-finite coordinate");

  const double t0 = traj.times.front();
  const double dur = traj.times.back() - t0;
  std::vector<Point3> sums(m, Point3{0, 0, 0});
  std::vector<std::size_t> counts(m, 0);
  Point3 total{0, 0, 0};
  for (std::size_t p = 0; p < traj.points.size(); ++p) {
    std::size_t c = 0;
    if (dur > 0.0) {
      const double pos = (traj.times[p] - t0) * static_cast<double>(m) / dur;
      c = std::min(m - 1, static_cast<std::size_t>(std::max(0.0, std::floor(pos))));
    }
    for (int d = 0; d < 3; ++d) {
      sums[c][d] += traj.points[p][d];
      total[d] += traj.points[p][d];
    }
    ++counts[c];
  }
  std::vector<double> out(3 * m);
  Point3 prev;
  for (int d = 0; d < 3; ++d) prev[d] = total[d] / static_cast<double>(traj.points.size());
  for (std::size_t c = 0; c < m; ++c) {
    if (counts[c] > 0)
      for (int d = 0; d < 3; ++d) prev[d] = sums[c][d] / static_cast<double>(counts[c]);
    for (int d = 0; d < 3; ++d) out[3 * c + d] = prev[d];
  }
  return out;
}

/// Symmetric 0/1 adjacency plus self-loops, columns normalized to sum to one.
inline Mat handcrafted_adjacency(const SkeletonGraph& g) {
  g.validate();
  Mat a = Mat::identity(g.n);
  for (auto [i, j] : g.edges) {
    a(i, j) = 1.0;
    a(j, i) = 1.0;
  }
  const auto cs = colsum(a);
  for (std::size_t i = 0; i < g.n; ++i)
    for (std::size_t j = 0; j < g.n; ++j) a(i, j) /= cs[j];
  return a;
}

/// (A^(1), ..., A^(k)) with A^(0) = I and A^(r) = A^(r-1) A.
inline Tensor3 power_map_basis(const Mat& a, std::size_t k) {
  if (a.rows() != a.cols()) throw ShapeError("power_map_basis: matrix must be square");
  if (k == 0) throw InputError("power_map_basis: k must be >= 1");
  Tensor3 out(k, a.rows(), a.cols());
  Mat p = Mat::identity(a.rows());
  for (std::size_t r = 0; r < k; ++r) {
    p = matmul(p, a);
    out.set_slice(r, p);
  }
  return out;
}

// ---------------------------------------------------------------------------
// Sequence files: one frame per line, 3n whitespace-separated reals
// (joint 0 xyz, joint 1 xyz, ...). Blank lines are skipped.

inline std::vector<std::vector<double>> read_frames(std::istream& in, std::size_t n, const std::string& name) {
  std::vector<std::vector<double>> frames;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    std::istringstream ls(line);
    std::vector<double> vals;
    std::string tok;
    while (ls >> tok) {
      std::size_t used = 0;
      double v = 0.0;
      try {
        v = std::stod(tok, &used);
      } catch (const std::exception&) {
        used = 0;
      }
      if (used != tok.size() || !std::isfinite(v))
        throw ParseError(name + ":" + std::to_string(lineno) + ": malformed value '" + tok + "'");
      vals.push_back(v);
    }
    if (vals.size() != 3 * n)
      throw FormatError(name + ":" + std::to_string(lineno) + ": frame has " + std::to_string(vals.size()) +
                        " values, expected " + std::to_string(3 * n));
    frames.push_back(std::move(vals));
  }
  if (frames.empty()) throw FormatError(name + ": no frames");
  return frames;
}

/// Builds the s x n node signal from frames; optionally subtracts the
/// per-sequence centroid first.
inline Mat frames_to_signal(const std::vector<std::vector<double>>& frames, std::size_t n, std::size_t m,
                            bool center = false) {
  Point3 centroid{0, 0, 0};
  if (center) {
    for (const auto& f : frames)
      for (std::size_t j = 0; j < n; ++j)
        for (int d = 0; d < 3; ++d) centroid[d] += f[3 * j + d];
    for (double& c : centroid) c /= static_cast<double>(frames.size() * n);
  }
  Mat u(3 * m, n);
  for (std::size_t j = 0; j < n; ++j) {
    std::vector<Point3> pts;
    pts.reserve(frames.size());
    for (const auto& f : frames)
      pts.push_back({f[3 * j] - centroid[0], f[3 * j + 1] - centroid[1], f[3 * j + 2] - centroid[2]});
    const auto psi = temporal_chunking(Trajectory::uniform(std::move(pts)), m);
    for (std::size_t r = 0; r < psi.size(); ++r) u(r, j) = psi[r];
  }
  return u;
}

inline GraphSample load_fpha_sequence(const std::filesystem::path& path, const SkeletonGraph& skeleton,
                                      std::size_t m, bool center = false) {
  std::ifstream in(path);
  if (!in) throw InputError("load_fpha_sequence: cannot open " + path.string());
  GraphSample s;
  s.u = frames_to_signal(read_frames(in, skeleton.n, path.string()), skeleton.n, m, center);
  s.sequence_id = path.string();
  return s;
}

inline void write_sequence(const std::filesystem::path& path, const std::vector<std::vector<double>>& frames) {
  std::ofstream out(path);
  if (!out) throw InputError("write_sequence: cannot open " + path.string());
  out.precision(17);
  for (const auto& f : frames) {
    for (std::size_t t = 0; t < f.size(); ++t) out << (t ? " " : "") << f[t];
    out << '\n';
  }
}

// ---------------------------------------------------------------------------
// Manifest: CSV with header `path,label,split`; split is train|test; paths
// are relative to the manifest's directory unless absolute.

struct ManifestRow {
  std::string path;
  std::size_t label = 0;
  bool train = true;
};

inline std::vector<ManifestRow> read_manifest(const std::filesystem::path& manifest,
                                              std::optional<std::size_t> num_classes = std::nullopt) {
  std::ifstream in(manifest);
  if (!in) throw ManifestError("cannot open manifest " + manifest.string());
  std::string line;
  if (!std::getline(in, line)) throw ManifestError("empty manifest");
  if (!line.empty() && line.back() == '\r') line.pop_back();
  if (line != "path,label,split") throw ManifestError("manifest header must be 'path,label,split'");
  std::vector<ManifestRow> rows;
  std::size_t lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    const auto c1 = line.find(','), c2 = line.rfind(',');
    const auto where = manifest.string() + ":" + std::to_string(lineno);
    if (c1 == std::string::npos || c1 == c2) throw ManifestError(where + ": expected 3 fields");
    ManifestRow r;
    r.path = line.substr(0, c1);
    const auto label = line.substr(c1 + 1, c2 - c1 - 1);
    const auto split = line.substr(c2 + 1);
    std::size_t used = 0;
    long long lv = -1;
    try {
      lv = std::stoll(label, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used != label.size() || label.empty() || lv < 0) throw ManifestError(where + ": unknown label '" + label + "'");
    r.label = static_cast<std::size_t>(lv);
    if (num_classes && r.label >= *num_classes) throw ManifestError(where + ": unknown label '" + label + "'");
    if (split == "train") {
      r.train = true;
    } else if (split == "test") {
      r.train = false;
    } else {
      throw ManifestError(where + ": split must be train or test");
    }
    rows.push_back(std::move(r));
  }
  return rows;
}

/// Loads every sequence listed in the manifest. The resulting Dataset does not
/// depend on row order: samples are ordered by (split, path).
inline Dataset load_split(const std::filesystem::path& manifest, const SkeletonGraph& skeleton, std::size_t m,
                          std::optional<std::size_t> num_classes = std::nullopt, bool center = false) {
  auto rows = read_manifest(manifest, num_classes);
  std::sort(rows.begin(), rows.end(), [](const ManifestRow& a, const ManifestRow& b) {
    return std::pair(!a.train, a.path) < std::pair(!b.train, b.path);
  });
  std::set<std::string> seen;
  for (const auto& r : rows)
    if (!seen.insert(r.path).second) throw ManifestError("sequence listed twice in manifest: " + r.path);

  Dataset ds;
  ds.graph = skeleton;
  std::size_t max_label = 0;
  const auto base = manifest.parent_path();
  for (const auto& r : rows) {
    std::filesystem::path p(r.path);
    if (p.is_relative()) p = base / p;
    auto s = load_fpha_sequence(p, skeleton, m, center);
    s.label = r.label;
    s.sequence_id = r.path;
    (r.train ? ds.train : ds.test).push_back(ds.samples.size());
    ds.samples.push_back(std::move(s));
    max_label = std::max(max_label, r.label);
  }
  if (ds.test.empty()) throw ManifestError("manifest has no test sequences");
  if (ds.train.empty()) throw ManifestError("manifest has no train sequences");
  ds.num_classes = num_classes.value_or(max_label + 1);
  ds.validate();
  return ds;
}

// ---------------------------------------------------------------------------
// Synthetic gestures

struct SynthOptions {
  std::size_t num_classes = 5;
  std::size_t n = 12;
  std::size_t per_class = 20;
  double noise = 0.05;
  std::uint64_t seed = 0;
  std::size_t frames = 32;
  std::size_t chunks = 4;
};

/// Chain-plus-random-edges skeleton; each class moves its own random subset
/// of joints sinusoidally, samples differ only by Gaussian coordinate noise.
/// Within a class, even-indexed samples go to train and odd ones to test.
inline Dataset synth_dataset(const SynthOptions& o) {
  if (o.num_classes < 2 || o.n < 2 || o.per_class < 2)
    throw InputError("synth_dataset: need num_classes >= 2, n >= 2, per_class >= 2");
  std::mt19937_64 rng(o.seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);

  Dataset ds;
  ds.num_classes = o.num_classes;
  ds.graph = SkeletonGraph::chain(o.n);
  std::set<std::pair<std::size_t, std::size_t>> present;
  for (auto e : ds.graph.edges) present.insert(e);
  for (std::size_t extra = 0; extra < o.n / 4; ++extra) {
    std::size_t a = static_cast<std::size_t>(unit(rng) * o.n) % o.n;
    std::size_t b = static_cast<std::size_t>(unit(rng) * o.n) % o.n;
    if (a == b) continue;
    if (a > b) std::swap(a, b);
    if (present.insert({a, b}).second) ds.graph.edges.emplace_back(a, b);
  }

  std::vector<Point3> base(o.n);
  for (auto& p : base)
    for (double& c : p) c = 2.0 * unit(rng) - 1.0;

  struct Motion {
    std::size_t joint;
    Point3 amp;
    double freq;
    double phase;
  };
  const std::size_t movers = std::max<std::size_t>(2, o.n / 4);
  std::vector<std::vector<Motion>> classes(o.num_classes);
  for (auto& cls : classes) {
    std::vector<std::size_t> joints(o.n);
    for (std::size_t j = 0; j < o.n; ++j) joints[j] = j;
    std::shuffle(joints.begin(), joints.end(), rng);
    for (std::size_t q = 0; q < movers; ++q) {
      Motion mo{joints[q], {}, 0.5 + std::floor(unit(rng) * 4.0) * 0.5, 2.0 * std::numbers::pi * unit(rng)};
      for (double& a : mo.amp) a = (unit(rng) < 0.5 ? -1.0 : 1.0) * (0.2 + 0.4 * unit(rng));
      cls.push_back(mo);
    }
  }

  std::normal_distribution<double> gauss(0.0, 1.0);
  for (std::size_t c = 0; c < o.num_classes; ++c)
    for (std::size_t r = 0; r < o.per_class; ++r) {
      std::vector<std::vector<double>> frames(o.frames, std::vector<double>(3 * o.n));
      for (std::size_t t = 0; t < o.frames; ++t) {
        const double phase_t = static_cast<double>(t) / static_cast<double>(o.frames);
        for (std::size_t j = 0; j < o.n; ++j)
          for (int d = 0; d < 3; ++d) frames[t][3 * j + d] = base[j][d];
        for (const auto& mo : classes[c])
          for (int d = 0; d < 3; ++d)
            frames[t][3 * mo.joint + d] += mo.amp[d] * std::sin(2.0 * std::numbers::pi * mo.freq * phase_t + mo.phase);
        if (o.noise > 0.0)
          for (double& v : frames[t]) v += o.noise * gauss(rng);
      }
      GraphSample s;
      s.u = frames_to_signal(frames, o.n, o.chunks);
      s.label = c;
      s.sequence_id = "synth-c" + std::to_string(c) + "-r" + std::to_string(r);
      (r % 2 == 0 ? ds.train : ds.test).push_back(ds.samples.size());
      ds.samples.push_back(std::move(s));
    }
  ds.validate();
  return ds;
}

inline Dataset synth_dataset(std::size_t num_classes, std::size_t n, std::size_t per_class, double noise,
                             std::uint64_t seed) {
  SynthOptions o;
  o.num_classes = num_classes;
  o.n = n;
  o.per_class = per_class;
  o.noise = noise;
  o.seed = seed;
  return synth_dataset(o);
}

}  // namespace lwgcn
