// Brute-force reference implementations shared by the test binaries. They
// are deliberately naive and share no code paths with the library.
#pragma once

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <functional>
#include <random>
#include <string>
#include <vector>

#include "lwgcn/numkit.hpp"
#include "lwgcn/skeleton.hpp"

namespace oracle {

using lwgcn::Mat;
using lwgcn::Tensor3;

inline Mat random_mat(std::size_t r, std::size_t c, std::mt19937_64& rng, double lo = -1.0, double hi = 1.0) {
  std::uniform_real_distribution<double> d(lo, hi);
  Mat m(r, c);
  for (std::size_t i = 0; i < r; ++i)
    for (std::size_t j = 0; j < c; ++j) m(i, j) = d(rng);
  return m;
}

inline Tensor3 random_tensor(std::size_t k, std::size_t r, std::size_t c, std::mt19937_64& rng, double lo = 0.0,
                             double hi = 1.0) {
  std::uniform_real_distribution<double> d(lo, hi);
  Tensor3 t(k, r, c);
  for (std::size_t a = 0; a < k; ++a)
    for (std::size_t i = 0; i < r; ++i)
      for (std::size_t j = 0; j < c; ++j) t(a, i, j) = d(rng);
  return t;
}

inline Mat naive_matmul(const Mat& a, const Mat& b) {
  Mat c(a.rows(), b.cols());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < b.cols(); ++j) {
      double s = 0.0;
      for (std::size_t t = 0; t < a.cols(); ++t) s += a(i, t) * b(t, j);
      c(i, j) = s;
    }
  return c;
}

inline Mat naive_transpose(const Mat& a) {
  Mat t(a.cols(), a.rows());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j) t(j, i) = a(i, j);
  return t;
}

/// softmax over k at entry (i, j), straight from the definition
inline Tensor3 naive_crispmax(const Tensor3& x, double gamma) {
  Tensor3 out(x.k(), x.rows(), x.cols());
  for (std::size_t i = 0; i < x.rows(); ++i)
    for (std::size_t j = 0; j < x.cols(); ++j) {
      double z = 0.0;
      for (std::size_t k = 0; k < x.k(); ++k) z += std::exp(gamma * x(k, i, j));
      for (std::size_t k = 0; k < x.k(); ++k) out(k, i, j) = std::exp(gamma * x(k, i, j)) / z;
    }
  return out;
}

/// softmax down each column
inline Mat naive_column_softmax(const Mat& x, double g) {
  Mat out(x.rows(), x.cols());
  for (std::size_t j = 0; j < x.cols(); ++j) {
    double z = 0.0;
    for (std::size_t i = 0; i < x.rows(); ++i) z += std::exp(g * x(i, j));
    for (std::size_t i = 0; i < x.rows(); ++i) out(i, j) = std::exp(g * x(i, j)) / z;
  }
  return out;
}

/// central-difference gradient of f at x
inline Tensor3 fd_gradient(const Tensor3& x, const std::function<double(const Tensor3&)>& f, double h = 1e-6) {
  Tensor3 g(x.k(), x.rows(), x.cols());
  Tensor3 probe = x;
  auto pv = probe.data();
  auto gv = g.data();
  for (std::size_t q = 0; q < pv.size(); ++q) {
    const double saved = pv[q];
    pv[q] = saved + h;
    const double up = f(probe);
    pv[q] = saved - h;
    const double down = f(probe);
    pv[q] = saved;
    gv[q] = (up - down) / (2 * h);
  }
  return g;
}

inline Mat fd_gradient(const Mat& x, const std::function<double(const Mat&)>& f, double h = 1e-6) {
  Mat g(x.rows(), x.cols());
  Mat probe = x;
  for (std::size_t i = 0; i < x.rows(); ++i)
    for (std::size_t j = 0; j < x.cols(); ++j) {
      const double saved = probe(i, j);
      probe(i, j) = saved + h;
      const double up = f(probe);
      probe(i, j) = saved - h;
      const double down = f(probe);
      probe(i, j) = saved;
      g(i, j) = (up - down) / (2 * h);
    }
  return g;
}

inline double dot(const Tensor3& a, const Tensor3& b) {
  double s = 0.0;
  for (std::size_t q = 0; q < a.size(); ++q) s += a.data()[q] * b.data()[q];
  return s;
}

inline double dot(const Mat& a, const Mat& b) {
  double s = 0.0;
  for (std::size_t q = 0; q < a.size(); ++q) s += a.data()[q] * b.data()[q];
  return s;
}

inline double max_abs_diff(std::span<const double> a, std::span<const double> b) {
  double m = 0.0;
  for (std::size_t q = 0; q < a.size(); ++q) m = std::max(m, std::abs(a[q] - b[q]));
  return m;
}

/// max_{k != k'} (A_k . A_k')_ij by enumerating every pair
inline double brute_cross_orth(const Tensor3& a) {
  double m = 0.0;
  for (std::size_t k = 0; k < a.k(); ++k)
    for (std::size_t l = 0; l < a.k(); ++l) {
      if (k == l) continue;
      for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t j = 0; j < a.cols(); ++j) m = std::max(m, a(k, i, j) * a(l, i, j));
    }
  return m;
}

/// Random basis whose winner at every entry leads the runner-up by gap >= delta
/// (drawn in [delta, 2 delta]), built directly rather than by repair.
inline Tensor3 gapped_basis(std::size_t k, std::size_t n, double delta, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::uniform_int_distribution<std::size_t> pick(0, k - 1);
  Tensor3 t(k, n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      double top = -1e300;
      const std::size_t w = pick(rng);
      for (std::size_t a = 0; a < k; ++a)
        if (a != w) {
          t(a, i, j) = u(rng);
          top = std::max(top, t(a, i, j));
        }
      double v = top + delta * (1.0 + u(rng));
      while (v - top < delta) v = std::nextafter(v, 1e300);
      t(w, i, j) = v;
    }
  return t;
}

// Per-chunk averaging straight from the definition: with elapsed time
// s = t - t0 and duration d, chunk c covers [c*d/M, (c+1)*d/M), the last one
// closed on the right.
inline std::vector<double> chunk_means(const lwgcn::Trajectory& tr, std::size_t m) {
  const double t0 = tr.times.front(), d = tr.times.back() - t0;
  std::vector<double> out;
  lwgcn::Point3 prev{0, 0, 0};
  for (const auto& p : tr.points)
    for (int k = 0; k < 3; ++k) prev[k] += p[k] / static_cast<double>(tr.points.size());
  for (std::size_t c = 0; c < m; ++c) {
    const double lo = d * static_cast<double>(c) / static_cast<double>(m);
    const double hi = d * static_cast<double>(c + 1) / static_cast<double>(m);
    lwgcn::Point3 s{0, 0, 0};
    int cnt = 0;
    for (std::size_t q = 0; q < tr.points.size(); ++q) {
      const double e = tr.times[q] - t0;
      const bool in = d == 0.0 ? c == 0 : (e >= lo && (e < hi || (c + 1 == m && e <= d)));
      if (!in) continue;
      for (int k = 0; k < 3; ++k) s[k] += tr.points[q][k];
      ++cnt;
    }
    if (cnt > 0)
      for (int k = 0; k < 3; ++k) prev[k] = s[k] / cnt;
    for (int k = 0; k < 3; ++k) out.push_back(prev[k]);
  }
  return out;
}

/// Fresh scratch directory under the build tree's temp area.
inline std::filesystem::path scratch(const std::string& name) {
  auto p = std::filesystem::temp_directory_path() / ("lwgcn_test_" + name);
  std::filesystem::remove_all(p);
  std::filesystem::create_directories(p);
  return p;
}

}  // namespace oracle
