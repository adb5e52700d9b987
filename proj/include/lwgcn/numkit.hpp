// Dense matrices and rank-3 tensors backing every other lwgcn module.
//
// Storage is row-major and contiguous; Tensor3 linearizes as (k, i, j) so a
// slice k is itself a contiguous row-major rows x cols block.
#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <initializer_list>
#include <numeric>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace lwgcn {

struct ShapeError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

struct InputError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

class Mat {
 public:
  Mat() = default;
  Mat(std::size_t rows, std::size_t cols, double fill = 0.0)
      : rows_(rows), cols_(cols), data_(rows * cols, fill) {}
  Mat(std::size_t rows, std::size_t cols, std::vector<double> data)
      : rows_(rows), cols_(cols), data_(std::move(data)) {
    if (data_.size() != rows_ * cols_)
      throw ShapeError("Mat: payload length does not match rows x cols");
  }
  Mat(std::initializer_list<std::initializer_list<double>> rows) {
    rows_ = rows.size();
    cols_ = rows_ ? rows.begin()->size() : 0;
    data_.reserve(rows_ * cols_);
    for (const auto& r : rows) {
      if (r.size() != cols_) throw ShapeError("Mat: ragged initializer");
      data_.insert(data_.end(), r.begin(), r.end());
    }
  }

  static Mat zeros(std::size_t r, std::size_t c) { return Mat(r, c, 0.0); }
  static Mat ones(std::size_t r, std::size_t c) { return Mat(r, c, 1.0); }
  static Mat identity(std::size_t n) {
    Mat m(n, n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
    return m;
  }

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }
  std::size_t size() const noexcept { return data_.size(); }

  double& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
  double operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }

  std::span<double> data() noexcept { return data_; }
  std::span<const double> data() const noexcept { return data_; }
  const std::vector<double>& values() const noexcept { return data_; }

  bool same_shape(const Mat& o) const noexcept { return rows_ == o.rows_ && cols_ == o.cols_; }
  bool operator==(const Mat&) const = default;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<double> data_;
};

class Tensor3 {
 public:
  Tensor3() = default;
  Tensor3(std::size_t k, std::size_t rows, std::size_t cols, double fill = 0.0)
      : k_(k), rows_(rows), cols_(cols), data_(k * rows * cols, fill) {}
  Tensor3(std::size_t k, std::size_t rows, std::size_t cols, std::vector<double> data)
      : k_(k), rows_(rows), cols_(cols), data_(std::move(data)) {
    if (data_.size() != k_ * rows_ * cols_)
      throw ShapeError("Tensor3: payload length does not match k x rows x cols");
  }

  static Tensor3 from_slices(const std::vector<Mat>& slices) {
    if (slices.empty()) return {};
    Tensor3 t(slices.size(), slices[0].rows(), slices[0].cols());
    for (std::size_t k = 0; k < slices.size(); ++k) t.set_slice(k, slices[k]);
    return t;
  }

  std::size_t k() const noexcept { return k_; }
  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }
  std::size_t size() const noexcept { return data_.size(); }
  std::size_t slice_size() const noexcept { return rows_ * cols_; }

  double& operator()(std::size_t k, std::size_t i, std::size_t j) {
    return data_[(k * rows_ + i) * cols_ + j];
  }
  double operator()(std::size_t k, std::size_t i, std::size_t j) const {
    return data_[(k * rows_ + i) * cols_ + j];
  }

  std::span<double> data() noexcept { return data_; }
  std::span<const double> data() const noexcept { return data_; }
  const std::vector<double>& values() const noexcept { return data_; }

  std::span<double> slice_span(std::size_t k) {
    return std::span<double>(data_).subspan(k * slice_size(), slice_size());
  }
  std::span<const double> slice_span(std::size_t k) const {
    return std::span<const double>(data_).subspan(k * slice_size(), slice_size());
  }

  Mat slice(std::size_t k) const {
    auto s = slice_span(k);
    return Mat(rows_, cols_, std::vector<double>(s.begin(), s.end()));
  }
  void set_slice(std::size_t k, const Mat& m) {
    if (m.rows() != rows_ || m.cols() != cols_) throw ShapeError("Tensor3::set_slice: shape mismatch");
    std::copy(m.data().begin(), m.data().end(), slice_span(k).begin());
  }

  bool same_shape(const Tensor3& o) const noexcept {
    return k_ == o.k_ && rows_ == o.rows_ && cols_ == o.cols_;
  }
  bool operator==(const Tensor3&) const = default;

 private:
  std::size_t k_ = 0;
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<double> data_;
};

namespace detail {
inline std::string shape_str(const Mat& m) {
  return std::to_string(m.rows()) + "x" + std::to_string(m.cols());
}
}  // namespace detail

inline Mat matmul(const Mat& a, const Mat& b) {
  if (a.cols() != b.rows())
    throw ShapeError("matmul: " + detail::shape_str(a) + " * " + detail::shape_str(b));
  Mat out(a.rows(), b.cols());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t p = 0; p < a.cols(); ++p) {
      const double aip = a(i, p);
      if (aip == 0.0) continue;
      for (std::size_t j = 0; j < b.cols(); ++j) out(i, j) += aip * b(p, j);
    }
  return out;
}

inline Mat transpose(const Mat& a) {
  Mat out(a.cols(), a.rows());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j) out(j, i) = a(i, j);
  return out;
}

inline Mat hadamard(const Mat& a, const Mat& b) {
  if (!a.same_shape(b))
    throw ShapeError("hadamard: " + detail::shape_str(a) + " vs " + detail::shape_str(b));
  Mat out(a.rows(), a.cols());
  auto o = out.data();
  auto x = a.data();
  auto y = b.data();
  for (std::size_t t = 0; t < o.size(); ++t) o[t] = x[t] * y[t];
  return out;
}

inline Mat add(const Mat& a, const Mat& b) {
  if (!a.same_shape(b)) throw ShapeError("add: " + detail::shape_str(a) + " vs " + detail::shape_str(b));
  Mat out = a;
  auto o = out.data();
  auto y = b.data();
  for (std::size_t t = 0; t < o.size(); ++t) o[t] += y[t];
  return out;
}

inline Mat scale(const Mat& a, double s) {
  Mat out = a;
  for (double& v : out.data()) v *= s;
  return out;
}

/// Column sums as a length-cols vector (the row vector 1^T a).
inline std::vector<double> colsum(const Mat& a) {
  std::vector<double> out(a.cols(), 0.0);
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j) out[j] += a(i, j);
  return out;
}

/// <a, b>_F = tr(a^T b).
inline double frobenius_inner(const Mat& a, const Mat& b) {
  if (!a.same_shape(b))
    throw ShapeError("frobenius_inner: " + detail::shape_str(a) + " vs " + detail::shape_str(b));
  auto x = a.data();
  auto y = b.data();
  return std::inner_product(x.begin(), x.end(), y.begin(), 0.0);
}

inline bool all_finite(std::span<const double> v) {
  return std::all_of(v.begin(), v.end(), [](double x) { return std::isfinite(x); });
}

inline double max_abs(std::span<const double> v) {
  double m = 0.0;
  for (double x : v) m = std::max(m, std::abs(x));
  return m;
}

}  // namespace lwgcn
