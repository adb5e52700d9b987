#include <gtest/gtest.h>

#include <random>

#include "lwgcn/numkit.hpp"
#include "oracles.hpp"

using namespace lwgcn;

TEST(Mat, ConstructionAndIndexing) {
  Mat m{{1, 2, 3}, {4, 5, 6}};
  EXPECT_EQ(m.rows(), 2u);
  EXPECT_EQ(m.cols(), 3u);
  EXPECT_EQ(m(1, 2), 6.0);
  EXPECT_EQ(m.data()[3], 4.0);  // row-major
  EXPECT_THROW(Mat(2, 2, std::vector<double>{1, 2, 3}), ShapeError);
  EXPECT_THROW((Mat{{1, 2}, {3}}), ShapeError);
  const Mat i3 = Mat::identity(3);
  for (std::size_t r = 0; r < 3; ++r)
    for (std::size_t c = 0; c < 3; ++c) EXPECT_EQ(i3(r, c), r == c ? 1.0 : 0.0);
}

TEST(Mat, MatmulMatchesNaive) {
  std::mt19937_64 rng(3);
  for (int t = 0; t < 20; ++t) {
    const auto a = oracle::random_mat(1 + t % 5, 2 + t % 3, rng);
    const auto b = oracle::random_mat(a.cols(), 1 + t % 4, rng);
    const auto c = matmul(a, b), ref = oracle::naive_matmul(a, b);
    EXPECT_LE(oracle::max_abs_diff(c.data(), ref.data()), 1e-14);
  }
  EXPECT_THROW(matmul(Mat(2, 3), Mat(2, 3)), ShapeError);
}

TEST(Mat, TransposeHadamardAddScale) {
  std::mt19937_64 rng(5);
  const auto a = oracle::random_mat(3, 4, rng), b = oracle::random_mat(3, 4, rng);
  EXPECT_TRUE(transpose(a) == oracle::naive_transpose(a));
  const auto h = hadamard(a, b), s = add(a, b), k = scale(a, -2.0);
  for (std::size_t i = 0; i < 3; ++i)
    for (std::size_t j = 0; j < 4; ++j) {
      EXPECT_EQ(h(i, j), a(i, j) * b(i, j));
      EXPECT_EQ(s(i, j), a(i, j) + b(i, j));
      EXPECT_EQ(k(i, j), -2.0 * a(i, j));
    }
  EXPECT_THROW(hadamard(a, Mat(4, 3)), ShapeError);
  EXPECT_THROW(add(a, Mat(3, 3)), ShapeError);
}

TEST(Mat, ColsumAndInner) {
  Mat m{{1, 2}, {3, 4}};
  const auto cs = colsum(m);
  EXPECT_EQ(cs, (std::vector<double>{4, 6}));
  EXPECT_EQ(frobenius_inner(m, Mat::identity(2)), 5.0);
  EXPECT_THROW(frobenius_inner(m, Mat(1, 2)), ShapeError);
}

TEST(Tensor3, SlicesAreContiguous) {
  Tensor3 t(2, 2, 3);
  for (std::size_t q = 0; q < t.size(); ++q) t.data()[q] = static_cast<double>(q);
  EXPECT_EQ(t(1, 0, 0), 6.0);
  EXPECT_EQ(t(1, 1, 2), 11.0);
  const Mat s = t.slice(1);
  EXPECT_EQ(s(0, 1), 7.0);
  Tensor3 u = Tensor3::from_slices({t.slice(0), t.slice(1)});
  EXPECT_TRUE(u == t);
  u.set_slice(0, Mat(2, 3, 9.0));
  EXPECT_EQ(u(0, 1, 1), 9.0);
  EXPECT_THROW(u.set_slice(0, Mat(3, 2)), ShapeError);
  EXPECT_THROW(Tensor3::from_slices({Mat(2, 2), Mat(2, 3)}), ShapeError);
}

TEST(Numkit, FiniteAndMaxAbs) {
  std::vector<double> v{1.0, -3.0, 2.0};
  EXPECT_TRUE(all_finite(v));
  EXPECT_EQ(max_abs(v), 3.0);
  v.push_back(std::nan(""));
  EXPECT_FALSE(all_finite(v));
}
