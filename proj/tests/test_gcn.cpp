#include <gtest/gtest.h>

#include <cmath>
#include <numeric>
#include <random>
#include <vector>

#include "lwgcn/gcn.hpp"
#include "oracles.hpp"

using namespace lwgcn;

namespace {

constexpr ConstraintMode kModes[] = {ConstraintMode::None, ConstraintMode::Orth, ConstraintMode::Stoch,
                                     ConstraintMode::OrthStoch};

// sum_k A_k U^T W_k written with explicit loops
Mat naive_preactivation(const Tensor3& a, const Mat& u, const std::vector<Mat>& w) {
  const std::size_t n = a.rows(), s = u.rows(), c = w[0].cols();
  Mat out(n, c);
  for (std::size_t k = 0; k < a.k(); ++k)
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t ch = 0; ch < c; ++ch) {
        double acc = 0.0;
        for (std::size_t j = 0; j < n; ++j)
          for (std::size_t r = 0; r < s; ++r) acc += a(k, i, j) * u(r, j) * w[k](r, ch);
        out(i, ch) += acc;
      }
  return out;
}

}  // namespace

TEST(Activation, ReluSubgradientAtZero) {
  EXPECT_EQ(activate(Activation::Relu, -1.0), 0.0);
  EXPECT_EQ(activate(Activation::Relu, 2.0), 2.0);
  EXPECT_EQ(activate_grad(Activation::Relu, 0.0), 0.0);
  EXPECT_EQ(activate_grad(Activation::Relu, 1e-300), 1.0);
  EXPECT_EQ(activate_grad(Activation::Identity, -5.0), 1.0);
  EXPECT_EQ(parse_activation("identity"), Activation::Identity);
  EXPECT_FALSE(parse_activation("tanh").has_value());
}

TEST(GcBlock, MatchesNaive) {
  std::mt19937_64 rng(1);
  const auto a = oracle::random_tensor(3, 5, 5, rng);
  const auto u = oracle::random_mat(4, 5, rng);
  std::vector<Mat> w;
  for (int k = 0; k < 3; ++k) w.push_back(oracle::random_mat(4, 2, rng));
  const auto pre = gc_preactivation(a, u, w), ref = naive_preactivation(a, u, w);
  EXPECT_LE(oracle::max_abs_diff(pre.data(), ref.data()), 1e-13);

  EffectiveBasis eff{a, ConstraintMode::None, 0.0};
  const auto out = gc_block(eff, u, w, Activation::Relu);
  for (std::size_t q = 0; q < out.size(); ++q) EXPECT_NEAR(out.data()[q], std::max(0.0, ref.data()[q]), 1e-13);
}

TEST(GcBlock, PermutationEquivariant) {
  std::mt19937_64 rng(2);
  const std::size_t n = 6;
  const auto a = oracle::random_tensor(2, n, n, rng);
  const auto u = oracle::random_mat(3, n, rng);
  std::vector<Mat> w{oracle::random_mat(3, 4, rng), oracle::random_mat(3, 4, rng)};
  std::vector<std::size_t> perm(n);
  std::iota(perm.begin(), perm.end(), 0);
  std::shuffle(perm.begin(), perm.end(), rng);
  // node perm[i] of the relabelled graph is node i of the original
  Tensor3 ap(2, n, n);
  Mat up(3, n);
  for (std::size_t k = 0; k < 2; ++k)
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) ap(k, perm[i], perm[j]) = a(k, i, j);
  for (std::size_t r = 0; r < 3; ++r)
    for (std::size_t j = 0; j < n; ++j) up(r, perm[j]) = u(r, j);
  const auto z = gc_preactivation(a, u, w), zp = gc_preactivation(ap, up, w);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t c = 0; c < 4; ++c) EXPECT_NEAR(zp(perm[i], c), z(i, c), 1e-13);
}

TEST(GcBlock, ShapeErrors) {
  std::mt19937_64 rng(3);
  const auto a = oracle::random_tensor(2, 4, 4, rng);
  EXPECT_THROW(gc_preactivation(a, Mat(3, 5), {Mat(3, 2), Mat(3, 2)}), ShapeError);
  EXPECT_THROW(gc_preactivation(a, Mat(3, 4), {Mat(3, 2)}), ShapeError);
  EXPECT_THROW(gc_preactivation(a, Mat(3, 4), {Mat(2, 2), Mat(2, 2)}), ShapeError);
}

TEST(Loss, CrossEntropyAgainstDefinition) {
  const std::vector<double> z{0.3, -1.2, 2.0, 0.0};
  double zsum = 0.0;
  for (double v : z) zsum += std::exp(v);
  const auto r = cross_entropy(z, 2);
  EXPECT_NEAR(r.loss, -std::log(std::exp(2.0) / zsum), 1e-14);
  for (std::size_t c = 0; c < z.size(); ++c)
    EXPECT_NEAR(r.d_logits[c], std::exp(z[c]) / zsum - (c == 2 ? 1.0 : 0.0), 1e-15);
  EXPECT_THROW(cross_entropy(z, 4), InputError);
  // stable for huge logits
  const auto big = cross_entropy(std::vector<double>{1000.0, 0.0}, 1);
  EXPECT_NEAR(big.loss, 1000.0, 1e-9);
  EXPECT_EQ(argmax(std::vector<double>{0.1, 0.7, 0.7}), 1u);
}

TEST(Model, InitShapesAndHypotheses) {
  std::mt19937_64 rng(4);
  ModelShape shape{4, 12, 12, 16, 5};
  const double g = epsilon_orth_bound(4, 0.01, 0.01);
  const auto m = init_model(shape, ConstraintMode::OrthStoch, g, 0.01, 0.01, rng);
  EXPECT_EQ(m.k(), 4u);
  EXPECT_EQ(m.n(), 12u);
  EXPECT_EQ(m.signal_dim(), 12u);
  EXPECT_EQ(m.channels(), 16u);
  EXPECT_EQ(m.num_classes(), 5u);
  EXPECT_EQ(m.head.rows(), 12u * 16u);
  EXPECT_GE(delta_gap(m.basis.ahat), 0.01);
  for (double b : m.bias) EXPECT_EQ(b, 0.0);
}

TEST(Model, ForwardRejectsWrongSignal) {
  const auto inst = random_instance({2, 4, 3, 2, 3}, ConstraintMode::Orth, 2.0, 1);
  EXPECT_THROW(model_forward(inst.model, Mat(3, 5), 2.0), ShapeError);
  EXPECT_THROW(model_forward(inst.model, Mat(2, 4), 2.0), ShapeError);
}

// Analytic gradients against central differences, every mode and activation.
TEST(Gradients, MatchFiniteDifferences) {
  for (auto act : {Activation::Relu, Activation::Identity})
    for (auto mode : kModes)
      for (std::uint64_t seed = 0; seed < 5; ++seed) {
        const auto inst = random_instance({3, 5, 4, 3, 3}, mode, 2.0, seed, act);
        for (const auto& e : gradient_check(inst.model, inst.u, inst.label, 2.0, 1e-5))
          EXPECT_LE(e.rel_error, 1e-6) << mode_name(mode) << ' ' << group_name(e.group) << " seed " << seed;
      }
}

TEST(Gradients, LargerShapes) {
  for (auto mode : kModes) {
    const auto inst = random_instance({4, 8, 6, 5, 4}, mode, 3.0, 42);
    for (const auto& e : gradient_check(inst.model, inst.u, inst.label, 3.0, 1e-5))
      EXPECT_LE(e.rel_error, 1e-6) << mode_name(mode) << ' ' << group_name(e.group);
  }
}

// Central differences converge quadratically: shrinking the step by 10 cuts
// the discrepancy by far more than 10 until round-off takes over.
TEST(Gradients, StepSweepShowsQuadraticConvergence) {
  const auto inst = random_instance({3, 5, 4, 3, 3}, ConstraintMode::OrthStoch, 8.0, 7);
  auto err = [&](double h) {
    double worst = 0.0;
    for (const auto& e : gradient_check(inst.model, inst.u, inst.label, 8.0, h))
      if (e.group == ParamGroup::Ahat) worst = e.rel_error;
    return worst;
  };
  const double e2 = err(1e-2), e3 = err(1e-3);
  EXPECT_GT(e2 / e3, 30.0);
  EXPECT_LE(err(1e-5), 1e-6);
}

TEST(Gradients, NegativeControlDetectsSignFlip) {
  const auto inst = random_instance({3, 5, 4, 3, 3}, ConstraintMode::Orth, 2.0, 3);
  const auto errs = gradient_check(inst.model, inst.u, inst.label, 2.0, 1e-5, [](Gradients& g) {
    for (double& v : g.d_filters[0].data()) v = -v;
  });
  for (const auto& e : errs)
    if (e.group == ParamGroup::Filters) EXPECT_GT(e.rel_error, 0.5);
}

TEST(Gradients, FrozenBasisHasNoBasisGradient) {
  auto inst = random_instance({2, 4, 3, 2, 3}, ConstraintMode::None, 1.0, 5);
  inst.model.learn_basis = false;
  const auto g = loss_and_gradients(inst.model, inst.u, inst.label, 1.0).second;
  for (double v : g.d_ahat.data()) EXPECT_EQ(v, 0.0);
}

TEST(Gradients, MaskZeroesEffectiveEntries) {
  auto inst = random_instance({2, 4, 3, 2, 3}, ConstraintMode::None, 1.0, 6);
  Tensor3 mask(2, 4, 4, 1.0);
  mask(0, 1, 2) = 0.0;
  mask(1, 3, 3) = 0.0;
  inst.model.mask = mask;
  const auto t = model_forward(inst.model, inst.u, 1.0);
  EXPECT_EQ(t.a_used(0, 1, 2), 0.0);
  EXPECT_EQ(t.a_used(1, 3, 3), 0.0);
  // mode None: the effective basis is Ahat, so masked parameters get no gradient
  const auto g = loss_and_gradients(inst.model, inst.u, inst.label, 1.0).second;
  EXPECT_EQ(g.d_ahat(0, 1, 2), 0.0);
  EXPECT_EQ(g.d_ahat(1, 3, 3), 0.0);
  for (const auto& e : gradient_check(inst.model, inst.u, inst.label, 1.0, 1e-5)) EXPECT_LE(e.rel_error, 1e-6);
}

TEST(Gradients, AccumulateIsWeightedSum) {
  const auto a = random_instance({2, 4, 3, 2, 3}, ConstraintMode::Orth, 2.0, 8);
  const auto b = random_instance({2, 4, 3, 2, 3}, ConstraintMode::Orth, 2.0, 9);
  const auto ga = loss_and_gradients(a.model, a.u, a.label, 2.0).second;
  const auto gb = loss_and_gradients(a.model, b.u, b.label, 2.0).second;
  auto acc = Gradients::zeros_like(a.model);
  acc.accumulate(ga, 0.5);
  acc.accumulate(gb, 0.25);
  for (std::size_t q = 0; q < acc.d_head.size(); ++q)
    EXPECT_NEAR(acc.d_head.data()[q], 0.5 * ga.d_head.data()[q] + 0.25 * gb.d_head.data()[q], 1e-15);
}

TEST(RelativeError, Definition) {
  const std::vector<double> a{1.0, -2.0}, n{1.0, -2.5};
  EXPECT_DOUBLE_EQ(relative_error(a, n), 0.5 / 2.5);
  const std::vector<double> z{0.0, 0.0};
  EXPECT_EQ(relative_error(z, z), 0.0);
  EXPECT_THROW(relative_error(a, std::vector<double>{1.0}), ShapeError);
}
