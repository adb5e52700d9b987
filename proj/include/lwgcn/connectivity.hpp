// Constrained reparametrizations of the adjacency basis.
//
// The free parameters {Ahat_k} are mapped to effective aggregation matrices
// {A_k} by one of four constraint modes:
//
//   None       A_k = Ahat_k
//   Orth       crispmax across k: A_kij = softmax_k(gamma * Ahat_.ij)
//   Stoch      column softmax of each Ahat_k (every column sums to one)
//   OrthStoch  crispmax first, then a column softmax of the crispmax
//              log-odds, so the near-zero pattern of the first stage is kept
//              and every column of every A_k sums to one.
//
// Gradients are propagated as vector-Jacobian products; no Jacobian is ever
// materialized.
#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <optional>
#include <random>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "lwgcn/log.hpp"
#include "lwgcn/numkit.hpp"

namespace lwgcn {

struct DomainError : std::domain_error {
  using std::domain_error::domain_error;
};

enum class ConstraintMode { None, Orth, Stoch, OrthStoch };

inline std::string_view mode_name(ConstraintMode m) {
  switch (m) {
    case ConstraintMode::None: return "L";
    case ConstraintMode::Orth: return "L+orth";
    case ConstraintMode::Stoch: return "L+stc";
    case ConstraintMode::OrthStoch: return "L+orth+stc";
  }
  return "?";
}

/// Accepts both the short CLI spellings (none, orth, stc, orth+stc) and the
/// table labels (L, L+orth, L+stc, L+orth+stc).
inline std::optional<ConstraintMode> parse_mode(std::string_view s) {
  if (s == "none" || s == "L" || s == "l") return ConstraintMode::None;
  if (s == "orth" || s == "L+orth") return ConstraintMode::Orth;
  if (s == "stc" || s == "stoch" || s == "L+stc") return ConstraintMode::Stoch;
  if (s == "orth+stc" || s == "orth+stoch" || s == "L+orth+stc") return ConstraintMode::OrthStoch;
  return std::nullopt;
}

inline bool uses_crispmax(ConstraintMode m) {
  return m == ConstraintMode::Orth || m == ConstraintMode::OrthStoch;
}
inline bool column_stochastic(ConstraintMode m) {
  return m == ConstraintMode::Stoch || m == ConstraintMode::OrthStoch;
}

struct AdjacencyBasis {
  Tensor3 ahat;
  ConstraintMode mode = ConstraintMode::None;
  double gamma_max = 1.0;
  double gamma_stoch = 1.0;
  double epsilon = 0.01;
  double delta = 0.01;

  std::size_t k() const noexcept { return ahat.k(); }
  std::size_t n() const noexcept { return ahat.rows(); }

  void validate() const {
    if (ahat.k() < 1 || ahat.rows() < 1) throw ShapeError("AdjacencyBasis: need K >= 1 and n >= 1");
    if (ahat.rows() != ahat.cols()) throw ShapeError("AdjacencyBasis: matrices must be square");
    if (!all_finite(ahat.data())) throw InputError("AdjacencyBasis: non-finite free parameter");
    if (!(gamma_max > 0.0) || !(gamma_stoch > 0.0))
      throw DomainError("AdjacencyBasis: gamma_max and gamma_stoch must be positive");
    if (!(epsilon > 0.0 && epsilon < 0.5)) throw DomainError("AdjacencyBasis: epsilon must lie in (0, 0.5)");
    if (!(delta > 0.0)) throw DomainError("AdjacencyBasis: delta must be positive");
  }
};

struct EffectiveBasis {
  Tensor3 a;
  ConstraintMode mode = ConstraintMode::None;
  double gamma_eff = 0.0;
};

/// Forward result plus whatever the backward pass needs.
struct BasisForward {
  EffectiveBasis eff;
  Tensor3 orth_stage;          // crispmax output (Orth, OrthStoch)
  Tensor3 log_odds;            // column-stage input (OrthStoch)
  double column_gamma = 0.0;   // sharpness used by the column stage
};

// ---------------------------------------------------------------------------
// crispmax

inline Tensor3 crispmax_forward(const Tensor3& ahat, double gamma) {
  if (!(gamma >= 0.0)) throw DomainError("crispmax_forward: gamma must be >= 0");
  if (!all_finite(ahat.data())) throw InputError("crispmax_forward: non-finite input");
  const std::size_t K = ahat.k();
  Tensor3 out(K, ahat.rows(), ahat.cols());
  std::vector<double> z(K);
  for (std::size_t i = 0; i < ahat.rows(); ++i)
    for (std::size_t j = 0; j < ahat.cols(); ++j) {
      double zmax = -std::numeric_limits<double>::infinity();
      for (std::size_t k = 0; k < K; ++k) {
        z[k] = gamma * ahat(k, i, j);
        zmax = std::max(zmax, z[k]);
      }
      double total = 0.0;
      for (std::size_t k = 0; k < K; ++k) {
        z[k] = std::exp(z[k] - zmax);
        total += z[k];
      }
      for (std::size_t k = 0; k < K; ++k) out(k, i, j) = z[k] / total;
    }
  return out;
}

/// grad_ahat_kij = gamma * A_kij * (g_kij - sum_k' A_k'ij g_k'ij)
inline Tensor3 crispmax_vjp(const Tensor3& a, double gamma, const Tensor3& grad_a) {
  if (!a.same_shape(grad_a)) throw ShapeError("crispmax_vjp: gradient shape mismatch");
  Tensor3 out(a.k(), a.rows(), a.cols());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j) {
      double dot = 0.0;
      for (std::size_t k = 0; k < a.k(); ++k) dot += a(k, i, j) * grad_a(k, i, j);
      for (std::size_t k = 0; k < a.k(); ++k) out(k, i, j) = gamma * a(k, i, j) * (grad_a(k, i, j) - dot);
    }
  return out;
}

// ---------------------------------------------------------------------------
// column-stochastic normalization, h = exp(gamma_s * .)

inline Mat stochastic_forward(const Mat& ahat, double gamma_s) {
  if (!(gamma_s >= 0.0)) throw DomainError("stochastic_forward: gamma_s must be >= 0");
  if (!all_finite(ahat.data())) throw InputError("stochastic_forward: non-finite input");
  Mat out(ahat.rows(), ahat.cols());
  for (std::size_t j = 0; j < ahat.cols(); ++j) {
    double zmax = -std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < ahat.rows(); ++i) zmax = std::max(zmax, gamma_s * ahat(i, j));
    double total = 0.0;
    for (std::size_t i = 0; i < ahat.rows(); ++i) {
      out(i, j) = std::exp(gamma_s * ahat(i, j) - zmax);
      total += out(i, j);
    }
    for (std::size_t i = 0; i < ahat.rows(); ++i) out(i, j) /= total;
  }
  return out;
}

/// Column-local Jacobian: columns do not interact.
inline Mat stochastic_vjp(const Mat& a, double gamma_s, const Mat& grad_a) {
  if (!a.same_shape(grad_a)) throw ShapeError("stochastic_vjp: gradient shape mismatch");
  Mat out(a.rows(), a.cols());
  for (std::size_t j = 0; j < a.cols(); ++j) {
    double dot = 0.0;
    for (std::size_t i = 0; i < a.rows(); ++i) dot += a(i, j) * grad_a(i, j);
    for (std::size_t i = 0; i < a.rows(); ++i) out(i, j) = gamma_s * a(i, j) * (grad_a(i, j) - dot);
  }
  return out;
}

// ---------------------------------------------------------------------------
// crispmax log-odds: l_kij = log(A_kij / (1 - A_kij)) for A = crispmax(gamma Ahat),
// evaluated as gamma*Ahat_kij - logsumexp_{k' != k}(gamma*Ahat_k'ij) so it stays
// finite when the softmax saturates. With K = 1 the empty sum is taken as 0.

inline Tensor3 crispmax_log_odds(const Tensor3& ahat, double gamma) {
  if (!(gamma >= 0.0)) throw DomainError("crispmax_log_odds: gamma must be >= 0");
  if (!all_finite(ahat.data())) throw InputError("crispmax_log_odds: non-finite input");
  const std::size_t K = ahat.k();
  Tensor3 out(K, ahat.rows(), ahat.cols());
  for (std::size_t i = 0; i < ahat.rows(); ++i)
    for (std::size_t j = 0; j < ahat.cols(); ++j)
      for (std::size_t k = 0; k < K; ++k) {
        double lse = 0.0;
        if (K > 1) {
          double zmax = -std::numeric_limits<double>::infinity();
          for (std::size_t m = 0; m < K; ++m)
            if (m != k) zmax = std::max(zmax, gamma * ahat(m, i, j));
          double s = 0.0;
          for (std::size_t m = 0; m < K; ++m)
            if (m != k) s += std::exp(gamma * ahat(m, i, j) - zmax);
          lse = zmax + std::log(s);
        }
        out(k, i, j) = gamma * ahat(k, i, j) - lse;
      }
  return out;
}

/// grad_ahat_m = gamma * (g_m - sum_{k != m} g_k * p^(k)_m), with p^(k) the
/// softmax of gamma*Ahat over the indices other than k.
inline Tensor3 crispmax_log_odds_vjp(const Tensor3& ahat, double gamma, const Tensor3& grad_l) {
  if (!ahat.same_shape(grad_l)) throw ShapeError("crispmax_log_odds_vjp: gradient shape mismatch");
  const std::size_t K = ahat.k();
  Tensor3 out(K, ahat.rows(), ahat.cols());
  std::vector<double> p(K);
  for (std::size_t i = 0; i < ahat.rows(); ++i)
    for (std::size_t j = 0; j < ahat.cols(); ++j) {
      for (std::size_t m = 0; m < K; ++m) out(m, i, j) = gamma * grad_l(m, i, j);
      if (K == 1) continue;
      for (std::size_t k = 0; k < K; ++k) {
        double zmax = -std::numeric_limits<double>::infinity();
        for (std::size_t m = 0; m < K; ++m)
          if (m != k) zmax = std::max(zmax, gamma * ahat(m, i, j));
        double s = 0.0;
        for (std::size_t m = 0; m < K; ++m) {
          p[m] = m == k ? 0.0 : std::exp(gamma * ahat(m, i, j) - zmax);
          s += p[m];
        }
        for (std::size_t m = 0; m < K; ++m)
          if (m != k) out(m, i, j) -= gamma * grad_l(k, i, j) * p[m] / s;
      }
    }
  return out;
}

// ---------------------------------------------------------------------------
// Full basis

/// Column-stage sharpness for the given annealed gamma. In Stoch mode the
/// column softmax acts on Ahat directly and gamma_stoch is annealed on the
/// same schedule as gamma. In OrthStoch mode the log-odds already carry the
/// annealed gamma, so the stage uses the ratio gamma_stoch / gamma_max.
inline double column_stage_gamma(const AdjacencyBasis& basis, double gamma_eff) {
  switch (basis.mode) {
    case ConstraintMode::Stoch: return gamma_eff * basis.gamma_stoch / basis.gamma_max;
    case ConstraintMode::OrthStoch: return basis.gamma_stoch / basis.gamma_max;
    default: return 0.0;
  }
}

inline BasisForward basis_forward(const AdjacencyBasis& basis, double gamma_eff) {
  if (!(gamma_eff >= 0.0)) throw DomainError("basis_forward: gamma_eff must be >= 0");
  BasisForward fwd;
  fwd.eff.mode = basis.mode;
  fwd.eff.gamma_eff = gamma_eff;
  fwd.column_gamma = column_stage_gamma(basis, gamma_eff);
  const std::size_t K = basis.ahat.k();
  switch (basis.mode) {
    case ConstraintMode::None:
      fwd.eff.a = basis.ahat;
      break;
    case ConstraintMode::Orth:
      fwd.orth_stage = crispmax_forward(basis.ahat, gamma_eff);
      fwd.eff.a = fwd.orth_stage;
      break;
    case ConstraintMode::Stoch:
      fwd.eff.a = Tensor3(K, basis.n(), basis.n());
      for (std::size_t k = 0; k < K; ++k)
        fwd.eff.a.set_slice(k, stochastic_forward(basis.ahat.slice(k), fwd.column_gamma));
      break;
    case ConstraintMode::OrthStoch:
      fwd.orth_stage = crispmax_forward(basis.ahat, gamma_eff);
      fwd.log_odds = crispmax_log_odds(basis.ahat, gamma_eff);
      fwd.eff.a = Tensor3(K, basis.n(), basis.n());
      for (std::size_t k = 0; k < K; ++k)
        fwd.eff.a.set_slice(k, stochastic_forward(fwd.log_odds.slice(k), fwd.column_gamma));
      break;
  }
  return fwd;
}

/// Reverse-mode chain rule through basis_forward (stages in reverse order).
inline Tensor3 basis_vjp(const AdjacencyBasis& basis, const BasisForward& fwd, const Tensor3& grad_a) {
  if (fwd.eff.mode != basis.mode) throw InputError("basis_vjp: cached forward was computed for another mode");
  if (!grad_a.same_shape(basis.ahat) || !fwd.eff.a.same_shape(basis.ahat))
    throw ShapeError("basis_vjp: shape mismatch");
  const std::size_t K = basis.ahat.k();
  const double gamma = fwd.eff.gamma_eff;
  switch (basis.mode) {
    case ConstraintMode::None:
      return grad_a;
    case ConstraintMode::Orth:
      return crispmax_vjp(fwd.orth_stage, gamma, grad_a);
    case ConstraintMode::Stoch: {
      Tensor3 out(K, basis.n(), basis.n());
      for (std::size_t k = 0; k < K; ++k)
        out.set_slice(k, stochastic_vjp(fwd.eff.a.slice(k), fwd.column_gamma, grad_a.slice(k)));
      return out;
    }
    case ConstraintMode::OrthStoch: {
      Tensor3 grad_l(K, basis.n(), basis.n());
      for (std::size_t k = 0; k < K; ++k)
        grad_l.set_slice(k, stochastic_vjp(fwd.eff.a.slice(k), fwd.column_gamma, grad_a.slice(k)));
      return crispmax_log_odds_vjp(basis.ahat, gamma, grad_l);
    }
  }
  return grad_a;
}

// ---------------------------------------------------------------------------
// epsilon-orthogonality

/// Smallest gamma for which a delta-gapped crispmax over k entries is
/// epsilon-orthogonal: (1/delta) ln(k sqrt(1-2eps) / (1 - sqrt(1-2eps)) + 1).
inline double epsilon_orth_bound(std::size_t k, double delta, double epsilon) {
  if (k < 2) throw DomainError("epsilon_orth_bound: need at least two matrices");
  if (!(delta > 0.0)) throw DomainError("epsilon_orth_bound: delta must be positive");
  if (!(epsilon > 0.0 && epsilon < 0.5)) throw DomainError("epsilon_orth_bound: epsilon must lie in (0, 0.5)");
  const double r = std::sqrt(1.0 - 2.0 * epsilon);
  return std::log(static_cast<double>(k) * r / (1.0 - r) + 1.0) / delta;
}

struct OrthCheck {
  bool ok = true;
  double max_violation = 0.0;
};

/// Max over k != k' and (i,j) of (A_k . A_k')_ij.
inline OrthCheck check_epsilon_orth(const Tensor3& a, double epsilon) {
  OrthCheck r;
  if (a.k() < 2) return r;
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j) {
      // the largest pairwise product at an entry is top1 * top2
      double t1 = -std::numeric_limits<double>::infinity(), t2 = t1;
      for (std::size_t k = 0; k < a.k(); ++k) {
        const double v = a(k, i, j);
        if (v > t1) {
          t2 = t1;
          t1 = v;
        } else if (v > t2) {
          t2 = v;
        }
      }
      r.max_violation = std::max(r.max_violation, t1 * t2);
    }
  r.ok = r.max_violation <= epsilon;
  return r;
}

inline OrthCheck check_epsilon_orth(const EffectiveBasis& eff, double epsilon) {
  return check_epsilon_orth(eff.a, epsilon);
}

/// min over (i,j) of (largest - runner-up) across k; 0 on any tie.
inline double delta_gap(const Tensor3& ahat) {
  if (ahat.k() < 2) return std::numeric_limits<double>::infinity();
  double gap = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < ahat.rows(); ++i)
    for (std::size_t j = 0; j < ahat.cols(); ++j) {
      double t1 = -std::numeric_limits<double>::infinity(), t2 = t1;
      for (std::size_t k = 0; k < ahat.k(); ++k) {
        const double v = ahat(k, i, j);
        if (v > t1) {
          t2 = t1;
          t1 = v;
        } else if (v > t2) {
          t2 = v;
        }
      }
      gap = std::min(gap, t1 - t2);
    }
  if (gap <= 0.0) {
    log::warn("delta_gap: tied entries across the basis; perturb the free parameters");
    return 0.0;
  }
  return gap;
}

/// min over (k, j) of (largest - runner-up) down column j of slice k.
inline double column_gap(const Tensor3& t) {
  if (t.rows() < 2) return std::numeric_limits<double>::infinity();
  double gap = std::numeric_limits<double>::infinity();
  for (std::size_t k = 0; k < t.k(); ++k)
    for (std::size_t j = 0; j < t.cols(); ++j) {
      double t1 = -std::numeric_limits<double>::infinity(), t2 = t1;
      for (std::size_t i = 0; i < t.rows(); ++i) {
        const double v = t(k, i, j);
        if (v > t1) {
          t2 = t1;
          t1 = v;
        } else if (v > t2) {
          t2 = v;
        }
      }
      gap = std::min(gap, t1 - t2);
    }
  return std::max(gap, 0.0);
}

/// max over slices and columns of |colsum - 1|.
inline double max_colsum_deviation(const Tensor3& a) {
  double dev = 0.0;
  for (std::size_t k = 0; k < a.k(); ++k)
    for (std::size_t j = 0; j < a.cols(); ++j) {
      double s = 0.0;
      for (std::size_t i = 0; i < a.rows(); ++i) s += a(k, i, j);
      dev = std::max(dev, std::abs(s - 1.0));
    }
  return dev;
}

// ---------------------------------------------------------------------------
// Schedule and noise

inline double anneal(double gamma_max, std::size_t epoch, std::size_t max_epochs) {
  if (max_epochs == 0) throw DomainError("anneal: max_epochs must be >= 1");
  if (epoch >= max_epochs) return gamma_max;
  return gamma_max * static_cast<double>(epoch) / static_cast<double>(max_epochs);
}

inline Tensor3 perturb(const Tensor3& ahat, double magnitude, std::mt19937_64& rng) {
  if (!(magnitude >= 0.0)) throw DomainError("perturb: magnitude must be >= 0");
  Tensor3 out = ahat;
  if (magnitude == 0.0) return out;
  std::uniform_real_distribution<double> noise(-magnitude, magnitude);
  for (double& v : out.data()) v += noise(rng);
  return out;
}

// ---------------------------------------------------------------------------
// Hypothesis maintenance for the crispmax stages.

namespace detail {
struct Top2 {
  std::size_t arg = 0;
  double first = -std::numeric_limits<double>::infinity();
  double second = -std::numeric_limits<double>::infinity();
};
inline Top2 top2_over_k(const Tensor3& t, std::size_t i, std::size_t j) {
  Top2 r;
  for (std::size_t k = 0; k < t.k(); ++k) {
    const double v = t(k, i, j);
    if (v > r.first) {
      r.second = r.first;
      r.first = v;
      r.arg = k;
    } else if (v > r.second) {
      r.second = v;
    }
  }
  return r;
}
}  // namespace detail

/// Raises the winner of every entry so it leads the runner-up by at least
/// delta. Returns the number of entries touched.
inline std::size_t enforce_delta_gap(Tensor3& ahat, double delta) {
  if (ahat.k() < 2) return 0;
  std::size_t touched = 0;
  for (std::size_t i = 0; i < ahat.rows(); ++i)
    for (std::size_t j = 0; j < ahat.cols(); ++j) {
      const auto t = detail::top2_over_k(ahat, i, j);
      if (t.first - t.second < delta) {
        double v = t.second + delta;
        while (v - t.second < delta) v = std::nextafter(v, std::numeric_limits<double>::infinity());
        ahat(t.arg, i, j) = v;
        ++touched;
      }
    }
  return touched;
}

/// Makes every column of every slice own at least one crispmax winner, by
/// handing over the cheapest entry from a slice that wins more than once in
/// that column. Needs n >= K; a no-op otherwise.
inline std::size_t enforce_column_cover(Tensor3& ahat, double delta) {
  const std::size_t K = ahat.k(), n = ahat.rows();
  if (K < 2 || n < K) return 0;
  std::size_t touched = 0;
  std::vector<std::size_t> winner(n), count(K);
  for (std::size_t j = 0; j < ahat.cols(); ++j) {
    std::fill(count.begin(), count.end(), 0);
    for (std::size_t i = 0; i < n; ++i) {
      winner[i] = detail::top2_over_k(ahat, i, j).arg;
      ++count[winner[i]];
    }
    for (std::size_t k = 0; k < K; ++k) {
      if (count[k] > 0) continue;
      std::size_t best = n;
      double best_cost = std::numeric_limits<double>::infinity();
      for (std::size_t i = 0; i < n; ++i) {
        if (count[winner[i]] < 2) continue;
        const double cost = ahat(winner[i], i, j) - ahat(k, i, j);
        if (cost < best_cost) {
          best_cost = cost;
          best = i;
        }
      }
      if (best == n) continue;
      ahat(k, best, j) = ahat(winner[best], best, j) + delta;
      --count[winner[best]];
      winner[best] = k;
      ++count[k];
      ++touched;
    }
  }
  return touched;
}

/// Within every column of every slice, makes the best crispmax margin lead
/// the second best (over all rows) by at least delta, by raising the leading
/// winner. The margin of slice k at (i,j) is Ahat_kij minus the log-sum-exp
/// of the other slices at sharpness gamma (divided by gamma), i.e. the
/// crispmax log-odds over gamma; gamma = 0 uses the hard max instead.
inline std::size_t enforce_column_margin_gap(Tensor3& ahat, double delta, double gamma = 0.0) {
  const std::size_t K = ahat.k(), n = ahat.rows();
  if (K < 2 || n < 2) return 0;
  auto margin_of = [&](std::size_t k, std::size_t i, std::size_t j) {
    double other = -std::numeric_limits<double>::infinity();
    for (std::size_t m = 0; m < K; ++m)
      if (m != k) other = std::max(other, ahat(m, i, j));
    if (gamma > 0.0) {
      double s = 0.0;
      for (std::size_t m = 0; m < K; ++m)
        if (m != k) s += std::exp(gamma * (ahat(m, i, j) - other));
      other += std::log(s) / gamma;
    }
    return ahat(k, i, j) - other;
  };
  std::size_t touched = 0;
  std::vector<double> margin(n);
  for (std::size_t k = 0; k < K; ++k)
    for (std::size_t j = 0; j < ahat.cols(); ++j) {
      std::size_t lead = 0;
      for (std::size_t i = 0; i < n; ++i) {
        margin[i] = margin_of(k, i, j);
        if (margin[i] > margin[lead]) lead = i;
      }
      if (detail::top2_over_k(ahat, lead, j).arg != k) continue;  // slice k wins nowhere here
      double runner = -std::numeric_limits<double>::infinity();
      for (std::size_t i = 0; i < n; ++i)
        if (i != lead) runner = std::max(runner, margin[i]);
      if (margin[lead] - runner < delta) {
        ahat(k, lead, j) += delta - (margin[lead] - runner);
        ++touched;
      }
    }
  return touched;
}

/// Restores the hypotheses the epsilon-orthogonality guarantee relies on for
/// the given mode: a delta gap per entry (Orth, OrthStoch), plus column cover
/// and a delta margin gap per column (OrthStoch, margins at sharpness gamma).
inline std::size_t enforce_orth_hypotheses(Tensor3& ahat, ConstraintMode mode, double delta, double gamma = 0.0) {
  if (!uses_crispmax(mode)) return 0;
  std::size_t touched = enforce_delta_gap(ahat, delta);
  if (mode == ConstraintMode::OrthStoch) {
    touched += enforce_column_cover(ahat, delta);
    touched += enforce_column_margin_gap(ahat, delta, gamma);
    touched += enforce_delta_gap(ahat, delta);  // cover hand-overs can leave an ulp short
  }
  return touched;
}

// ---------------------------------------------------------------------------
// Sparsity accounting

struct SparsityReport {
  double threshold = 0.0;
  std::size_t nonzero_count = 0;
  std::size_t total_count = 0;
  double pruning_rate_percent = 0.0;
  double target_rate_percent = 0.0;
};

/// floor((1 - 1/K) * 100) for Orth, floor((1 - 1/n) * 100) for OrthStoch, 0 otherwise.
inline double target_pruning_rate(ConstraintMode mode, std::size_t k, std::size_t n) {
  switch (mode) {
    case ConstraintMode::Orth: return k ? static_cast<double>(100 * (k - 1) / k) : 0.0;
    case ConstraintMode::OrthStoch: return n ? static_cast<double>(100 * (n - 1) / n) : 0.0;
    default: return 0.0;
  }
}

inline SparsityReport sparsity_report(const Tensor3& a, ConstraintMode mode, double threshold) {
  if (!(threshold > 0.0)) throw DomainError("sparsity_report: threshold must be positive");
  SparsityReport r;
  r.threshold = threshold;
  r.total_count = a.size();
  for (double v : a.data())
    if (std::abs(v) >= threshold) ++r.nonzero_count;
  r.pruning_rate_percent =
      r.total_count ? 100.0 * (1.0 - static_cast<double>(r.nonzero_count) / static_cast<double>(r.total_count))
                    : 0.0;
  r.target_rate_percent = target_pruning_rate(mode, a.k(), a.rows());
  return r;
}

inline SparsityReport sparsity_report(const EffectiveBasis& eff, double threshold) {
  return sparsity_report(eff.a, eff.mode, threshold);
}

}  // namespace lwgcn
