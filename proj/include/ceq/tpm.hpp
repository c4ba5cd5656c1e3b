#pragma once

#include <Eigen/Dense>

#include <cmath>
#include <cstdint>
#include <limits>
#include <stdexcept>
#include <string>

namespace ceq {

using Index = Eigen::Index;

template <typename Scalar>
using Matrix = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

template <typename Scalar>
using Vector = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

/// Row-sum deviation accepted (and renormalised away) when building a Tpm.
inline constexpr double kRowSumTolerance = 1e-12;

/// Largest variable count any routine accepts; 2^n states must stay addressable.
inline constexpr int kMaxVariables = 16;

inline Index state_count(int n) { return Index{1} << n; }

/// Bit of variable `var` in `state`; variable 0 is the most significant bit.
inline int state_bit(Index state, int var, int n) { return static_cast<int>((state >> (n - 1 - var)) & 1); }

/// p·log2(p) with the continuous extension 0·log2(0) = 0.
template <typename Scalar> Scalar xlog2x(Scalar p)
{
  return p > Scalar(0) ? p * std::log2(p) : Scalar(0);
}

/// Kullback-Leibler divergence in bits, Σ p_i log2(p_i / q_i).
///
/// Terms with p_i = 0 contribute nothing. Throws std::invalid_argument on a
/// length mismatch and std::domain_error when q_i = 0 while p_i > 0.
template <typename DerivedP, typename DerivedQ>
typename DerivedP::Scalar kl_divergence(Eigen::MatrixBase<DerivedP> const &p, Eigen::MatrixBase<DerivedQ> const &q)
{
  using Scalar = typename DerivedP::Scalar;
  if (p.size() != q.size()) {
    throw std::invalid_argument("kl_divergence: length mismatch (" + std::to_string(p.size()) + " vs " +
                                std::to_string(q.size()) + ")");
  }
  Scalar sum(0);
  for (Index i = 0; i < p.size(); ++i) {
    Scalar const pi = p(i);
    if (pi <= Scalar(0)) { continue; }
    Scalar const qi = q(i);
    if (qi <= Scalar(0)) {
      throw std::domain_error("kl_divergence: q[" + std::to_string(i) + "] = 0 where p > 0");
    }
    sum += pi * std::log2(pi / qi);
  }
  return sum > Scalar(0) ? sum : Scalar(0);
}

/// KL divergence of a distribution from the uniform distribution on its support size.
template <typename Derived> typename Derived::Scalar kl_from_uniform(Eigen::MatrixBase<Derived> const &p)
{
  using Scalar = typename Derived::Scalar;
  Scalar const N = static_cast<Scalar>(p.size());
  Scalar sum(0);
  for (Index i = 0; i < p.size(); ++i) {
    Scalar const pi = p(i);
    if (pi > Scalar(0)) { sum += pi * std::log2(pi * N); }
  }
  return sum > Scalar(0) ? sum : Scalar(0);
}

/// Σ p log2(p · N) over every entry, each of the N² terms evaluated with a packet logarithm.
/// Zero entries contribute 0 because p · log(max(p, tiny)) vanishes there.
template <typename Derived> typename Derived::Scalar sum_plog2_scaled(Eigen::MatrixBase<Derived> const &rows)
{
  using Scalar = typename Derived::Scalar;
  Scalar const N = static_cast<Scalar>(rows.cols());
  auto const a = rows.array();
  Scalar const nats = (a * (a.max(std::numeric_limits<Scalar>::min()) * N).log()).sum();
  return nats / static_cast<Scalar>(std::log(2.0));
}

/// Mean row divergence from uniform, normalised by log2 N. Works on any square row-stochastic expression.
template <typename Derived> typename Derived::Scalar determinism(Eigen::MatrixBase<Derived> const &rows)
{
  using Scalar = typename Derived::Scalar;
  Index const N = rows.rows();
  if (N < 2) { return Scalar(0); }
  Scalar const total = sum_plog2_scaled(rows);
  Scalar const det = total / (static_cast<Scalar>(N) * std::log2(static_cast<Scalar>(N)));
  return det > Scalar(0) ? det : Scalar(0);
}

/// Divergence of the average row (effect distribution) from uniform, normalised by log2 N.
template <typename Derived> typename Derived::Scalar degeneracy(Eigen::MatrixBase<Derived> const &rows)
{
  using Scalar = typename Derived::Scalar;
  Index const N = rows.rows();
  if (N < 2) { return Scalar(0); }
  Vector<Scalar> const effect = rows.colwise().mean().transpose();
  return kl_from_uniform(effect) / std::log2(static_cast<Scalar>(N));
}

template <typename Scalar> struct CausalMetrics
{
  Scalar determinism{0};
  Scalar degeneracy{0};
  Scalar eff{0};
  Scalar ei{0}; // bits
};

template <typename Scalar> CausalMetrics<Scalar> make_metrics(int n, Scalar det, Scalar deg)
{
  return CausalMetrics<Scalar>{det, deg, det - deg, static_cast<Scalar>(n) * (det - deg)};
}

/// Transition probability matrix over the 2^n joint states of n binary variables.
/// rows()(i, j) = P(S_{t+1} = j | do(S_t = i)).
template <typename Scalar> class Tpm
{
public:
  using MatrixType = Matrix<Scalar>;

  Tpm(int n, MatrixType rows)
    : n_(n)
    , rows_(std::move(rows))
  {
    validate();
  }

  static Tpm identity(int n) { return Tpm(n, MatrixType::Identity(state_count(n), state_count(n))); }

  static Tpm uniform(int n)
  {
    Index const N = state_count(n);
    return Tpm(n, MatrixType::Constant(N, N, Scalar(1) / static_cast<Scalar>(N)));
  }

  /// Infers n from a square matrix whose side is a power of two.
  static Tpm from_rows(MatrixType rows)
  {
    Index const N = rows.rows();
    int n = 0;
    while (n <= kMaxVariables && state_count(n) < N) { ++n; }
    if (n > kMaxVariables || state_count(n) != N || n == 0) {
      throw std::invalid_argument("Tpm: side " + std::to_string(N) + " is not 2^n with n >= 1");
    }
    return Tpm(n, std::move(rows));
  }

  int variables() const { return n_; }
  Index states() const { return rows_.rows(); }
  MatrixType const &rows() const { return rows_; }
  Scalar operator()(Index i, Index j) const { return rows_(i, j); }

  bool is_deterministic() const
  {
    for (Index r = 0; r < states(); ++r) {
      if (one_hot_target(r) < 0) { return false; }
    }
    return true;
  }

  /// Column holding the single 1 in row r, or -1 when the row is not one-hot.
  Index one_hot_target(Index r) const
  {
    Index target = -1;
    for (Index c = 0; c < states(); ++c) {
      Scalar const v = rows_(r, c);
      if (v == Scalar(1)) {
        if (target >= 0) { return -1; }
        target = c;
      } else if (v != Scalar(0)) {
        return -1;
      }
    }
    return target;
  }

private:
  void validate()
  {
    if (n_ < 1 || n_ > kMaxVariables) {
      throw std::invalid_argument("Tpm: variable count " + std::to_string(n_) + " outside [1, " +
                                  std::to_string(kMaxVariables) + "]");
    }
    Index const N = state_count(n_);
    if (rows_.rows() != N || rows_.cols() != N) {
      throw std::invalid_argument("Tpm: expected " + std::to_string(N) + "x" + std::to_string(N) + " for n = " +
                                  std::to_string(n_) + ", got " + std::to_string(rows_.rows()) + "x" +
                                  std::to_string(rows_.cols()));
    }
    Scalar const noise = static_cast<Scalar>(N) * std::numeric_limits<Scalar>::epsilon();
    for (Index r = 0; r < N; ++r) {
      for (Index c = 0; c < N; ++c) {
        Scalar &v = rows_(r, c);
        if (v > Scalar(1) && v - Scalar(1) <= noise) { v = Scalar(1); }
        if (!(v >= Scalar(0) && v <= Scalar(1))) {
          throw std::invalid_argument("Tpm: entry (" + std::to_string(r) + ", " + std::to_string(c) +
                                      ") = " + std::to_string(static_cast<double>(v)) + " outside [0, 1]");
        }
      }
      Scalar const sum = rows_.row(r).sum();
      Scalar const dev = std::abs(sum - Scalar(1));
      if (dev >= static_cast<Scalar>(kRowSumTolerance) && dev > Scalar(16) * std::numeric_limits<Scalar>::epsilon()) {
        throw std::invalid_argument("Tpm: row " + std::to_string(r) + " sums to " +
                                    std::to_string(static_cast<double>(sum)));
      }
      if (dev > noise) { rows_.row(r) /= sum; }
    }
  }

  int n_;
  MatrixType rows_;
};

using TpmD = Tpm<double>;

template <typename Scalar> Scalar determinism(Tpm<Scalar> const &tpm) { return determinism(tpm.rows()); }
template <typename Scalar> Scalar degeneracy(Tpm<Scalar> const &tpm) { return degeneracy(tpm.rows()); }
template <typename Scalar> Scalar effectiveness(Tpm<Scalar> const &tpm) { return determinism(tpm) - degeneracy(tpm); }

/// EI in bits: n · (determinism − degeneracy) under uniform interventions.
template <typename Scalar> Scalar effective_information(Tpm<Scalar> const &tpm)
{
  return static_cast<Scalar>(tpm.variables()) * effectiveness(tpm);
}

template <typename Scalar> CausalMetrics<Scalar> metrics(Tpm<Scalar> const &tpm)
{
  return make_metrics(tpm.variables(), determinism(tpm), degeneracy(tpm));
}

/// EI(macro) − EI(micro); positive values indicate causal emergence.
template <typename Scalar> Scalar delta_ei(Tpm<Scalar> const &micro, Tpm<Scalar> const &macro)
{
  if (macro.variables() >= micro.variables()) {
    throw std::invalid_argument("delta_ei: macro model (n = " + std::to_string(macro.variables()) +
                                ") must be smaller than micro model (n = " + std::to_string(micro.variables()) + ")");
  }
  return effective_information(macro) - effective_information(micro);
}

} // namespace ceq
