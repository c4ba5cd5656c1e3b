#pragma once

#include "tpm.hpp"

#include <cstdint>
#include <vector>

namespace ceq {

/// Polynomial terms x^i (1−x)^(n−i) making up one synthetic row, with their multiplicities.
struct RowPolynomialSpec
{
  struct Term
  {
    int exponent;
    std::uint64_t multiplicity;
  };
  int n{0};
  std::vector<Term> terms;
};

/// Running product Π_{k=1..min(i, n−i)} (n−k+1)/k, exact in integers.
inline std::uint64_t polynomial_count(int n, int i)
{
  if (n < 0 || i < 0 || i > n) {
    throw std::invalid_argument("polynomial_count: index " + std::to_string(i) + " outside [0, " + std::to_string(n) +
                                "]");
  }
  int const k_max = std::min(i, n - i);
  std::uint64_t value = 1;
  for (int k = 1; k <= k_max; ++k) {
    // value * (n−k+1) is divisible by k at every step.
    value = value * static_cast<std::uint64_t>(n - k + 1) / static_cast<std::uint64_t>(k);
  }
  return value;
}

inline RowPolynomialSpec row_polynomial_set(int n)
{
  if (n < 1) { throw std::invalid_argument("row_polynomial_set: n must be >= 1"); }
  RowPolynomialSpec spec{n, {}};
  for (int i = 0; i <= n; ++i) { spec.terms.push_back({i, polynomial_count(n, i)}); }
  return spec;
}

/// Evaluates Σ multiplicity · x^i (1−x)^(n−i); equals 1 for every x.
template <typename Scalar> Scalar row_polynomial_mass(RowPolynomialSpec const &spec, Scalar x)
{
  Scalar total(0);
  for (auto const &t : spec.terms) {
    total += static_cast<Scalar>(t.multiplicity) * std::pow(x, t.exponent) * std::pow(Scalar(1) - x, spec.n - t.exponent);
  }
  return total;
}

inline void check_unit_half_interval(double x, char const *who)
{
  if (!(x >= 0.5 && x <= 1.0)) {
    throw std::invalid_argument(std::string(who) + ": x = " + std::to_string(x) + " outside [0.5, 1]");
  }
}

/// 1 + (1−x)log2(1−x) + x log2 x, the determinism of every synthetic TPM at uncertainty x.
template <typename Scalar> Scalar closed_determinism(Scalar x)
{
  check_unit_half_interval(static_cast<double>(x), "closed_determinism");
  return Scalar(1) + xlog2x(Scalar(1) - x) + xlog2x(x);
}

/// Divergence of one synthetic row from uniform: n · closed_determinism(x).
template <typename Scalar> Scalar row_kl(int n, Scalar x)
{
  if (n < 1) { throw std::invalid_argument("row_kl: n must be >= 1"); }
  return static_cast<Scalar>(n) * closed_determinism(x);
}

/// −log2 x, in bits.
template <typename Scalar> Scalar uncertainty(Scalar x)
{
  if (!(x > Scalar(0) && x <= Scalar(1))) {
    throw std::invalid_argument("uncertainty: x = " + std::to_string(static_cast<double>(x)) + " outside (0, 1]");
  }
  return x == Scalar(1) ? Scalar(0) : -std::log2(x);
}

/// Residual of 1 + (1−x)log2(1−x) + x log2 x − degeneracy = EI / n.
template <typename Scalar> Scalar cqe_residual(Scalar x, Scalar deg, Scalar ei, int n)
{
  if (n < 1) { throw std::invalid_argument("cqe_residual: n must be >= 1"); }
  return closed_determinism(x) - deg - ei / static_cast<Scalar>(n);
}

/// Bisection tolerance on x for inverting closed_determinism.
inline constexpr double kInverseTolerance = 1e-12;

/// The unique x in [0.5, 1] with closed_determinism(x) = target.
///
/// Bisects to full double resolution, which is always inside kInverseTolerance.
inline double solve_x_for_determinism(double target)
{
  if (!(target >= 0.0 && target <= 1.0)) {
    throw std::invalid_argument("solve_x_for_determinism: target " + std::to_string(target) + " outside [0, 1]");
  }
  if (target == 0.0) { return 0.5; }
  if (target == 1.0) { return 1.0; }
  double lo = 0.5;
  double hi = 1.0;
  for (;;) {
    double const mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) { break; }
    double const value = closed_determinism(mid);
    if (value == target) { return mid; }
    (value < target ? lo : hi) = mid;
  }
  return std::abs(closed_determinism(lo) - target) <= std::abs(closed_determinism(hi) - target) ? lo : hi;
}

} // namespace ceq
