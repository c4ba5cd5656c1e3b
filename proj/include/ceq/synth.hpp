#pragma once

#include "tpm.hpp"

#include <span>
#include <string>
#include <vector>

namespace ceq {

/// Asymmetry control pair: `fd` degenerate future states absorbing `cd_sum`
/// redundant current states in total. [1, 1] is the symmetric model.
struct DegVector
{
  int fd{1};
  int cd_sum{1};

  bool symmetric() const { return fd == 1 && cd_sum == 1; }
  bool operator==(DegVector const &) const = default;
};

std::string to_string(DegVector const &dv);

/// Throws std::invalid_argument unless dv is admissible for a model of n variables.
void check_deg_vector(int n, DegVector const &dv);
bool deg_vector_valid(int n, DegVector const &dv);

/// Per-future-state split of cd_sum; nonincreasing, one part per degenerate state.
struct CdArray
{
  std::vector<int> parts;

  int sum() const;
  bool operator==(CdArray const &) const = default;
};

std::string to_string(CdArray const &cd);

/// Every nonincreasing array of length fd with entries in [0, delta_max].
std::vector<std::vector<int>> gap(int fd, int delta_max);

/// All nonincreasing partitions of dv.cd_sum into dv.fd parts (each >= 2 when fd > 1),
/// in lexicographically decreasing order.
std::vector<CdArray> expand_cd(int n, DegVector const &dv);

/// Future state of every current state in the deterministic skeleton for one CdArray.
using Targets = std::vector<Index>;

/// Starts from the identity and, walking consecutive blocks from state 0, points every
/// current state of a block at the block's first state.
Targets skeleton_targets(int n, CdArray const &cd);

std::vector<Targets> skeleton_set(int n, DegVector const &dv);

TpmD targets_to_tpm(int n, Targets const &targets);

/// Deterministic TPMs realising dv, one per CdArray from expand_cd.
std::vector<TpmD> asymmetric_tpm_set(int n, DegVector const &dv);

/// n × 2^n matrix of P(v_i = 1 | do(S_t = c)).
template <typename Scalar> struct Vam
{
  int n{0};
  Matrix<Scalar> entries;

  Index cols() const { return entries.cols(); }
};

void check_uncertainty_parameter(double x);

/// Replaces the deterministic activation of every variable by x (bit set) or 1 − x (bit clear).
template <typename Scalar> Vam<Scalar> states_to_vam(Tpm<Scalar> const &tpm, Scalar x)
{
  check_uncertainty_parameter(static_cast<double>(x));
  int const n = tpm.variables();
  Index const N = tpm.states();
  Vam<Scalar> vam{n, Matrix<Scalar>(n, N)};
  for (Index c = 0; c < N; ++c) {
    Index const f = tpm.one_hot_target(c);
    if (f < 0) {
      throw std::invalid_argument("states_to_vam: row " + std::to_string(c) + " is not one-hot");
    }
    for (int i = 0; i < n; ++i) {
      vam.entries(i, c) = state_bit(f, i, n) ? x : Scalar(1) - x;
    }
  }
  return vam;
}

namespace detail {

/// Writes Π_i P(v_i = bit_i(f)) for every future state f into `row` (length 2^n),
/// given the per-variable activation probabilities of one current state.
template <typename Scalar, typename RowExpr> void product_row(std::span<Scalar const> activation, RowExpr &&row)
{
  row(0) = Scalar(1);
  Index len = 1;
  for (Scalar const p : activation) {
    for (Index j = len - 1; j >= 0; --j) {
      Scalar const base = row(j);
      row(2 * j + 1) = base * p;
      row(2 * j) = base * (Scalar(1) - p);
    }
    len *= 2;
  }
}

/// Synthetic TPM rows for a skeleton at uncertainty x, written into `out` without validation.
/// Same arithmetic as vam_to_tpm(states_to_vam(targets_to_tpm(n, targets), x)), minus the
/// Tpm constructor's rounding-level row renormalisation.
template <typename Scalar> void synthesize_into(int n, Scalar x, Targets const &targets, Matrix<Scalar> &out)
{
  Index const N = state_count(n);
  out.resize(N, N);
  std::vector<Scalar> activation(static_cast<std::size_t>(n));
  for (Index c = 0; c < N; ++c) {
    Index const f = targets[static_cast<std::size_t>(c)];
    if (c > 0 && f == targets[static_cast<std::size_t>(c) - 1]) {
      out.row(c) = out.row(c - 1);
      continue;
    }
    for (int i = 0; i < n; ++i) {
      activation[static_cast<std::size_t>(i)] = state_bit(f, i, n) ? x : Scalar(1) - x;
    }
    product_row<Scalar>(activation, out.row(c));
  }
}

} // namespace detail

/// rows[c][f] = Π_i P(v_i = bit_i(f) | c), treating variables as independent given c.
template <typename Scalar> Tpm<Scalar> vam_to_tpm(Vam<Scalar> const &vam)
{
  int const n = vam.n;
  Index const N = state_count(n);
  if (vam.entries.rows() != n || vam.entries.cols() != N) {
    throw std::invalid_argument("vam_to_tpm: expected " + std::to_string(n) + "x" + std::to_string(N) + " VAM");
  }
  if ((vam.entries.array() < Scalar(0)).any() || (vam.entries.array() > Scalar(1)).any()) {
    throw std::invalid_argument("vam_to_tpm: activation probability outside [0, 1]");
  }
  Matrix<Scalar> rows(N, N);
  std::vector<Scalar> activation(static_cast<std::size_t>(n));
  for (Index c = 0; c < N; ++c) {
    for (int i = 0; i < n; ++i) { activation[static_cast<std::size_t>(i)] = vam.entries(i, c); }
    detail::product_row<Scalar>(activation, rows.row(c));
  }
  return Tpm<Scalar>(n, std::move(rows));
}

/// Synthetic TPMs with uncertainty x and asymmetry dv, one per CdArray.
template <typename Scalar> std::vector<Tpm<Scalar>> generate(int n, Scalar x, DegVector const &dv)
{
  check_uncertainty_parameter(static_cast<double>(x));
  std::vector<Tpm<Scalar>> out;
  for (auto const &skeleton : asymmetric_tpm_set(n, dv)) {
    Tpm<Scalar> const det(n, skeleton.rows().template cast<Scalar>());
    out.push_back(vam_to_tpm(states_to_vam(det, x)));
  }
  return out;
}

} // namespace ceq
