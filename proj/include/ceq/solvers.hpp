#pragma once

#include "synth.hpp"

#include <cstdint>
#include <optional>
#include <vector>

namespace ceq {

/// All admissible deg_vectors for n variables: FD ascending, then ΣCD ascending.
/// n = 1 yields none.
std::vector<DegVector> enumerate_deg_vectors(int n);

inline constexpr int kGridPoints = 1001;

/// 1001 points from 1.0 down to 0.5, spacing 0.0005.
std::vector<double> x_grid();

struct SolverResult
{
  double x{1.0};
  DegVector dv;
  CdArray cd;
  CausalMetrics<double> metrics;
  std::uint64_t iterations{0}; // (x, dv, cd) triples evaluated up to and including this one
};

/// A solver run: the first match in canonical order, or the closest miss when there is none.
struct SolveOutcome
{
  std::optional<SolverResult> match;
  SolverResult closest;
  double closest_gap{0};
  std::uint64_t iterations{0};

  bool found() const { return match.has_value(); }
};

struct SolverOptions
{
  double tolerance{1e-6};
  /// Restricts the search to these vectors, kept in the given order. Empty means all.
  std::vector<DegVector> deg_vectors;
  /// Worker count; 0 picks the hardware concurrency.
  unsigned threads{1};
};

/// Determinism evaluated from the matrix (TPM solver) or from the closed form (CQE solver).
enum class DeterminismSource
{
  Matrix,
  ClosedForm,
};

SolveOutcome solve(int n, double ei_target, DeterminismSource source, SolverOptions const &options = {});

inline SolveOutcome tpm_solver(int n, double ei_target, SolverOptions const &options = {})
{
  return solve(n, ei_target, DeterminismSource::Matrix, options);
}

inline SolveOutcome cqe_solver(int n, double ei_target, SolverOptions const &options = {})
{
  return solve(n, ei_target, DeterminismSource::ClosedForm, options);
}

struct VectorMatch
{
  DegVector dv;
  CdArray cd;
  double degeneracy{0};
  std::uint64_t iterations{0};
};

struct VectorOutcome
{
  std::optional<VectorMatch> match;
  VectorMatch closest;
  double closest_gap{0};
  std::uint64_t iterations{0};

  bool found() const { return match.has_value(); }
};

/// First deg_vector (and partition) whose synthetic TPM at x has the target degeneracy.
VectorOutcome vector_generator(int n, double degeneracy_target, double x, double tolerance = 1e-6);

} // namespace ceq
