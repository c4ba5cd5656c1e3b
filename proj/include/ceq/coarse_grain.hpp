#pragma once

#include "tpm.hpp"

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

namespace ceq {

/// Surjective assignment of every micro state to a macro state.
struct CoarseMapping
{
  int n_micro{0};
  int n_macro{0};
  std::vector<Index> map;

  bool operator==(CoarseMapping const &) const = default;
};

/// Throws std::invalid_argument unless the mapping is a surjective coarsening.
void check_mapping(CoarseMapping const &cm);

/// Macro row A is the uniform average of the micro rows in A, with mass summed per macro column.
/// Works on raw state groupings, so the macro state count need not be a power of two.
template <typename Scalar>
Matrix<Scalar> aggregate_rows(Matrix<Scalar> const &micro, std::vector<Index> const &map, Index macro_states)
{
  Index const N = micro.rows();
  Matrix<Scalar> sums = Matrix<Scalar>::Zero(macro_states, N);
  std::vector<Index> sizes(static_cast<std::size_t>(macro_states), 0);
  for (Index s = 0; s < N; ++s) {
    Index const a = map[static_cast<std::size_t>(s)];
    sums.row(a) += micro.row(s);
    ++sizes[static_cast<std::size_t>(a)];
  }
  Matrix<Scalar> macro = Matrix<Scalar>::Zero(macro_states, macro_states);
  for (Index a = 0; a < macro_states; ++a) {
    Scalar const inv = Scalar(1) / static_cast<Scalar>(sizes[static_cast<std::size_t>(a)]);
    for (Index s = 0; s < N; ++s) { macro(a, map[static_cast<std::size_t>(s)]) += sums(a, s) * inv; }
  }
  return macro;
}

TpmD apply_mapping(TpmD const &micro, CoarseMapping const &cm);

enum class Gate
{
  And,
  Or,
};

/// Each group of micro variables collapses to one macro variable through its gate;
/// macro variable j is group j.
struct LogicAggregation
{
  struct Group
  {
    Gate gate{Gate::And};
    std::vector<int> variables;
  };
  std::vector<Group> groups;
};

void check_aggregation(LogicAggregation const &agg, int n_micro);

/// Parses `M1=AND(m0,m1);M2=OR(m2)`. Macro names are labels only; groups keep their written order.
LogicAggregation parse_gate_expr(std::string const &expr);

std::string to_string(LogicAggregation const &agg);

CoarseMapping aggregation_mapping(LogicAggregation const &agg, int n_micro);

struct Coarsening
{
  CoarseMapping mapping;
  TpmD macro;
};

Coarsening logic_aggregate(TpmD const &micro, LogicAggregation const &agg);

/// Number of set partitions of n items into k blocks.
std::uint64_t stirling2(int n, int k);

/// Calls `visit` on every restricted-growth string of length n_items using exactly n_blocks
/// labels, in lexicographic order. Returning false stops the walk.
void for_each_partition(int n_items, int n_blocks, std::function<bool(std::vector<Index> const &)> const &visit);

/// Every surjective grouping of micro states onto fewer macro states, one per macro relabeling
/// class, as restricted-growth strings in canonical order.
std::vector<std::vector<Index>> enumerate_mappings(int n_micro_states, int n_macro_states);

/// Default brute-force guard on the micro model size.
inline constexpr int kBestMacroGuard = 4;

/// Default cap on the number of mappings best_macro will score.
inline constexpr std::uint64_t kBestMacroMappingCap = 10'000'000;

struct BestMacro
{
  CoarseMapping mapping;
  double ei{0};
  std::uint64_t evaluated{0};
};

/// The mapping maximising macro EI, first in canonical order on ties. Throws std::length_error
/// when micro has more than `guard` variables or the mapping count exceeds `mapping_cap`.
BestMacro best_macro(TpmD const &micro, int n_macro, int guard = kBestMacroGuard,
                     std::uint64_t mapping_cap = kBestMacroMappingCap);

} // namespace ceq
