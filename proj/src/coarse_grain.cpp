#include "ceq/coarse_grain.hpp"

#include <algorithm>
#include <cctype>
#include <regex>
#include <sstream>

namespace ceq {

void check_mapping(CoarseMapping const &cm)
{
  if (cm.n_micro < 1 || cm.n_micro > kMaxVariables || cm.n_macro < 1) {
    throw std::invalid_argument("mapping: scales must be positive and at most " + std::to_string(kMaxVariables));
  }
  if (cm.n_macro >= cm.n_micro) {
    throw std::invalid_argument("mapping: macro scale " + std::to_string(cm.n_macro) +
                                " must be smaller than micro scale " + std::to_string(cm.n_micro));
  }
  Index const N = state_count(cm.n_micro);
  Index const M = state_count(cm.n_macro);
  if (static_cast<Index>(cm.map.size()) != N) {
    throw std::invalid_argument("mapping: expected " + std::to_string(N) + " entries, got " +
                                std::to_string(cm.map.size()));
  }
  std::vector<bool> hit(static_cast<std::size_t>(M), false);
  for (std::size_t s = 0; s < cm.map.size(); ++s) {
    Index const a = cm.map[s];
    if (a < 0 || a >= M) {
      throw std::invalid_argument("mapping: micro state " + std::to_string(s) + " maps to " + std::to_string(a) +
                                  ", outside [0, " + std::to_string(M) + ")");
    }
    hit[static_cast<std::size_t>(a)] = true;
  }
  for (Index a = 0; a < M; ++a) {
    if (!hit[static_cast<std::size_t>(a)]) {
      throw std::invalid_argument("mapping: macro state " + std::to_string(a) + " has no micro state");
    }
  }
}

TpmD apply_mapping(TpmD const &micro, CoarseMapping const &cm)
{
  check_mapping(cm);
  if (cm.n_micro != micro.variables()) {
    throw std::invalid_argument("apply_mapping: mapping is for n = " + std::to_string(cm.n_micro) +
                                ", TPM has n = " + std::to_string(micro.variables()));
  }
  return TpmD(cm.n_macro, aggregate_rows(micro.rows(), cm.map, state_count(cm.n_macro)));
}

void check_aggregation(LogicAggregation const &agg, int n_micro)
{
  if (agg.groups.empty()) { throw std::invalid_argument("aggregation: no groups"); }
  std::vector<int> seen(static_cast<std::size_t>(std::max(n_micro, 0)), 0);
  bool merges = false;
  for (auto const &g : agg.groups) {
    if (g.variables.empty()) { throw std::invalid_argument("aggregation: empty group"); }
    if (g.variables.size() >= 2) { merges = true; }
    for (int const v : g.variables) {
      if (v < 0 || v >= n_micro) {
        throw std::invalid_argument("aggregation: variable m" + std::to_string(v) + " does not exist for n = " +
                                    std::to_string(n_micro));
      }
      if (seen[static_cast<std::size_t>(v)]++) {
        throw std::invalid_argument("aggregation: variable m" + std::to_string(v) + " used twice");
      }
    }
  }
  for (int v = 0; v < n_micro; ++v) {
    if (!seen[static_cast<std::size_t>(v)]) {
      throw std::invalid_argument("aggregation: variable m" + std::to_string(v) + " is not in any group");
    }
  }
  if (!merges) { throw std::invalid_argument("aggregation: at least one group must merge two variables"); }
}

LogicAggregation parse_gate_expr(std::string const &expr)
{
  std::string compact;
  for (char const c : expr) {
    if (!std::isspace(static_cast<unsigned char>(c))) { compact.push_back(c); }
  }
  static std::regex const group_re(R"(^(?:[A-Za-z_]\w*=)?(AND|OR|and|or)\(([^()]*)\)$)");
  static std::regex const var_re(R"(^[mv]?(\d+)$)");

  LogicAggregation agg;
  std::stringstream ss(compact);
  std::string item;
  while (std::getline(ss, item, ';')) {
    if (item.empty()) { continue; }
    std::smatch m;
    if (!std::regex_match(item, m, group_re)) {
      throw std::invalid_argument("gate expression: cannot parse '" + item + "' (expected NAME=AND(m0,m1))");
    }
    LogicAggregation::Group g;
    std::string op = m[1];
    g.gate = (op == "AND" || op == "and") ? Gate::And : Gate::Or;
    std::stringstream vs(m[2].str());
    std::string var;
    while (std::getline(vs, var, ',')) {
      std::smatch vm;
      if (!std::regex_match(var, vm, var_re)) {
        throw std::invalid_argument("gate expression: bad variable '" + var + "' in '" + item + "'");
      }
      g.variables.push_back(std::stoi(vm[1]));
    }
    if (g.variables.empty()) { throw std::invalid_argument("gate expression: empty group in '" + item + "'"); }
    agg.groups.push_back(std::move(g));
  }
  if (agg.groups.empty()) { throw std::invalid_argument("gate expression: no groups in '" + expr + "'"); }
  return agg;
}

std::string to_string(LogicAggregation const &agg)
{
  std::ostringstream os;
  for (std::size_t j = 0; j < agg.groups.size(); ++j) {
    auto const &g = agg.groups[j];
    if (j) { os << ';'; }
    os << 'M' << j + 1 << '=' << (g.gate == Gate::And ? "AND" : "OR") << '(';
    for (std::size_t k = 0; k < g.variables.size(); ++k) {
      if (k) { os << ','; }
      os << 'm' << g.variables[k];
    }
    os << ')';
  }
  return os.str();
}

CoarseMapping aggregation_mapping(LogicAggregation const &agg, int n_micro)
{
  check_aggregation(agg, n_micro);
  int const n_macro = static_cast<int>(agg.groups.size());
  CoarseMapping cm{n_micro, n_macro, std::vector<Index>(static_cast<std::size_t>(state_count(n_micro)))};
  for (Index s = 0; s < state_count(n_micro); ++s) {
    Index macro = 0;
    for (int j = 0; j < n_macro; ++j) {
      auto const &g = agg.groups[static_cast<std::size_t>(j)];
      bool bit = g.gate == Gate::And;
      for (int const v : g.variables) {
        bool const b = state_bit(s, v, n_micro) != 0;
        bit = g.gate == Gate::And ? (bit && b) : (bit || b);
      }
      macro = (macro << 1) | (bit ? 1 : 0);
    }
    cm.map[static_cast<std::size_t>(s)] = macro;
  }
  return cm;
}

Coarsening logic_aggregate(TpmD const &micro, LogicAggregation const &agg)
{
  auto cm = aggregation_mapping(agg, micro.variables());
  auto macro = apply_mapping(micro, cm);
  return {std::move(cm), std::move(macro)};
}

std::uint64_t stirling2(int n, int k)
{
  if (n < 0 || k < 0) { throw std::invalid_argument("stirling2: negative argument"); }
  std::vector<std::uint64_t> row(static_cast<std::size_t>(k) + 1, 0);
  row[0] = 1;
  for (int i = 1; i <= n; ++i) {
    for (int j = std::min(i, k); j >= 1; --j) {
      row[static_cast<std::size_t>(j)] =
        static_cast<std::uint64_t>(j) * row[static_cast<std::size_t>(j)] + row[static_cast<std::size_t>(j) - 1];
    }
    row[0] = 0;
  }
  return row[static_cast<std::size_t>(k)];
}

void for_each_partition(int n_items, int n_blocks, std::function<bool(std::vector<Index> const &)> const &visit)
{
  if (n_items < 1 || n_blocks < 1 || n_blocks > n_items) { return; }
  std::vector<Index> rgs(static_cast<std::size_t>(n_items), 0);
  bool stop = false;
  // a[i] <= max(a[0..i-1]) + 1, and every label below n_blocks must appear.
  std::function<void(int, Index)> rec = [&](int i, Index used) {
    if (stop) { return; }
    if (i == n_items) {
      if (used == n_blocks && !visit(rgs)) { stop = true; }
      return;
    }
    if (used + (n_items - i) < n_blocks) { return; }
    Index const hi = std::min<Index>(used, n_blocks - 1);
    for (Index v = 0; v <= hi && !stop; ++v) {
      rgs[static_cast<std::size_t>(i)] = v;
      rec(i + 1, std::max(used, v + 1));
    }
  };
  rec(0, 0);
}

std::vector<std::vector<Index>> enumerate_mappings(int n_micro_states, int n_macro_states)
{
  if (n_macro_states < 1 || n_macro_states >= n_micro_states) {
    throw std::invalid_argument("enumerate_mappings: need 1 <= macro states < micro states, got " +
                                std::to_string(n_macro_states) + " and " + std::to_string(n_micro_states));
  }
  std::vector<std::vector<Index>> out;
  for_each_partition(n_micro_states, n_macro_states, [&](std::vector<Index> const &rgs) {
    out.push_back(rgs);
    return true;
  });
  return out;
}

BestMacro best_macro(TpmD const &micro, int n_macro, int guard, std::uint64_t mapping_cap)
{
  int const n = micro.variables();
  if (n > guard) {
    throw std::length_error("best_macro: micro model has " + std::to_string(n) + " variables, above the guard of " +
                            std::to_string(guard));
  }
  if (n_macro < 1 || n_macro >= n) { throw std::invalid_argument("best_macro: need 1 <= n_macro < micro n"); }
  int const N = static_cast<int>(micro.states());
  Index const M = state_count(n_macro);
  auto const count = stirling2(N, static_cast<int>(M));
  if (count > mapping_cap) {
    throw std::length_error("best_macro: " + std::to_string(count) + " mappings exceed the cap of " +
                            std::to_string(mapping_cap));
  }
  BestMacro best;
  best.ei = -std::numeric_limits<double>::infinity();
  for_each_partition(N, static_cast<int>(M), [&](std::vector<Index> const &rgs) {
    auto const rows = aggregate_rows(micro.rows(), rgs, M);
    double const ei = static_cast<double>(n_macro) * (determinism(rows) - degeneracy(rows));
    ++best.evaluated;
    if (ei > best.ei) {
      best.ei = ei;
      best.mapping = CoarseMapping{n, n_macro, rgs};
    }
    return true;
  });
  return best;
}

} // namespace ceq
