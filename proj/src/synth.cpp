#include "ceq/synth.hpp"

#include <functional>
#include <numeric>
#include <sstream>

namespace ceq {

std::string to_string(DegVector const &dv)
{
  return "[" + std::to_string(dv.fd) + "," + std::to_string(dv.cd_sum) + "]";
}

std::string to_string(CdArray const &cd)
{
  std::ostringstream os;
  os << '[';
  for (std::size_t i = 0; i < cd.parts.size(); ++i) {
    if (i) { os << ','; }
    os << cd.parts[i];
  }
  os << ']';
  return os.str();
}

int CdArray::sum() const { return std::accumulate(parts.begin(), parts.end(), 0); }

bool deg_vector_valid(int n, DegVector const &dv)
{
  if (n < 1 || n > kMaxVariables) { return false; }
  auto const N = state_count(n);
  if (dv.fd < 1 || dv.cd_sum < 1) { return false; }
  if (dv.fd > N / 2) { return false; }
  if (dv.cd_sum > N) { return false; }
  if (dv.fd > 1 && dv.cd_sum < 2 * dv.fd) { return false; }
  return true;
}

void check_deg_vector(int n, DegVector const &dv)
{
  if (!deg_vector_valid(n, dv)) {
    throw std::invalid_argument("deg_vector " + to_string(dv) + " is not admissible for n = " + std::to_string(n) +
                                " (need 1 <= FD <= 2^(n-1), 1 <= sum CD <= 2^n, sum CD >= 2 FD when FD > 1)");
  }
}

void check_uncertainty_parameter(double x)
{
  if (!(x >= 0.5 && x <= 1.0)) {
    throw std::invalid_argument("uncertainty parameter x = " + std::to_string(x) + " outside [0.5, 1]");
  }
}

std::vector<std::vector<int>> gap(int fd, int delta_max)
{
  if (fd < 1) { throw std::invalid_argument("gap: fd must be >= 1"); }
  if (delta_max < 0) { throw std::invalid_argument("gap: delta_max must be >= 0"); }
  std::vector<std::vector<int>> result;
  std::vector<int> current;
  // Builds nondecreasing arrays, reversing each completed one.
  std::function<void(int)> helper = [&](int remaining) {
    if (remaining == 0) {
      result.emplace_back(current.rbegin(), current.rend());
      return;
    }
    int const start = current.empty() ? 0 : current.back();
    for (int i = start; i <= delta_max; ++i) {
      current.push_back(i);
      helper(remaining - 1);
      current.pop_back();
    }
  };
  helper(fd);
  return result;
}

std::vector<CdArray> expand_cd(int n, DegVector const &dv)
{
  check_deg_vector(n, dv);
  if (dv.fd == 1) { return {CdArray{{dv.cd_sum}}}; }

  std::vector<CdArray> out;
  std::vector<int> parts;
  std::function<void(int, int, int)> rec = [&](int remaining, int slots, int cap) {
    if (slots == 0) {
      if (remaining == 0) { out.push_back(CdArray{parts}); }
      return;
    }
    // Each later slot still needs at least 2.
    int const hi = std::min(cap, remaining - 2 * (slots - 1));
    for (int p = hi; p >= 2; --p) {
      if (p * slots < remaining) { break; }
      parts.push_back(p);
      rec(remaining - p, slots - 1, p);
      parts.pop_back();
    }
  };
  rec(dv.cd_sum, dv.fd, dv.cd_sum);
  return out;
}

Targets skeleton_targets(int n, CdArray const &cd)
{
  Index const N = state_count(n);
  Targets targets(static_cast<std::size_t>(N));
  std::iota(targets.begin(), targets.end(), Index{0});
  Index start = 0;
  for (int const part : cd.parts) {
    if (start + part > N) { throw std::invalid_argument("skeleton_targets: CD array exceeds state count"); }
    for (Index s = start; s < start + part; ++s) { targets[static_cast<std::size_t>(s)] = start; }
    start += part;
  }
  return targets;
}

std::vector<Targets> skeleton_set(int n, DegVector const &dv)
{
  std::vector<Targets> out;
  for (auto const &cd : expand_cd(n, dv)) { out.push_back(skeleton_targets(n, cd)); }
  return out;
}

TpmD targets_to_tpm(int n, Targets const &targets)
{
  Index const N = state_count(n);
  if (static_cast<Index>(targets.size()) != N) {
    throw std::invalid_argument("targets_to_tpm: expected " + std::to_string(N) + " targets");
  }
  Matrix<double> rows = Matrix<double>::Zero(N, N);
  for (Index c = 0; c < N; ++c) { rows(c, targets[static_cast<std::size_t>(c)]) = 1.0; }
  return TpmD(n, std::move(rows));
}

std::vector<TpmD> asymmetric_tpm_set(int n, DegVector const &dv)
{
  std::vector<TpmD> out;
  for (auto const &targets : skeleton_set(n, dv)) { out.push_back(targets_to_tpm(n, targets)); }
  return out;
}

} // namespace ceq
