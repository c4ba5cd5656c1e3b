#include "ceq/solvers.hpp"

#include "ceq/cqe.hpp"

#include <algorithm>
#include <cmath>
#include <thread>

namespace ceq {

std::vector<DegVector> enumerate_deg_vectors(int n)
{
  if (n < 1 || n > kMaxVariables) {
    throw std::invalid_argument("enumerate_deg_vectors: n = " + std::to_string(n) + " outside [1, " +
                                std::to_string(kMaxVariables) + "]");
  }
  std::vector<DegVector> out;
  if (n == 1) { return out; }
  int const N = static_cast<int>(state_count(n));
  for (int fd = 1; fd <= N / 2; ++fd) {
    for (int cd_sum = 1; cd_sum <= N; ++cd_sum) {
      if (fd > 1 && cd_sum < 2 * fd) { continue; }
      out.push_back({fd, cd_sum});
    }
  }
  return out;
}

std::vector<double> x_grid()
{
  // start + k * step, the same evaluation numpy.linspace uses.
  double const start = 1.0;
  double const stop = 0.5;
  double const step = (stop - start) / static_cast<double>(kGridPoints - 1);
  std::vector<double> grid(kGridPoints);
  for (int k = 0; k < kGridPoints; ++k) { grid[static_cast<std::size_t>(k)] = start + static_cast<double>(k) * step; }
  grid.back() = stop;
  return grid;
}

namespace {

unsigned resolve_threads(unsigned requested)
{
  if (requested == 0) { requested = std::max(1u, std::thread::hardware_concurrency()); }
  return requested;
}

/// Runs `scan` over items [0, count) in canonical order, `threads` at a time, and stops after
/// the first wave holding a hit. Results of items past the first hit are discarded.
template <typename Result, typename Scan, typename Hit>
std::vector<Result> ordered_scan(std::size_t count, unsigned threads, Scan &&scan, Hit &&hit)
{
  std::vector<Result> results;
  results.reserve(count);
  for (std::size_t begin = 0; begin < count; begin += threads) {
    std::size_t const end = std::min(count, begin + threads);
    std::vector<Result> wave(end - begin);
    if (end - begin == 1) {
      wave[0] = scan(begin);
    } else {
      std::vector<std::jthread> workers;
      for (std::size_t i = begin; i < end; ++i) {
        workers.emplace_back([&, i] { wave[i - begin] = scan(i); });
      }
    }
    for (auto &r : wave) {
      bool const stop = hit(r);
      results.push_back(std::move(r));
      if (stop) { return results; }
    }
  }
  return results;
}

struct DvScan
{
  std::optional<SolverResult> match;
  SolverResult closest;
  double closest_gap{std::numeric_limits<double>::infinity()};
  std::uint64_t evaluated{0};
};

DvScan scan_deg_vector(int n, DegVector const &dv, double ei_target, DeterminismSource source, double tolerance,
                       std::vector<double> const &grid)
{
  DvScan scan;
  auto const cds = expand_cd(n, dv);
  std::vector<Targets> skeletons;
  skeletons.reserve(cds.size());
  for (auto const &cd : cds) { skeletons.push_back(skeleton_targets(n, cd)); }

  Matrix<double> rows;
  for (double const x : grid) {
    double const closed = closed_determinism(x);
    for (std::size_t k = 0; k < skeletons.size(); ++k) {
      detail::synthesize_into(n, x, skeletons[k], rows);
      double const det = source == DeterminismSource::Matrix ? determinism(rows) : closed;
      double const deg = degeneracy(rows);
      auto const m = make_metrics(n, det, deg);
      ++scan.evaluated;
      double const gap = std::abs(ei_target - m.ei);
      if (gap < scan.closest_gap) {
        scan.closest_gap = gap;
        scan.closest = SolverResult{x, dv, cds[k], m, scan.evaluated};
      }
      if (gap < tolerance) {
        scan.match = SolverResult{x, dv, cds[k], m, scan.evaluated};
        return scan;
      }
    }
  }
  return scan;
}

} // namespace

SolveOutcome solve(int n, double ei_target, DeterminismSource source, SolverOptions const &options)
{
  if (n < 1 || n > kMaxVariables) {
    throw std::invalid_argument("solve: n = " + std::to_string(n) + " outside [1, " + std::to_string(kMaxVariables) +
                                "]");
  }
  if (!(ei_target >= 0.0 && ei_target <= static_cast<double>(n))) {
    throw std::invalid_argument("solve: EI target " + std::to_string(ei_target) + " outside [0, " +
                                std::to_string(n) + "]");
  }
  if (!(options.tolerance > 0.0)) { throw std::invalid_argument("solve: tolerance must be > 0"); }

  std::vector<DegVector> const dvs = options.deg_vectors.empty() ? enumerate_deg_vectors(n) : options.deg_vectors;
  for (auto const &dv : dvs) { check_deg_vector(n, dv); }
  auto const grid = x_grid();

  auto const scans = ordered_scan<DvScan>(
    dvs.size(), resolve_threads(options.threads),
    [&](std::size_t i) { return scan_deg_vector(n, dvs[i], ei_target, source, options.tolerance, grid); },
    [](DvScan const &s) { return s.match.has_value(); });

  SolveOutcome outcome;
  outcome.closest_gap = std::numeric_limits<double>::infinity();
  std::uint64_t before = 0;
  for (auto const &s : scans) {
    if (s.closest_gap < outcome.closest_gap) {
      outcome.closest_gap = s.closest_gap;
      outcome.closest = s.closest;
      outcome.closest.iterations += before;
    }
    if (s.match) {
      outcome.match = *s.match;
      outcome.match->iterations += before;
    }
    before += s.evaluated;
  }
  outcome.iterations = before;
  return outcome;
}

VectorOutcome vector_generator(int n, double degeneracy_target, double x, double tolerance)
{
  if (!(degeneracy_target >= 0.0 && degeneracy_target <= 1.0)) {
    throw std::invalid_argument("vector_generator: degeneracy target " + std::to_string(degeneracy_target) +
                                " outside [0, 1]");
  }
  if (!(tolerance > 0.0)) { throw std::invalid_argument("vector_generator: tolerance must be > 0"); }
  check_uncertainty_parameter(x);

  VectorOutcome outcome;
  outcome.closest_gap = std::numeric_limits<double>::infinity();
  Matrix<double> rows;
  for (auto const &dv : enumerate_deg_vectors(n)) {
    for (auto const &cd : expand_cd(n, dv)) {
      detail::synthesize_into(n, x, skeleton_targets(n, cd), rows);
      double const deg = degeneracy(rows);
      ++outcome.iterations;
      double const gap = std::abs(degeneracy_target - deg);
      if (gap < outcome.closest_gap) {
        outcome.closest_gap = gap;
        outcome.closest = VectorMatch{dv, cd, deg, outcome.iterations};
      }
      if (gap < tolerance) {
        outcome.match = outcome.closest;
        return outcome;
      }
    }
  }
  return outcome;
}

} // namespace ceq
