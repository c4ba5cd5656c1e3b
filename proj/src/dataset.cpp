#include "ceq/dataset.hpp"

#include "ceq/cqe.hpp"
#include "ceq/solvers.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <ostream>
#include <thread>

namespace ceq {

std::uint64_t uniform_below(std::mt19937_64 &rng, std::uint64_t bound)
{
  if (bound == 0) { throw std::invalid_argument("uniform_below: bound must be > 0"); }
  std::uint64_t const limit = std::numeric_limits<std::uint64_t>::max() - std::numeric_limits<std::uint64_t>::max() % bound;
  for (;;) {
    std::uint64_t const r = rng();
    if (r < limit) { return r % bound; }
  }
}

namespace {

std::uint64_t splitmix64(std::uint64_t z)
{
  z += 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

std::vector<DatasetRecord> records_for(int n, DegVector const &dv, std::size_t index, DatasetOptions const &o,
                                       std::vector<double> const &grid)
{
  std::mt19937_64 rng(splitmix64(o.seed ^ splitmix64(index + 1)));
  std::vector<std::size_t> picks(grid.size());
  for (std::size_t i = 0; i < picks.size(); ++i) { picks[i] = i; }
  seeded_shuffle(picks, rng);
  picks.resize(std::min(picks.size(), static_cast<std::size_t>(o.samples_per_dv)));
  std::sort(picks.begin(), picks.end()); // grid is descending, so this orders x descending

  auto const cds = expand_cd(n, dv);
  std::vector<DatasetRecord> out;
  Matrix<double> rows;
  for (std::size_t const p : picks) {
    double const x = grid[p];
    auto const &cd = cds[static_cast<std::size_t>(uniform_below(rng, cds.size()))];
    detail::synthesize_into(n, x, skeleton_targets(n, cd), rows);
    double const det = closed_determinism(x);
    double const deg = degeneracy(rows);
    out.push_back({n, det, deg, static_cast<double>(n) * (det - deg), x, dv.fd, dv.cd_sum});
  }
  return out;
}

} // namespace

std::vector<DatasetRecord> generate_dataset(int n, DatasetOptions const &o)
{
  if (n < 2 || n > 11) { throw std::invalid_argument("generate_dataset: n = " + std::to_string(n) + " outside [2, 11]"); }
  if (o.samples_per_dv < 1) { throw std::invalid_argument("generate_dataset: samples_per_dv must be >= 1"); }

  auto dvs = enumerate_deg_vectors(n);
  std::vector<std::size_t> index(dvs.size());
  for (std::size_t i = 0; i < index.size(); ++i) { index[i] = i; }
  if (o.max_deg_vectors > 0 && o.max_deg_vectors < dvs.size()) {
    std::mt19937_64 rng(splitmix64(o.seed));
    seeded_shuffle(index, rng);
    index.resize(o.max_deg_vectors);
    std::sort(index.begin(), index.end());
  }

  auto const grid = x_grid();
  std::vector<std::vector<DatasetRecord>> parts(index.size());
  unsigned const threads = o.threads == 0 ? std::max(1u, std::thread::hardware_concurrency()) : o.threads;
  auto work = [&](std::size_t worker) {
    for (std::size_t k = worker; k < index.size(); k += threads) {
      parts[k] = records_for(n, dvs[index[k]], index[k], o, grid);
    }
  };
  if (threads <= 1) {
    work(0);
  } else {
    std::vector<std::jthread> pool;
    for (unsigned w = 0; w < threads; ++w) { pool.emplace_back(work, w); }
  }

  std::vector<DatasetRecord> out;
  for (auto &p : parts) { out.insert(out.end(), p.begin(), p.end()); }
  return out;
}

std::string to_string(FeatureFormat fmt)
{
  switch (fmt) {
  case FeatureFormat::Orig: return "Orig";
  case FeatureFormat::Exp: return "Exp";
  case FeatureFormat::Log: return "Log";
  case FeatureFormat::NegOrig: return "Neg_Orig";
  case FeatureFormat::NegExp: return "Neg_Exp";
  case FeatureFormat::NegLog: return "Neg_Log";
  }
  return "?";
}

std::array<FeatureFormat, 6> all_feature_formats()
{
  return {FeatureFormat::Orig,    FeatureFormat::Exp,    FeatureFormat::Log,
          FeatureFormat::NegOrig, FeatureFormat::NegExp, FeatureFormat::NegLog};
}

FeatureFormat parse_feature_format(std::string const &name)
{
  for (auto const f : all_feature_formats()) {
    if (to_string(f) == name) { return f; }
  }
  throw std::invalid_argument("unknown feature format '" + name +
                              "' (expected Orig, Exp, Log, Neg_Orig, Neg_Exp, Neg_Log)");
}

std::array<double, 3> format_features(DatasetRecord const &rec, FeatureFormat fmt)
{
  std::array<double, 3> v{static_cast<double>(rec.n), rec.degeneracy, rec.ei};
  bool const neg = fmt == FeatureFormat::NegOrig || fmt == FeatureFormat::NegExp || fmt == FeatureFormat::NegLog;
  for (double &f : v) {
    switch (fmt) {
    case FeatureFormat::Exp:
    case FeatureFormat::NegExp: f = std::exp(f); break;
    case FeatureFormat::Log:
    case FeatureFormat::NegLog: f = std::log(std::max(f, kLogFloor)); break;
    default: break;
    }
    if (neg) { f = -f; }
  }
  return v;
}

Split split(std::vector<DatasetRecord> const &records, std::uint64_t seed, std::size_t train_count,
            std::size_t test_count)
{
  if (records.size() < train_count + test_count) {
    throw std::invalid_argument("split: need " + std::to_string(train_count + test_count) + " records, have " +
                                std::to_string(records.size()));
  }
  std::vector<std::size_t> order(records.size());
  for (std::size_t i = 0; i < order.size(); ++i) { order[i] = i; }
  std::mt19937_64 rng(seed);
  seeded_shuffle(order, rng);
  Split s;
  for (std::size_t i = 0; i < train_count; ++i) { s.train.push_back(records[order[i]]); }
  for (std::size_t i = train_count; i < train_count + test_count; ++i) { s.test.push_back(records[order[i]]); }
  return s;
}

void write_dataset_csv(std::ostream &os, std::vector<DatasetRecord> const &records, FeatureFormat fmt, int n,
                       std::uint64_t seed)
{
  os << "# format=" << to_string(fmt) << " n=" << n << " log_floor=1e-12 seed=" << seed << '\n';
  os << "n,degeneracy,ei,x,fd,cd_sum,determinism\n";
  char buf[512];
  for (auto const &r : records) {
    auto const f = format_features(r, fmt);
    std::snprintf(buf, sizeof buf, "%.17g,%.17g,%.17g,%.17g,%d,%d,%.17g\n", f[0], f[1], f[2], r.x, r.fd, r.cd_sum,
                  r.determinism);
    os << buf;
  }
}

} // namespace ceq
