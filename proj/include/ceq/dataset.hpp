#pragma once

#include "synth.hpp"

#include <array>
#include <cstdint>
#include <iosfwd>
#include <random>
#include <string>
#include <vector>

namespace ceq {

struct DatasetRecord
{
  int n{0};
  double determinism{0};
  double degeneracy{0};
  double ei{0};
  double x{1.0};
  int fd{1};
  int cd_sum{1};

  bool operator==(DatasetRecord const &) const = default;
};

struct DatasetOptions
{
  int samples_per_dv{1};
  std::uint64_t seed{0};
  /// Keeps a seeded subset of this many deg_vectors (canonical order preserved). 0 keeps all.
  std::size_t max_deg_vectors{0};
  unsigned threads{1};
};

/// One record per (deg_vector, sampled x), in deg_vector order then x descending.
std::vector<DatasetRecord> generate_dataset(int n, DatasetOptions const &options);

enum class FeatureFormat
{
  Orig,
  Exp,
  Log,
  NegOrig,
  NegExp,
  NegLog,
};

inline constexpr double kLogFloor = 1e-12;

std::string to_string(FeatureFormat fmt);
FeatureFormat parse_feature_format(std::string const &name);
std::array<FeatureFormat, 6> all_feature_formats();

/// (n, degeneracy, ei) in the given format. Log formats floor each feature at kLogFloor before ln.
std::array<double, 3> format_features(DatasetRecord const &rec, FeatureFormat fmt);

struct Split
{
  std::vector<DatasetRecord> train;
  std::vector<DatasetRecord> test;
};

Split split(std::vector<DatasetRecord> const &records, std::uint64_t seed, std::size_t train_count = 360,
            std::size_t test_count = 40);

/// Header comment line, column line, one row per record with formatted features.
void write_dataset_csv(std::ostream &os, std::vector<DatasetRecord> const &records, FeatureFormat fmt, int n,
                       std::uint64_t seed);

/// Uniform integer in [0, bound) by rejection, identical on every platform.
std::uint64_t uniform_below(std::mt19937_64 &rng, std::uint64_t bound);

/// Fisher-Yates shuffle driven by uniform_below.
template <typename T> void seeded_shuffle(std::vector<T> &v, std::mt19937_64 &rng)
{
  for (std::size_t i = v.size(); i > 1; --i) {
    auto const j = static_cast<std::size_t>(uniform_below(rng, i));
    std::swap(v[i - 1], v[j]);
  }
}

} // namespace ceq
