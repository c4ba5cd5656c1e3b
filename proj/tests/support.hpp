#pragma once

#include "ceq/io.hpp"
#include "ceq/tpm.hpp"

#include <random>
#include <string>

namespace ceq::test {

inline std::string fixture(std::string const &name) { return std::string(CEQ_FIXTURE_DIR) + "/" + name; }

inline TpmD load_fixture(std::string const &name) { return load_tpm(fixture(name)); }

/// Random row-stochastic matrix; roughly a third of the entries are zeroed to exercise 0·log 0.
inline Matrix<double> random_stochastic(std::mt19937_64 &rng, Index N, bool sparse = true)
{
  std::uniform_real_distribution<double> u(0.0, 1.0);
  Matrix<double> m(N, N);
  for (Index r = 0; r < N; ++r) {
    for (Index c = 0; c < N; ++c) { m(r, c) = (sparse && u(rng) < 0.33) ? 0.0 : u(rng); }
    if (m.row(r).sum() == 0.0) { m(r, static_cast<Index>(u(rng) * static_cast<double>(N)) % N) = 1.0; }
    m.row(r) /= m.row(r).sum();
  }
  return m;
}

} // namespace ceq::test
