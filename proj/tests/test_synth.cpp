#include "support.hpp"

#include "ceq/cqe.hpp"
#include "ceq/synth.hpp"

#include <doctest.h>

#include <set>

using namespace ceq;
using doctest::Approx;

namespace {

using Arrays = std::vector<std::vector<int>>;

std::uint64_t binomial(int n, int k)
{
  std::uint64_t v = 1;
  for (int i = 1; i <= k; ++i) { v = v * static_cast<std::uint64_t>(n - k + i) / static_cast<std::uint64_t>(i); }
  return v;
}

// Independent oracle: filter all compositions by the partition rules.
std::vector<CdArray> brute_partitions(int total, int parts)
{
  std::vector<CdArray> out;
  std::vector<int> cur(static_cast<std::size_t>(parts), 0);
  std::function<void(int)> rec = [&](int i) {
    if (i == parts) {
      int s = 0;
      for (int v : cur) { s += v; }
      bool ok = s == total;
      for (int k = 0; k < parts; ++k) {
        if (parts > 1 && cur[static_cast<std::size_t>(k)] < 2) { ok = false; }
        if (k > 0 && cur[static_cast<std::size_t>(k)] > cur[static_cast<std::size_t>(k) - 1]) { ok = false; }
      }
      if (ok) { out.push_back(CdArray{cur}); }
      return;
    }
    for (int v = 1; v <= total; ++v) {
      cur[static_cast<std::size_t>(i)] = v;
      rec(i + 1);
    }
  };
  rec(0);
  std::sort(out.begin(), out.end(), [](CdArray const &a, CdArray const &b) { return a.parts > b.parts; });
  return out;
}

} // namespace

TEST_SUITE("synth_gen")
{
  TEST_CASE("gap examples")
  {
    CHECK(gap(2, 0) == Arrays{{0, 0}});
    CHECK(gap(2, 1) == Arrays{{0, 0}, {1, 0}, {1, 1}});
    CHECK(gap(3, 1) == Arrays{{0, 0, 0}, {1, 0, 0}, {1, 1, 0}, {1, 1, 1}});
    CHECK_THROWS_AS(gap(0, 1), std::invalid_argument);
    CHECK_THROWS_AS(gap(1, -1), std::invalid_argument);
  }

  TEST_CASE("gap size is the multiset count and every array is nonincreasing")
  {
    for (int fd = 1; fd <= 5; ++fd) {
      for (int d = 0; d <= 5; ++d) {
        auto const arrays = gap(fd, d);
        CHECK(arrays.size() == binomial(fd + d, d));
        for (auto const &a : arrays) {
          CHECK(std::is_sorted(a.rbegin(), a.rend()));
          CHECK(*std::max_element(a.begin(), a.end()) <= d);
        }
      }
    }
  }

  TEST_CASE("expand_cd examples")
  {
    CHECK(expand_cd(2, {1, 3}) == std::vector<CdArray>{CdArray{{3}}});
    CHECK(expand_cd(3, {2, 5}) == std::vector<CdArray>{CdArray{{3, 2}}});
    CHECK(expand_cd(3, {2, 8}) == std::vector<CdArray>{CdArray{{6, 2}}, CdArray{{5, 3}}, CdArray{{4, 4}}});
    CHECK(expand_cd(2, {1, 1}) == std::vector<CdArray>{CdArray{{1}}});
  }

  TEST_CASE("expand_cd matches a brute-force partition oracle")
  {
    for (int n = 2; n <= 4; ++n) {
      int const N = static_cast<int>(state_count(n));
      for (int fd = 1; fd <= N / 2; ++fd) {
        for (int s = 1; s <= N; ++s) {
          DegVector const dv{fd, s};
          if (!deg_vector_valid(n, dv)) { continue; }
          auto const got = expand_cd(n, dv);
          CHECK(got == brute_partitions(s, fd));
          for (auto const &cd : got) {
            CHECK(cd.sum() == s);
            CHECK(static_cast<int>(cd.parts.size()) == fd);
          }
        }
      }
    }
  }

  TEST_CASE("expand_cd reduces to the ceil/floor split for small sums")
  {
    for (int fd = 2; fd <= 4; ++fd) {
      for (int s = 2 * fd; s < 2 * fd + 2; ++s) {
        auto const cds = expand_cd(4, {fd, s});
        REQUIRE(cds.size() == 1);
        CHECK(cds[0].parts.front() == (s + fd - 1) / fd);
        CHECK(cds[0].parts.back() == s / fd);
      }
    }
  }

  TEST_CASE("deg_vector validity")
  {
    CHECK(deg_vector_valid(2, {1, 1}));
    CHECK(deg_vector_valid(2, {2, 4}));
    CHECK_FALSE(deg_vector_valid(2, {3, 4}));
    CHECK_FALSE(deg_vector_valid(2, {1, 5}));
    CHECK_FALSE(deg_vector_valid(3, {2, 3}));
    CHECK_FALSE(deg_vector_valid(3, {0, 3}));
    CHECK_THROWS_AS(expand_cd(2, {2, 3}), std::invalid_argument);
    CHECK_THROWS_AS(asymmetric_tpm_set(2, {1, 5}), std::invalid_argument);
  }

  TEST_CASE("asymmetric_tpm_set examples")
  {
    auto const sym = asymmetric_tpm_set(2, {1, 1});
    REQUIRE(sym.size() == 1);
    CHECK(sym[0].rows() == Matrix<double>::Identity(4, 4));

    auto const one_three = asymmetric_tpm_set(2, {1, 3});
    REQUIRE(one_three.size() == 1);
    Matrix<double> expected = Matrix<double>::Zero(4, 4);
    expected(0, 0) = expected(1, 0) = expected(2, 0) = expected(3, 3) = 1;
    CHECK(one_three[0].rows() == expected);

    CHECK(asymmetric_tpm_set(3, {2, 8}).size() == 3);
  }

  TEST_CASE("dv = [1,k] gives k identical rows and N-k distinct one-hot rows")
  {
    for (int n = 1; n <= 5; ++n) {
      int const N = static_cast<int>(state_count(n));
      for (int k = 1; k <= N; ++k) {
        auto const t = asymmetric_tpm_set(n, {1, k}).front();
        std::multiset<Index> targets;
        for (Index r = 0; r < N; ++r) { targets.insert(t.one_hot_target(r)); }
        CHECK(targets.count(0) == static_cast<std::size_t>(k));
        std::set<Index> const distinct(targets.begin(), targets.end());
        CHECK(distinct.size() == static_cast<std::size_t>(N - k + 1));
      }
    }
  }

  TEST_CASE("at x = 1 skeleton degeneracy is invariant to which block row is copied")
  {
    for (int n = 2; n <= 4; ++n) {
      for (auto const &cd : expand_cd(n, {2, static_cast<int>(state_count(n))})) {
        auto const first = skeleton_targets(n, cd);
        auto middle = first;
        Index start = 0;
        for (int part : cd.parts) {
          for (Index s = start; s < start + part; ++s) { middle[static_cast<std::size_t>(s)] = start + part / 2; }
          start += part;
        }
        auto const a = targets_to_tpm(n, first);
        auto const b = targets_to_tpm(n, middle);
        CHECK(degeneracy(a) == Approx(degeneracy(b)).epsilon(1e-12));
        // Below x = 1 the spread depends on the target's bit pattern, so the choice matters.
        double const x = 0.8;
        auto const sa = vam_to_tpm(states_to_vam(a, x));
        auto const sb = vam_to_tpm(states_to_vam(b, x));
        CHECK(determinism(sa) == Approx(determinism(sb)).epsilon(1e-12));
      }
    }
  }

  TEST_CASE("states_to_vam")
  {
    auto const id = states_to_vam(TpmD::identity(2), 1.0);
    for (int i = 0; i < 2; ++i) {
      for (Index c = 0; c < 4; ++c) { CHECK(id.entries(i, c) == state_bit(c, i, 2)); }
    }
    auto const fig8 = states_to_vam(test::load_fixture("fig8a.json"), 0.8);
    CHECK(fig8.entries(0, 0) == Approx(0.2).epsilon(1e-15));
    CHECK(fig8.entries(1, 0) == Approx(0.8).epsilon(1e-15));
    auto const half = states_to_vam(test::load_fixture("fig4_left.json"), 0.5);
    CHECK((half.entries.array() == 0.5).all());
    CHECK_THROWS_AS(states_to_vam(test::load_fixture("fig2_micro.json"), 0.8), std::invalid_argument);
    CHECK_THROWS_AS(states_to_vam(TpmD::identity(2), 0.4), std::invalid_argument);
    CHECK_THROWS_AS(states_to_vam(TpmD::identity(2), 1.1), std::invalid_argument);
  }

  TEST_CASE("vam_to_tpm product row for a funnelling skeleton")
  {
    auto const t = vam_to_tpm(states_to_vam(test::load_fixture("fig8a.json"), 0.8));
    CHECK(std::abs(t(0, 0) - 0.16) < 1e-12);
    CHECK(std::abs(t(0, 1) - 0.64) < 1e-12);
    CHECK(std::abs(t(0, 2) - 0.04) < 1e-12);
    CHECK(std::abs(t(0, 3) - 0.16) < 1e-12);
  }

  TEST_CASE("all-half VAM gives uniform rows")
  {
    Vam<double> v{3, Matrix<double>::Constant(3, 8, 0.5)};
    auto const t = vam_to_tpm(v);
    CHECK((t.rows().array() == 0.125).all());
  }

  TEST_CASE("vam_to_tpm validates shape and range")
  {
    CHECK_THROWS_AS(vam_to_tpm(Vam<double>{2, Matrix<double>::Constant(2, 3, 0.5)}), std::invalid_argument);
    CHECK_THROWS_AS(vam_to_tpm(Vam<double>{2, Matrix<double>::Constant(2, 4, 1.5)}), std::invalid_argument);
  }

  TEST_CASE("round trip at x = 1 is exact")
  {
    for (int n = 1; n <= 4; ++n) {
      for (auto const &dv : std::vector<DegVector>{{1, 1}, {1, 2}, {2, 4}}) {
        if (!deg_vector_valid(n, dv)) { continue; }
        for (auto const &t : asymmetric_tpm_set(n, dv)) {
          CHECK(vam_to_tpm(states_to_vam(t, 1.0)).rows() == t.rows());
        }
      }
    }
  }

  TEST_CASE("generate")
  {
    auto const id = generate<double>(2, 1.0, {1, 1});
    REQUIRE(id.size() == 1);
    CHECK(id[0].rows() == Matrix<double>::Identity(4, 4));

    auto const g = generate<double>(2, 0.8, {1, 3});
    REQUIRE(g.size() == 1);
    // Redundant rows all carry target 00's product row.
    for (Index r = 1; r < 3; ++r) { CHECK(g[0].rows().row(r) == g[0].rows().row(0)); }
    CHECK(g[0](0, 0) == Approx(0.64));

    auto const three = generate<double>(3, 0.9, {2, 8});
    CHECK(three.size() == 3);
    for (auto const &t : three) { CHECK(determinism(t) == Approx(closed_determinism(0.9)).epsilon(1e-12)); }
  }

  TEST_CASE("fast synthesis matches the VAM round trip")
  {
    for (int n = 1; n <= 5; ++n) {
      for (double x : {1.0, 0.95, 0.8, 0.5}) {
        for (auto const &cd : expand_cd(n, {1, static_cast<int>(state_count(n)) / 2 + 1})) {
          auto const targets = skeleton_targets(n, cd);
          Matrix<double> fast;
          detail::synthesize_into(n, x, targets, fast);
          auto const slow = vam_to_tpm(states_to_vam(targets_to_tpm(n, targets), x));
          CHECK((fast - slow.rows()).cwiseAbs().maxCoeff() < 1e-15);
        }
      }
    }
  }

  TEST_CASE("to_string")
  {
    CHECK(to_string(DegVector{2, 5}) == "[2,5]");
    CHECK(to_string(CdArray{{3, 2}}) == "[3,2]");
  }
}
