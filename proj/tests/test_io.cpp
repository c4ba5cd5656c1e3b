#include "support.hpp"

#include "ceq/io.hpp"

#include <doctest.h>

#include <filesystem>
#include <fstream>

using namespace ceq;

namespace {

std::filesystem::path scratch(std::string const &name)
{
  auto const dir = std::filesystem::temp_directory_path() / "ceq_io_test";
  std::filesystem::create_directories(dir);
  return dir / name;
}

} // namespace

TEST_SUITE("io")
{
  TEST_CASE("json round trip is exact")
  {
    std::mt19937_64 rng(2);
    for (int k = 0; k < 10; ++k) {
      TpmD const t(3, test::random_stochastic(rng, 8));
      CHECK(tpm_from_json(tpm_to_json(t)).rows() == t.rows());
      CHECK(tpm_from_csv(tpm_to_csv(t)).rows() == t.rows());
    }
  }

  TEST_CASE("json with and without n")
  {
    auto const t = tpm_from_json(R"({"rows": [[0, 1], [1, 0]]})");
    CHECK(t.variables() == 1);
    CHECK(t(0, 1) == 1.0);
    CHECK(tpm_from_json(R"({"n": 1, "rows": [[0.5, 0.5], [1, 0]]})")(0, 0) == 0.5);
    CHECK_THROWS(tpm_from_json(R"({"n": 2, "rows": [[0, 1], [1, 0]]})"));
    CHECK_THROWS(tpm_from_json(R"({"rows": [[0, 1], [1]]})"));
    CHECK_THROWS(tpm_from_json("not json"));
    CHECK_THROWS(tpm_from_json(R"({"rows": [[0.5, 0.6], [1, 0]]})"));
  }

  TEST_CASE("csv parsing")
  {
    auto const t = tpm_from_csv("0.25,0.75\n1,0\n");
    CHECK(t(0, 1) == 0.75);
    CHECK_THROWS(tpm_from_csv("0.25,0.75\n1\n"));
    CHECK_THROWS(tpm_from_csv("a,b\nc,d\n"));
  }

  TEST_CASE("files by extension")
  {
    auto const t = test::load_fixture("fig2_micro.json");
    auto const json = scratch("t.json").string();
    auto const csv = scratch("t.csv").string();
    save_tpm(json, t);
    save_tpm(csv, t);
    CHECK(load_tpm(json).rows() == t.rows());
    CHECK(load_tpm(csv).rows() == t.rows());
    CHECK_THROWS(load_tpm(scratch("missing.json").string()));
  }

  TEST_CASE("every fixture loads")
  {
    for (auto const &entry : std::filesystem::directory_iterator(CEQ_FIXTURE_DIR)) {
      if (entry.path().extension() != ".json") { continue; }
      CAPTURE(entry.path().string());
      CHECK_NOTHROW(load_tpm(entry.path().string()));
    }
  }

  TEST_CASE("mappings")
  {
    CoarseMapping const cm{2, 1, {0, 0, 0, 1}};
    CHECK(mapping_from_json(mapping_to_json(cm)) == cm);
    auto const csv = scratch("m.csv");
    {
      std::ofstream f(csv);
      f << "0,0,0,1\n";
    }
    CHECK(load_mapping(csv.string()) == cm);
    auto const json = scratch("m.json");
    {
      std::ofstream f(json);
      f << mapping_to_json(cm);
    }
    CHECK(load_mapping(json.string()) == cm);
    CHECK_THROWS(mapping_from_json(R"({"n_micro": 2, "n_macro": 1, "map": [0, 0, 0, 0]})"));
  }
}
