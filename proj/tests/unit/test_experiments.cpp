#include <cmath>
#include <filesystem>
#include <fstream>
#include <optional>
#include <sstream>

#include "doctest.h"
#include "fraclab/experiments.hpp"
#include "fraclab/nonlocal_ops.hpp"

using namespace fraclab;
using nlohmann::json;

namespace {

json small_sweep() {
  return json::parse(R"({
    "schema": 1,
    "name": "small",
    "order": {"N": 1, "s": 0.5},
    "omega": [-1, 1],
    "family": {"kind": "traveling_ball", "length": 1, "base": 1, "ratio": 2, "k": [0, 1, 2]},
    "discretization": {"h": 0.1, "L": 8, "scheme": "P1"},
    "solver": {"tol": 1e-10, "max_iter": 500}
  })");
}

bool same(double x, double y) { return (std::isnan(x) && std::isnan(y)) || x == y; }

}  // namespace

TEST_CASE("config parsing fills every block and round trips") {
  ExperimentConfig c = parse_config(small_sweep());
  CHECK(c.name == "small");
  CHECK(c.s == 0.5);
  CHECK(c.omega.a == -1.0);
  CHECK(c.family.kind == FamilyKind::TravelingBall);
  CHECK(c.ks == std::vector<int>{0, 1, 2});
  CHECK(c.disc.h == 0.1);
  CHECK(c.solver.max_iter == 500);
  CHECK(c.outputs.csv == "records.csv");

  ExperimentConfig again = parse_config(to_json(c));
  CHECK(again.family.base == c.family.base);
  CHECK(again.ks == c.ks);
  CHECK(again.disc.scheme == c.disc.scheme);
}

TEST_CASE("config parsing is strict") {
  auto code_of = [](const json& j) -> std::optional<ErrorCode> {
    try {
      parse_config(j);
    } catch (const Error& e) {
      return e.code();
    }
    return std::nullopt;
  };
  json j = small_sweep();
  j["discretization"]["hh"] = 0.1;
  CHECK(code_of(j) == ErrorCode::ConfigError);

  j = small_sweep();
  j["extra"] = 1;
  CHECK(code_of(j) == ErrorCode::ConfigError);

  j = small_sweep();
  j.erase("schema");
  CHECK(code_of(j) == ErrorCode::ConfigError);

  j = small_sweep();
  j["schema"] = 7;
  CHECK(code_of(j) == ErrorCode::ConfigError);

  j = small_sweep();
  j["order"]["s"] = "half";
  CHECK(code_of(j) == ErrorCode::ConfigError);

  j = small_sweep();
  j["partition"] = {{"dirichlet", json::array({json::array({1, 2})})}};
  CHECK(code_of(j) == ErrorCode::ConfigError);
}

TEST_CASE("exterior sets accept infinite ends") {
  ExteriorSet s = parse_exterior_set(json::parse(R"([["-inf", -3], [2, null]])"));
  REQUIRE(s.intervals().size() == 2);
  CHECK(std::isinf(s.intervals()[0].lo));
  CHECK(s.intervals()[1].lo == 2.0);
  CHECK(std::isinf(s.intervals()[1].hi));
}

TEST_CASE("a fixed partition block gives a single record") {
  json j = small_sweep();
  j.erase("family");
  j["partition"] = {{"dirichlet", json::array({json::array({1, 2})})}};
  ExperimentConfig c = parse_config(j);
  REQUIRE(c.fixed_partition);
  CHECK(c.ks == std::vector<int>{0});
  ExteriorPartition p = c.partition(0);
  CHECK(p.dirichlet.measure() == doctest::Approx(1.0));
  CHECK(std::isinf(p.neumann.measure()));
}

TEST_CASE("log-log fits") {
  std::vector<double> x, y;
  for (double t : {1.0, 2.0, 4.0, 8.0, 16.0}) {
    x.push_back(t);
    y.push_back(3.0 * t * t);
  }
  RateFit f = fit_rate(x, y);
  CHECK(f.slope == doctest::Approx(2.0).epsilon(1e-12));
  CHECK(f.intercept == doctest::Approx(std::log(3.0)).epsilon(1e-12));
  CHECK(f.r2 == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(f.count == 5);

  x.resize(3);
  y.resize(3);
  CHECK_THROWS_AS(fit_rate(x, y), Error);
}

TEST_CASE("empty record list gives a header-only CSV") {
  CHECK(to_csv({}) == std::string(kCsvHeader) + "\n");
}

TEST_CASE("sweep results do not depend on the number of workers") {
  ExperimentConfig c = parse_config(small_sweep());
  c.ks = {0, 1, 2, 3};
  auto one = run(c, 1);
  auto four = run(c, 4);
  REQUIRE(one.size() == 4);
  REQUIRE(four.size() == 4);
  for (std::size_t i = 0; i < one.size(); ++i) {
    CHECK(one[i].ok());
    CHECK(one[i].k == four[i].k);
    CHECK(same(one[i].lambda1, four[i].lambda1));
    CHECK(same(one[i].gap, four[i].gap));
    CHECK(same(one[i].condC, four[i].condC));
    CHECK(one[i].iters == four[i].iters);
  }
  CHECK(one[0].param == 1.0);
  CHECK(one[3].param == 8.0);
  CHECK(one[0].lambda1 < one[0].baseline);
  std::string csv = to_csv(one);
  CHECK(std::count(csv.begin(), csv.end(), '\n') == 5);
}

TEST_CASE("cached baseline equals a fresh solve") {
  Domain1D omega(-1.0, 1.0);
  FractionalOrder order(1, 0.4);
  DiscParams d;
  d.h = 0.05;
  d.L = 8.0;
  double cached = dirichlet_baseline(omega, order, d);
  double cached2 = dirichlet_baseline(omega, order, d);
  double fresh = solve_mixed(ExteriorPartition::all_dirichlet(omega), order, d, {}).lambda1;
  CHECK(cached == cached2);
  CHECK(std::abs(cached - fresh) <= 1e-12 * fresh);
}

TEST_CASE("a ratio-one family repeats the same partition") {
  json j = small_sweep();
  j["family"] = {{"kind", "nested_neumann"}, {"position", 1}, {"length", 1}, {"ratio", 1}, {"k", {0, 1, 2}}};
  auto recs = run(parse_config(j), 2);
  REQUIRE(recs.size() == 3);
  CHECK(recs[0].ok());
  CHECK(recs[1].lambda1 == recs[0].lambda1);
  CHECK(recs[2].lambda1 == recs[0].lambda1);
}

TEST_CASE("per-record failures are reported, not thrown") {
  json j = small_sweep();
  j["discretization"]["h"] = 0.4;
  j["discretization"]["refine_to_feature"] = false;
  auto recs = run(parse_config(j), 1);
  REQUIRE(recs.size() == 3);
  for (const auto& r : recs) {
    CHECK_FALSE(r.ok());
    CHECK(r.error.find("UnresolvedFeature") != std::string::npos);
  }
  json sj = summary_json(recs, parse_config(j));
  CHECK(sj["failed"] == 3);

  j = small_sweep();
  j["discretization"]["scheme"] = "P0";
  CHECK_THROWS_AS(parse_config(j), Error);
}

TEST_CASE("outputs are written under the target directory") {
  auto dir = std::filesystem::temp_directory_path() / "fraclab_emit_test";
  std::filesystem::remove_all(dir);
  ExperimentConfig c = parse_config(small_sweep());
  c.ks = {0};
  auto recs = run(c, 1);
  emit(recs, c, dir);
  CHECK(std::filesystem::exists(dir / "records.csv"));
  CHECK(std::filesystem::exists(dir / "plot.dat"));
  std::ifstream in(dir / "summary.json");
  json sj = json::parse(in);
  CHECK(sj["count"] == 1);
  CHECK(sj["records"].size() == 1);
  std::filesystem::remove_all(dir);
}

TEST_CASE("quadrature energy refuses large meshes") {
  Domain1D omega(0.0, 1.0);
  DiscParams d;
  d.h = 0.05;
  d.L = 4.0;
  auto disc = std::make_shared<const Discretization>(
      build_mesh(ExteriorPartition::all_neumann(omega), FractionalOrder(1, 0.3), d.h, d.L, Scheme::P1));
  REQUIRE(disc->num_cells() > 40);
  DiscreteFunction u = DiscreteFunction::constant(disc, 1.0);
  CHECK_THROWS_AS(energy_by_quadrature(u, FractionalOrder(1, 0.3)), Error);
}

TEST_CASE("identity suite passes on both schemes") {
  CHECK(identity_suite(Domain1D(-1.0, 1.0), 0.3, 4).pass());
  CHECK(identity_suite(Domain1D(0.0, 2.0), 0.7, 4).pass());
}

TEST_CASE("every shipped config parses") {
  int count = 0;
  for (const auto& entry : std::filesystem::directory_iterator(FRACLAB_CONFIG_DIR)) {
    if (entry.path().extension() != ".json") continue;
    CAPTURE(entry.path().string());
    ExperimentConfig c = load_config(entry.path());
    CHECK_FALSE(c.ks.empty());
    CHECK_NOTHROW(c.partition(c.ks.front()));
    ++count;
  }
  CHECK(count >= 5);
}
