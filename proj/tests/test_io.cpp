#include <catch_amalgamated.hpp>

#include <cstdio>
#include <filesystem>

#include "specdet/correlator.hpp"
#include "specdet/io.hpp"
#include "specdet/sampling.hpp"

using namespace specdet;

TEST_CASE("matrix JSON round-trip is bit exact") {
  RngStream rng(131);
  UnitaryMatrix u = haar_sample(5, rng);
  auto path = std::filesystem::temp_directory_path() / "specdet_rt.json";
  write_matrix_file(path.string(), u.matrix());
  UnitaryMatrix back = read_matrix_file(path.string());
  for (int i = 0; i < 5; ++i)
    for (int j = 0; j < 5; ++j) REQUIRE(back.matrix()(i, j) == u.matrix()(i, j));
  std::filesystem::remove(path);
}

TEST_CASE("matrix reader rejects bad input") {
  auto path = std::filesystem::temp_directory_path() / "specdet_bad.json";
  {
    nlohmann::json j;
    j["n"] = 2;
    j["re"] = {{1.02, 0.0}, {0.0, 1.0}};
    j["im"] = {{0.0, 0.0}, {0.0, 0.0}};
    std::ofstream out(path);
    out << j.dump();
  }
  REQUIRE_THROWS_WITH(read_matrix_file(path.string()),
                      Catch::Matchers::ContainsSubstring("unitarity residual"));
  // same file accepted with a loose tolerance
  REQUIRE_NOTHROW(read_matrix_file(path.string(), 0.1));
  {
    nlohmann::json j;
    j["n"] = 2;
    j["re"] = {{1.0, 0.0, 0.0}, {0.0, 1.0, 0.0}};
    j["im"] = {{0.0, 0.0, 0.0}, {0.0, 0.0, 0.0}};
    std::ofstream out(path);
    out << j.dump();
  }
  REQUIRE_THROWS_WITH(read_matrix_file(path.string()),
                      Catch::Matchers::ContainsSubstring("square"));
  std::filesystem::remove(path);
}

TEST_CASE("CSV schema and determinism") {
  RngStream rng(132);
  UnitaryMatrix u = haar_sample(3, rng);
  auto grid = GammaGrid::linspace_x(0.1, 5.0, 7);
  auto curve = omega_secular(u, grid);
  std::string csv1 = curve_to_csv(curve, 3);
  std::string csv2 = curve_to_csv(omega_secular(u, grid), 3);
  REQUIRE(csv1 == csv2);
  REQUIRE(csv1.rfind("x_or_gamma_re,gamma_im,omega_re,omega_im,route,scheme", 0) == 0);
  // one row per grid point plus header
  REQUIRE(std::count(csv1.begin(), csv1.end(), '\n') == 8);
}

TEST_CASE("gnuplot script emission") {
  std::string one = emit_plotscript({"a.csv"}, "single");
  REQUIRE(one.find("plot 'a.csv'") != std::string::npos);
  std::string two = emit_plotscript({"a.csv", "b.csv"}, "overlay");
  REQUIRE(two.find("multiplot") != std::string::npos);
  REQUIRE(two.find("ratio") != std::string::npos);
  REQUIRE_THROWS(emit_plotscript({}, "none"));
}
