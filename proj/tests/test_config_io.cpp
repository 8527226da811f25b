#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <sstream>

#include "ovkron/config.hpp"
#include "ovkron/io.hpp"

using namespace ovkron;
using doctest::Approx;

namespace {

const char* kSeparable = R"({
  "schema": "ovkron-model/1",
  "n_r": 2,
  "n_t": 2,
  "gamma": 1.0,
  "r_measures": [
    {"type": "atoms", "atoms": [[0.5, 0.5], [1.5, 0.5]]},
    {"type": "atoms", "atoms": [[0.5, 0.5], [1.5, 0.5]]}
  ],
  "t_measures": [
    {"type": "atoms", "atoms": [[0.75, 0.5], [1.25, 0.5]]},
    {"type": "atoms", "atoms": [[0.75, 0.5], [1.25, 0.5]]}
  ],
  "covariance": {
    "entry_variances": [[0.375, 0.625], [1.125, 1.875]]
  }
})";

}  // namespace

TEST_CASE("config: separable example parses and builds") {
  ModelSpec spec = parse_model_config(kSeparable);
  ChannelModel m = build_model(spec);
  CHECK(m.n == 2);
  CHECK(m.blocks.size() == 4);
  CHECK(m.entry_variance(1, 1) == Approx(1.875));
}

TEST_CASE("config: uniform01 measure shorthand") {
  std::string text = R"({
    "schema": "ovkron-model/1",
    "n_r": 1, "n_t": 1,
    "r_measures": [{"type": "uniform01", "n_atoms": 16}],
    "t_measures": [{"type": "uniform01", "n_atoms": 16}],
    "covariance": {"blocks": [
      {"variance": 1.0, "diagonal": [1.0], "permutation": [0]}
    ]}
  })";
  ModelSpec spec = parse_model_config(text);
  CHECK(spec.r2[0].atoms().size() == 16);
  CHECK(spec.r2[0].mean() == Approx(0.5));
}

TEST_CASE("config: unknown fields are errors, not warnings") {
  std::string text(kSeparable);
  text.replace(text.find("\"gamma\""), 7, "\"gamm2\"");
  CHECK_THROWS_AS(parse_model_config(text), ConfigError);
}

TEST_CASE("config: missing covariance reports the field") {
  std::string text = R"({
    "schema": "ovkron-model/1",
    "n_r": 1, "n_t": 1,
    "r_measures": [{"type": "atoms", "atoms": [[1.0, 1.0]]}],
    "t_measures": [{"type": "atoms", "atoms": [[1.0, 1.0]]}]
  })";
  try {
    parse_model_config(text);
    FAIL("expected ConfigError");
  } catch (const ConfigError& e) {
    CHECK(std::string(e.what()).find("covariance") != std::string::npos);
  }
}

TEST_CASE("config: both covariance styles rejected") {
  std::string text = R"({
    "schema": "ovkron-model/1",
    "n_r": 1, "n_t": 1,
    "r_measures": [{"type": "atoms", "atoms": [[1.0, 1.0]]}],
    "t_measures": [{"type": "atoms", "atoms": [[1.0, 1.0]]}],
    "covariance": {
      "blocks": [{"variance": 1.0, "diagonal": [1.0], "permutation": [0]}],
      "entry_variances": [[1.0]]
    }
  })";
  CHECK_THROWS_AS(parse_model_config(text), ConfigError);
}

TEST_CASE("config: invalid permutation rejected with path") {
  std::string text = R"({
    "schema": "ovkron-model/1",
    "n_r": 2, "n_t": 2,
    "r_measures": [{"type": "atoms", "atoms": [[1.0, 1.0]]},
                   {"type": "atoms", "atoms": [[1.0, 1.0]]}],
    "t_measures": [{"type": "atoms", "atoms": [[1.0, 1.0]]},
                   {"type": "atoms", "atoms": [[1.0, 1.0]]}],
    "covariance": {"blocks": [
      {"variance": 1.0, "diagonal": [1.0, 1.0], "permutation": [0, 0]}
    ]}
  })";
  CHECK_THROWS_AS(parse_model_config(text), ConfigError);
}

TEST_CASE("config: normalized dump round-trips to an identical model") {
  ModelSpec spec = parse_model_config(kSeparable);
  spec.gamma = 0.7;  // exercise folding
  ChannelModel m = build_model(spec);
  std::string dumped = dump_normalized(m);
  ChannelModel m2 = build_model(parse_model_config(dumped));
  CHECK(m == m2);
}

TEST_CASE("csv: density file carries version, eta and mass comments") {
  DensityEstimate f;
  f.grid = RealVector::LinSpaced(4, 0.25, 1.0);
  f.values = RealVector::Constant(4, 0.5);
  f.eta = 1e-4;
  f.mass_at_zero = 0.25;
  std::ostringstream os;
  write_density_csv(os, f, "{}");
  std::string text = os.str();
  CHECK(text.find("# ovkron ") == 0);
  CHECK(text.find("# eta=0.0001") != std::string::npos);
  CHECK(text.find("mass_at_zero=0.25") != std::string::npos);
  CHECK(text.find("xi,density\n") != std::string::npos);
}

TEST_CASE("csv: curve with classical baseline column") {
  MutualInfoCurve a{{{1.0, 0.5}, {10.0, 1.5}}};
  MutualInfoCurve b{{{1.0, 0.4}, {10.0, 1.2}}};
  std::ostringstream os;
  write_curve_csv(os, a, "{}", &b);
  std::string text = os.str();
  CHECK(text.find("P,info_nats,classical_info_nats") != std::string::npos);
  CHECK(text.find("10,1.5,1.2") != std::string::npos);
}

TEST_CASE("csv: report rows include slack") {
  std::ostringstream os;
  write_report_csv(os, {{"bulk_bound", 0.25, 1.0}}, "{}");
  CHECK(os.str().find("bulk_bound,0.25,1,0.75") != std::string::npos);
}
