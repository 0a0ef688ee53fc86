#include <doctest.h>

#include <filesystem>
#include <fstream>

#include "baker/errors.hpp"
#include "baker/manifest.hpp"

using namespace baker;

namespace {

const QuantizationSpec& quant(const RunSpec& s) {
    return std::get<QuantizationSpec>(s);
}

} // namespace

TEST_CASE("experiment names round-trip") {
    for (auto e : {Experiment::GapRatioScan, Experiment::SpacingHist, Experiment::Sff, Experiment::SlopeScan,
                   Experiment::Persistence, Experiment::CommutatorScan, Experiment::Husimi, Experiment::Interpolation,
                   Experiment::OrbitCheck, Experiment::PhaseSweep}) {
        CHECK(parse_experiment(to_string(e)) == e);
    }
    CHECK_THROWS_AS(parse_experiment("gap-ratio"), InvalidSpec);
}

TEST_CASE("quantization specs expand over N") {
    const ExperimentManifest m = parse_manifest(R"(
experiment: gapratio-scan
seed: 7
jobs: 2
output_dir: results/fig2
specs:
  - family: Saraceno
    A: 2
    N: {from: 996, to: 1004, step: 2}
  - family: Generic
    A: 3
    N: [30, 60]
    theta: [0.2, 0.7]
    alpha: [0.1, 0.5, 1.25]
  - family: ShorBaker
    A: 5
    N: 50
)");
    CHECK(m.experiment == Experiment::GapRatioScan);
    CHECK(m.seed == 7);
    CHECK(m.jobs == 2);
    CHECK(m.output_dir == "results/fig2");
    CHECK_FALSE(m.cache_dir.has_value());
    REQUIRE(m.specs.size() == 8);
    CHECK(quant(m.specs[0]).n == 996);
    CHECK(quant(m.specs[4]).n == 1004);
    CHECK(quant(m.specs[4]).theta1 == 0.5);

    const QuantizationSpec& g = quant(m.specs[5]);
    CHECK(g.family == Family::Generic);
    CHECK(g.theta1 == 0.2);
    CHECK(g.theta2 == 0.7);
    REQUIRE(g.alpha.size() == 3);
    CHECK(g.alpha[2] == doctest::Approx(0.25));
    CHECK(quant(m.specs[6]).n == 60);

    const QuantizationSpec& s = quant(m.specs[7]);
    CHECK(s.alpha == standard_phases(Family::ShorBaker, 5));
    CHECK(spec_dim(m.specs[7]) == 50);
    CHECK(canonical(m.specs[7]) == s.canonical());
}

TEST_CASE("random phases follow the seed") {
    const char* text = R"(
experiment: slope-scan
specs:
  - {family: BalazsVoros, A: 2, N: [100, 102], alpha: random}
  - {family: BalazsVoros, A: 2, N: 100, alpha: random}
  - {family: BalazsVoros, A: 2, N: 100, alpha_seed: 99}
)";
    const ExperimentManifest a = parse_manifest(text, 1);
    const ExperimentManifest b = parse_manifest(text, 1);
    const ExperimentManifest c = parse_manifest(text, 2);
    REQUIRE(a.specs.size() == 4);
    // one draw per entry, shared across its N
    CHECK(quant(a.specs[0]).alpha == quant(a.specs[1]).alpha);
    CHECK(quant(a.specs[0]).alpha != quant(a.specs[2]).alpha);
    CHECK(quant(a.specs[0]).alpha == quant(b.specs[0]).alpha);
    CHECK(quant(a.specs[0]).alpha != quant(c.specs[0]).alpha);
    CHECK(quant(a.specs[3]).alpha == quant(c.specs[3]).alpha);
    CHECK(quant(a.specs[3]).alpha_seed == 99u);
    CHECK(a.seed == 1);
}

TEST_CASE("seed argument overrides the manifest seed") {
    const char* text = "experiment: gapratio-scan\nseed: 5\nspecs:\n  - {ensemble: CUE, N: 20}\n";
    CHECK(parse_manifest(text).seed == 5);
    CHECK(parse_manifest(text, 11).seed == 11);
    CHECK(std::get<EnsembleSpec>(parse_manifest(text).specs[0]).seed !=
          std::get<EnsembleSpec>(parse_manifest(text, 11).specs[0]).seed);
}

TEST_CASE("ensemble specs") {
    const ExperimentManifest m = parse_manifest(R"(
experiment: interpolation
params: {ell: 3}
specs:
  - ensemble: InterpCOEtoCUE
    N: 100
    t_interp: [0.0, 0.5, 1.0]
    seed: 40
    samples: 2
)");
    REQUIRE(m.specs.size() == 6);
    const auto& e = std::get<EnsembleSpec>(m.specs[3]);
    CHECK(e.kind == EnsembleKind::InterpCOEtoCUE);
    CHECK(e.t_interp == 0.5);
    CHECK(e.seed == 41);
    CHECK(m.params["ell"] == 3);
}

TEST_CASE("params are carried as typed values") {
    const ExperimentManifest m = parse_manifest(R"(
experiment: husimi
params:
  grid: 100
  sigma: 1.5
  eigen_indices: [0, 3]
specs:
  - {family: Saraceno, A: 2, N: 40}
)");
    CHECK(m.params["grid"].is_number_integer());
    CHECK(m.params["sigma"] == 1.5);
    CHECK(m.params["eigen_indices"].size() == 2);
}

TEST_CASE("invalid manifests") {
    const auto bad = [](const char* text) { CHECK_THROWS_AS(parse_manifest(text), InvalidSpec); };
    bad("experiment: gapratio-scan\nspecs: []\n");
    bad("experiment: gapratio-scan\n");
    bad("specs:\n  - {family: Saraceno, A: 2, N: 10}\n");
    bad("experiment: nope\nspecs:\n  - {family: Saraceno, A: 2, N: 10}\n");
    bad("experiment: gapratio-scan\nspecs:\n  - {family: Saraceno, A: 2, N: 10, colour: red}\n");
    bad("experiment: gapratio-scan\nextra: 1\nspecs:\n  - {family: Saraceno, A: 2, N: 10}\n");
    bad("experiment: gapratio-scan\nspecs:\n  - {family: Saraceno, A: 2}\n");
    bad("experiment: gapratio-scan\nspecs:\n  - {family: Saraceno, N: 10}\n");
    bad("experiment: gapratio-scan\nspecs:\n  - {family: Nope, A: 2, N: 10}\n");
    bad("experiment: gapratio-scan\nspecs:\n  - {family: Saraceno, A: 2, N: 10, theta: [0, 0]}\n");
    bad("experiment: gapratio-scan\nspecs:\n  - {family: Generic, A: 2, N: 10, theta: [0.1]}\n");
    bad("experiment: gapratio-scan\nspecs:\n  - {family: Saraceno, A: 2, N: {from: 10, to: 4}}\n");
    bad("experiment: gapratio-scan\nspecs:\n  - {family: Saraceno, A: 2, N: ten}\n");
    bad("experiment: gapratio-scan\nspecs:\n  - {A: 2, N: 10}\n");
    bad("experiment: gapratio-scan\nparams: {grid: 4}\nspecs:\n  - {family: Saraceno, A: 2, N: 10}\n");
    bad("experiment: gapratio-scan\nparams: [1]\nspecs:\n  - {family: Saraceno, A: 2, N: 10}\n");
    bad("experiment: slope-scan\nspecs:\n  - {ensemble: CUE, N: 10}\n");
    bad("experiment: interpolation\nspecs:\n  - {family: Saraceno, A: 2, N: 10}\n");
    bad("experiment: gapratio-scan\njobs: 0\nspecs:\n  - {family: Saraceno, A: 2, N: 10}\n");
    bad("experiment: gapratio-scan\nspecs:\n  - {ensemble: CUE, N: 10, samples: 0}\n");
    bad("experiment: [gapratio-scan\n");
    bad("- 1\n- 2\n");
}

TEST_CASE("errors name the manifest line") {
    try {
        parse_manifest("experiment: gapratio-scan\nspecs:\n  - family: Saraceno\n    A: 2\n    N: 10\n    shade: 3\n");
        FAIL("expected an error");
    } catch (const InvalidSpec& ex) {
        CHECK(std::string(ex.what()).find("line 6") != std::string::npos);
    }
}

TEST_CASE("spec-level problems are left to the run") {
    // A does not divide N: parsing succeeds, the runner records the failure
    const ExperimentManifest m = parse_manifest("experiment: gapratio-scan\nspecs:\n  - {family: Saraceno, A: 3, N: 10}\n");
    CHECK_THROWS_AS(quant(m.specs[0]).validate(), InvalidSpec);
}

TEST_CASE("allowed parameters") {
    const auto& slope = allowed_params(Experiment::SlopeScan);
    CHECK(std::find(slope.begin(), slope.end(), "ell") != slope.end());
    CHECK(allowed_params(Experiment::GapRatioScan).empty());
}

TEST_CASE("load from disk") {
    const auto dir = std::filesystem::temp_directory_path() / "baker_manifest_test";
    std::filesystem::create_directories(dir);
    const auto path = dir / "m.yaml";
    {
        std::ofstream f(path);
        f << "experiment: orbit-check\nparams: {t_max: 4}\nspecs:\n  - {family: BalazsVoros, A: 2, N: 64}\n";
    }
    const ExperimentManifest m = load_manifest(path, 3);
    CHECK(m.experiment == Experiment::OrbitCheck);
    CHECK(m.seed == 3);
    CHECK_THROWS_AS(load_manifest(dir / "missing.yaml"), Error);
    std::filesystem::remove_all(dir);
}
