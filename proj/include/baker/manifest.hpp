#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include <json.hpp>

#include "baker/quantizer.hpp"
#include "baker/rmt.hpp"

namespace baker {

enum class Experiment {
    GapRatioScan,
    SpacingHist,
    Sff,
    SlopeScan,
    Persistence,
    CommutatorScan,
    Husimi,
    Interpolation,
    OrbitCheck,
    PhaseSweep
};

std::string_view to_string(Experiment experiment);
Experiment parse_experiment(std::string_view name);

using RunSpec = std::variant<QuantizationSpec, EnsembleSpec>;

std::string canonical(const RunSpec& spec);
std::size_t spec_dim(const RunSpec& spec);

/// One experiment over an expanded list of specs. `params` holds the
/// per-experiment options as a flat JSON object.
struct ExperimentManifest {
    Experiment experiment = Experiment::GapRatioScan;
    std::vector<RunSpec> specs;
    nlohmann::json params = nlohmann::json::object();
    std::filesystem::path output_dir = "out";
    std::uint64_t seed = 0;
    int jobs = 1;
    std::optional<std::filesystem::path> cache_dir;

    /// Throws InvalidSpec on an empty spec list, a spec type the experiment
    /// cannot use, or an unknown parameter. Individual specs are checked when
    /// they run, so one bad spec only produces an error row.
    void validate() const;
};

/// A given seed replaces the manifest's own before specs are expanded.
ExperimentManifest parse_manifest(std::string_view text, std::optional<std::uint64_t> seed = std::nullopt);
ExperimentManifest load_manifest(const std::filesystem::path& path, std::optional<std::uint64_t> seed = std::nullopt);

/// Parameter names accepted by an experiment.
const std::vector<std::string>& allowed_params(Experiment experiment);

} // namespace baker
