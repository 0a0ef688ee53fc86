#pragma once

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <vector>

#include <json.hpp>

#include "baker/cache.hpp"
#include "baker/manifest.hpp"

namespace baker {

struct RunOptions {
    std::optional<int> jobs;
    /// Shared cache; when null a private cache is built from the manifest.
    SpectrumCache* cache = nullptr;
    std::ostream* log = nullptr;
};

struct RunSummary {
    std::vector<std::filesystem::path> files;
    std::size_t jobs_run = 0;
    std::size_t failures = 0;
    std::size_t cache_hits = 0;
    std::size_t eigensolves = 0;
    nlohmann::json summary;
};

/// Validates the manifest, runs every spec on a bounded worker pool and
/// writes <experiment>.csv, errors.csv and summary.json into output_dir.
/// Nothing is written when validation fails.
RunSummary run(const ExperimentManifest& manifest, const RunOptions& options = {});

/// Grouping key of a spec: its canonical text without N (and without the
/// sample seed for ensembles).
std::string group_label(const RunSpec& spec);

} // namespace baker
