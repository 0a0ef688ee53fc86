#pragma once

#include <atomic>
#include <cstdint>
#include <filesystem>
#include <functional>
#include <optional>
#include <string>
#include <string_view>

#include "baker/linalg.hpp"

namespace baker {

/// 64-bit FNV-1a.
std::uint64_t fnv1a(std::string_view text);

/// Content-addressed spectrum store. Entries are keyed by the canonical text
/// of a spec plus the eigenvector flag; an unreadable or mismatching entry is
/// recomputed and overwritten. Safe to share between worker threads.
class SpectrumCache {
public:
    /// Without a directory the cache only counts solver calls.
    explicit SpectrumCache(std::optional<std::filesystem::path> dir = std::nullopt);

    SpectrumData get(const std::string& canonical, bool with_vectors,
                     const std::function<SpectrumData()>& compute);

    std::size_t hits() const noexcept { return hits_.load(); }
    std::size_t misses() const noexcept { return misses_.load(); }
    std::size_t corrupt() const noexcept { return corrupt_.load(); }

    std::filesystem::path entry_path(const std::string& canonical, bool with_vectors) const;

private:
    std::optional<std::filesystem::path> dir_;
    std::atomic<std::size_t> hits_{0};
    std::atomic<std::size_t> misses_{0};
    std::atomic<std::size_t> corrupt_{0};
};

} // namespace baker
