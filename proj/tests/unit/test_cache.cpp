#include <doctest.h>

#include <cmath>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <thread>

#include "baker/cache.hpp"
#include "baker/quantizer.hpp"

using namespace baker;

namespace {

struct TempDir {
    std::filesystem::path path;
    explicit TempDir(const char* name) : path(std::filesystem::temp_directory_path() / name) {
        std::filesystem::remove_all(path);
    }
    ~TempDir() { std::filesystem::remove_all(path); }
};

bool same_bits(const std::vector<double>& a, const std::vector<double>& b) {
    return a.size() == b.size() && std::memcmp(a.data(), b.data(), a.size() * sizeof(double)) == 0;
}

} // namespace

TEST_CASE("FNV-1a") {
    CHECK(fnv1a("") == 0xcbf29ce484222325ULL);
    CHECK(fnv1a("a") == 0xaf63dc4c8601ec8cULL);
    CHECK(fnv1a("foobar") == 0x85944171f73967e8ULL);
}

TEST_CASE("round trip is bit-exact") {
    TempDir dir("baker_cache_roundtrip");
    const QuantizationSpec spec = QuantizationSpec::random_phases(Family::Generic, 3, 60, 4, 0.2, 0.7);
    const std::string key = spec.canonical();
    int solves = 0;
    const auto compute = [&] {
        ++solves;
        return eigendecompose(build_map(spec), true);
    };

    SpectrumCache first(dir.path);
    const SpectrumData a = first.get(key, true, compute);
    CHECK(std::filesystem::exists(first.entry_path(key, true)));
    CHECK(first.misses() == 1);

    SpectrumCache second(dir.path);
    const SpectrumData b = second.get(key, true, compute);
    CHECK(solves == 1);
    CHECK(second.hits() == 1);
    CHECK(second.misses() == 0);
    CHECK(same_bits(a.angles, b.angles));
    REQUIRE(b.eigenvectors.has_value());
    CHECK(a.eigenvectors->rows() == b.eigenvectors->rows());
    CHECK(std::memcmp(a.eigenvectors->data(), b.eigenvectors->data(),
                      static_cast<std::size_t>(a.eigenvectors->size()) * sizeof(Complex)) == 0);

    // angle-only entries are separate
    CHECK(second.entry_path(key, false) != second.entry_path(key, true));
    const SpectrumData c = second.get(key, false, [&] { return eigendecompose(build_map(spec), false); });
    CHECK(second.misses() == 1);
    CHECK_FALSE(c.eigenvectors.has_value());
    REQUIRE(c.size() == a.size());
    for (std::size_t k = 0; k < a.size(); ++k) {
        CHECK(std::abs(a.angles[k] - c.angles[k]) < 1e-10);
    }
}

TEST_CASE("corrupt entries are recomputed and overwritten") {
    TempDir dir("baker_cache_corrupt");
    const QuantizationSpec spec = QuantizationSpec::standard(Family::Saraceno, 2, 40);
    const std::string key = spec.canonical();
    const auto compute = [&] { return eigendecompose(build_map(spec), false); };
    SpectrumCache cache(dir.path);
    const SpectrumData good = cache.get(key, false, compute);
    const auto path = cache.entry_path(key, false);
    const auto size = std::filesystem::file_size(path);

    for (int mode = 0; mode < 4; ++mode) {
        if (mode == 0) {
            std::filesystem::resize_file(path, size / 2);
        } else {
            std::fstream f(path, std::ios::in | std::ios::out | std::ios::binary);
            if (mode == 1) {
                f.seekp(0);
                f.write("XXXX", 4);
            } else if (mode == 2) {
                // a NaN in the angle block
                f.seekp(static_cast<std::streamoff>(size - 8));
                const std::uint64_t nan_bits = 0x7ff8000000000000ULL;
                f.write(reinterpret_cast<const char*>(&nan_bits), 8);
            } else {
                f.seekp(0, std::ios::end);
                f.write("!", 1);
            }
        }
        const std::size_t corrupt = cache.corrupt();
        const SpectrumData again = cache.get(key, false, compute);
        CHECK(cache.corrupt() == corrupt + 1);
        CHECK(same_bits(good.angles, again.angles));
        CHECK(std::filesystem::file_size(path) == size);
        const std::size_t hits = cache.hits();
        cache.get(key, false, compute);
        CHECK(cache.hits() == hits + 1);
    }
}

TEST_CASE("an entry written for another key is not reused") {
    TempDir dir("baker_cache_collision");
    SpectrumCache cache(dir.path);
    const auto a = QuantizationSpec::standard(Family::BalazsVoros, 2, 20);
    const auto b = QuantizationSpec::standard(Family::BalazsVoros, 2, 22);
    cache.get(a.canonical(), false, [&] { return eigendecompose(build_map(a), false); });
    std::filesystem::copy_file(cache.entry_path(a.canonical(), false), cache.entry_path(b.canonical(), false));
    const SpectrumData got = cache.get(b.canonical(), false, [&] { return eigendecompose(build_map(b), false); });
    CHECK(got.size() == 22);
    CHECK(cache.corrupt() == 1);
}

TEST_CASE("specs differing only in the phase seed get distinct entries") {
    TempDir dir("baker_cache_seeds");
    SpectrumCache cache(dir.path);
    const auto a = QuantizationSpec::random_phases(Family::BalazsVoros, 2, 30, 1);
    const auto b = QuantizationSpec::random_phases(Family::BalazsVoros, 2, 30, 2);
    CHECK(a.canonical() != b.canonical());
    CHECK(cache.entry_path(a.canonical(), false) != cache.entry_path(b.canonical(), false));
    const SpectrumData sa = cache.get(a.canonical(), false, [&] { return eigendecompose(build_map(a), false); });
    const SpectrumData sb = cache.get(b.canonical(), false, [&] { return eigendecompose(build_map(b), false); });
    CHECK(cache.misses() == 2);
    CHECK_FALSE(same_bits(sa.angles, sb.angles));
}

TEST_CASE("without a directory every call computes") {
    SpectrumCache cache;
    int calls = 0;
    for (int k = 0; k < 3; ++k) {
        cache.get("x", false, [&] {
            ++calls;
            return spectrum_from_angles({0.1, 0.2});
        });
    }
    CHECK(calls == 3);
    CHECK(cache.misses() == 3);
    CHECK(cache.hits() == 0);
    CHECK(cache.entry_path("x", false).empty());
}

TEST_CASE("concurrent readers of one entry") {
    TempDir dir("baker_cache_threads");
    SpectrumCache cache(dir.path);
    const auto spec = QuantizationSpec::standard(Family::ShorBaker, 3, 45);
    const SpectrumData ref = eigendecompose(build_map(spec), false);
    std::vector<SpectrumData> got(6);
    std::vector<std::thread> pool;
    for (std::size_t k = 0; k < got.size(); ++k) {
        pool.emplace_back([&, k] {
            got[k] = cache.get(spec.canonical(), false, [&] { return eigendecompose(build_map(spec), false); });
        });
    }
    for (auto& t : pool) {
        t.join();
    }
    for (const auto& g : got) {
        CHECK(same_bits(g.angles, ref.angles));
    }
    CHECK(cache.hits() + cache.misses() == 6);
    SpectrumCache later(dir.path);
    later.get(spec.canonical(), false, [] { return SpectrumData{}; });
    CHECK(later.hits() == 1);
}
