#include "baker/cache.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>
#include <thread>

#include "baker/errors.hpp"
#include "baker/io.hpp"

namespace baker {

namespace {

constexpr char kMagic[8] = {'B', 'K', 'S', 'P', 'E', 'C', '0', '1'};

template <typename T>
void put(std::ostream& out, const T& value) {
    out.write(reinterpret_cast<const char*>(&value), sizeof(T));
}

template <typename T>
bool take(std::istream& in, T& value) {
    return static_cast<bool>(in.read(reinterpret_cast<char*>(&value), sizeof(T)));
}

std::string key_text(const std::string& canonical, bool with_vectors) {
    return canonical + (with_vectors ? "|vectors" : "|angles");
}

std::optional<SpectrumData> load(const std::filesystem::path& path, const std::string& key, bool with_vectors) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        return std::nullopt;
    }
    char magic[8];
    if (!in.read(magic, sizeof magic) || !std::equal(magic, magic + 8, kMagic)) {
        return std::nullopt;
    }
    std::uint64_t key_len = 0;
    if (!take(in, key_len) || key_len > (1u << 20)) {
        return std::nullopt;
    }
    std::string stored(key_len, '\0');
    if (!in.read(stored.data(), static_cast<std::streamsize>(key_len)) || stored != key) {
        return std::nullopt;
    }
    std::uint64_t n = 0;
    if (!take(in, n) || n == 0 || n > 65536) {
        return std::nullopt;
    }
    std::vector<double> angles(n);
    if (!in.read(reinterpret_cast<char*>(angles.data()), static_cast<std::streamsize>(n * sizeof(double)))) {
        return std::nullopt;
    }
    for (std::size_t k = 0; k < n; ++k) {
        if (!(angles[k] >= 0.0 && angles[k] < kTwoPi) || (k > 0 && angles[k] < angles[k - 1])) {
            return std::nullopt;
        }
    }
    SpectrumData out;
    out.angles = std::move(angles);
    if (with_vectors) {
        try {
            CMatrix v = io::read_matrix(in);
            if (static_cast<std::uint64_t>(v.rows()) != n) {
                return std::nullopt;
            }
            out.eigenvectors = std::move(v);
        } catch (const std::exception&) {
            return std::nullopt;
        }
    }
    char trailer = 0;
    if (in.read(&trailer, 1)) {
        return std::nullopt;
    }
    return out;
}

void store(const std::filesystem::path& path, const std::string& key, const SpectrumData& data) {
    std::ostringstream tag;
    tag << std::this_thread::get_id();
    const std::filesystem::path tmp = path.string() + ".tmp" + tag.str();
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) {
            return;
        }
        out.write(kMagic, sizeof kMagic);
        put(out, static_cast<std::uint64_t>(key.size()));
        out.write(key.data(), static_cast<std::streamsize>(key.size()));
        put(out, static_cast<std::uint64_t>(data.size()));
        out.write(reinterpret_cast<const char*>(data.angles.data()),
                  static_cast<std::streamsize>(data.angles.size() * sizeof(double)));
        if (data.eigenvectors) {
            io::write_matrix(out, *data.eigenvectors);
        }
        if (!out) {
            out.close();
            std::filesystem::remove(tmp);
            return;
        }
    }
    std::error_code ec;
    std::filesystem::rename(tmp, path, ec);
    if (ec) {
        std::filesystem::remove(tmp, ec);
    }
}

} // namespace

std::uint64_t fnv1a(std::string_view text) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : text) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    return h;
}

SpectrumCache::SpectrumCache(std::optional<std::filesystem::path> dir) : dir_(std::move(dir)) {
    if (dir_) {
        std::error_code ec;
        std::filesystem::create_directories(*dir_, ec);
        if (ec) {
            throw PreconditionError("cannot create cache directory " + dir_->string() + ": " + ec.message());
        }
    }
}

std::filesystem::path SpectrumCache::entry_path(const std::string& canonical, bool with_vectors) const {
    if (!dir_) {
        return {};
    }
    char name[32];
    std::snprintf(name, sizeof name, "%016llx.spec",
                  static_cast<unsigned long long>(fnv1a(key_text(canonical, with_vectors))));
    return *dir_ / name;
}

SpectrumData SpectrumCache::get(const std::string& canonical, bool with_vectors,
                                const std::function<SpectrumData()>& compute) {
    const std::string key = key_text(canonical, with_vectors);
    if (dir_) {
        const std::filesystem::path path = entry_path(canonical, with_vectors);
        if (std::filesystem::exists(path)) {
            if (auto cached = load(path, key, with_vectors)) {
                ++hits_;
                return std::move(*cached);
            }
            ++corrupt_;
        }
        ++misses_;
        SpectrumData fresh = compute();
        store(path, key, fresh);
        return fresh;
    }
    ++misses_;
    return compute();
}

} // namespace baker
