#include "ugvq/features/cache.hpp"

#include <fstream>
#include <iostream>
#include <sstream>

#include "ugvq/common/binio.hpp"
#include "ugvq/common/hash.hpp"
#include "ugvq/corpus/manifest.hpp"

namespace ugvq::features {

namespace {

constexpr char kCacheMagic[4] = {'U', 'G', 'V', 'F'};
constexpr std::uint8_t kCacheVersion = 1;
constexpr std::uint8_t kDtypeF64 = 1;

std::uint64_t prompt_text_digest(const corpus::PromptRecord& p) {
    return Fnv1a().str(p.prompt_id).str(p.text).value();
}

void write_matrix(std::ostream& os, const Eigen::MatrixXd& m, Fnv1a& checksum) {
    for (Eigen::Index r = 0; r < m.rows(); ++r)
        for (Eigen::Index c = 0; c < m.cols(); ++c) {
            binio::write_f64(os, m(r, c));
            checksum.f64(m(r, c));
        }
}

Eigen::MatrixXd read_matrix(std::istream& is, int rows, int cols, Fnv1a& checksum) {
    Eigen::MatrixXd m(rows, cols);
    for (int r = 0; r < rows; ++r)
        for (int c = 0; c < cols; ++c) {
            double v = binio::read_f64(is);
            checksum.f64(v);
            m(r, c) = v;
        }
    return m;
}

std::string hex16(std::uint64_t v) {
    std::ostringstream os;
    os << std::hex << std::setw(16) << std::setfill('0') << v;
    return os.str();
}

}  // namespace

FeatureCache::FeatureCache(std::filesystem::path dir) : dir_(std::move(dir)) {
    std::filesystem::create_directories(dir_);
}

std::filesystem::path FeatureCache::entry_path(const std::string& video_id,
                                               std::uint64_t fingerprint) const {
    return dir_ / (hex16(fnv1a(video_id)) + "-" + hex16(fingerprint) + ".feat");
}

bool FeatureCache::read_entry(const std::filesystem::path& file, const FeatureExtractor& extractor,
                              const corpus::VideoClipDesc& clip, std::uint64_t prompt_digest,
                              FeatureBundle& out) const {
    std::ifstream is(file, std::ios::binary);
    if (!is) return false;
    try {
        char magic[4];
        if (!is.read(magic, 4) || std::memcmp(magic, kCacheMagic, 4) != 0)
            throw FeatureError("bad magic");
        if (binio::read_u8(is) != kCacheVersion) throw FeatureError("bad version");
        if (binio::read_u8(is) != kDtypeF64) throw FeatureError("bad dtype");
        if (binio::read_u64(is) != extractor.fingerprint()) throw FeatureError("fingerprint mismatch");
        if (binio::read_str(is) != clip.video_id) throw FeatureError("video id mismatch");
        if (binio::read_u64(is) != prompt_digest) throw FeatureError("prompt changed");
        int ns = static_cast<int>(binio::read_u32(is));
        int ds = static_cast<int>(binio::read_u32(is));
        int tt = static_cast<int>(binio::read_u32(is));
        int dt = static_cast<int>(binio::read_u32(is));
        int dx = static_cast<int>(binio::read_u32(is));
        // a *valid* record under the current fingerprint must match dims;
        // disagreement means a fingerprint collision, which is a hard error
        if (ns != extractor.config().keyframes || ds != extractor.spatial_dim() || tt != 2 ||
            dt != extractor.temporal_dim() || dx != extractor.text_dim())
            throw FeatureError("cache entry " + file.string() +
                               " matches the fingerprint but not the dimensions (collision?)");
        std::uint64_t stored_checksum = binio::read_u64(is);
        Fnv1a checksum;
        out.spatial_tokens = read_matrix(is, ns, ds, checksum);
        out.temporal_tokens = read_matrix(is, tt, dt, checksum);
        out.text_token = read_matrix(is, 1, dx, checksum);
        if (checksum.value() != stored_checksum) throw FeatureError("checksum mismatch");
        return true;
    } catch (const FeatureError& e) {
        if (std::string(e.what()).find("collision") != std::string::npos) throw;
        return false;  // treat as miss (corrupt or stale entry)
    } catch (const std::exception&) {
        return false;
    }
}

void FeatureCache::write_entry(const std::filesystem::path& file, const FeatureExtractor& extractor,
                               const corpus::VideoClipDesc& clip, std::uint64_t prompt_digest,
                               const FeatureBundle& bundle) const {
    std::filesystem::path tmp = file;
    tmp += ".tmp";
    {
        std::ofstream os(tmp, std::ios::binary | std::ios::trunc);
        if (!os) throw FeatureError("cannot write cache entry: " + tmp.string());
        os.write(kCacheMagic, 4);
        binio::write_u8(os, kCacheVersion);
        binio::write_u8(os, kDtypeF64);
        binio::write_u64(os, extractor.fingerprint());
        binio::write_str(os, clip.video_id);
        binio::write_u64(os, prompt_digest);
        binio::write_u32(os, static_cast<std::uint32_t>(bundle.spatial_tokens.rows()));
        binio::write_u32(os, static_cast<std::uint32_t>(bundle.spatial_tokens.cols()));
        binio::write_u32(os, static_cast<std::uint32_t>(bundle.temporal_tokens.rows()));
        binio::write_u32(os, static_cast<std::uint32_t>(bundle.temporal_tokens.cols()));
        binio::write_u32(os, static_cast<std::uint32_t>(bundle.text_token.cols()));
        // checksum is computed over the payload in write order
        std::ostringstream payload(std::ios::binary);
        Fnv1a checksum;
        write_matrix(payload, bundle.spatial_tokens, checksum);
        write_matrix(payload, bundle.temporal_tokens, checksum);
        write_matrix(payload, bundle.text_token, checksum);
        binio::write_u64(os, checksum.value());
        os << payload.str();
        if (!os) throw FeatureError("write failed: " + tmp.string());
    }
    std::filesystem::rename(tmp, file);
}

FeatureBundle FeatureCache::get_or_compute(const FeatureExtractor& extractor,
                                           const corpus::VideoClipDesc& clip,
                                           const corpus::PromptRecord& prompt,
                                           const FramesFn& frames) {
    std::uint64_t prompt_digest = prompt_text_digest(prompt);
    std::filesystem::path file = entry_path(clip.video_id, extractor.fingerprint());
    FeatureBundle bundle;
    if (read_entry(file, extractor, clip, prompt_digest, bundle)) {
        ++stats_.hits;
        return bundle;
    }
    if (std::filesystem::exists(file)) {
        ++stats_.corrupt;
        std::cerr << "[ugvq] warning: re-encoding corrupt cache entry " << file << "\n";
    }
    ++stats_.misses;
    bundle = extractor.extract(clip, prompt, frames());
    write_entry(file, extractor, clip, prompt_digest, bundle);
    return bundle;
}

CacheStats cache_features(FeatureCache& cache, const FeatureExtractor& extractor,
                          const corpus::DatasetManifest& manifest) {
    for (const auto& clip : manifest.videos()) {
        const auto& prompt = manifest.prompt_of(clip);
        cache.get_or_compute(extractor, clip, prompt, [&] { return manifest.frames(clip); });
    }
    return cache.stats();
}

}  // namespace ugvq::features
