#pragma once

#include <filesystem>
#include <functional>

#include "ugvq/corpus/manifest.hpp"
#include "ugvq/features/extractor.hpp"

namespace ugvq::features {

struct CacheStats {
    long hits = 0;
    long misses = 0;
    long corrupt = 0;
};

// On-disk FeatureBundle cache keyed by (video_id, extractor fingerprint).
// One binary record per entry, written atomically (temp file + rename).
// Corrupt entries are re-encoded and overwritten with a warning; a valid
// entry whose dimensions disagree with the current extractor is an error.
class FeatureCache {
public:
    explicit FeatureCache(std::filesystem::path dir);

    using FramesFn = std::function<std::vector<corpus::Frame>()>;

    FeatureBundle get_or_compute(const FeatureExtractor& extractor,
                                 const corpus::VideoClipDesc& clip,
                                 const corpus::PromptRecord& prompt, const FramesFn& frames);

    const CacheStats& stats() const { return stats_; }
    const std::filesystem::path& dir() const { return dir_; }

private:
    std::filesystem::path entry_path(const std::string& video_id, std::uint64_t fingerprint) const;
    bool read_entry(const std::filesystem::path& file, const FeatureExtractor& extractor,
                    const corpus::VideoClipDesc& clip, std::uint64_t prompt_digest,
                    FeatureBundle& out) const;
    void write_entry(const std::filesystem::path& file, const FeatureExtractor& extractor,
                     const corpus::VideoClipDesc& clip, std::uint64_t prompt_digest,
                     const FeatureBundle& bundle) const;

    std::filesystem::path dir_;
    CacheStats stats_;
};

// Warms the cache for every (video, prompt) pair of a manifest; returns the
// cache stats after the pass.
CacheStats cache_features(FeatureCache& cache, const FeatureExtractor& extractor,
                          const corpus::DatasetManifest& manifest);

}  // namespace ugvq::features
