#pragma once

#include <array>
#include <filesystem>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "ugvq/corpus/frame.hpp"
#include "ugvq/corpus/types.hpp"

namespace ugvq::corpus {

// Immutable after load; safe to share across concurrent readers.
class DatasetManifest {
public:
    const std::vector<PromptRecord>& prompts() const { return prompts_; }
    const std::vector<VideoClipDesc>& videos() const { return videos_; }
    const std::vector<MosEntry>& mos() const { return mos_; }
    const std::filesystem::path& base_dir() const { return base_dir_; }

    const PromptRecord& prompt(const std::string& prompt_id) const;
    const VideoClipDesc& video(const std::string& video_id) const;
    const PromptRecord& prompt_of(const VideoClipDesc& clip) const { return prompt(clip.prompt_id); }
    const MosEntry* mos_of(const std::string& video_id) const;  // null when absent

    bool has_prompt(const std::string& prompt_id) const { return prompt_index_.count(prompt_id) > 0; }
    bool has_video(const std::string& video_id) const { return video_index_.count(video_id) > 0; }

    // Lazy decode through the provider chain; relative paths resolve
    // against the manifest directory. Deterministic: identical calls yield
    // identical pixel data.
    std::vector<Frame> frames(const VideoClipDesc& clip,
                              const FrameProvider& provider = default_providers()) const;

private:
    friend DatasetManifest load_manifest(const std::filesystem::path& path);
    friend DatasetManifest manifest_from_records(std::vector<PromptRecord> prompts,
                                                 std::vector<VideoClipDesc> videos,
                                                 std::vector<MosEntry> mos,
                                                 const std::filesystem::path& base_dir);

    static DatasetManifest build(std::vector<std::pair<PromptRecord, int>> prompts,
                                 std::vector<std::pair<VideoClipDesc, int>> videos,
                                 std::vector<std::pair<MosEntry, int>> mos,
                                 const std::filesystem::path& base_dir);

    std::vector<PromptRecord> prompts_;
    std::vector<VideoClipDesc> videos_;
    std::vector<MosEntry> mos_;
    std::filesystem::path base_dir_;
    std::unordered_map<std::string, std::size_t> prompt_index_;
    std::unordered_map<std::string, std::size_t> video_index_;
    std::unordered_map<std::string, std::size_t> mos_index_;
};

// Reads a JSON-lines manifest ({"kind":"prompt"|"video"|"mos", ...}) and
// validates record invariants plus referential integrity.
DatasetManifest load_manifest(const std::filesystem::path& path);

// Builds a manifest from in-memory records, running the same validation.
DatasetManifest manifest_from_records(std::vector<PromptRecord> prompts,
                                      std::vector<VideoClipDesc> videos,
                                      std::vector<MosEntry> mos = {},
                                      const std::filesystem::path& base_dir = ".");

void save_manifest(const DatasetManifest& manifest, const std::filesystem::path& path);

struct TaxonomyHistogram {
    std::array<int, kForegroundCount> foreground{};
    std::array<int, kBackgroundCount> background{};
    std::array<int, kMotionCount> motion{};
};

TaxonomyHistogram taxonomy_histogram(const DatasetManifest& manifest);

}  // namespace ugvq::corpus
