#include "ugvq/corpus/manifest.hpp"

#include <fstream>
#include <set>

#include <json.hpp>

namespace ugvq::corpus {

using nlohmann::json;

namespace {

using Kind = ManifestError::Kind;

std::string get_string(const json& j, const char* key, int line) {
    if (!j.contains(key) || !j.at(key).is_string())
        throw ManifestError(Kind::parse, line, std::string("missing or non-string field '") + key + "'");
    return j.at(key).get<std::string>();
}

double get_number(const json& j, const char* key, int line) {
    if (!j.contains(key) || !j.at(key).is_number())
        throw ManifestError(Kind::parse, line, std::string("missing or non-numeric field '") + key + "'");
    return j.at(key).get<double>();
}

int get_int(const json& j, const char* key, int line) {
    double v = get_number(j, key, line);
    auto i = static_cast<long long>(v);
    if (static_cast<double>(i) != v)
        throw ManifestError(Kind::parse, line, std::string("field '") + key + "' must be an integer");
    return static_cast<int>(i);
}

PromptRecord parse_prompt(const json& j, int line) {
    PromptRecord p;
    p.prompt_id = get_string(j, "prompt_id", line);
    p.text = get_string(j, "text", line);
    try {
        p.foreground = foreground_from_string(get_string(j, "foreground", line));
        p.background = background_from_string(get_string(j, "background", line));
        p.motion = motion_from_string(get_string(j, "motion", line));
    } catch (const std::invalid_argument& e) {
        throw ManifestError(Kind::taxonomy, line, e.what());
    }
    int words = word_count(p.text);
    if (words < 4 || words > 15)
        throw ManifestError(Kind::taxonomy, line,
                            "prompt '" + p.prompt_id + "' has " + std::to_string(words) +
                                " words; expected 4..15");
    return p;
}

VideoClipDesc parse_video(const json& j, int line) {
    VideoClipDesc v;
    v.video_id = get_string(j, "video_id", line);
    v.prompt_id = get_string(j, "prompt_id", line);
    v.model_name = get_string(j, "model_name", line);
    v.path = get_string(j, "path", line);
    v.fps = get_number(j, "fps", line);
    v.width = get_int(j, "width", line);
    v.height = get_int(j, "height", line);
    v.num_frames = get_int(j, "num_frames", line);
    if (v.num_frames < 1)
        throw ManifestError(Kind::taxonomy, line, "video '" + v.video_id + "' has num_frames < 1");
    if (v.width < 1 || v.height < 1)
        throw ManifestError(Kind::taxonomy, line, "video '" + v.video_id + "' has nonpositive resolution");
    if (!(v.fps > 0.0))
        throw ManifestError(Kind::taxonomy, line, "video '" + v.video_id + "' has nonpositive fps");
    return v;
}

MosEntry parse_mos(const json& j, int line) {
    MosEntry m;
    m.video_id = get_string(j, "video_id", line);
    m.spatial = get_number(j, "spatial", line);
    m.temporal = get_number(j, "temporal", line);
    m.alignment = get_number(j, "alignment", line);
    for (double s : {m.spatial, m.temporal, m.alignment})
        if (!(s >= 0.0 && s <= 100.0))
            throw ManifestError(Kind::taxonomy, line,
                                "mos for video '" + m.video_id + "' outside [0,100]");
    return m;
}

struct Raw {
    std::vector<std::pair<PromptRecord, int>> prompts;
    std::vector<std::pair<VideoClipDesc, int>> videos;
    std::vector<std::pair<MosEntry, int>> mos;
};

}  // namespace

DatasetManifest DatasetManifest::build(std::vector<std::pair<PromptRecord, int>> prompts,
                                       std::vector<std::pair<VideoClipDesc, int>> videos,
                                       std::vector<std::pair<MosEntry, int>> mos,
                                       const std::filesystem::path& base_dir) {
    DatasetManifest m;
    m.base_dir_ = base_dir;
    for (auto& [p, line] : prompts) {
        if (!m.prompt_index_.emplace(p.prompt_id, m.prompts_.size()).second)
            throw ManifestError(Kind::referential, line, "duplicate prompt_id '" + p.prompt_id + "'");
        m.prompts_.push_back(std::move(p));
    }
    for (auto& [v, line] : videos) {
        if (!m.video_index_.emplace(v.video_id, m.videos_.size()).second)
            throw ManifestError(Kind::referential, line, "duplicate video_id '" + v.video_id + "'");
        if (m.prompt_index_.find(v.prompt_id) == m.prompt_index_.end())
            throw ManifestError(Kind::referential, line,
                                "video '" + v.video_id + "' references unknown prompt '" + v.prompt_id + "'");
        m.videos_.push_back(std::move(v));
    }
    for (auto& [e, line] : mos) {
        if (m.video_index_.find(e.video_id) == m.video_index_.end())
            throw ManifestError(Kind::referential, line,
                                "mos entry references unknown video '" + e.video_id + "'");
        if (!m.mos_index_.emplace(e.video_id, m.mos_.size()).second)
            throw ManifestError(Kind::referential, line, "duplicate mos for video '" + e.video_id + "'");
        m.mos_.push_back(std::move(e));
    }
    return m;
}

const PromptRecord& DatasetManifest::prompt(const std::string& prompt_id) const {
    auto it = prompt_index_.find(prompt_id);
    if (it == prompt_index_.end())
        throw ManifestError(Kind::referential, 0, "unknown prompt '" + prompt_id + "'");
    return prompts_[it->second];
}

const VideoClipDesc& DatasetManifest::video(const std::string& video_id) const {
    auto it = video_index_.find(video_id);
    if (it == video_index_.end())
        throw ManifestError(Kind::referential, 0, "unknown video '" + video_id + "'");
    return videos_[it->second];
}

const MosEntry* DatasetManifest::mos_of(const std::string& video_id) const {
    auto it = mos_index_.find(video_id);
    return it == mos_index_.end() ? nullptr : &mos_[it->second];
}

std::vector<Frame> DatasetManifest::frames(const VideoClipDesc& clip, const FrameProvider& provider) const {
    std::filesystem::path p(clip.path);
    if (p.is_relative()) p = base_dir_ / p;
    return provider.decode(clip, p);
}

DatasetManifest load_manifest(const std::filesystem::path& path) {
    std::ifstream is(path);
    if (!is) throw ManifestError(Kind::parse, 0, "cannot open manifest: " + path.string());
    Raw raw;
    std::string line;
    int line_no = 0;
    while (std::getline(is, line)) {
        ++line_no;
        if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
        json j;
        try {
            j = json::parse(line);
        } catch (const json::parse_error& e) {
            throw ManifestError(Kind::parse, line_no, std::string("malformed JSON: ") + e.what());
        }
        if (!j.is_object()) throw ManifestError(Kind::parse, line_no, "line is not a JSON object");
        std::string kind = get_string(j, "kind", line_no);
        if (kind == "prompt") {
            raw.prompts.emplace_back(parse_prompt(j, line_no), line_no);
        } else if (kind == "video") {
            raw.videos.emplace_back(parse_video(j, line_no), line_no);
        } else if (kind == "mos") {
            raw.mos.emplace_back(parse_mos(j, line_no), line_no);
        } else {
            throw ManifestError(Kind::parse, line_no, "unknown record kind '" + kind + "'");
        }
    }
    return DatasetManifest::build(std::move(raw.prompts), std::move(raw.videos), std::move(raw.mos),
                                  path.has_parent_path() ? path.parent_path() : ".");
}

DatasetManifest manifest_from_records(std::vector<PromptRecord> prompts,
                                      std::vector<VideoClipDesc> videos,
                                      std::vector<MosEntry> mos,
                                      const std::filesystem::path& base_dir) {
    Raw raw;
    for (auto& p : prompts) {
        int words = word_count(p.text);
        if (words < 4 || words > 15)
            throw ManifestError(Kind::taxonomy, 0,
                                "prompt '" + p.prompt_id + "' has " + std::to_string(words) +
                                    " words; expected 4..15");
        raw.prompts.emplace_back(std::move(p), 0);
    }
    for (auto& v : videos) raw.videos.emplace_back(std::move(v), 0);
    for (auto& e : mos) raw.mos.emplace_back(std::move(e), 0);
    return DatasetManifest::build(std::move(raw.prompts), std::move(raw.videos), std::move(raw.mos),
                                  base_dir);
}

void save_manifest(const DatasetManifest& manifest, const std::filesystem::path& path) {
    std::ofstream os(path, std::ios::trunc);
    if (!os) throw ManifestError(Kind::parse, 0, "cannot write manifest: " + path.string());
    for (const auto& p : manifest.prompts()) {
        json j{{"kind", "prompt"},
               {"prompt_id", p.prompt_id},
               {"text", p.text},
               {"foreground", to_string(p.foreground)},
               {"background", to_string(p.background)},
               {"motion", to_string(p.motion)}};
        os << j.dump() << "\n";
    }
    for (const auto& v : manifest.videos()) {
        json j{{"kind", "video"},     {"video_id", v.video_id}, {"prompt_id", v.prompt_id},
               {"model_name", v.model_name}, {"path", v.path},  {"fps", v.fps},
               {"width", v.width},    {"height", v.height},     {"num_frames", v.num_frames}};
        os << j.dump() << "\n";
    }
    for (const auto& e : manifest.mos()) {
        json j{{"kind", "mos"},
               {"video_id", e.video_id},
               {"spatial", e.spatial},
               {"temporal", e.temporal},
               {"alignment", e.alignment}};
        os << j.dump() << "\n";
    }
}

TaxonomyHistogram taxonomy_histogram(const DatasetManifest& manifest) {
    TaxonomyHistogram h;
    for (const auto& p : manifest.prompts()) {
        h.foreground[static_cast<int>(p.foreground)]++;
        h.background[static_cast<int>(p.background)]++;
        h.motion[static_cast<int>(p.motion)]++;
    }
    return h;
}

}  // namespace ugvq::corpus
