#include "ugvq/features/precomputed.hpp"

#include <fstream>

#include "ugvq/common/binio.hpp"
#include "ugvq/common/hash.hpp"

namespace ugvq::features {

namespace {
constexpr char kPackMagic[4] = {'U', 'G', 'V', 'P'};
constexpr std::uint8_t kPackVersion = 1;
}  // namespace

const char* to_string(BackboneKind k) {
    switch (k) {
        case BackboneKind::frame_encoder: return "frame_encoder";
        case BackboneKind::motion_encoder: return "motion_encoder";
        case BackboneKind::text_encoder: return "text_encoder";
    }
    return "?";
}

FeaturePack FeaturePack::load(const std::filesystem::path& path, BackboneKind expected_kind) {
    std::ifstream is(path, std::ios::binary);
    if (!is) throw FeatureError("cannot open feature pack: " + path.string());
    char magic[4];
    if (!is.read(magic, 4) || std::memcmp(magic, kPackMagic, 4) != 0)
        throw FeatureError("bad feature pack magic: " + path.string());
    if (binio::read_u8(is) != kPackVersion)
        throw FeatureError("unsupported feature pack version: " + path.string());
    auto kind = static_cast<BackboneKind>(binio::read_u8(is));
    if (kind != expected_kind)
        throw FeatureError("feature pack " + path.string() + " holds " + to_string(kind) +
                           " features, expected " + to_string(expected_kind));
    FeaturePack pack;
    pack.kind_ = kind;
    pack.dim_ = static_cast<int>(binio::read_u32(is));
    std::uint32_t count = binio::read_u32(is);
    for (std::uint32_t i = 0; i < count; ++i) {
        std::string id = binio::read_str(is);
        std::uint32_t rows = binio::read_u32(is);
        std::uint32_t cols = binio::read_u32(is);
        if (static_cast<int>(cols) != pack.dim_)
            throw FeatureError("feature pack entry '" + id + "' has dim " + std::to_string(cols) +
                               ", pack declares " + std::to_string(pack.dim_));
        Eigen::MatrixXd m(rows, cols);
        for (std::uint32_t r = 0; r < rows; ++r)
            for (std::uint32_t c = 0; c < cols; ++c) m(r, c) = binio::read_f64(is);
        pack.entries_.emplace(std::move(id), std::move(m));
    }
    // digest over the raw file bytes: any change re-keys the cache
    is.clear();
    is.seekg(0);
    Fnv1a h;
    char buf[4096];
    while (is.read(buf, sizeof buf) || is.gcount() > 0) {
        h.bytes(buf, static_cast<std::size_t>(is.gcount()));
        if (!is) break;
    }
    pack.digest_ = h.value();
    return pack;
}

void FeaturePack::save(const std::filesystem::path& path, BackboneKind kind, int dim,
                       const std::unordered_map<std::string, Eigen::MatrixXd>& entries) {
    std::ofstream os(path, std::ios::binary | std::ios::trunc);
    if (!os) throw FeatureError("cannot write feature pack: " + path.string());
    os.write(kPackMagic, 4);
    binio::write_u8(os, kPackVersion);
    binio::write_u8(os, static_cast<std::uint8_t>(kind));
    binio::write_u32(os, static_cast<std::uint32_t>(dim));
    binio::write_u32(os, static_cast<std::uint32_t>(entries.size()));
    for (const auto& [id, m] : entries) {
        if (m.cols() != dim)
            throw FeatureError("feature pack entry '" + id + "' has dim " + std::to_string(m.cols()) +
                               ", expected " + std::to_string(dim));
        binio::write_str(os, id);
        binio::write_u32(os, static_cast<std::uint32_t>(m.rows()));
        binio::write_u32(os, static_cast<std::uint32_t>(m.cols()));
        for (Eigen::Index r = 0; r < m.rows(); ++r)
            for (Eigen::Index c = 0; c < m.cols(); ++c) binio::write_f64(os, m(r, c));
    }
    if (!os) throw FeatureError("write failed: " + path.string());
}

const Eigen::MatrixXd& FeaturePack::lookup(const std::string& id) const {
    auto it = entries_.find(id);
    if (it == entries_.end()) throw FeatureError("feature pack has no entry for id '" + id + "'");
    return it->second;
}

PrecomputedFrameEncoder::PrecomputedFrameEncoder(const std::filesystem::path& pack_path)
    : pack_(FeaturePack::load(pack_path, BackboneKind::frame_encoder)) {
    info_.name = "precomputed_frame";
    info_.output_dim = pack_.dim();
    info_.kind = BackboneKind::frame_encoder;
    info_.weights_digest = pack_.digest();
}

Eigen::MatrixXd PrecomputedFrameEncoder::encode_keyframes(
    const corpus::VideoClipDesc& clip, const std::vector<corpus::Frame>& keyframes) const {
    const Eigen::MatrixXd& m = pack_.lookup(clip.video_id);
    if (m.rows() != static_cast<Eigen::Index>(keyframes.size()))
        throw FeatureError("precomputed spatial features for '" + clip.video_id + "' hold " +
                           std::to_string(m.rows()) + " keyframes, pipeline expects " +
                           std::to_string(keyframes.size()));
    return m;
}

PrecomputedMotionEncoder::PrecomputedMotionEncoder(const std::filesystem::path& pack_path)
    : pack_(FeaturePack::load(pack_path, BackboneKind::motion_encoder)) {
    info_.name = "precomputed_motion";
    info_.output_dim = pack_.dim();
    info_.kind = BackboneKind::motion_encoder;
    info_.weights_digest = pack_.digest();
}

Eigen::MatrixXd PrecomputedMotionEncoder::encode_clip(const corpus::VideoClipDesc& clip,
                                                      const std::vector<corpus::Frame>&) const {
    const Eigen::MatrixXd& m = pack_.lookup(clip.video_id);
    if (m.rows() != 2)
        throw FeatureError("precomputed motion features for '" + clip.video_id +
                           "' must hold 2 pathway tokens, got " + std::to_string(m.rows()));
    return m;
}

PrecomputedTextEncoder::PrecomputedTextEncoder(const std::filesystem::path& pack_path)
    : pack_(FeaturePack::load(pack_path, BackboneKind::text_encoder)) {
    info_.name = "precomputed_text";
    info_.output_dim = pack_.dim();
    info_.kind = BackboneKind::text_encoder;
    info_.weights_digest = pack_.digest();
}

Eigen::VectorXd PrecomputedTextEncoder::encode_prompt(const corpus::PromptRecord& prompt) const {
    const Eigen::MatrixXd& m = pack_.lookup(prompt.prompt_id);
    if (m.rows() != 1)
        throw FeatureError("precomputed text features for '" + prompt.prompt_id +
                           "' must hold a single row, got " + std::to_string(m.rows()));
    return m.row(0).transpose();
}

}  // namespace ugvq::features
