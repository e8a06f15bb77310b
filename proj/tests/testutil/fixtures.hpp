#pragma once

// Shared synthetic fixtures: seeded rating matrices with planted outlier
// observers, LGVQ-shaped manifests, and tensor-clip corpora whose MOS
// labels are closed-form functions of pixel statistics.

#include <filesystem>
#include <random>
#include <string>
#include <vector>

#include "ugvq/corpus/manifest.hpp"
#include "ugvq/subjective/ratings.hpp"
#include "testutil/naive_mos.hpp"

namespace testutil {

class TempDir {
public:
    explicit TempDir(const std::string& tag);
    ~TempDir();
    TempDir(const TempDir&) = delete;
    TempDir& operator=(const TempDir&) = delete;
    const std::filesystem::path& path() const { return path_; }

private:
    std::filesystem::path path_;
};

// 10 observers x n_videos x 3 dimensions. Observer "obs_outlier" is planted
// so that slightly over `outlier_fraction` of their ratings are flagged by
// the deviation rule; everyone else stays clean.
struct RatingFixture {
    ugvq::subjective::RatingMatrix matrix;
    std::vector<NaiveRating> naive;  // same entries, oracle representation
    std::string planted_observer;
    int planted_conditions = 0;
};

RatingFixture make_rating_fixture(int n_videos, int planted_conditions, std::uint64_t seed);

// 468 prompts x 6 models = 2808 video records (metadata only; no files).
ugvq::corpus::DatasetManifest make_lgvq_shaped_manifest();

// n prompts with cycled category labels, one video each (metadata only).
ugvq::corpus::DatasetManifest make_prompt_manifest(int n_prompts);

// Writes an 8-frame clip whose frame i is constant (i + 0.5) / n.
ugvq::corpus::VideoClipDesc write_gradient_clip(const std::filesystem::path& dir,
                                                const std::string& video_id, int frames, int h, int w);

struct SyntheticCorpus {
    ugvq::corpus::DatasetManifest manifest;
    std::filesystem::path dir;
};

// Static clips with varying contrast amplitude; spatial MOS is a strictly
// increasing function of per-frame pixel variance.
SyntheticCorpus make_variance_corpus(const std::filesystem::path& dir, int n_clips);

// Half static clips (high temporal MOS), half frame-to-frame jittery clips
// (low temporal MOS).
SyntheticCorpus make_smoothness_corpus(const std::filesystem::path& dir, int n_per_class);

// The trainable fixture: n_a amplitude levels x n_j jitter levels, 8-frame
// 32x32 clips. Labels: spatial = 100*a, temporal = 90 - 70*j,
// alignment = 20 + 20*w where w is a prompt token level. All three are
// linear in statistics the toy backbones expose.
SyntheticCorpus make_overfit_corpus(const std::filesystem::path& dir, int n_a, int n_j);

}  // namespace testutil
