#pragma once

#include <array>
#include <map>
#include <optional>
#include <utility>
#include <vector>

#include "ugvq/subjective/ratings.hpp"

namespace ugvq::subjective {

// Per-(video, dimension) screening outcome report.
struct ScreeningReport {
    std::vector<RatingKey> removed_ratings;  // flagged by the deviation rule
    std::vector<std::string> rejected_observers;
    // true = score distribution classified normal (kurtosis in [2,4])
    std::map<std::pair<std::string, Dimension>, bool> normality_flags;

    bool observer_rejected(const std::string& id) const;
};

// Single-pass outlier screening: per-condition mean/sigma computed once on
// the input, a rating is removed when it deviates by more than 2*sigma
// (normal condition) or sqrt(20)*sigma (otherwise), and observers whose
// flagged fraction exceeds 5% of their ratings are dropped entirely.
// Throws RatingError on an empty matrix or a condition with < 2 ratings.
std::pair<RatingMatrix, ScreeningReport> screen_outliers(const RatingMatrix& ratings);

struct ZScores {
    // z[i] corresponds to matrix.entries()[i] of the matrix that was normalized
    std::vector<double> z;
    // observers whose per-dimension ratings had zero variance (z forced to 0)
    std::vector<std::pair<std::string, Dimension>> zero_variance_flags;
};

// Per-observer, per-dimension Z-score over that observer's surviving
// ratings (population standard deviation). Zero-variance cases yield z = 0
// and are flagged rather than rejected.
ZScores zscore_normalize(const RatingMatrix& cleaned);

struct MosRecord {
    std::string video_id;
    std::array<std::optional<double>, 3> mos{};  // [0,100]; absent when no surviving ratings
    std::array<int, 3> rater_count{};
    std::array<double, 3> stddev{};  // population std of the averaged z-scores

    std::optional<double> value(Dimension d) const { return mos[static_cast<int>(d)]; }
};

// Mean of z-scores per (video, dimension), clamped to [-3,3] and mapped
// linearly onto [0,100]. Dimensions with zero surviving ratings are left
// absent in the record, never emitted as zero.
std::vector<MosRecord> compute_mos(const RatingMatrix& cleaned, const ZScores& zscores);

struct PipelineResult {
    RatingMatrix cleaned;
    ScreeningReport screening;
    ZScores zscores;
    std::vector<MosRecord> mos;
    // (video, dimension) conditions present in the input but with zero
    // surviving ratings after screening
    std::vector<std::pair<std::string, Dimension>> omitted;
};

// screen_outliers -> zscore_normalize -> compute_mos, with omission accounting.
PipelineResult process_ratings(const RatingMatrix& ratings);

}  // namespace ugvq::subjective
