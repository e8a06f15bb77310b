#include "ugvq/subjective/mos.hpp"

#include <algorithm>
#include <cmath>
#include <set>

namespace ugvq::subjective {

namespace {

constexpr double kNonNormalFactor = 4.47213595499957939;  // sqrt(20)

struct Moments {
    double mean = 0.0;
    double sigma = 0.0;   // population
    double kurtosis = 0.0;  // m4 / m2^2; 0 when sigma == 0
};

Moments moments(const std::vector<double>& xs) {
    Moments m;
    const double n = static_cast<double>(xs.size());
    for (double x : xs) m.mean += x;
    m.mean /= n;
    double m2 = 0.0, m4 = 0.0;
    for (double x : xs) {
        double d = x - m.mean;
        m2 += d * d;
        m4 += d * d * d * d;
    }
    m2 /= n;
    m4 /= n;
    m.sigma = std::sqrt(m2);
    m.kurtosis = m2 > 0.0 ? m4 / (m2 * m2) : 0.0;
    return m;
}

}  // namespace

bool ScreeningReport::observer_rejected(const std::string& id) const {
    return std::find(rejected_observers.begin(), rejected_observers.end(), id) !=
           rejected_observers.end();
}

std::pair<RatingMatrix, ScreeningReport> screen_outliers(const RatingMatrix& ratings) {
    if (ratings.empty()) throw RatingError("cannot screen an empty rating matrix");

    // condition = (video, dimension)
    std::map<std::pair<std::string, Dimension>, std::vector<std::size_t>> conditions;
    const auto& entries = ratings.entries();
    for (std::size_t i = 0; i < entries.size(); ++i)
        conditions[{entries[i].video_id, entries[i].dimension}].push_back(i);

    ScreeningReport report;
    std::vector<bool> flagged(entries.size(), false);
    for (const auto& [cond, idx] : conditions) {
        if (idx.size() < 2)
            throw RatingError("condition (video '" + cond.first + "', " + to_string(cond.second) +
                              ") has fewer than 2 ratings; cannot estimate sigma");
        std::vector<double> scores;
        scores.reserve(idx.size());
        for (std::size_t i : idx) scores.push_back(static_cast<double>(entries[i].score));
        Moments m = moments(scores);
        bool normal = m.sigma > 0.0 && m.kurtosis >= 2.0 && m.kurtosis <= 4.0;
        report.normality_flags[cond] = normal;
        double threshold = (normal ? 2.0 : kNonNormalFactor) * m.sigma;
        for (std::size_t i : idx) {
            if (std::abs(static_cast<double>(entries[i].score) - m.mean) > threshold) {
                flagged[i] = true;
                report.removed_ratings.push_back({entries[i].observer_id, entries[i].video_id,
                                                  entries[i].dimension});
            }
        }
    }

    std::map<std::string, std::pair<int, int>> per_observer;  // flagged, total
    for (std::size_t i = 0; i < entries.size(); ++i) {
        auto& [f, t] = per_observer[entries[i].observer_id];
        ++t;
        if (flagged[i]) ++f;
    }
    std::set<std::string> rejected;
    for (const auto& [obs, counts] : per_observer)
        if (counts.first > 0.05 * counts.second) rejected.insert(obs);
    report.rejected_observers.assign(rejected.begin(), rejected.end());

    RatingMatrix cleaned;
    for (std::size_t i = 0; i < entries.size(); ++i)
        if (!flagged[i] && rejected.count(entries[i].observer_id) == 0) cleaned.add(entries[i]);
    std::sort(report.removed_ratings.begin(), report.removed_ratings.end());
    return {std::move(cleaned), std::move(report)};
}

ZScores zscore_normalize(const RatingMatrix& cleaned) {
    const auto& entries = cleaned.entries();
    ZScores out;
    out.z.assign(entries.size(), 0.0);

    std::map<std::pair<std::string, Dimension>, std::vector<std::size_t>> groups;
    for (std::size_t i = 0; i < entries.size(); ++i)
        groups[{entries[i].observer_id, entries[i].dimension}].push_back(i);

    for (const auto& [key, idx] : groups) {
        std::vector<double> scores;
        scores.reserve(idx.size());
        for (std::size_t i : idx) scores.push_back(static_cast<double>(entries[i].score));
        Moments m = moments(scores);
        if (m.sigma == 0.0) {
            out.zero_variance_flags.push_back(key);
            continue;  // z stays 0 for all of this observer's entries in the dimension
        }
        for (std::size_t i : idx) out.z[i] = (static_cast<double>(entries[i].score) - m.mean) / m.sigma;
    }
    return out;
}

std::vector<MosRecord> compute_mos(const RatingMatrix& cleaned, const ZScores& zscores) {
    const auto& entries = cleaned.entries();
    if (zscores.z.size() != entries.size())
        throw RatingError("z-score vector does not match the rating matrix");

    std::map<std::string, std::array<std::vector<double>, 3>> by_video;
    for (std::size_t i = 0; i < entries.size(); ++i)
        by_video[entries[i].video_id][static_cast<int>(entries[i].dimension)].push_back(zscores.z[i]);

    std::vector<MosRecord> records;
    records.reserve(by_video.size());
    for (const auto& [video_id, dims] : by_video) {
        MosRecord rec;
        rec.video_id = video_id;
        for (int d = 0; d < 3; ++d) {
            const auto& zs = dims[d];
            if (zs.empty()) continue;
            double mean = 0.0;
            for (double z : zs) mean += z;
            mean /= static_cast<double>(zs.size());
            double var = 0.0;
            for (double z : zs) var += (z - mean) * (z - mean);
            var /= static_cast<double>(zs.size());
            double clamped = std::clamp(mean, -3.0, 3.0);
            rec.mos[d] = 100.0 * (clamped + 3.0) / 6.0;
            rec.rater_count[d] = static_cast<int>(zs.size());
            rec.stddev[d] = std::sqrt(var);
        }
        records.push_back(std::move(rec));
    }
    return records;
}

PipelineResult process_ratings(const RatingMatrix& ratings) {
    PipelineResult result;
    auto [cleaned, report] = screen_outliers(ratings);
    result.screening = std::move(report);
    result.zscores = zscore_normalize(cleaned);
    result.mos = compute_mos(cleaned, result.zscores);

    std::set<std::pair<std::string, Dimension>> input_conditions, surviving;
    for (const auto& r : ratings.entries()) input_conditions.insert({r.video_id, r.dimension});
    for (const auto& r : cleaned.entries()) surviving.insert({r.video_id, r.dimension});
    for (const auto& cond : input_conditions)
        if (surviving.count(cond) == 0) result.omitted.push_back(cond);

    result.cleaned = std::move(cleaned);
    return result;
}

}  // namespace ugvq::subjective
