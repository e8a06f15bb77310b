#include "testutil/naive_mos.hpp"

#include <algorithm>
#include <cmath>

namespace testutil {

namespace {

double nmean(const std::vector<double>& v) {
    double s = 0;
    for (double x : v) s += x;
    return s / static_cast<double>(v.size());
}

double npopstd(const std::vector<double>& v) {
    double m = nmean(v);
    double s = 0;
    for (double x : v) s += (x - m) * (x - m);
    return std::sqrt(s / static_cast<double>(v.size()));
}

double nkurtosis(const std::vector<double>& v) {
    double m = nmean(v);
    double m2 = 0, m4 = 0;
    for (double x : v) {
        double d = x - m;
        m2 += d * d;
        m4 += d * d * d * d;
    }
    m2 /= static_cast<double>(v.size());
    m4 /= static_cast<double>(v.size());
    if (m2 == 0) return 0;
    return m4 / (m2 * m2);
}

}  // namespace

NaiveMosResult naive_mos_pipeline(const std::vector<NaiveRating>& ratings) {
    NaiveMosResult out;

    // 1. flag outliers per (video, dim) condition
    std::set<std::size_t> flagged;
    std::map<std::pair<std::string, int>, std::vector<std::size_t>> conditions;
    for (std::size_t i = 0; i < ratings.size(); ++i)
        conditions[{ratings[i].video, ratings[i].dim}].push_back(i);
    for (const auto& [cond, idxs] : conditions) {
        std::vector<double> scores;
        for (auto i : idxs) scores.push_back(ratings[i].score);
        double mu = nmean(scores);
        double sd = npopstd(scores);
        double k = nkurtosis(scores);
        bool normal = sd > 0 && k >= 2.0 && k <= 4.0;
        double thr = (normal ? 2.0 : std::sqrt(20.0)) * sd;
        for (auto i : idxs)
            if (std::abs(ratings[i].score - mu) > thr) {
                flagged.insert(i);
                out.removed.insert({ratings[i].observer, ratings[i].video, ratings[i].dim});
            }
    }

    // 2. reject observers with > 5% flagged
    std::map<std::string, int> total, bad;
    for (std::size_t i = 0; i < ratings.size(); ++i) {
        total[ratings[i].observer]++;
        if (flagged.count(i)) bad[ratings[i].observer]++;
    }
    for (const auto& [obs, t] : total)
        if (bad[obs] > 0.05 * t) out.rejected_observers.insert(obs);

    // 3. surviving entries
    std::vector<std::size_t> kept;
    for (std::size_t i = 0; i < ratings.size(); ++i)
        if (!flagged.count(i) && !out.rejected_observers.count(ratings[i].observer)) kept.push_back(i);

    // 4. z-score per (observer, dim) on surviving entries
    std::map<std::size_t, double> z;
    std::map<std::pair<std::string, int>, std::vector<std::size_t>> per_observer;
    for (auto i : kept) per_observer[{ratings[i].observer, ratings[i].dim}].push_back(i);
    for (const auto& [key, idxs] : per_observer) {
        std::vector<double> scores;
        for (auto i : idxs) scores.push_back(ratings[i].score);
        double mu = nmean(scores);
        double sd = npopstd(scores);
        for (auto i : idxs) z[i] = sd == 0 ? 0.0 : (ratings[i].score - mu) / sd;
    }

    // 5. mean z per (video, dim), clamp to [-3,3], map onto [0,100]
    std::map<std::pair<std::string, int>, std::vector<double>> zcond;
    for (auto i : kept) zcond[{ratings[i].video, ratings[i].dim}].push_back(z[i]);
    for (const auto& [cond, zs] : zcond) {
        double m = nmean(zs);
        m = std::clamp(m, -3.0, 3.0);
        out.mos[cond] = 100.0 * (m + 3.0) / 6.0;
    }
    return out;
}

}  // namespace testutil
