#pragma once

#include <filesystem>
#include <istream>
#include <stdexcept>
#include <string>
#include <vector>

#include "ugvq/types.hpp"

namespace ugvq::subjective {

class RatingError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct Rating {
    std::string observer_id;
    std::string video_id;
    Dimension dimension = Dimension::spatial;
    int score = 0;  // 1..5
};

struct RatingKey {
    std::string observer_id;
    std::string video_id;
    Dimension dimension = Dimension::spatial;

    bool operator==(const RatingKey&) const = default;
    bool operator<(const RatingKey& o) const {
        if (observer_id != o.observer_id) return observer_id < o.observer_id;
        if (video_id != o.video_id) return video_id < o.video_id;
        return dimension < o.dimension;
    }
};

// Raw observer scores. At most one entry per (observer, video, dimension),
// scores integral in 1..5.
class RatingMatrix {
public:
    void add(Rating r);
    const std::vector<Rating>& entries() const { return entries_; }
    bool empty() const { return entries_.empty(); }
    std::size_t size() const { return entries_.size(); }

private:
    std::vector<Rating> entries_;
};

// CSV with header "observer_id,video_id,dimension,score".
RatingMatrix load_ratings_csv(std::istream& is);
RatingMatrix load_ratings_csv(const std::filesystem::path& path);

}  // namespace ugvq::subjective
