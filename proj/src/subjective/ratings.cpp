#include "ugvq/subjective/ratings.hpp"

#include <fstream>
#include <set>
#include <sstream>

namespace ugvq::subjective {

void RatingMatrix::add(Rating r) {
    if (r.score < 1 || r.score > 5)
        throw RatingError("score " + std::to_string(r.score) + " outside 1..5 for observer '" +
                          r.observer_id + "', video '" + r.video_id + "'");
    if (r.observer_id.empty() || r.video_id.empty())
        throw RatingError("rating with empty observer_id or video_id");
    entries_.push_back(std::move(r));
}

namespace {

std::vector<std::string> split_line(const std::string& line) {
    std::vector<std::string> out;
    std::string cur;
    for (char c : line) {
        if (c == ',') {
            out.push_back(cur);
            cur.clear();
        } else if (c != '\r') {
            cur.push_back(c);
        }
    }
    out.push_back(cur);
    return out;
}

}  // namespace

RatingMatrix load_ratings_csv(std::istream& is) {
    std::string line;
    if (!std::getline(is, line)) throw RatingError("no ratings: empty CSV");
    auto header = split_line(line);
    if (header != std::vector<std::string>{"observer_id", "video_id", "dimension", "score"})
        throw RatingError("bad CSV header; expected observer_id,video_id,dimension,score");
    RatingMatrix m;
    std::set<RatingKey> seen;
    int line_no = 1;
    while (std::getline(is, line)) {
        ++line_no;
        if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
        auto f = split_line(line);
        if (f.size() != 4)
            throw RatingError("line " + std::to_string(line_no) + ": expected 4 fields, got " +
                              std::to_string(f.size()));
        Rating r;
        r.observer_id = f[0];
        r.video_id = f[1];
        try {
            r.dimension = dimension_from_string(f[2]);
        } catch (const std::invalid_argument& e) {
            throw RatingError("line " + std::to_string(line_no) + ": " + e.what());
        }
        try {
            std::size_t pos = 0;
            r.score = std::stoi(f[3], &pos);
            if (pos != f[3].size()) throw std::invalid_argument("trailing characters");
        } catch (const std::exception&) {
            throw RatingError("line " + std::to_string(line_no) + ": non-integer score '" + f[3] + "'");
        }
        RatingKey key{r.observer_id, r.video_id, r.dimension};
        if (!seen.insert(key).second)
            throw RatingError("line " + std::to_string(line_no) + ": duplicate rating for observer '" +
                              r.observer_id + "', video '" + r.video_id + "', dimension " +
                              to_string(r.dimension));
        m.add(std::move(r));
    }
    if (m.empty()) throw RatingError("no ratings: CSV has a header but no data rows");
    return m;
}

RatingMatrix load_ratings_csv(const std::filesystem::path& path) {
    std::ifstream is(path);
    if (!is) throw RatingError("cannot open ratings CSV: " + path.string());
    return load_ratings_csv(is);
}

}  // namespace ugvq::subjective
