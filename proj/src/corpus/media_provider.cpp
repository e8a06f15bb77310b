#include "ugvq/corpus/frame.hpp"

#ifdef UGVQ_WITH_OPENCV
#include <opencv2/core.hpp>
#include <opencv2/imgproc.hpp>
#include <opencv2/videoio.hpp>
#endif

#include <algorithm>
#include <cctype>

namespace ugvq::corpus {

bool MediaFileProvider::can_decode(const std::filesystem::path& path) const {
    std::string ext = path.extension().string();
    std::transform(ext.begin(), ext.end(), ext.begin(), [](unsigned char c) { return std::tolower(c); });
    static const char* kExts[] = {".mp4", ".avi", ".mkv", ".mov", ".webm", ".gif", ".m4v", ".mpg", ".mpeg"};
    for (const char* e : kExts)
        if (ext == e) return true;
    return false;
}

#ifdef UGVQ_WITH_OPENCV

std::vector<Frame> MediaFileProvider::decode(const VideoClipDesc& clip,
                                             const std::filesystem::path& resolved_path) const {
    cv::VideoCapture cap(resolved_path.string());
    if (!cap.isOpened()) throw DecodeError("cannot open media file: " + resolved_path.string());
    std::vector<Frame> frames;
    cv::Mat bgr;
    while (cap.read(bgr)) {
        if (bgr.empty()) break;
        cv::Mat rgb;
        cv::cvtColor(bgr, rgb, cv::COLOR_BGR2RGB);
        if (rgb.type() != CV_8UC3) rgb.convertTo(rgb, CV_8UC3);
        Frame f(rgb.rows, rgb.cols);
        for (int y = 0; y < rgb.rows; ++y) {
            const auto* row = rgb.ptr<cv::Vec3b>(y);
            for (int x = 0; x < rgb.cols; ++x)
                for (int c = 0; c < 3; ++c) f.at(y, x, c) = row[x][c] / 255.0;
        }
        frames.push_back(std::move(f));
    }
    if (frames.empty()) throw DecodeError("no frames decoded from: " + resolved_path.string());
    if (static_cast<int>(frames.size()) != clip.num_frames)
        throw DecodeError("frame count mismatch for video '" + clip.video_id + "': metadata says " +
                          std::to_string(clip.num_frames) + ", decoded " + std::to_string(frames.size()));
    if (frames[0].height != clip.height || frames[0].width != clip.width)
        throw DecodeError("resolution mismatch for video '" + clip.video_id + "': metadata says " +
                          std::to_string(clip.width) + "x" + std::to_string(clip.height) + ", decoded " +
                          std::to_string(frames[0].width) + "x" + std::to_string(frames[0].height));
    return frames;
}

#else

std::vector<Frame> MediaFileProvider::decode(const VideoClipDesc&,
                                             const std::filesystem::path& resolved_path) const {
    throw DecodeError("media decoding unavailable (built without OpenCV): " + resolved_path.string());
}

#endif

}  // namespace ugvq::corpus
