#include "ugvq/corpus/frame.hpp"

#include <cmath>
#include <fstream>

#include "ugvq/common/binio.hpp"

namespace ugvq::corpus {

namespace {
constexpr char kTensorMagic[4] = {'U', 'G', 'V', 'T'};
constexpr std::uint32_t kTensorVersion = 1;
}  // namespace

double Frame::mean() const {
    if (data.empty()) return 0.0;
    double s = 0.0;
    for (double v : data) s += v;
    return s / static_cast<double>(data.size());
}

double Frame::variance() const {
    if (data.empty()) return 0.0;
    const double m = mean();
    double s = 0.0;
    for (double v : data) s += (v - m) * (v - m);
    return s / static_cast<double>(data.size());
}

Frame resize_area(const Frame& src, int out_h, int out_w) {
    Frame dst(out_h, out_w);
    for (int y = 0; y < out_h; ++y) {
        int y0 = y * src.height / out_h;
        int y1 = (y + 1) * src.height / out_h;
        if (y1 <= y0) y1 = y0 + 1;
        for (int x = 0; x < out_w; ++x) {
            int x0 = x * src.width / out_w;
            int x1 = (x + 1) * src.width / out_w;
            if (x1 <= x0) x1 = x0 + 1;
            for (int c = 0; c < 3; ++c) {
                double s = 0.0;
                for (int yy = y0; yy < y1; ++yy)
                    for (int xx = x0; xx < x1; ++xx) s += src.at(yy, xx, c);
                dst.at(y, x, c) = s / static_cast<double>((y1 - y0) * (x1 - x0));
            }
        }
    }
    return dst;
}

double mean_sq_diff(const Frame& a, const Frame& b) {
    if (a.data.size() != b.data.size()) throw DecodeError("frame size mismatch in mean_sq_diff");
    if (a.data.empty()) return 0.0;
    double s = 0.0;
    for (std::size_t i = 0; i < a.data.size(); ++i) {
        double d = a.data[i] - b.data[i];
        s += d * d;
    }
    return s / static_cast<double>(a.data.size());
}

bool TensorFileProvider::can_decode(const std::filesystem::path& path) const {
    return path.extension() == ".vten";
}

std::vector<Frame> TensorFileProvider::decode(const VideoClipDesc& clip,
                                              const std::filesystem::path& resolved_path) const {
    std::ifstream is(resolved_path, std::ios::binary);
    if (!is) throw DecodeError("cannot open tensor clip: " + resolved_path.string());
    char magic[4];
    if (!is.read(magic, 4) || std::memcmp(magic, kTensorMagic, 4) != 0)
        throw DecodeError("bad tensor clip magic: " + resolved_path.string());
    std::uint32_t version = binio::read_u32(is);
    if (version != kTensorVersion)
        throw DecodeError("unsupported tensor clip version " + std::to_string(version));
    std::uint32_t n = binio::read_u32(is);
    std::uint32_t h = binio::read_u32(is);
    std::uint32_t w = binio::read_u32(is);
    if (n == 0 || h == 0 || w == 0) throw DecodeError("empty tensor clip: " + resolved_path.string());
    if (static_cast<int>(n) != clip.num_frames)
        throw DecodeError("frame count mismatch for video '" + clip.video_id + "': metadata says " +
                          std::to_string(clip.num_frames) + ", file holds " + std::to_string(n));
    if (static_cast<int>(h) != clip.height || static_cast<int>(w) != clip.width)
        throw DecodeError("resolution mismatch for video '" + clip.video_id + "': metadata says " +
                          std::to_string(clip.width) + "x" + std::to_string(clip.height) +
                          ", file holds " + std::to_string(w) + "x" + std::to_string(h));
    std::vector<Frame> frames;
    frames.reserve(n);
    for (std::uint32_t i = 0; i < n; ++i) {
        Frame f(static_cast<int>(h), static_cast<int>(w));
        for (double& v : f.data) {
            v = binio::read_f64(is);
            if (!std::isfinite(v) || v < 0.0 || v > 1.0)
                throw DecodeError("pixel value out of [0,1] in tensor clip: " + resolved_path.string());
        }
        frames.push_back(std::move(f));
    }
    return frames;
}

void write_tensor_clip(const std::filesystem::path& path, const std::vector<Frame>& frames) {
    if (frames.empty()) throw DecodeError("refusing to write empty tensor clip");
    std::ofstream os(path, std::ios::binary | std::ios::trunc);
    if (!os) throw DecodeError("cannot write tensor clip: " + path.string());
    os.write(kTensorMagic, 4);
    binio::write_u32(os, kTensorVersion);
    binio::write_u32(os, static_cast<std::uint32_t>(frames.size()));
    binio::write_u32(os, static_cast<std::uint32_t>(frames[0].height));
    binio::write_u32(os, static_cast<std::uint32_t>(frames[0].width));
    for (const Frame& f : frames) {
        if (f.height != frames[0].height || f.width != frames[0].width)
            throw DecodeError("inconsistent frame sizes in tensor clip");
        for (double v : f.data) binio::write_f64(os, v);
    }
    if (!os) throw DecodeError("write failed: " + path.string());
}

ProviderChain::ProviderChain() = default;

bool ProviderChain::can_decode(const std::filesystem::path& path) const {
    for (const auto& p : providers_)
        if (p->can_decode(path)) return true;
    return false;
}

std::vector<Frame> ProviderChain::decode(const VideoClipDesc& clip,
                                         const std::filesystem::path& resolved_path) const {
    for (const auto& p : providers_)
        if (p->can_decode(resolved_path)) return p->decode(clip, resolved_path);
    throw DecodeError("no provider can decode: " + resolved_path.string());
}

const ProviderChain& default_providers() {
    static const ProviderChain chain = [] {
        ProviderChain c;
        c.add(std::make_shared<TensorFileProvider>());
        c.add(std::make_shared<MediaFileProvider>());
        return c;
    }();
    return chain;
}

}  // namespace ugvq::corpus
