#pragma once

#include <filesystem>
#include <memory>
#include <vector>

#include "ugvq/corpus/types.hpp"

namespace ugvq::corpus {

// One decoded frame, H x W x 3 row-major RGB, values in [0,1].
struct Frame {
    int height = 0;
    int width = 0;
    std::vector<double> data;

    Frame() = default;
    Frame(int h, int w) : height(h), width(w), data(static_cast<std::size_t>(h) * w * 3, 0.0) {}

    double& at(int y, int x, int c) { return data[(static_cast<std::size_t>(y) * width + x) * 3 + c]; }
    double at(int y, int x, int c) const { return data[(static_cast<std::size_t>(y) * width + x) * 3 + c]; }

    double mean() const;
    double variance() const;  // population variance over all channels
};

// Area-average resample to edge x edge (used by backbones that declare a
// fixed input size and by the toy encoders' downsampling).
Frame resize_area(const Frame& src, int out_h, int out_w);

// Mean absolute / mean squared pixel difference between equally sized frames.
double mean_sq_diff(const Frame& a, const Frame& b);

class FrameProvider {
public:
    virtual ~FrameProvider() = default;
    virtual bool can_decode(const std::filesystem::path& path) const = 0;
    // Decodes and validates against the descriptor (frame count, resolution).
    virtual std::vector<Frame> decode(const VideoClipDesc& clip,
                                      const std::filesystem::path& resolved_path) const = 0;
};

// Raw-tensor clips (".vten"): a small binary format for synthetic fixtures.
// Layout: magic "UGVT", u32 version, u32 frames, u32 height, u32 width,
// then frames*height*width*3 little-endian doubles in [0,1].
class TensorFileProvider : public FrameProvider {
public:
    bool can_decode(const std::filesystem::path& path) const override;
    std::vector<Frame> decode(const VideoClipDesc& clip,
                              const std::filesystem::path& resolved_path) const override;
};

void write_tensor_clip(const std::filesystem::path& path, const std::vector<Frame>& frames);

// Media files decoded through OpenCV (mp4/avi/...). Channel values are
// normalized to [0,1] at decode time. Compiled out when OpenCV is absent;
// decoding then reports an unsupported-format error.
class MediaFileProvider : public FrameProvider {
public:
    bool can_decode(const std::filesystem::path& path) const override;
    std::vector<Frame> decode(const VideoClipDesc& clip,
                              const std::filesystem::path& resolved_path) const override;
};

// Tensor provider first, media provider as fallback. Safe to share across
// threads; providers are stateless.
class ProviderChain : public FrameProvider {
public:
    ProviderChain();
    void add(std::shared_ptr<FrameProvider> p) { providers_.push_back(std::move(p)); }
    bool can_decode(const std::filesystem::path& path) const override;
    std::vector<Frame> decode(const VideoClipDesc& clip,
                              const std::filesystem::path& resolved_path) const override;

private:
    std::vector<std::shared_ptr<FrameProvider>> providers_;
};

const ProviderChain& default_providers();

}  // namespace ugvq::corpus
