#include "testutil/fixtures.hpp"

#include <unistd.h>

#include <algorithm>
#include <atomic>
#include <cmath>

#include "ugvq/common/hash.hpp"

namespace testutil {

namespace fs = std::filesystem;
using namespace ugvq;
using namespace ugvq::corpus;
using namespace ugvq::subjective;

TempDir::TempDir(const std::string& tag) {
    static std::atomic<int> counter{0};
    path_ = fs::temp_directory_path() /
            ("ugvq_test_" + tag + "_" + std::to_string(::getpid()) + "_" + std::to_string(counter++));
    fs::create_directories(path_);
}

TempDir::~TempDir() {
    std::error_code ec;
    fs::remove_all(path_, ec);
}

RatingFixture make_rating_fixture(int n_videos, int planted_conditions, std::uint64_t seed) {
    RatingFixture fx;
    fx.planted_observer = "o09";
    fx.planted_conditions = planted_conditions;
    std::mt19937_64 rng(seed);

    // Pattern {2,2,3,3,3,3,3,4,4} + planted 5: kurtosis lands in [2,4]
    // (normal branch) and only the 5 exceeds the 2-sigma threshold.
    const int pattern[9] = {2, 2, 3, 3, 3, 3, 3, 4, 4};

    for (int v = 0; v < n_videos; ++v) {
        for (int d = 0; d < 3; ++d) {
            bool planted = false;
            if (planted_conditions > 0) {
                // spread planted conditions over distinct videos, one dim each
                planted = v < planted_conditions && d == v % 3;
            }
            if (planted) {
                std::vector<int> scores(pattern, pattern + 9);
                std::shuffle(scores.begin(), scores.end(), rng);
                for (int o = 0; o < 9; ++o) {
                    Rating r;
                    r.observer_id = "o0" + std::to_string(o);
                    r.video_id = "v" + std::to_string(v);
                    r.dimension = static_cast<Dimension>(d);
                    r.score = scores[o];
                    fx.naive.push_back({r.observer_id, r.video_id, d, r.score});
                    fx.matrix.add(std::move(r));
                }
                Rating r;
                r.observer_id = fx.planted_observer;
                r.video_id = "v" + std::to_string(v);
                r.dimension = static_cast<Dimension>(d);
                r.score = 5;
                fx.naive.push_back({r.observer_id, r.video_id, d, r.score});
                fx.matrix.add(std::move(r));
            } else {
                // benign condition: base in 2..4 plus a symmetric noise
                // multiset {-1 x3, 0 x4, +1 x3}. Its kurtosis (1.67) selects
                // the sqrt(20)-sigma branch and the max deviation is 1.29
                // sigma, so nothing is ever flagged here.
                int base = 2 + static_cast<int>(rng() % 3);
                std::vector<int> noise = {-1, -1, -1, 0, 0, 0, 0, 1, 1, 1};
                std::shuffle(noise.begin(), noise.end(), rng);
                for (int o = 0; o < 10; ++o) {
                    Rating r;
                    r.observer_id = o == 9 ? fx.planted_observer : "o0" + std::to_string(o);
                    r.video_id = "v" + std::to_string(v);
                    r.dimension = static_cast<Dimension>(d);
                    r.score = base + noise[o];
                    fx.naive.push_back({r.observer_id, r.video_id, d, r.score});
                    fx.matrix.add(std::move(r));
                }
            }
        }
    }
    return fx;
}

namespace {

PromptRecord make_prompt(int i) {
    PromptRecord p;
    p.prompt_id = "p" + std::to_string(i);
    p.foreground = static_cast<Foreground>(i % kForegroundCount);
    p.background = static_cast<Background>(i % kBackgroundCount);
    p.motion = static_cast<MotionState>(i % kMotionCount);
    p.text = "a scene number " + std::to_string(i) + " with " + to_string(p.foreground) + " somewhere";
    return p;
}

}  // namespace

DatasetManifest make_lgvq_shaped_manifest() {
    const char* models[6] = {"gen2", "tune_a_video", "video_crafter", "text2video_zero", "hotshot", "video_fusion"};
    std::vector<PromptRecord> prompts;
    std::vector<VideoClipDesc> videos;
    for (int i = 0; i < 468; ++i) {
        prompts.push_back(make_prompt(i));
        for (int m = 0; m < 6; ++m) {
            VideoClipDesc v;
            v.video_id = "p" + std::to_string(i) + "_" + models[m];
            v.prompt_id = "p" + std::to_string(i);
            v.model_name = models[m];
            v.path = "clips/" + v.video_id + ".vten";
            v.fps = 8.0;
            v.width = 32;
            v.height = 32;
            v.num_frames = 16;
            videos.push_back(std::move(v));
        }
    }
    return manifest_from_records(std::move(prompts), std::move(videos));
}

DatasetManifest make_prompt_manifest(int n_prompts) {
    std::vector<PromptRecord> prompts;
    std::vector<VideoClipDesc> videos;
    for (int i = 0; i < n_prompts; ++i) {
        prompts.push_back(make_prompt(i));
        VideoClipDesc v;
        v.video_id = "vid" + std::to_string(i);
        v.prompt_id = "p" + std::to_string(i);
        v.model_name = i % 2 == 0 ? "toyA" : "toyB";
        v.path = "clips/vid" + std::to_string(i) + ".vten";
        v.fps = 8.0;
        v.width = 16;
        v.height = 16;
        v.num_frames = 8;
        videos.push_back(std::move(v));
    }
    return manifest_from_records(std::move(prompts), std::move(videos));
}

VideoClipDesc write_gradient_clip(const fs::path& dir, const std::string& video_id, int frames,
                                  int h, int w) {
    fs::create_directories(dir);
    std::vector<Frame> fr;
    for (int i = 0; i < frames; ++i) {
        Frame f(h, w);
        double v = (i + 0.5) / static_cast<double>(frames);
        std::fill(f.data.begin(), f.data.end(), v);
        fr.push_back(std::move(f));
    }
    fs::path file = dir / (video_id + ".vten");
    write_tensor_clip(file, fr);
    VideoClipDesc d;
    d.video_id = video_id;
    d.prompt_id = "p0";
    d.model_name = "toyA";
    d.path = file.filename().string();
    d.fps = 8.0;
    d.width = w;
    d.height = h;
    d.num_frames = frames;
    return d;
}

namespace {

// checkerboard in {-0.5, +0.5}
double checker(int y, int x) { return ((y + x) % 2 == 0) ? 0.5 : -0.5; }

VideoClipDesc write_pattern_clip(const fs::path& clip_dir, const std::string& video_id,
                                 const std::string& prompt_id, const std::string& model, int frames,
                                 int hw, double amplitude, double jitter) {
    std::vector<Frame> fr;
    for (int t = 0; t < frames; ++t) {
        Frame f(hw, hw);
        double ramp = frames > 1 ? (static_cast<double>(t) / (frames - 1) - 0.5) : 0.0;
        double offset = 0.2 * jitter * ramp;
        for (int y = 0; y < hw; ++y)
            for (int x = 0; x < hw; ++x)
                for (int c = 0; c < 3; ++c)
                    f.at(y, x, c) = std::clamp(0.5 + amplitude * checker(y, x) + offset, 0.0, 1.0);
        fr.push_back(std::move(f));
    }
    fs::create_directories(clip_dir);
    write_tensor_clip(clip_dir / (video_id + ".vten"), fr);
    VideoClipDesc d;
    d.video_id = video_id;
    d.prompt_id = prompt_id;
    d.model_name = model;
    d.path = "clips/" + video_id + ".vten";
    d.fps = 8.0;
    d.width = hw;
    d.height = hw;
    d.num_frames = frames;
    return d;
}

}  // namespace

SyntheticCorpus make_variance_corpus(const fs::path& dir, int n_clips) {
    std::vector<PromptRecord> prompts;
    std::vector<VideoClipDesc> videos;
    std::vector<MosEntry> mos;
    for (int i = 0; i < n_clips; ++i) {
        prompts.push_back(make_prompt(i));
        double a = 0.08 + 0.7 * i / std::max(1, n_clips - 1);
        auto v = write_pattern_clip(dir / "clips", "var" + std::to_string(i), prompts.back().prompt_id,
                                    i % 2 == 0 ? "toyA" : "toyB", 8, 16, a, 0.0);
        MosEntry e;
        e.video_id = v.video_id;
        e.spatial = 10.0 + 100.0 * a;          // strictly increasing in variance
        e.temporal = 50.0;
        e.alignment = 50.0;
        videos.push_back(std::move(v));
        mos.push_back(std::move(e));
    }
    SyntheticCorpus c{manifest_from_records(std::move(prompts), std::move(videos), std::move(mos), dir), dir};
    save_manifest(c.manifest, dir / "manifest.jsonl");
    return c;
}

SyntheticCorpus make_smoothness_corpus(const fs::path& dir, int n_per_class) {
    std::vector<PromptRecord> prompts;
    std::vector<VideoClipDesc> videos;
    std::vector<MosEntry> mos;
    int idx = 0;
    for (int cls = 0; cls < 2; ++cls) {
        for (int i = 0; i < n_per_class; ++i, ++idx) {
            prompts.push_back(make_prompt(idx));
            double jitter = cls == 0 ? 0.0 : 0.6 + 0.4 * i / std::max(1, n_per_class - 1);
            auto v = write_pattern_clip(dir / "clips", "sm" + std::to_string(idx),
                                        prompts.back().prompt_id, idx % 2 == 0 ? "toyA" : "toyB", 8, 16,
                                        0.3, jitter);
            MosEntry e;
            e.video_id = v.video_id;
            e.spatial = 50.0;
            e.temporal = cls == 0 ? 85.0 : 25.0;  // MOS encodes smoothness
            e.alignment = 50.0;
            videos.push_back(std::move(v));
            mos.push_back(std::move(e));
        }
    }
    SyntheticCorpus c{manifest_from_records(std::move(prompts), std::move(videos), std::move(mos), dir), dir};
    save_manifest(c.manifest, dir / "manifest.jsonl");
    return c;
}

SyntheticCorpus make_overfit_corpus(const fs::path& dir, int n_a, int n_j) {
    std::vector<PromptRecord> prompts;
    std::vector<VideoClipDesc> videos;
    std::vector<MosEntry> mos;
    int idx = 0;
    for (int ia = 0; ia < n_a; ++ia) {
        for (int ij = 0; ij < n_j; ++ij, ++idx) {
            double a = 0.1 + 0.65 * ia / std::max(1, n_a - 1);
            double j = static_cast<double>(ij) / std::max(1, n_j - 1);
            int w = idx % 4;  // alignment level, encoded as a prompt token
            PromptRecord p;
            p.prompt_id = "p" + std::to_string(idx);
            p.foreground = static_cast<Foreground>(idx % kForegroundCount);
            p.background = static_cast<Background>(idx % kBackgroundCount);
            p.motion = static_cast<MotionState>(idx % kMotionCount);
            p.text = "a probe clip rated grade" + std::to_string(w) + " for alignment checks";
            prompts.push_back(p);
            auto v = write_pattern_clip(dir / "clips", "ov" + std::to_string(idx), p.prompt_id,
                                        idx % 2 == 0 ? "toyA" : "toyB", 8, 32, a, j);
            MosEntry e;
            e.video_id = v.video_id;
            e.spatial = 100.0 * a;
            e.temporal = 90.0 - 70.0 * j;
            e.alignment = 20.0 + 20.0 * w;
            videos.push_back(std::move(v));
            mos.push_back(std::move(e));
        }
    }
    SyntheticCorpus c{manifest_from_records(std::move(prompts), std::move(videos), std::move(mos), dir), dir};
    save_manifest(c.manifest, dir / "manifest.jsonl");
    return c;
}

}  // namespace testutil
