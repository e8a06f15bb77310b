#pragma once

#include <stdexcept>
#include <string>

namespace ugvq::corpus {

enum class Foreground { people, animals, plants, man_made_objects };
enum class Background { indoor, outdoor_natural, outdoor_man_made };
enum class MotionState { static_scene, dynamic, local_movement };

inline constexpr int kForegroundCount = 4;
inline constexpr int kBackgroundCount = 3;
inline constexpr int kMotionCount = 3;

// Serialized names are the wire format of the manifest; do not rename.
const char* to_string(Foreground v);
const char* to_string(Background v);
const char* to_string(MotionState v);
Foreground foreground_from_string(const std::string& s);
Background background_from_string(const std::string& s);
MotionState motion_from_string(const std::string& s);

// A structured text prompt with its three category labels. Exactly one
// label per axis; multi-label prompts are not representable.
struct PromptRecord {
    std::string prompt_id;
    std::string text;  // 4..15 whitespace-separated words
    Foreground foreground = Foreground::people;
    Background background = Background::indoor;
    MotionState motion = MotionState::static_scene;
};

int word_count(const std::string& text);

// Path-based video descriptor; frames are decoded lazily through a
// FrameProvider. Pixel data is H x W x 3 in [0,1] after decode.
struct VideoClipDesc {
    std::string video_id;
    std::string prompt_id;
    std::string model_name;  // generating T2V system
    std::string path;        // relative paths resolve against the manifest directory
    double fps = 0.0;
    int width = 0;
    int height = 0;
    int num_frames = 0;

    double duration() const { return fps > 0.0 ? num_frames / fps : 0.0; }
};

struct MosEntry {
    std::string video_id;
    double spatial = 0.0;
    double temporal = 0.0;
    double alignment = 0.0;
};

class ManifestError : public std::runtime_error {
public:
    enum class Kind { parse, referential, taxonomy };

    ManifestError(Kind kind, int line, const std::string& msg)
        : std::runtime_error(format(kind, line, msg)), kind_(kind), line_(line) {}

    Kind kind() const { return kind_; }
    int line() const { return line_; }  // 1-based; 0 when not line-addressable

private:
    static std::string format(Kind kind, int line, const std::string& msg);
    Kind kind_;
    int line_;
};

class DecodeError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

}  // namespace ugvq::corpus
