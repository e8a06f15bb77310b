#include "ugvq/corpus/types.hpp"

#include <sstream>

namespace ugvq::corpus {

const char* to_string(Foreground v) {
    switch (v) {
        case Foreground::people: return "people";
        case Foreground::animals: return "animals";
        case Foreground::plants: return "plants";
        case Foreground::man_made_objects: return "man_made_objects";
    }
    return "?";
}

const char* to_string(Background v) {
    switch (v) {
        case Background::indoor: return "indoor";
        case Background::outdoor_natural: return "outdoor_natural";
        case Background::outdoor_man_made: return "outdoor_man_made";
    }
    return "?";
}

const char* to_string(MotionState v) {
    switch (v) {
        case MotionState::static_scene: return "static";
        case MotionState::dynamic: return "dynamic";
        case MotionState::local_movement: return "local_movement";
    }
    return "?";
}

Foreground foreground_from_string(const std::string& s) {
    if (s == "people") return Foreground::people;
    if (s == "animals") return Foreground::animals;
    if (s == "plants") return Foreground::plants;
    if (s == "man_made_objects") return Foreground::man_made_objects;
    throw std::invalid_argument("unknown foreground category: " + s);
}

Background background_from_string(const std::string& s) {
    if (s == "indoor") return Background::indoor;
    if (s == "outdoor_natural") return Background::outdoor_natural;
    if (s == "outdoor_man_made") return Background::outdoor_man_made;
    throw std::invalid_argument("unknown background category: " + s);
}

MotionState motion_from_string(const std::string& s) {
    if (s == "static") return MotionState::static_scene;
    if (s == "dynamic") return MotionState::dynamic;
    if (s == "local_movement") return MotionState::local_movement;
    throw std::invalid_argument("unknown motion category: " + s);
}

int word_count(const std::string& text) {
    std::istringstream iss(text);
    std::string w;
    int n = 0;
    while (iss >> w) ++n;
    return n;
}

std::string ManifestError::format(Kind kind, int line, const std::string& msg) {
    const char* k = kind == Kind::parse ? "parse" : kind == Kind::referential ? "referential" : "taxonomy";
    std::string out = "manifest ";
    out += k;
    out += " error";
    if (line > 0) out += " at line " + std::to_string(line);
    out += ": " + msg;
    return out;
}

}  // namespace ugvq::corpus
