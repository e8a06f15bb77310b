#pragma once

#include <array>
#include <stdexcept>
#include <string>

namespace ugvq {

// The three rated quality dimensions, in canonical order.
enum class Dimension { spatial = 0, temporal = 1, alignment = 2 };

inline constexpr std::array<Dimension, 3> kAllDimensions = {
    Dimension::spatial, Dimension::temporal, Dimension::alignment};

inline const char* to_string(Dimension d) {
    switch (d) {
        case Dimension::spatial: return "spatial";
        case Dimension::temporal: return "temporal";
        case Dimension::alignment: return "alignment";
    }
    return "?";
}

inline Dimension dimension_from_string(const std::string& s) {
    if (s == "spatial") return Dimension::spatial;
    if (s == "temporal") return Dimension::temporal;
    if (s == "alignment") return Dimension::alignment;
    throw std::invalid_argument("unknown dimension: " + s);
}

// Predicted or ground-truth (spatial, temporal, alignment) scores on the
// MOS [0,100] scale. Predictions are not clamped to that range.
struct QualityTriple {
    double spatial = 0.0;
    double temporal = 0.0;
    double alignment = 0.0;

    double operator[](Dimension d) const {
        switch (d) {
            case Dimension::spatial: return spatial;
            case Dimension::temporal: return temporal;
            case Dimension::alignment: return alignment;
        }
        return 0.0;
    }

    double& operator[](Dimension d) {
        switch (d) {
            case Dimension::temporal: return temporal;
            case Dimension::alignment: return alignment;
            case Dimension::spatial: break;
        }
        return spatial;
    }
};

}  // namespace ugvq
