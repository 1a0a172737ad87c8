#ifndef MOBIUS_COLOR_H
#define MOBIUS_COLOR_H

#include <array>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>

namespace mobius {

/// Face and boundary colors of the color code. Ordered R < G < B.
enum class Color : uint8_t { R = 0, G = 1, B = 2 };

inline constexpr std::array<Color, 3> kColors{Color::R, Color::G, Color::B};

constexpr size_t color_index(Color c) { return static_cast<size_t>(c); }

constexpr char color_char(Color c) {
    switch (c) {
        case Color::R:
            return 'r';
        case Color::G:
            return 'g';
        case Color::B:
            return 'b';
    }
    return '?';
}

inline Color parse_color(std::string_view text) {
    if (text == "r" || text == "R") return Color::R;
    if (text == "g" || text == "G") return Color::G;
    if (text == "b" || text == "B") return Color::B;
    throw std::invalid_argument("unknown color '" + std::string(text) + "'");
}

/// The two colors different from `u`, in increasing order.
constexpr std::pair<Color, Color> other_colors(Color u) {
    switch (u) {
        case Color::R:
            return {Color::G, Color::B};
        case Color::G:
            return {Color::R, Color::B};
        case Color::B:
            return {Color::R, Color::G};
    }
    return {Color::R, Color::G};
}

/// The third color, given two distinct colors.
constexpr Color third_color(Color u, Color v) {
    return static_cast<Color>(3 - color_index(u) - color_index(v));
}

}  // namespace mobius

#endif
