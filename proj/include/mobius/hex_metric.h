#ifndef MOBIUS_HEX_METRIC_H
#define MOBIUS_HEX_METRIC_H

#include <cstdint>

namespace mobius {

/// Three-axis coordinates (x0, x2, x4) of a vertex of the six-neighbour
/// lattice, one axis per clock direction (12, 2 and 4 o'clock). The axes are
/// redundant: a valid coordinate has x2 = x0 + x4. A unit step changes exactly
/// two of the three coordinates by one.
class HexCoord {
   public:
    HexCoord(int64_t x0, int64_t x2, int64_t x4);
    /// Builds the coordinate from the two independent axes.
    static HexCoord from_axes(int64_t x0, int64_t x4) { return HexCoord(x0, x0 + x4, x4); }

    int64_t x0() const { return x0_; }
    int64_t x2() const { return x2_; }
    int64_t x4() const { return x4_; }

    bool operator==(const HexCoord &) const = default;

   private:
    int64_t x0_;
    int64_t x2_;
    int64_t x4_;
};

/// Number of edges on a shortest path: max(|Δ0|, |Δ2|, |Δ4|).
int64_t hex_distance(const HexCoord &x, const HexCoord &y);

/// Number of distinct shortest paths: C(r, s) with r = 2Δmax − Δmed − Δmin and
/// s = Δmax − Δmed.
uint64_t hex_path_count(const HexCoord &x, const HexCoord &y);

}  // namespace mobius

#endif
