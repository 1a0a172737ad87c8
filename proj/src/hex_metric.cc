#include "mobius/hex_metric.h"

#include <algorithm>
#include <array>
#include <cstdlib>
#include <stdexcept>

namespace mobius {

HexCoord::HexCoord(int64_t x0, int64_t x2, int64_t x4) : x0_(x0), x2_(x2), x4_(x4) {
    if (x2 != x0 + x4) {
        throw std::invalid_argument("inconsistent hex coordinate: x2 must equal x0 + x4");
    }
}

namespace {

std::array<int64_t, 3> sorted_deltas(const HexCoord &x, const HexCoord &y) {
    std::array<int64_t, 3> d{
        std::llabs(y.x0() - x.x0()),
        std::llabs(y.x2() - x.x2()),
        std::llabs(y.x4() - x.x4()),
    };
    std::sort(d.begin(), d.end(), std::greater<>());
    return d;
}

uint64_t binomial(uint64_t n, uint64_t k) {
    if (k > n) {
        return 0;
    }
    k = std::min(k, n - k);
    uint64_t result = 1;
    for (uint64_t i = 1; i <= k; i++) {
        result = result * (n - k + i) / i;
    }
    return result;
}

}  // namespace

int64_t hex_distance(const HexCoord &x, const HexCoord &y) { return sorted_deltas(x, y)[0]; }

uint64_t hex_path_count(const HexCoord &x, const HexCoord &y) {
    auto [dmax, dmed, dmin] = sorted_deltas(x, y);
    int64_t r = 2 * dmax - dmed - dmin;
    int64_t s = dmax - dmed;
    return binomial(static_cast<uint64_t>(r), static_cast<uint64_t>(s));
}

}  // namespace mobius
