#ifndef MOBIUS_MATCHING_H
#define MOBIUS_MATCHING_H

#include <cstdint>
#include <limits>
#include <stdexcept>
#include <utility>
#include <vector>

namespace mobius {

/// Edge weight meaning "this pair may not be matched".
inline constexpr int64_t kForbidden = std::numeric_limits<int64_t>::max();

/// Dense symmetric weight table over an even number of nodes.
class MatchGraph {
   public:
    explicit MatchGraph(size_t num_nodes);

    size_t size() const { return n_; }
    int64_t weight(size_t a, size_t b) const { return weights_[a * n_ + b]; }
    /// Sets both (a, b) and (b, a). Weights must be >= 0 or kForbidden.
    void set(size_t a, size_t b, int64_t w);

   private:
    size_t n_;
    std::vector<int64_t> weights_;
};

struct Matching {
    std::vector<std::pair<uint32_t, uint32_t>> pairs;  // each pair has first < second, sorted
    int64_t cost = 0;
};

class InfeasibleMatching : public std::runtime_error {
   public:
    using std::runtime_error::runtime_error;
};

/// Exact minimum-weight perfect matching (Edmonds' blossom algorithm with
/// integer duals, O(n^3)). Throws InfeasibleMatching if no perfect matching
/// avoids forbidden edges.
Matching mwpm(const MatchGraph &graph);

/// Exhaustive search over all (n-1)!! pairings. n <= 12.
Matching brute_force_matching(const MatchGraph &graph);

inline constexpr size_t kBruteForceMaxNodes = 12;

}  // namespace mobius

#endif
