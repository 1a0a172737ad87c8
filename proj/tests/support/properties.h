#ifndef MOBIUS_TESTS_PROPERTIES_H
#define MOBIUS_TESTS_PROPERTIES_H

// Property checks shared by the unit tests and the acceptance runner. Each
// returns ok plus a short description of the first violation found.

#include <cstdint>
#include <string>
#include <vector>

#include "mobius/code_lattice.h"
#include "mobius/hex_metric.h"
#include "mobius/unified_lattice.h"

namespace mobius::testing {

struct PropertyResult {
    bool ok = true;
    std::string detail;
    uint64_t checked = 0;

    void fail(std::string why) {
        if (ok) {
            ok = false;
            detail = std::move(why);
        }
    }
};

/// Sum of unit-edge weights per qubit is 3; XOR of crosses_green per qubit
/// equals membership in the green boundary.
PropertyResult check_weight_sum_and_flags(int d);

/// b_r + b_g + b_b = 0 and b_u = Zbar_v Zbar_w as supports.
PropertyResult check_boundary_identities(int d);

/// Errors on bulk qubits only create equal-parity defect counts per color.
PropertyResult check_bulk_conservation(int d, int samples, uint64_t seed);

/// mwpm cost equals brute force on random graphs of up to max_nodes nodes.
PropertyResult check_mwpm_vs_brute_force(int graphs, size_t max_nodes, uint64_t seed);

/// Shortest-path length and count on the six-neighbour lattice by BFS.
struct HexOracle {
    int64_t distance;
    uint64_t paths;
};
HexOracle hex_bfs(const HexCoord &from, const HexCoord &to);

/// hex_distance / hex_path_count against BFS for all targets within radius.
PropertyResult check_hex_metric(int radius);

/// Every single-qubit error: ell = 3, parity = [q in green boundary], success.
PropertyResult check_weight_one(const UnifiedLattice &unified);

/// parity_alt != parity_or whenever an alternative exists, on random syndromes;
/// also checks the reported ell_alt against the listed final edges.
PropertyResult check_parity_flip(const UnifiedLattice &unified, int samples, uint64_t seed);

/// Noiseless round trips of the two fit forms from random parameter tuples.
PropertyResult check_lowp_roundtrip(int tuples, uint64_t seed, double tolerance);
PropertyResult check_threshold_roundtrip(int tuples, uint64_t seed, double tolerance);

}  // namespace mobius::testing

#endif
