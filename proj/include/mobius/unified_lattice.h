#ifndef MOBIUS_UNIFIED_LATTICE_H
#define MOBIUS_UNIFIED_LATTICE_H

#include <array>
#include <cstdint>
#include <span>
#include <vector>

#include "mobius/code_lattice.h"

namespace mobius {

/// A restricted lattice: the faces of two colors. Panel vw decodes the
/// symmetry built from the non-u faces.
enum class Panel : uint8_t { RG = 0, GB = 1, RB = 2 };

inline constexpr std::array<Panel, 3> kPanels{Panel::RG, Panel::GB, Panel::RB};

const char *panel_name(Panel p);
bool panel_contains(Panel p, Color c);
Panel panel_of(Color a, Color b);

/// One image of a face on one of the two panels containing its color.
struct UNode {
    uint32_t face = 0;
    Panel panel = Panel::RG;

    bool operator==(const UNode &) const = default;
};

enum class EdgeVia : uint8_t { Bulk, Crease, Corner };

/// An edge of the matching graph produced by a single-qubit error.
struct UnitEdge {
    uint32_t a = 0;  // node index, a < b
    uint32_t b = 0;
    int32_t weight = 1;
    bool crosses_green = false;
    EdgeVia via = EdgeVia::Bulk;
    Color via_color = Color::R;  // boundary/corner color for Crease/Corner edges
    std::vector<uint32_t> source_qubits;
};

/// Shortest-path length between two nodes with the crossing parity of the
/// canonical path (fewest green crossings among the shortest).
struct PathInfo {
    int32_t length = 0;
    bool green_parity = false;

    bool operator==(const PathInfo &) const = default;
};

/// A place where the green crease (the readout line) can be torn: one of the
/// green-crossing unit edges, indexed along the green boundary.
struct TearSite {
    uint32_t qubit = 0;  // the green-boundary qubit inducing the edge
    uint32_t edge = 0;   // index into unit_edges()
    uint32_t a = 0;      // the two endpoints of the cut edge
    uint32_t b = 0;
    int32_t weight = 0;
};

/// The Möbius-strip matching graph: each face appears on the two panels
/// containing its color, panels are glued along creases (weight 2) and
/// corners (weight 3), and bulk edges have weight 1. Immutable after
/// construction; all-pairs distances are precomputed.
class UnifiedLattice {
   public:
    explicit UnifiedLattice(CodeLattice lattice);

    const CodeLattice &lattice() const { return lattice_; }
    size_t num_nodes() const { return nodes_.size(); }
    const UNode &node(uint32_t index) const { return nodes_[index]; }
    uint32_t node_index(uint32_t face, Panel panel) const;
    /// The two images of a face, in panel order.
    std::array<uint32_t, 2> images(uint32_t face) const { return {2 * face, 2 * face + 1}; }

    std::span<const UnitEdge> unit_edges() const { return edges_; }
    /// Indices of the unit edges induced by flipping `qubit`.
    std::span<const uint32_t> edges_of_qubit(uint32_t qubit) const { return qubit_edges_[qubit]; }

    PathInfo dist(uint32_t a, uint32_t b) const { return canonical_[a * num_nodes() + b]; }
    /// Shortest length over paths whose green-crossing count has the given
    /// parity.
    int32_t class_distance(uint32_t a, uint32_t b, bool parity) const {
        return by_parity_[(a * num_nodes() + b) * 2 + (parity ? 1 : 0)];
    }
    /// Shortest length over paths that never cross the green crease.
    int32_t torn_distance(uint32_t a, uint32_t b) const { return torn_[a * num_nodes() + b]; }

    std::span<const TearSite> tear_sites() const { return tear_sites_; }

    /// Both images of every defect, in defect order.
    std::vector<uint32_t> defect_nodes(const Syndrome &syndrome) const;
    void defect_nodes_from_bits(std::span<const uint8_t> bits, std::vector<uint32_t> &out) const;

    static constexpr int32_t kUnreachable = INT32_MAX / 4;

   private:
    void add_edge(uint32_t a, uint32_t b, int32_t weight, bool crosses, EdgeVia via, Color color, uint32_t qubit);
    void compute_distances();

    CodeLattice lattice_;
    std::vector<UNode> nodes_;
    std::vector<UnitEdge> edges_;
    std::vector<std::vector<uint32_t>> qubit_edges_;
    std::vector<PathInfo> canonical_;
    std::vector<int32_t> by_parity_;
    std::vector<int32_t> torn_;
    std::vector<TearSite> tear_sites_;
};

}  // namespace mobius

#endif
