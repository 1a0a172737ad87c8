#ifndef MOBIUS_CODE_LATTICE_H
#define MOBIUS_CODE_LATTICE_H

#include <array>
#include <cstdint>
#include <span>
#include <vector>

#include "mobius/color.h"

namespace mobius {

enum class QubitClass : uint8_t { Bulk, Boundary, Corner };

/// Where a qubit sits on the triangle. `color` is only meaningful for
/// Boundary (the color of the boundary it lies on) and Corner (the color of
/// the corner, i.e. of its single face).
struct QubitKind {
    QubitClass cls = QubitClass::Bulk;
    Color color = Color::R;

    bool operator==(const QubitKind &) const = default;
};

/// Position on the underlying triangular grid. Faces and qubits both live on
/// grid points; a face owns the six (or fewer) grid neighbours of its center.
struct GridCoord {
    int32_t i = 0;
    int32_t j = 0;

    bool operator==(const GridCoord &) const = default;
};

struct Face {
    Color color = Color::R;
    GridCoord center;
    std::vector<uint32_t> support;  // sorted qubit indices
};

/// A bit-flip error, stored as a sorted list of distinct qubit indices.
struct PauliXError {
    std::vector<uint32_t> support;

    static PauliXError from_qubits(std::vector<uint32_t> qubits);
    size_t weight() const { return support.size(); }
    bool operator==(const PauliXError &) const = default;
};

struct Defect {
    uint32_t face = 0;
    Color color = Color::R;

    bool operator==(const Defect &) const = default;
};

/// Violated faces, sorted by face index.
struct Syndrome {
    std::vector<Defect> defects;

    bool empty() const { return defects.empty(); }
    size_t size() const { return defects.size(); }
    bool operator==(const Syndrome &) const = default;
};

/// The triangular color code on the hexagonal lattice with odd distance d.
///
/// Qubits are indexed row-major by grid coordinate; faces are ordered by
/// (color, row, column). Only Z-type stabilizers and logicals are modeled.
class CodeLattice {
   public:
    explicit CodeLattice(int distance);

    int distance() const { return distance_; }
    size_t num_qubits() const { return qubit_coords_.size(); }
    size_t num_faces() const { return faces_.size(); }

    const Face &face(size_t f) const { return faces_[f]; }
    std::span<const Face> faces() const { return faces_; }
    std::span<const uint32_t> faces_of(uint32_t qubit) const { return qubit_faces_[qubit]; }
    QubitKind kind(uint32_t qubit) const { return qubit_kinds_[qubit]; }
    GridCoord coord(uint32_t qubit) const { return qubit_coords_[qubit]; }

    /// The d qubits of the u-colored boundary (touching no u face), sorted.
    std::span<const uint32_t> boundary(Color u) const { return boundaries_[color_index(u)]; }
    /// The qubit touching only a single face, of color u.
    uint32_t corner(Color u) const { return corners_[color_index(u)]; }

    /// Throws std::out_of_range if any qubit index is outside the lattice.
    void validate(const PauliXError &error) const;

    Syndrome syndrome(const PauliXError &error) const;
    /// Per-face defect flags; the allocation-free variant used in hot loops.
    void syndrome_bits(std::span<const uint32_t> support, std::vector<uint8_t> &out) const;

    /// Support of b_u: product of every stabilizer whose face is not colored u.
    std::vector<uint32_t> boundary_operator(Color u) const;
    /// Support of the boundary logical of color u (same as boundary(u)).
    std::span<const uint32_t> logical_support(Color u) const { return boundary(u); }
    /// Commutator of the error with the u-boundary Z logical.
    bool logical_parity(const PauliXError &error, Color u) const;
    bool logical_parity(std::span<const uint32_t> support, Color u) const;

    static size_t expected_qubit_count(int distance) {
        return static_cast<size_t>(3 * (distance - 1) * (distance + 1) / 4 + 1);
    }

   private:
    int distance_;
    std::vector<GridCoord> qubit_coords_;
    std::vector<QubitKind> qubit_kinds_;
    std::vector<std::vector<uint32_t>> qubit_faces_;
    std::vector<Face> faces_;
    std::array<std::vector<uint32_t>, 3> boundaries_;
    std::array<uint32_t, 3> corners_{};
    std::array<std::vector<uint8_t>, 3> on_boundary_;
};

/// Symmetric difference of two sorted index sets.
std::vector<uint32_t> symmetric_difference(std::span<const uint32_t> a, std::span<const uint32_t> b);

}  // namespace mobius

#endif
