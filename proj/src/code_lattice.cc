#include "mobius/code_lattice.h"

#include <algorithm>
#include <map>
#include <stdexcept>
#include <string>
#include <tuple>

namespace mobius {

namespace {

constexpr std::array<std::pair<int, int>, 6> kNeighbourOffsets{{
    {1, 0},
    {-1, 0},
    {0, 1},
    {0, -1},
    {1, -1},
    {-1, 1},
}};

bool is_face_center(int i, int j) { return (i + 2 * j) % 3 == 2; }

}  // namespace

PauliXError PauliXError::from_qubits(std::vector<uint32_t> qubits) {
    std::sort(qubits.begin(), qubits.end());
    if (std::adjacent_find(qubits.begin(), qubits.end()) != qubits.end()) {
        throw std::invalid_argument("error support lists a qubit twice");
    }
    return PauliXError{std::move(qubits)};
}

CodeLattice::CodeLattice(int distance) : distance_(distance) {
    if (distance < 3 || distance % 2 == 0) {
        throw std::invalid_argument("distance must be odd and >= 3, got " + std::to_string(distance));
    }

    // The triangle of grid points i, j >= 0, i + j < side. Every third point
    // is a face center; the rest carry qubits.
    const int side = (3 * distance - 1) / 2;
    std::map<std::pair<int, int>, uint32_t> qubit_at;
    for (int j = 0; j < side; j++) {
        for (int i = 0; i + j < side; i++) {
            if (!is_face_center(i, j)) {
                qubit_at[{j, i}] = 0;
            }
        }
    }
    for (auto &[key, index] : qubit_at) {
        index = static_cast<uint32_t>(qubit_coords_.size());
        qubit_coords_.push_back(GridCoord{key.second, key.first});
    }

    // Face centers are a triangular superlattice whose neighbours differ in
    // row by 1 or 2 (mod 3), so the row index mod 3 is a proper 3-coloring.
    std::vector<Face> faces;
    for (int j = 0; j < side; j++) {
        for (int i = 0; i + j < side; i++) {
            if (!is_face_center(i, j)) {
                continue;
            }
            Face f;
            f.color = static_cast<Color>(j % 3);
            f.center = GridCoord{i, j};
            for (auto [di, dj] : kNeighbourOffsets) {
                auto it = qubit_at.find({j + dj, i + di});
                if (it != qubit_at.end()) {
                    f.support.push_back(it->second);
                }
            }
            std::sort(f.support.begin(), f.support.end());
            faces.push_back(std::move(f));
        }
    }
    std::stable_sort(faces.begin(), faces.end(), [](const Face &a, const Face &b) {
        return std::tuple(a.color, a.center.j, a.center.i) < std::tuple(b.color, b.center.j, b.center.i);
    });
    faces_ = std::move(faces);

    qubit_faces_.assign(num_qubits(), {});
    for (uint32_t f = 0; f < faces_.size(); f++) {
        for (uint32_t q : faces_[f].support) {
            qubit_faces_[q].push_back(f);
        }
    }

    qubit_kinds_.assign(num_qubits(), QubitKind{});
    for (Color c : kColors) {
        on_boundary_[color_index(c)].assign(num_qubits(), 0);
    }
    for (uint32_t q = 0; q < num_qubits(); q++) {
        std::array<bool, 3> touches{};
        for (uint32_t f : qubit_faces_[q]) {
            touches[color_index(faces_[f].color)] = true;
        }
        for (Color c : kColors) {
            if (!touches[color_index(c)]) {
                boundaries_[color_index(c)].push_back(q);
                on_boundary_[color_index(c)][q] = 1;
            }
        }
        const auto &fs = qubit_faces_[q];
        if (fs.size() == 3) {
            qubit_kinds_[q] = QubitKind{QubitClass::Bulk, Color::R};
        } else if (fs.size() == 2) {
            Color missing = third_color(faces_[fs[0]].color, faces_[fs[1]].color);
            qubit_kinds_[q] = QubitKind{QubitClass::Boundary, missing};
        } else if (fs.size() == 1) {
            Color c = faces_[fs[0]].color;
            qubit_kinds_[q] = QubitKind{QubitClass::Corner, c};
            corners_[color_index(c)] = q;
        } else {
            throw std::logic_error("qubit " + std::to_string(q) + " touches " + std::to_string(fs.size()) + " faces");
        }
    }

    if (num_qubits() != expected_qubit_count(distance)) {
        throw std::logic_error("lattice construction produced the wrong number of qubits");
    }
    for (Color c : kColors) {
        if (boundaries_[color_index(c)].size() != static_cast<size_t>(distance)) {
            throw std::logic_error("boundary of wrong length");
        }
    }
}

void CodeLattice::validate(const PauliXError &error) const {
    for (uint32_t q : error.support) {
        if (q >= num_qubits()) {
            throw std::out_of_range(
                "qubit " + std::to_string(q) + " outside lattice of " + std::to_string(num_qubits()) + " qubits");
        }
    }
}

void CodeLattice::syndrome_bits(std::span<const uint32_t> support, std::vector<uint8_t> &out) const {
    out.assign(num_faces(), 0);
    for (uint32_t q : support) {
        for (uint32_t f : qubit_faces_[q]) {
            out[f] ^= 1;
        }
    }
}

Syndrome CodeLattice::syndrome(const PauliXError &error) const {
    validate(error);
    std::vector<uint8_t> bits;
    syndrome_bits(error.support, bits);
    Syndrome s;
    for (uint32_t f = 0; f < bits.size(); f++) {
        if (bits[f]) {
            s.defects.push_back(Defect{f, faces_[f].color});
        }
    }
    return s;
}

std::vector<uint32_t> CodeLattice::boundary_operator(Color u) const {
    std::vector<uint8_t> parity(num_qubits(), 0);
    for (const Face &f : faces_) {
        if (f.color == u) {
            continue;
        }
        for (uint32_t q : f.support) {
            parity[q] ^= 1;
        }
    }
    std::vector<uint32_t> out;
    for (uint32_t q = 0; q < parity.size(); q++) {
        if (parity[q]) {
            out.push_back(q);
        }
    }
    return out;
}

bool CodeLattice::logical_parity(std::span<const uint32_t> support, Color u) const {
    const auto &mask = on_boundary_[color_index(u)];
    bool parity = false;
    for (uint32_t q : support) {
        parity ^= mask[q] != 0;
    }
    return parity;
}

bool CodeLattice::logical_parity(const PauliXError &error, Color u) const {
    validate(error);
    return logical_parity(std::span<const uint32_t>(error.support), u);
}

std::vector<uint32_t> symmetric_difference(std::span<const uint32_t> a, std::span<const uint32_t> b) {
    std::vector<uint32_t> out;
    std::set_symmetric_difference(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
    return out;
}

}  // namespace mobius
