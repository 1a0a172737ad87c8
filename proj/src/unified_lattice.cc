#include "mobius/unified_lattice.h"

#include <algorithm>
#include <map>
#include <queue>
#include <stdexcept>
#include <tuple>

namespace mobius {

const char *panel_name(Panel p) {
    switch (p) {
        case Panel::RG:
            return "rg";
        case Panel::GB:
            return "gb";
        case Panel::RB:
            return "rb";
    }
    return "?";
}

bool panel_contains(Panel p, Color c) {
    switch (p) {
        case Panel::RG:
            return c != Color::B;
        case Panel::GB:
            return c != Color::R;
        case Panel::RB:
            return c != Color::G;
    }
    return false;
}

Panel panel_of(Color a, Color b) {
    if (a == b) {
        throw std::invalid_argument("a panel needs two distinct colors");
    }
    Color missing = third_color(a, b);
    switch (missing) {
        case Color::B:
            return Panel::RG;
        case Color::R:
            return Panel::GB;
        case Color::G:
            return Panel::RB;
    }
    return Panel::RG;
}

namespace {

// Panel of the slot-th image of a face of color c (panels taken in enum order).
Panel image_panel(Color c, int slot) {
    int seen = 0;
    for (Panel p : kPanels) {
        if (panel_contains(p, c)) {
            if (seen == slot) {
                return p;
            }
            seen++;
        }
    }
    return Panel::RG;
}

struct Adjacent {
    uint32_t to;
    int32_t weight;
    bool crosses;
};

}  // namespace

UnifiedLattice::UnifiedLattice(CodeLattice lattice) : lattice_(std::move(lattice)) {
    const uint32_t nf = static_cast<uint32_t>(lattice_.num_faces());
    nodes_.reserve(2 * nf);
    for (uint32_t f = 0; f < nf; f++) {
        Color c = lattice_.face(f).color;
        nodes_.push_back(UNode{f, image_panel(c, 0)});
        nodes_.push_back(UNode{f, image_panel(c, 1)});
    }

    qubit_edges_.assign(lattice_.num_qubits(), {});
    for (uint32_t q = 0; q < lattice_.num_qubits(); q++) {
        auto fs = lattice_.faces_of(q);
        QubitKind kind = lattice_.kind(q);
        switch (kind.cls) {
            case QubitClass::Bulk: {
                // One weight-1 edge on each panel, between the two faces whose
                // colors the panel contains.
                for (size_t x = 0; x < fs.size(); x++) {
                    for (size_t y = x + 1; y < fs.size(); y++) {
                        Color cx = lattice_.face(fs[x]).color;
                        Color cy = lattice_.face(fs[y]).color;
                        Panel p = panel_of(cx, cy);
                        add_edge(node_index(fs[x], p), node_index(fs[y], p), 1, false, EdgeVia::Bulk, Color::R, q);
                    }
                }
                break;
            }
            case QubitClass::Boundary: {
                Color u = kind.color;
                uint32_t fa = fs[0];
                uint32_t fb = fs[1];
                Color ca = lattice_.face(fa).color;
                Color cb = lattice_.face(fb).color;
                Panel inner = panel_of(ca, cb);
                add_edge(node_index(fa, inner), node_index(fb, inner), 1, false, EdgeVia::Bulk, Color::R, q);
                add_edge(
                    node_index(fa, panel_of(u, ca)),
                    node_index(fb, panel_of(u, cb)),
                    2,
                    u == Color::G,
                    EdgeVia::Crease,
                    u,
                    q);
                break;
            }
            case QubitClass::Corner: {
                Color u = kind.color;
                uint32_t fa = fs[0];
                add_edge(2 * fa, 2 * fa + 1, 3, u != Color::G, EdgeVia::Corner, u, q);
                break;
            }
        }
    }

    for (uint32_t q : lattice_.boundary(Color::G)) {
        for (uint32_t e : qubit_edges_[q]) {
            const UnitEdge &edge = edges_[e];
            if (edge.crosses_green) {
                tear_sites_.push_back(TearSite{q, e, edge.a, edge.b, edge.weight});
            }
        }
    }
    if (tear_sites_.size() != static_cast<size_t>(lattice_.distance())) {
        throw std::logic_error("green crease should have exactly d crossing edges");
    }

    compute_distances();
}

uint32_t UnifiedLattice::node_index(uint32_t face, Panel panel) const {
    Color c = lattice_.face(face).color;
    if (!panel_contains(panel, c)) {
        throw std::invalid_argument("face color not on requested panel");
    }
    return image_panel(c, 0) == panel ? 2 * face : 2 * face + 1;
}

void UnifiedLattice::add_edge(
    uint32_t a, uint32_t b, int32_t weight, bool crosses, EdgeVia via, Color color, uint32_t qubit) {
    if (a > b) {
        std::swap(a, b);
    }
    for (uint32_t e = 0; e < edges_.size(); e++) {
        UnitEdge &existing = edges_[e];
        if (existing.a == a && existing.b == b && existing.via == via) {
            existing.source_qubits.push_back(qubit);
            qubit_edges_[qubit].push_back(e);
            return;
        }
    }
    UnitEdge edge;
    edge.a = a;
    edge.b = b;
    edge.weight = weight;
    edge.crosses_green = crosses;
    edge.via = via;
    edge.via_color = via == EdgeVia::Bulk ? Color::R : color;
    edge.source_qubits.push_back(qubit);
    qubit_edges_[qubit].push_back(static_cast<uint32_t>(edges_.size()));
    edges_.push_back(std::move(edge));
}

void UnifiedLattice::compute_distances() {
    const size_t n = num_nodes();
    std::vector<std::vector<Adjacent>> adj(n);
    for (const UnitEdge &e : edges_) {
        adj[e.a].push_back({e.b, e.weight, e.crosses_green});
        adj[e.b].push_back({e.a, e.weight, e.crosses_green});
    }

    canonical_.assign(n * n, PathInfo{kUnreachable, false});
    by_parity_.assign(n * n * 2, kUnreachable);
    torn_.assign(n * n, kUnreachable);

    // (length, crossings, node) ordered Dijkstra for the canonical path, plus
    // a Dijkstra on the parity double cover and one on the torn graph.
    using Lex = std::tuple<int32_t, int32_t, uint32_t>;
    for (uint32_t src = 0; src < n; src++) {
        std::vector<std::pair<int32_t, int32_t>> best(n, {kUnreachable, kUnreachable});
        std::priority_queue<Lex, std::vector<Lex>, std::greater<>> pq;
        best[src] = {0, 0};
        pq.emplace(0, 0, src);
        while (!pq.empty()) {
            auto [len, cross, v] = pq.top();
            pq.pop();
            if (std::pair{len, cross} != best[v]) {
                continue;
            }
            for (const Adjacent &nb : adj[v]) {
                std::pair<int32_t, int32_t> cand{len + nb.weight, cross + (nb.crosses ? 1 : 0)};
                if (cand < best[nb.to]) {
                    best[nb.to] = cand;
                    pq.emplace(cand.first, cand.second, nb.to);
                }
            }
        }
        for (uint32_t t = 0; t < n; t++) {
            canonical_[src * n + t] = PathInfo{best[t].first, (best[t].second & 1) != 0};
        }

        using State = std::pair<int32_t, uint32_t>;  // (length, node * 2 + parity)
        std::vector<int32_t> cover(2 * n, kUnreachable);
        std::priority_queue<State, std::vector<State>, std::greater<>> pq2;
        cover[2 * src] = 0;
        pq2.emplace(0, 2 * src);
        while (!pq2.empty()) {
            auto [len, state] = pq2.top();
            pq2.pop();
            if (len != cover[state]) {
                continue;
            }
            uint32_t v = state / 2;
            uint32_t parity = state % 2;
            for (const Adjacent &nb : adj[v]) {
                uint32_t next = nb.to * 2 + (parity ^ (nb.crosses ? 1u : 0u));
                if (len + nb.weight < cover[next]) {
                    cover[next] = len + nb.weight;
                    pq2.emplace(cover[next], next);
                }
            }
        }
        for (uint32_t t = 0; t < n; t++) {
            by_parity_[(src * n + t) * 2] = cover[2 * t];
            by_parity_[(src * n + t) * 2 + 1] = cover[2 * t + 1];
        }

        std::vector<int32_t> torn(n, kUnreachable);
        std::priority_queue<State, std::vector<State>, std::greater<>> pq3;
        torn[src] = 0;
        pq3.emplace(0, src);
        while (!pq3.empty()) {
            auto [len, v] = pq3.top();
            pq3.pop();
            if (len != torn[v]) {
                continue;
            }
            for (const Adjacent &nb : adj[v]) {
                if (nb.crosses) {
                    continue;
                }
                if (len + nb.weight < torn[nb.to]) {
                    torn[nb.to] = len + nb.weight;
                    pq3.emplace(torn[nb.to], nb.to);
                }
            }
        }
        for (uint32_t t = 0; t < n; t++) {
            torn_[src * n + t] = torn[t];
        }
    }
}

std::vector<uint32_t> UnifiedLattice::defect_nodes(const Syndrome &syndrome) const {
    std::vector<uint32_t> out;
    out.reserve(2 * syndrome.size());
    for (const Defect &d : syndrome.defects) {
        if (d.face >= lattice_.num_faces()) {
            throw std::out_of_range("defect on a face outside the lattice");
        }
        out.push_back(2 * d.face);
        out.push_back(2 * d.face + 1);
    }
    return out;
}

void UnifiedLattice::defect_nodes_from_bits(std::span<const uint8_t> bits, std::vector<uint32_t> &out) const {
    out.clear();
    for (uint32_t f = 0; f < bits.size(); f++) {
        if (bits[f]) {
            out.push_back(2 * f);
            out.push_back(2 * f + 1);
        }
    }
}

}  // namespace mobius
