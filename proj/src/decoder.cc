#include "mobius/decoder.h"

#include <algorithm>
#include <stdexcept>
#include <thread>

namespace mobius {

const char *matching_variant_name(MatchingVariant v) {
    return v == MatchingVariant::Original ? "original" : "alternative";
}

const char *decoder_kind_name(DecoderKind k) { return k == DecoderKind::Moebius ? "moebius" : "comparative"; }

DecoderKind parse_decoder_kind(const std::string &text) {
    if (text == "moebius" || text == "mobius") {
        return DecoderKind::Moebius;
    }
    if (text == "comparative") {
        return DecoderKind::Comparative;
    }
    throw std::invalid_argument("unknown decoder variant '" + text + "'");
}

void ComparativeConfig::validate(int distance) const {
    if (upsilon < 1) {
        throw std::invalid_argument("upsilon must be >= 1");
    }
    if (tear_crease != Color::G) {
        throw std::invalid_argument("only the green (readout) crease can be torn");
    }
    for (uint32_t site : placements) {
        if (site >= static_cast<uint32_t>(distance)) {
            throw std::invalid_argument("tear site " + std::to_string(site) + " out of range");
        }
    }
    if (placement_jobs < 1) {
        throw std::invalid_argument("placement_jobs must be >= 1");
    }
}

DecodeResult decode_moebius_nodes(const UnifiedLattice &unified, std::span<const uint32_t> nodes) {
    DecodeResult result;
    if (nodes.empty()) {
        return result;
    }
    MatchGraph graph(nodes.size());
    for (size_t i = 0; i < nodes.size(); i++) {
        for (size_t j = i + 1; j < nodes.size(); j++) {
            graph.set(i, j, unified.dist(nodes[i], nodes[j]).length);
        }
    }
    Matching local = mwpm(graph);
    bool parity = false;
    for (auto &[a, b] : local.pairs) {
        uint32_t na = nodes[a];
        uint32_t nb = nodes[b];
        parity ^= unified.dist(na, nb).green_parity;
        a = std::min(na, nb);
        b = std::max(na, nb);
    }
    std::sort(local.pairs.begin(), local.pairs.end());
    result.ell = static_cast<int32_t>(local.cost);
    result.ell_or = result.ell;
    result.predicted_parity = parity;
    result.matching = std::move(local);
    return result;
}

DecodeResult decode_moebius(const UnifiedLattice &unified, const Syndrome &syndrome) {
    std::vector<uint32_t> nodes = unified.defect_nodes(syndrome);
    return decode_moebius_nodes(unified, nodes);
}

namespace {

using PairList = std::vector<std::pair<uint32_t, uint32_t>>;

// Rebuilds the edge set on the full strip from one dummy placement. Every
// edge keeps the crossing class it had when found: torn-graph pairs are even,
// the dummy-routed pair and the set-aside pairs are odd.
AlternativeMatching finish_placement(
    const UnifiedLattice &unified,
    std::span<const uint32_t> remaining,
    const PairList &removed,
    const Matching &torn_matching,
    uint32_t site) {
    struct FinalEdge {
        uint32_t a;
        uint32_t b;
        int32_t length;
        bool odd;
    };
    const size_t m = remaining.size();
    std::vector<FinalEdge> edges;
    uint32_t u_l = 0;
    uint32_t u_r = 0;
    for (auto [i, j] : torn_matching.pairs) {
        if (j == m) {
            u_l = remaining[i];
        } else if (j == m + 1) {
            u_r = remaining[i];
        } else {
            uint32_t a = remaining[i];
            uint32_t b = remaining[j];
            edges.push_back({a, b, unified.class_distance(a, b, false), false});
        }
    }
    int32_t crossing = unified.class_distance(u_l, u_r, true);

    // Try to shorten the new crossing edge by splicing it with one of the
    // set-aside pairs: (u_l, u_r) + (l, r) -> (u_l, l) + (u_r, r).
    int32_t lambda = UnifiedLattice::kUnreachable;
    size_t lambda_j = 0;
    bool lambda_flip = false;
    for (size_t j = 0; j < removed.size(); j++) {
        auto [l, r] = removed[j];
        int32_t straight = unified.class_distance(u_l, l, false) + unified.class_distance(u_r, r, false);
        int32_t flipped = unified.class_distance(u_l, r, false) + unified.class_distance(u_r, l, false);
        if (straight < lambda) {
            lambda = straight;
            lambda_j = j;
            lambda_flip = false;
        }
        if (flipped < lambda) {
            lambda = flipped;
            lambda_j = j;
            lambda_flip = true;
        }
    }
    bool rewired = false;
    if (!removed.empty()) {
        auto [l, r] = removed[lambda_j];
        if (lambda < crossing + unified.class_distance(l, r, true)) {
            rewired = true;
            if (lambda_flip) {
                std::swap(l, r);
            }
            edges.push_back({u_l, l, unified.class_distance(u_l, l, false), false});
            edges.push_back({u_r, r, unified.class_distance(u_r, r, false), false});
        }
    }
    if (!rewired) {
        edges.push_back({u_l, u_r, crossing, true});
    }
    for (size_t j = 0; j < removed.size(); j++) {
        if (rewired && j == lambda_j) {
            continue;
        }
        auto [l, r] = removed[j];
        edges.push_back({l, r, unified.class_distance(l, r, true), true});
    }

    AlternativeMatching alt;
    alt.site = site;
    alt.rewired = rewired;
    bool parity = false;
    int64_t total = 0;
    for (FinalEdge &e : edges) {
        total += e.length;
        parity ^= e.odd;
        if (e.a > e.b) {
            std::swap(e.a, e.b);
        }
    }
    std::sort(edges.begin(), edges.end(), [](const FinalEdge &x, const FinalEdge &y) {
        return std::pair{x.a, x.b} < std::pair{y.a, y.b};
    });
    for (const FinalEdge &e : edges) {
        alt.matching.pairs.emplace_back(e.a, e.b);
        alt.edge_odd.push_back(e.odd ? 1 : 0);
    }
    alt.matching.cost = total;
    alt.ell_alt = static_cast<int32_t>(total);
    alt.parity_alt = parity;
    return alt;
}

struct Candidate {
    int64_t cost = -1;
    AlternativeMatching alt;
};

// Scores each site either by its torn matching cost (then reduces only the
// winner) or by the length of its finished alternative.
Candidate best_over_sites(
    const UnifiedLattice &unified,
    const MatchGraph &base,
    std::span<const uint32_t> remaining,
    const PairList &removed,
    std::span<const uint32_t> sites,
    PlacementRanking ranking) {
    const size_t m = remaining.size();
    Candidate best;
    Matching best_torn;
    MatchGraph graph = base;
    for (uint32_t s : sites) {
        const TearSite &site = unified.tear_sites()[s];
        for (size_t i = 0; i < m; i++) {
            graph.set(i, m, unified.torn_distance(site.a, remaining[i]));
            graph.set(i, m + 1, unified.torn_distance(site.b, remaining[i]));
        }
        Matching matched = mwpm(graph);
        if (ranking == PlacementRanking::TornCost) {
            int64_t cost = matched.cost + site.weight;
            if (best.cost < 0 || cost < best.cost) {
                best.cost = cost;
                best.alt.site = s;
                best_torn = std::move(matched);
            }
        } else {
            AlternativeMatching alt = finish_placement(unified, remaining, removed, matched, s);
            if (best.cost < 0 || alt.ell_alt < best.cost) {
                best.cost = alt.ell_alt;
                best.alt = std::move(alt);
            }
        }
    }
    if (ranking == PlacementRanking::TornCost && best.cost >= 0) {
        best.alt = finish_placement(unified, remaining, removed, best_torn, best.alt.site);
    }
    return best;
}

}  // namespace

std::optional<AlternativeMatching> alternative_matching_nodes(
    const UnifiedLattice &unified,
    std::span<const uint32_t> nodes,
    const DecodeResult &original,
    const ComparativeConfig &config) {
    (void)nodes;
    // Split the original matching into tear-crossing pairs (set aside) and
    // the defects that stay on the torn strip.
    PairList removed;
    std::vector<uint32_t> remaining;
    for (auto [a, b] : original.matching.pairs) {
        if (unified.dist(a, b).green_parity) {
            removed.emplace_back(a, b);
        } else {
            remaining.push_back(a);
            remaining.push_back(b);
        }
    }
    if (remaining.empty()) {
        return std::nullopt;
    }
    std::sort(remaining.begin(), remaining.end());

    const size_t m = remaining.size();
    MatchGraph base(m + 2);
    for (size_t i = 0; i < m; i++) {
        for (size_t j = i + 1; j < m; j++) {
            base.set(i, j, unified.torn_distance(remaining[i], remaining[j]));
        }
    }

    std::vector<uint32_t> sites = config.placements;
    if (sites.empty()) {
        for (uint32_t s = 0; s < unified.tear_sites().size(); s++) {
            sites.push_back(s);
        }
    }
    std::sort(sites.begin(), sites.end());
    sites.erase(std::unique(sites.begin(), sites.end()), sites.end());

    // Ties go to the lowest site index: each worker scans an ascending slice
    // with strict improvement, and slices are merged in order.
    const size_t jobs = std::min<size_t>(static_cast<size_t>(config.placement_jobs), sites.size());
    std::vector<Candidate> partial(std::max<size_t>(jobs, 1));
    auto run_slice = [&](size_t t) {
        size_t begin = sites.size() * t / partial.size();
        size_t end = sites.size() * (t + 1) / partial.size();
        partial[t] = best_over_sites(unified, base, remaining, removed,
                                     std::span<const uint32_t>(sites).subspan(begin, end - begin), config.ranking);
    };
    if (partial.size() == 1) {
        run_slice(0);
    } else {
        std::vector<std::thread> threads;
        for (size_t t = 0; t < partial.size(); t++) {
            threads.emplace_back(run_slice, t);
        }
        for (auto &th : threads) {
            th.join();
        }
    }
    Candidate best;
    for (Candidate &c : partial) {
        if (c.cost >= 0 && (best.cost < 0 || c.cost < best.cost)) {
            best = std::move(c);
        }
    }
    return std::move(best.alt);
}

std::optional<AlternativeMatching> alternative_matching(
    const UnifiedLattice &unified,
    const Syndrome &syndrome,
    const DecodeResult &original,
    const ComparativeConfig &config) {
    std::vector<uint32_t> nodes = unified.defect_nodes(syndrome);
    return alternative_matching_nodes(unified, nodes, original, config);
}

bool prefer_alternative(int32_t ell_or, int32_t ell_alt, int distance, int upsilon) {
    int residue = ((2 * ell_or - distance) % 4 + 4) % 4;
    return ell_alt - ell_or == upsilon && residue == 1;
}

namespace {

DecodeResult compare_with_alternative(
    const UnifiedLattice &unified, std::span<const uint32_t> nodes, DecodeResult original,
    const ComparativeConfig &config) {
    if (!config.enabled) {
        return original;
    }
    auto alt = alternative_matching_nodes(unified, nodes, original, config);
    if (!alt) {
        return original;
    }
    original.ell_alt = alt->ell_alt;
    if (!prefer_alternative(original.ell_or, alt->ell_alt, unified.lattice().distance(), config.upsilon)) {
        return original;
    }
    DecodeResult switched;
    switched.predicted_parity = alt->parity_alt;
    switched.ell = alt->ell_alt;
    switched.matching = std::move(alt->matching);
    switched.variant = MatchingVariant::Alternative;
    switched.ell_or = original.ell_or;
    switched.ell_alt = alt->ell_alt;
    return switched;
}

}  // namespace

DecodeResult decode_comparative_nodes(
    const UnifiedLattice &unified, std::span<const uint32_t> nodes, const ComparativeConfig &config) {
    return compare_with_alternative(unified, nodes, decode_moebius_nodes(unified, nodes), config);
}

DecodeResult decode_comparative(
    const UnifiedLattice &unified, const Syndrome &syndrome, const ComparativeConfig &config, int distance) {
    if (distance != unified.lattice().distance()) {
        throw std::invalid_argument("distance does not match the lattice");
    }
    config.validate(distance);
    std::vector<uint32_t> nodes = unified.defect_nodes(syndrome);
    return decode_comparative_nodes(unified, nodes, config);
}

DecodeResult decode(
    const UnifiedLattice &unified, const Syndrome &syndrome, DecoderKind kind, const ComparativeConfig &config) {
    if (kind == DecoderKind::Moebius) {
        return decode_moebius(unified, syndrome);
    }
    return decode_comparative(unified, syndrome, config, unified.lattice().distance());
}

bool decode_success(
    const UnifiedLattice &unified, const PauliXError &error, DecoderKind kind, const ComparativeConfig &config) {
    const CodeLattice &lat = unified.lattice();
    DecodeResult r = decode(unified, lat.syndrome(error), kind, config);
    return r.predicted_parity == lat.logical_parity(error, Color::G);
}

DecodeWorkspace::DecodeWorkspace(const UnifiedLattice &unified, DecoderKind kind, ComparativeConfig config)
    : unified_(unified), kind_(kind), config_(std::move(config)) {
    config_.validate(unified.lattice().distance());
}

bool DecodeWorkspace::succeeds(std::span<const uint32_t> support) {
    const CodeLattice &lat = unified_.lattice();
    lat.syndrome_bits(support, bits_);
    unified_.defect_nodes_from_bits(bits_, nodes_);
    last_ = decode_moebius_nodes(unified_, nodes_);
    if (kind_ == DecoderKind::Comparative && config_.enabled &&
        prefer_alternative(last_.ell_or, last_.ell_or + config_.upsilon, lat.distance(), config_.upsilon)) {
        last_ = compare_with_alternative(unified_, nodes_, std::move(last_), config_);
    }
    return last_.predicted_parity == lat.logical_parity(support, Color::G);
}

}  // namespace mobius
