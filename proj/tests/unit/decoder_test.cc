#include <gtest/gtest.h>

#include <algorithm>
#include <map>
#include <queue>
#include <random>

#include "mobius/decoder.h"
#include "mobius/io.h"
#include "mobius/noise_sim.h"
#include "properties.h"

namespace mobius {
namespace {

const UnifiedLattice &unified(int d) {
    static std::map<int, std::unique_ptr<UnifiedLattice>> cache;
    auto &slot = cache[d];
    if (!slot) {
        slot = std::make_unique<UnifiedLattice>(CodeLattice(d));
    }
    return *slot;
}

PauliXError fixture(const std::string &name) {
    ErrorInput in = parse_error_input(read_text(std::string(MOBIUS_FIXTURES) + "/" + name));
    return PauliXError::from_qubits(in.qubits);
}

TEST(Decoder, WeightOneErrorsDecode) {
    for (int d : {3, 5, 7, 9, 11, 13}) {
        auto r = testing::check_weight_one(unified(d));
        EXPECT_TRUE(r.ok) << r.detail;
    }
}

TEST(Decoder, WeightOneAlternativeIsTooLongToSwitch) {
    for (int d : {5, 7, 9}) {
        const UnifiedLattice &u = unified(d);
        size_t with_alt = 0;
        for (uint32_t q = 0; q < u.lattice().num_qubits(); q++) {
            Syndrome s = u.lattice().syndrome(PauliXError::from_qubits({q}));
            DecodeResult orig = decode_moebius(u, s);
            auto alt = alternative_matching(u, s, orig);
            // No alternative when the single matched path crosses the tear.
            if (alt) {
                EXPECT_GT(alt->ell_alt - orig.ell_or, 1) << "d=" << d << " qubit " << q;
                with_alt++;
            }
            DecodeResult cmp = decode_comparative(u, s, {}, d);
            EXPECT_EQ(cmp.variant, MatchingVariant::Original);
        }
        EXPECT_GE(with_alt + static_cast<size_t>(d), u.lattice().num_qubits());
    }
}

TEST(Decoder, EmptySyndrome) {
    const UnifiedLattice &u = unified(5);
    DecodeResult r = decode_moebius(u, Syndrome{});
    EXPECT_EQ(r.ell, 0);
    EXPECT_FALSE(r.predicted_parity);
    EXPECT_TRUE(r.matching.pairs.empty());
    EXPECT_FALSE(alternative_matching(u, Syndrome{}, r).has_value());
    DecodeResult c = decode_comparative(u, Syndrome{}, {}, 5);
    EXPECT_EQ(c.variant, MatchingVariant::Original);
    EXPECT_FALSE(c.ell_alt.has_value());
}

TEST(Decoder, DistanceNineWeightFourFixture) {
    const UnifiedLattice &u = unified(9);
    PauliXError e = fixture("d9_weight4.json");
    Syndrome s = u.lattice().syndrome(e);
    DecodeResult orig = decode_moebius(u, s);
    EXPECT_EQ(orig.ell_or, 11);
    EXPECT_FALSE(decode_success(u, e, DecoderKind::Moebius));
    DecodeResult cmp = decode_comparative(u, s, {}, 9);
    ASSERT_TRUE(cmp.ell_alt.has_value());
    EXPECT_EQ(*cmp.ell_alt, 12);
    EXPECT_EQ(cmp.variant, MatchingVariant::Alternative);
    EXPECT_TRUE(decode_success(u, e, DecoderKind::Comparative));
}

TEST(Decoder, DistanceElevenWeightFiveFixture) {
    const UnifiedLattice &u = unified(11);
    PauliXError e = fixture("d11_weight5.json");
    Syndrome s = u.lattice().syndrome(e);
    DecodeResult cmp = decode_comparative(u, s, {}, 11);
    EXPECT_EQ(cmp.ell_or, 12);
    ASSERT_TRUE(cmp.ell_alt.has_value());
    EXPECT_EQ(*cmp.ell_alt, 13);
    EXPECT_EQ(cmp.variant, MatchingVariant::Alternative);
    EXPECT_FALSE(decode_success(u, e, DecoderKind::Moebius));
    EXPECT_TRUE(decode_success(u, e, DecoderKind::Comparative));
}

TEST(Decoder, FixturesAgreeUnderBothRankings) {
    ComparativeConfig literal;
    literal.ranking = PlacementRanking::TornCost;
    for (auto [name, d, ell_or, ell_alt] :
         std::vector<std::tuple<std::string, int, int, int>>{{"d9_weight4.json", 9, 11, 12}, {"d11_weight5.json", 11, 12, 13}}) {
        const UnifiedLattice &u = unified(d);
        DecodeResult r = decode_comparative(u, u.lattice().syndrome(fixture(name)), literal, d);
        EXPECT_EQ(r.ell_or, ell_or) << name;
        EXPECT_EQ(r.ell_alt.value_or(-1), ell_alt) << name;
    }
}

TEST(Decoder, SwitchRule) {
    EXPECT_TRUE(prefer_alternative(11, 12, 9, 1));
    EXPECT_FALSE(prefer_alternative(11, 13, 9, 1));
    EXPECT_FALSE(prefer_alternative(12, 13, 9, 1));
    EXPECT_TRUE(prefer_alternative(12, 13, 11, 1));
    EXPECT_TRUE(prefer_alternative(12, 14, 11, 2));
    EXPECT_TRUE(prefer_alternative(3, 4, 5, 1));
    EXPECT_FALSE(prefer_alternative(4, 5, 5, 1));
    // (2 l - d) mod 4 taken as a non-negative residue.
    EXPECT_TRUE(prefer_alternative(1, 2, 5, 1));
    EXPECT_FALSE(prefer_alternative(0, 1, 5, 1));
}

TEST(Decoder, ParityFlipInvariant) {
    for (int d : {5, 7, 9}) {
        auto r = testing::check_parity_flip(unified(d), 300, 100 + d);
        EXPECT_TRUE(r.ok) << r.detail;
    }
}

// Minimum error weight per (syndrome, logical class) over all 2^19 errors of
// the d=5 code, used as an exact oracle for the matching lengths.
TEST(Decoder, DistanceFiveAgainstMinimumWeightTable) {
    const UnifiedLattice &u = unified(5);
    const CodeLattice &lat = u.lattice();
    const uint32_t n = static_cast<uint32_t>(lat.num_qubits());
    const uint32_t nf = static_cast<uint32_t>(lat.num_faces());
    std::vector<uint32_t> mask(n, 0);
    std::vector<uint8_t> green(n, 0);
    for (uint32_t q = 0; q < n; q++) {
        for (uint32_t f : lat.faces_of(q)) {
            mask[q] |= 1u << f;
        }
    }
    for (uint32_t q : lat.boundary(Color::G)) {
        green[q] = 1;
    }
    std::vector<std::array<int, 2>> best(1u << nf, {99, 99});
    for (uint32_t e = 0; e < (1u << n); e++) {
        uint32_t syn = 0;
        int cls = 0;
        for (uint32_t q = 0; q < n; q++) {
            if (e >> q & 1) {
                syn ^= mask[q];
                cls ^= green[q];
            }
        }
        int w = __builtin_popcount(e);
        best[syn][cls] = std::min(best[syn][cls], w);
    }
    for (uint32_t syn = 0; syn < (1u << nf); syn++) {
        ASSERT_LT(best[syn][0], 99);
        ASSERT_LT(best[syn][1], 99);
        Syndrome s;
        for (uint32_t f = 0; f < nf; f++) {
            if (syn >> f & 1) {
                s.defects.push_back({f, lat.face(f).color});
            }
        }
        DecodeResult orig = decode_moebius(u, s);
        int w_min = std::min(best[syn][0], best[syn][1]);
        // An error's unit edges decompose into paths pairing its defect images
        // plus cycles, all of total length 3|e|, in the error's own class.
        EXPECT_LE(orig.ell, 3 * best[syn][orig.predicted_parity]) << "syndrome " << syn;
        EXPECT_LE(orig.ell, 3 * w_min);
        // The two classes differ by a logical, so their weights sum to >= d.
        EXPECT_GE(best[syn][0] + best[syn][1], 5);
        if (w_min <= 2) {
            int want = best[syn][0] <= 2 ? 0 : 1;
            EXPECT_EQ(orig.predicted_parity, want == 1) << "syndrome " << syn;
            EXPECT_EQ(decode_comparative(u, s, {}, 5).predicted_parity, want == 1) << "syndrome " << syn;
        }
        if (auto alt = alternative_matching(u, s, orig)) {
            EXPECT_LE(orig.ell, alt->ell_alt);
        }
    }
}

TEST(Decoder, PlacementThreadsDoNotChangeResults) {
    const UnifiedLattice &u = unified(9);
    ComparativeConfig serial;
    ComparativeConfig threaded;
    threaded.placement_jobs = 4;
    std::mt19937_64 rng(21);
    for (int i = 0; i < 200; i++) {
        PauliXError e = sample_error(static_cast<uint32_t>(u.lattice().num_qubits()), 0.06, rng);
        Syndrome s = u.lattice().syndrome(e);
        DecodeResult orig = decode_moebius(u, s);
        auto a = alternative_matching(u, s, orig, serial);
        auto b = alternative_matching(u, s, orig, threaded);
        ASSERT_EQ(a.has_value(), b.has_value());
        if (a) {
            EXPECT_EQ(a->ell_alt, b->ell_alt);
            EXPECT_EQ(a->site, b->site);
            EXPECT_EQ(a->matching.pairs, b->matching.pairs);
            EXPECT_EQ(a->edge_odd, b->edge_odd);
        }
    }
}

TEST(Decoder, RestrictedPlacementsNeverBeatAllSites) {
    const UnifiedLattice &u = unified(7);
    std::mt19937_64 rng(8);
    ComparativeConfig one;
    one.placements = {2};
    for (int i = 0; i < 200; i++) {
        PauliXError e = sample_error(static_cast<uint32_t>(u.lattice().num_qubits()), 0.08, rng);
        Syndrome s = u.lattice().syndrome(e);
        DecodeResult orig = decode_moebius(u, s);
        auto all = alternative_matching(u, s, orig);
        auto single = alternative_matching(u, s, orig, one);
        ASSERT_EQ(all.has_value(), single.has_value());
        if (all) {
            EXPECT_LE(all->ell_alt, single->ell_alt);
            EXPECT_EQ(single->site, 2u);
        }
    }
}

TEST(Decoder, WorkspaceMatchesDirectDecoding) {
    for (int d : {5, 9}) {
        const UnifiedLattice &u = unified(d);
        for (DecoderKind kind : {DecoderKind::Moebius, DecoderKind::Comparative}) {
            DecodeWorkspace ws(u, kind, {});
            std::mt19937_64 rng(d);
            for (int i = 0; i < 300; i++) {
                PauliXError e = sample_error(static_cast<uint32_t>(u.lattice().num_qubits()), 0.1, rng);
                EXPECT_EQ(ws.succeeds(e.support), decode_success(u, e, kind));
                EXPECT_EQ(ws.last().ell_or, decode_moebius(u, u.lattice().syndrome(e)).ell_or);
            }
        }
    }
}

TEST(Decoder, ConfigValidation) {
    ComparativeConfig c;
    EXPECT_NO_THROW(c.validate(5));
    c.upsilon = 0;
    EXPECT_THROW(c.validate(5), std::invalid_argument);
    c = {};
    c.tear_crease = Color::R;
    EXPECT_THROW(c.validate(5), std::invalid_argument);
    c = {};
    c.placements = {5};
    EXPECT_THROW(c.validate(5), std::invalid_argument);
    c = {};
    c.placement_jobs = 0;
    EXPECT_THROW(c.validate(5), std::invalid_argument);
    EXPECT_THROW(decode_comparative(unified(5), Syndrome{}, {}, 7), std::invalid_argument);
}

TEST(Decoder, KindNames) {
    EXPECT_EQ(parse_decoder_kind("moebius"), DecoderKind::Moebius);
    EXPECT_EQ(parse_decoder_kind("mobius"), DecoderKind::Moebius);
    EXPECT_EQ(parse_decoder_kind("comparative"), DecoderKind::Comparative);
    EXPECT_THROW(parse_decoder_kind("mwpm"), std::invalid_argument);
    EXPECT_STREQ(decoder_kind_name(DecoderKind::Comparative), "comparative");
    EXPECT_STREQ(matching_variant_name(MatchingVariant::Alternative), "alternative");
}

// Branching logicals: a junction qubit plus one string per color, each string
// carrying the junction's c-colored defect to the c boundary in two-qubit
// steps. Each string is found by breadth-first search over c faces.
struct Strings {
    // For each color, the qubit string from each c face to the c boundary.
    std::array<std::map<uint32_t, std::vector<uint32_t>>, 3> to_boundary;
};

Strings boundary_strings(const CodeLattice &lat) {
    const uint32_t n = static_cast<uint32_t>(lat.num_qubits());
    // Qubits on a common edge share two faces.
    std::vector<std::vector<uint32_t>> neighbours(n);
    for (uint32_t x = 0; x < n; x++) {
        std::map<uint32_t, int> shared;
        for (uint32_t f : lat.faces_of(x)) {
            for (uint32_t y : lat.face(f).support) {
                if (y != x) {
                    shared[y]++;
                }
            }
        }
        for (auto [y, count] : shared) {
            if (count == 2) {
                neighbours[x].push_back(y);
            }
        }
    }
    auto face_of_color = [&](uint32_t q, Color c) -> int64_t {
        for (uint32_t f : lat.faces_of(q)) {
            if (lat.face(f).color == c) {
                return f;
            }
        }
        return -1;
    };
    Strings out;
    for (Color c : kColors) {
        auto &paths = out.to_boundary[color_index(c)];
        std::queue<uint32_t> frontier;
        // Faces one step from the boundary: x in f, y with no c face.
        for (uint32_t x = 0; x < n; x++) {
            int64_t f = face_of_color(x, c);
            if (f < 0 || paths.count(f)) {
                continue;
            }
            for (uint32_t y : neighbours[x]) {
                if (face_of_color(y, c) < 0) {
                    paths[f] = {x, y};
                    frontier.push(static_cast<uint32_t>(f));
                    break;
                }
            }
        }
        while (!frontier.empty()) {
            uint32_t f = frontier.front();
            frontier.pop();
            for (uint32_t y : lat.face(f).support) {
                for (uint32_t x : neighbours[y]) {
                    int64_t g = face_of_color(x, c);
                    if (g < 0 || paths.count(g)) {
                        continue;
                    }
                    std::vector<uint32_t> p = {x, y};
                    p.insert(p.end(), paths[f].begin(), paths[f].end());
                    paths[g] = std::move(p);
                    frontier.push(static_cast<uint32_t>(g));
                }
            }
        }
    }
    return out;
}

std::vector<uint32_t> xor_all(std::vector<uint32_t> acc, const std::vector<uint32_t> &more) {
    std::vector<uint32_t> s = more;
    std::sort(s.begin(), s.end());
    // Strings may revisit a qubit, so fold pairwise.
    std::vector<uint32_t> folded;
    for (uint32_t q : s) {
        if (!folded.empty() && folded.back() == q) {
            folded.pop_back();
        } else {
            folded.push_back(q);
        }
    }
    std::sort(acc.begin(), acc.end());
    return symmetric_difference(acc, folded);
}

TEST(Decoder, BranchingStringsFromBoundaries) {
    for (int d : {9, 11}) {
        const UnifiedLattice &u = unified(d);
        const CodeLattice &lat = u.lattice();
        Strings strings = boundary_strings(lat);
        int lighter = 0;
        for (uint32_t q = 0; q < lat.num_qubits(); q++) {
            if (lat.kind(q).cls != QubitClass::Bulk) {
                continue;
            }
            std::array<std::vector<uint32_t>, 3> legs;
            for (uint32_t f : lat.faces_of(q)) {
                Color c = lat.face(f).color;
                legs[color_index(c)] = strings.to_boundary[color_index(c)].at(f);
            }
            std::vector<uint32_t> logical = xor_all({q}, legs[0]);
            logical = xor_all(logical, legs[1]);
            logical = xor_all(logical, legs[2]);
            PauliXError full = PauliXError::from_qubits(logical);
            ASSERT_TRUE(lat.syndrome(full).empty()) << "junction " << q;
            for (Color c : kColors) {
                EXPECT_TRUE(lat.logical_parity(full, c)) << "junction " << q;
            }
            EXPECT_GE(full.weight(), static_cast<size_t>(d));

            // Split at the junction: the red leg with the junction against the
            // green and blue legs. Both halves share a syndrome.
            PauliXError head = PauliXError::from_qubits(xor_all({q}, legs[0]));
            PauliXError tail = PauliXError::from_qubits(xor_all(xor_all({}, legs[1]), legs[2]));
            ASSERT_EQ(lat.syndrome(head), lat.syndrome(tail));
            ASSERT_NE(lat.logical_parity(head, Color::G), lat.logical_parity(tail, Color::G));
            if (head.weight() < tail.weight() && head.weight() <= static_cast<size_t>((d - 1) / 2)) {
                EXPECT_TRUE(decode_success(u, head, DecoderKind::Comparative)) << "junction " << q;
                lighter++;
            }
        }
        EXPECT_GT(lighter, 0);
    }
}

TEST(Decoder, SmallExhaustiveSweeps) {
    for (int d : {3, 5}) {
        for (DecoderKind kind : {DecoderKind::Moebius, DecoderKind::Comparative}) {
            ExhaustResult r = run_exhaustive(d, (d - 1) / 2, kind);
            EXPECT_TRUE(r.failures.empty()) << "d=" << d;
        }
    }
    ExhaustResult r7 = run_exhaustive(7, 3, DecoderKind::Comparative);
    EXPECT_EQ(r7.configs_tested, 37u + 666u + 7770u);
    EXPECT_TRUE(r7.failures.empty());
}

}  // namespace
}  // namespace mobius
