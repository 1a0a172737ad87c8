#ifndef MOBIUS_DECODER_H
#define MOBIUS_DECODER_H

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "mobius/code_lattice.h"
#include "mobius/matching.h"
#include "mobius/unified_lattice.h"

namespace mobius {

/// Which matching a decode result was read from.
enum class MatchingVariant : uint8_t { Original, Alternative };

/// Decoder selectable from the harness and CLI.
enum class DecoderKind : uint8_t { Moebius, Comparative };

const char *matching_variant_name(MatchingVariant v);
const char *decoder_kind_name(DecoderKind k);
DecoderKind parse_decoder_kind(const std::string &text);

/// How the d dummy placements are compared: by the cost of the torn matching
/// (the reduction step then runs on the winner only), or by the length of
/// each placement's finished alternative after the reduction step.
enum class PlacementRanking : uint8_t { TornCost, FinalLength };

struct ComparativeConfig {
    /// Required excess of the alternative length over the original.
    int upsilon = 1;
    bool enabled = true;
    /// Crease along which the strip is torn. Only the readout (green) crease
    /// is supported, since tear crossings must coincide with class flips.
    Color tear_crease = Color::G;
    /// Tear-site indices at which to place the dummy pair; empty means all d.
    std::vector<uint32_t> placements;
    /// Threads used to evaluate tear sites of a single decode.
    int placement_jobs = 1;
    PlacementRanking ranking = PlacementRanking::FinalLength;

    void validate(int distance) const;
};

/// Matched pairs are unified-lattice node indices. `ell` and
/// `predicted_parity` belong to the variant that was chosen.
struct DecodeResult {
    bool predicted_parity = false;
    int32_t ell = 0;
    Matching matching;
    MatchingVariant variant = MatchingVariant::Original;
    int32_t ell_or = 0;
    std::optional<int32_t> ell_alt;
};

struct AlternativeMatching {
    int32_t ell_alt = 0;
    bool parity_alt = false;
    Matching matching;  // final edge set, cost == ell_alt
    /// Crossing class of each final edge (parallel to matching.pairs); the
    /// edge length is the shortest path of that class.
    std::vector<uint8_t> edge_odd;
    uint32_t site = 0;  // tear site that produced the minimum
    bool rewired = false;
};

/// Single matching on the unified lattice; parity is the number of matched
/// paths crossing the green crease, mod 2.
DecodeResult decode_moebius(const UnifiedLattice &unified, const Syndrome &syndrome);
DecodeResult decode_moebius_nodes(const UnifiedLattice &unified, std::span<const uint32_t> nodes);

/// A second, logically inequivalent matching found by tearing the strip along
/// the green crease and routing a dummy pair around it. Returns nullopt when
/// no defect survives the tear (for instance an empty syndrome).
std::optional<AlternativeMatching> alternative_matching(
    const UnifiedLattice &unified, const Syndrome &syndrome, const DecodeResult &original,
    const ComparativeConfig &config = {});
std::optional<AlternativeMatching> alternative_matching_nodes(
    const UnifiedLattice &unified, std::span<const uint32_t> nodes, const DecodeResult &original,
    const ComparativeConfig &config = {});

/// Möbius decoding followed by the alternative matching; switches to the
/// alternative iff ell_alt - ell_or == upsilon and (2 ell_or - d) mod 4 == 1.
DecodeResult decode_comparative(
    const UnifiedLattice &unified, const Syndrome &syndrome, const ComparativeConfig &config, int distance);
DecodeResult decode_comparative_nodes(
    const UnifiedLattice &unified, std::span<const uint32_t> nodes, const ComparativeConfig &config);

/// True when ell_alt, ell_or and d call for the alternative correction.
bool prefer_alternative(int32_t ell_or, int32_t ell_alt, int distance, int upsilon);

DecodeResult decode(
    const UnifiedLattice &unified, const Syndrome &syndrome, DecoderKind kind, const ComparativeConfig &config = {});

/// Decodes the syndrome of `error` and compares the predicted commutator with
/// the true commutator against the green boundary logical.
bool decode_success(
    const UnifiedLattice &unified, const PauliXError &error, DecoderKind kind, const ComparativeConfig &config = {});

/// Reusable per-thread scratch space for hot decode loops.
class DecodeWorkspace {
   public:
    DecodeWorkspace(const UnifiedLattice &unified, DecoderKind kind, ComparativeConfig config);

    /// Decodes the error given by its (sorted) support and reports success.
    /// The comparative alternative is only computed when the residue
    /// condition on ell_or can hold, so last().ell_alt may be empty.
    bool succeeds(std::span<const uint32_t> support);
    const DecodeResult &last() const { return last_; }

   private:
    const UnifiedLattice &unified_;
    DecoderKind kind_;
    ComparativeConfig config_;
    std::vector<uint8_t> bits_;
    std::vector<uint32_t> nodes_;
    DecodeResult last_;
};

}  // namespace mobius

#endif
