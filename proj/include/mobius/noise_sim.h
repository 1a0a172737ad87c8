#ifndef MOBIUS_NOISE_SIM_H
#define MOBIUS_NOISE_SIM_H

#include <cstdint>
#include <functional>
#include <random>
#include <span>
#include <vector>

#include "mobius/code_lattice.h"
#include "mobius/decoder.h"
#include "mobius/unified_lattice.h"

namespace mobius {

struct NoiseModel {
    double p = 0.0;

    explicit NoiseModel(double p);
};

struct MCResult {
    int d = 0;
    double p = 0.0;
    uint64_t trials = 0;
    uint64_t failures = 0;
    double p_fail = 0.0;
    double std_err = 0.0;
    uint64_t seed = 0;
    DecoderKind variant = DecoderKind::Moebius;
};

struct ExhaustResult {
    int d = 0;
    int w_max = 0;
    uint64_t configs_tested = 0;
    std::vector<std::vector<uint32_t>> failures;
};

/// Independent generator for one trial, keyed by (seed, trial index), so any
/// partition of trials over workers draws the same errors.
std::mt19937_64 trial_rng(uint64_t seed, uint64_t trial);

/// Uniform double in [0, 1) from the top 53 bits of one draw.
double uniform01(std::mt19937_64 &rng);

PauliXError sample_error(uint32_t n, double p, std::mt19937_64 &rng);
void sample_error_into(uint32_t n, double p, std::mt19937_64 &rng, std::vector<uint32_t> &support);

/// log of (1-p)^n (p/(1-p))^|e|; natural log.
double error_log_likelihood(const PauliXError &e, double p, uint32_t n);

struct MCOptions {
    int jobs = 1;
    ComparativeConfig comparative;
};

MCResult run_mc(const UnifiedLattice &unified, double p, uint64_t trials, uint64_t seed, DecoderKind variant,
                const MCOptions &options = {});
MCResult run_mc(int d, double p, uint64_t trials, uint64_t seed, DecoderKind variant, const MCOptions &options = {});

/// n choose k; throws std::overflow_error if the value does not fit.
uint64_t binomial(uint64_t n, uint64_t k);

/// Σ_{w=1..w_max} C(n, w).
uint64_t exhaustive_count(uint32_t n, int w_max);

/// Lexicographic rank of a sorted k-subset of {0..n-1} and its inverse.
uint64_t rank_combination(uint32_t n, std::span<const uint32_t> combo);
std::vector<uint32_t> unrank_combination(uint32_t n, uint32_t k, uint64_t rank);

/// Advances a sorted k-subset to its lexicographic successor; false at the end.
bool next_combination(uint32_t n, std::vector<uint32_t> &combo);

/// Global enumeration order: weight 1 first, lexicographic inside each weight.
/// Chunks are contiguous intervals of that order of size `chunk_size`.
struct ExhaustOptions {
    int jobs = 1;
    uint64_t chunk_size = 1 << 16;
    uint64_t first_chunk = 0;
    /// Number of chunks to run from first_chunk; 0 means through the end.
    uint64_t num_chunks = 0;
    ComparativeConfig comparative;
    /// Called once per failing support, in enumeration order, after the sweep.
    std::function<void(const std::vector<uint32_t> &)> on_failure;
};

ExhaustResult run_exhaustive(const UnifiedLattice &unified, int w_max, DecoderKind variant,
                             const ExhaustOptions &options = {});
ExhaustResult run_exhaustive(int d, int w_max, DecoderKind variant, const ExhaustOptions &options = {});

/// Number of chunks the full sweep splits into.
uint64_t exhaustive_chunks(uint32_t n, int w_max, uint64_t chunk_size);

}  // namespace mobius

#endif
