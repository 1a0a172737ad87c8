#include <gtest/gtest.h>

#include <cmath>
#include <numeric>

#include "mobius/noise_sim.h"

namespace mobius {
namespace {

TEST(NoiseSim, ZeroNoiseNeverFails) {
    MCResult r = run_mc(5, 0.0, 1000, 1, DecoderKind::Comparative);
    EXPECT_EQ(r.failures, 0u);
    EXPECT_EQ(r.p_fail, 0.0);
    EXPECT_EQ(r.std_err, 0.0);
    EXPECT_EQ(r.trials, 1000u);
}

TEST(NoiseSim, SampledWeightHasBinomialMean) {
    const uint32_t n = 127;
    const double p = 0.5;
    const int samples = 20000;
    double total = 0;
    for (int i = 0; i < samples; i++) {
        auto rng = trial_rng(3, i);
        total += static_cast<double>(sample_error(n, p, rng).weight());
    }
    double mean = total / samples;
    double sigma = std::sqrt(n * p * (1 - p) / samples);
    EXPECT_NEAR(mean, n * p, 4 * sigma);
}

TEST(NoiseSim, SamplesAreSortedAndInRange) {
    auto rng = trial_rng(5, 0);
    for (int i = 0; i < 100; i++) {
        PauliXError e = sample_error(61, 0.2, rng);
        EXPECT_TRUE(std::is_sorted(e.support.begin(), e.support.end()));
        for (uint32_t q : e.support) {
            EXPECT_LT(q, 61u);
        }
    }
}

TEST(NoiseSim, TrialStreamsAreKeyedBySeedAndIndex) {
    auto a = trial_rng(1, 7);
    auto b = trial_rng(1, 7);
    auto c = trial_rng(1, 8);
    auto d = trial_rng(2, 7);
    uint64_t xa = a(), xb = b(), xc = c(), xd = d();
    EXPECT_EQ(xa, xb);
    EXPECT_NE(xa, xc);
    EXPECT_NE(xa, xd);
    auto u = trial_rng(9, 9);
    for (int i = 0; i < 1000; i++) {
        double x = uniform01(u);
        EXPECT_GE(x, 0.0);
        EXPECT_LT(x, 1.0);
    }
}

TEST(NoiseSim, ResultIndependentOfJobs) {
    MCOptions one;
    MCOptions four;
    four.jobs = 4;
    MCOptions sixteen;
    sixteen.jobs = 16;
    for (DecoderKind k : {DecoderKind::Moebius, DecoderKind::Comparative}) {
        MCResult a = run_mc(7, 0.08, 3000, 42, k, one);
        MCResult b = run_mc(7, 0.08, 3000, 42, k, four);
        MCResult c = run_mc(7, 0.08, 3000, 42, k, sixteen);
        EXPECT_EQ(a.failures, b.failures);
        EXPECT_EQ(a.failures, c.failures);
        EXPECT_GT(a.failures, 0u);
    }
    EXPECT_NE(run_mc(7, 0.08, 3000, 42, DecoderKind::Moebius).failures,
              run_mc(7, 0.08, 3000, 43, DecoderKind::Moebius).failures);
}

TEST(NoiseSim, LogLikelihood) {
    PauliXError e = PauliXError::from_qubits({1, 4});
    double p = 0.1;
    EXPECT_NEAR(error_log_likelihood(e, p, 7), 2 * std::log(0.1) + 5 * std::log(0.9), 1e-12);
    EXPECT_NEAR(error_log_likelihood(PauliXError{}, p, 7), 7 * std::log(0.9), 1e-12);
    EXPECT_THROW(error_log_likelihood(e, 0.0, 7), std::invalid_argument);
    EXPECT_THROW(error_log_likelihood(e, 1.0, 7), std::invalid_argument);
}

TEST(NoiseSim, RejectsBadArguments) {
    EXPECT_THROW(NoiseModel(-0.1), std::invalid_argument);
    EXPECT_THROW(NoiseModel(0.6), std::invalid_argument);
    EXPECT_THROW(run_mc(5, 0.1, 0, 1, DecoderKind::Moebius), std::invalid_argument);
    MCOptions bad;
    bad.jobs = 0;
    EXPECT_THROW(run_mc(5, 0.1, 10, 1, DecoderKind::Moebius, bad), std::invalid_argument);
    EXPECT_THROW(run_exhaustive(5, 3, DecoderKind::Moebius), std::invalid_argument);
    EXPECT_THROW(run_exhaustive(5, 0, DecoderKind::Moebius), std::invalid_argument);
}

// d=3 failure probability summed exactly over all 2^7 errors.
TEST(NoiseSim, DistanceThreeMatchesExactSum) {
    UnifiedLattice u{CodeLattice(3)};
    const uint32_t n = 7;
    for (DecoderKind k : {DecoderKind::Moebius, DecoderKind::Comparative}) {
        for (double p : {0.05, 0.15}) {
            double exact = 0;
            for (uint32_t mask = 0; mask < (1u << n); mask++) {
                std::vector<uint32_t> support;
                for (uint32_t q = 0; q < n; q++) {
                    if (mask >> q & 1) {
                        support.push_back(q);
                    }
                }
                if (!decode_success(u, PauliXError::from_qubits(support), k)) {
                    int w = static_cast<int>(support.size());
                    exact += std::pow(p, w) * std::pow(1 - p, n - w);
                }
            }
            const uint64_t trials = 100000;
            MCResult r = run_mc(u, p, trials, 77, k);
            double sigma = std::sqrt(exact * (1 - exact) / trials);
            EXPECT_NEAR(r.p_fail, exact, 3 * sigma) << "p=" << p;
        }
    }
}

TEST(NoiseSim, FailureRateIsMonotoneInP) {
    UnifiedLattice u{CodeLattice(7)};
    MCResult prev = run_mc(u, 0.02, 20000, 5, DecoderKind::Moebius);
    for (double p : {0.04, 0.06, 0.08, 0.10}) {
        MCResult cur = run_mc(u, p, 20000, 5, DecoderKind::Moebius);
        EXPECT_LE(prev.p_fail, cur.p_fail + 3 * (prev.std_err + cur.std_err)) << "p=" << p;
        prev = cur;
    }
}

TEST(Combinatorics, Binomials) {
    EXPECT_EQ(binomial(5, 2), 10u);
    EXPECT_EQ(binomial(5, 0), 1u);
    EXPECT_EQ(binomial(5, 6), 0u);
    EXPECT_EQ(binomial(127, 6), 5169379425u);
    EXPECT_THROW(binomial(200, 100), std::overflow_error);
}

TEST(Combinatorics, ExhaustiveCountsMatchClosedForms) {
    EXPECT_EQ(exhaustive_count(7, 1), 7u);
    EXPECT_EQ(exhaustive_count(19, 2), 190u);
    EXPECT_EQ(exhaustive_count(37, 3), 8473u);
    EXPECT_EQ(exhaustive_count(61, 4), 559736u);
    EXPECT_EQ(exhaustive_count(91, 5), 49302799u);
    EXPECT_EQ(exhaustive_count(127, 6), 5434287328u);
    EXPECT_EQ(CodeLattice::expected_qubit_count(13), 127u);
}

TEST(Combinatorics, RankUnrankRoundTrip) {
    const uint32_t n = 12;
    for (uint32_t k = 1; k <= 4; k++) {
        std::vector<uint32_t> combo(k);
        std::iota(combo.begin(), combo.end(), 0u);
        uint64_t rank = 0;
        do {
            EXPECT_EQ(rank_combination(n, combo), rank);
            EXPECT_EQ(unrank_combination(n, k, rank), combo);
            rank++;
        } while (next_combination(n, combo));
        EXPECT_EQ(rank, binomial(n, k));
        EXPECT_THROW(unrank_combination(n, k, rank), std::out_of_range);
    }
}

TEST(Exhaustive, CountsAndZeroFailures) {
    for (DecoderKind k : {DecoderKind::Moebius, DecoderKind::Comparative}) {
        ExhaustResult r3 = run_exhaustive(3, 1, k);
        EXPECT_EQ(r3.configs_tested, 7u);
        EXPECT_TRUE(r3.failures.empty());
        ExhaustResult r5 = run_exhaustive(5, 2, k);
        EXPECT_EQ(r5.configs_tested, 190u);
        EXPECT_TRUE(r5.failures.empty());
    }
}

TEST(Exhaustive, ChunksResumeAndJobsAgree) {
    // The Moebius decoder has sub-distance failures at d=9; a sweep split into
    // chunk ranges on different worker counts must find the same list.
    UnifiedLattice u{CodeLattice(9)};
    ExhaustOptions whole;
    whole.chunk_size = 50000;
    ExhaustResult full = run_exhaustive(u, 4, DecoderKind::Moebius, whole);
    EXPECT_EQ(full.configs_tested, 559736u);
    EXPECT_EQ(full.failures.size(), 9u);
    for (const auto &f : full.failures) {
        EXPECT_EQ(f.size(), 4u);
    }

    const uint64_t chunks = exhaustive_chunks(61, 4, whole.chunk_size);
    EXPECT_EQ(chunks, 12u);
    std::vector<std::vector<uint32_t>> stitched;
    uint64_t tested = 0;
    int jobs = 1;
    for (uint64_t first = 0; first < chunks; first += 5) {
        ExhaustOptions part = whole;
        part.first_chunk = first;
        part.num_chunks = 5;
        part.jobs = jobs;
        jobs += 2;
        part.on_failure = [&](const std::vector<uint32_t> &s) { stitched.push_back(s); };
        ExhaustResult r = run_exhaustive(u, 4, DecoderKind::Moebius, part);
        tested += r.configs_tested;
    }
    EXPECT_EQ(tested, full.configs_tested);
    EXPECT_EQ(stitched, full.failures);
}

}  // namespace
}  // namespace mobius
