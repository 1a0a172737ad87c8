#include "mobius/noise_sim.h"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <thread>

namespace mobius {

NoiseModel::NoiseModel(double p_) : p(p_) {
    if (!(p >= 0.0 && p <= 0.5)) {
        throw std::invalid_argument("bit-flip probability must lie in [0, 0.5]");
    }
}

std::mt19937_64 trial_rng(uint64_t seed, uint64_t trial) {
    std::seed_seq seq{
        static_cast<uint32_t>(seed),
        static_cast<uint32_t>(seed >> 32),
        static_cast<uint32_t>(trial),
        static_cast<uint32_t>(trial >> 32),
    };
    return std::mt19937_64(seq);
}

double uniform01(std::mt19937_64 &rng) { return static_cast<double>(rng() >> 11) * 0x1.0p-53; }

void sample_error_into(uint32_t n, double p, std::mt19937_64 &rng, std::vector<uint32_t> &support) {
    support.clear();
    for (uint32_t q = 0; q < n; q++) {
        if (uniform01(rng) < p) {
            support.push_back(q);
        }
    }
}

PauliXError sample_error(uint32_t n, double p, std::mt19937_64 &rng) {
    PauliXError e;
    sample_error_into(n, p, rng, e.support);
    return e;
}

double error_log_likelihood(const PauliXError &e, double p, uint32_t n) {
    if (!(p > 0.0 && p < 1.0)) {
        throw std::invalid_argument("log-likelihood needs 0 < p < 1");
    }
    return n * std::log1p(-p) + static_cast<double>(e.weight()) * std::log(p / (1.0 - p));
}

namespace {

template <typename Fn>
void fan_out(int jobs, Fn &&fn) {
    if (jobs <= 1) {
        fn(0);
        return;
    }
    std::vector<std::thread> threads;
    threads.reserve(jobs);
    for (int t = 0; t < jobs; t++) {
        threads.emplace_back(fn, t);
    }
    for (auto &th : threads) {
        th.join();
    }
}

}  // namespace

MCResult run_mc(const UnifiedLattice &unified, double p, uint64_t trials, uint64_t seed, DecoderKind variant,
                const MCOptions &options) {
    NoiseModel model(p);
    if (trials < 1) {
        throw std::invalid_argument("trials must be >= 1");
    }
    if (options.jobs < 1) {
        throw std::invalid_argument("jobs must be >= 1");
    }
    const uint32_t n = unified.lattice().num_qubits();
    const int jobs = static_cast<int>(std::min<uint64_t>(options.jobs, trials));
    std::vector<uint64_t> failures(jobs, 0);
    std::vector<std::exception_ptr> errors(jobs);

    fan_out(jobs, [&](int t) {
        try {
            DecodeWorkspace ws(unified, variant, options.comparative);
            std::vector<uint32_t> support;
            uint64_t begin = trials * t / jobs;
            uint64_t end = trials * (t + 1) / jobs;
            uint64_t local = 0;
            for (uint64_t i = begin; i < end; i++) {
                auto rng = trial_rng(seed, i);
                sample_error_into(n, model.p, rng, support);
                if (!ws.succeeds(support)) {
                    local++;
                }
            }
            failures[t] = local;
        } catch (...) {
            errors[t] = std::current_exception();
        }
    });
    for (auto &e : errors) {
        if (e) {
            std::rethrow_exception(e);
        }
    }

    MCResult r;
    r.d = unified.lattice().distance();
    r.p = p;
    r.trials = trials;
    for (uint64_t f : failures) {
        r.failures += f;
    }
    r.p_fail = static_cast<double>(r.failures) / static_cast<double>(trials);
    r.std_err = std::sqrt(r.p_fail * (1.0 - r.p_fail) / static_cast<double>(trials));
    r.seed = seed;
    r.variant = variant;
    return r;
}

MCResult run_mc(int d, double p, uint64_t trials, uint64_t seed, DecoderKind variant, const MCOptions &options) {
    UnifiedLattice unified{CodeLattice(d)};
    return run_mc(unified, p, trials, seed, variant, options);
}

uint64_t binomial(uint64_t n, uint64_t k) {
    if (k > n) {
        return 0;
    }
    k = std::min(k, n - k);
    unsigned __int128 result = 1;
    for (uint64_t i = 1; i <= k; i++) {
        result = result * (n - k + i) / i;
        if (result > UINT64_MAX) {
            throw std::overflow_error("binomial coefficient does not fit in 64 bits");
        }
    }
    return static_cast<uint64_t>(result);
}

uint64_t exhaustive_count(uint32_t n, int w_max) {
    uint64_t total = 0;
    for (int w = 1; w <= w_max; w++) {
        total += binomial(n, w);
    }
    return total;
}

uint64_t rank_combination(uint32_t n, std::span<const uint32_t> combo) {
    const uint32_t k = static_cast<uint32_t>(combo.size());
    uint64_t rank = 0;
    uint32_t start = 0;
    for (uint32_t i = 0; i < k; i++) {
        for (uint32_t v = start; v < combo[i]; v++) {
            rank += binomial(n - 1 - v, k - 1 - i);
        }
        start = combo[i] + 1;
    }
    return rank;
}

std::vector<uint32_t> unrank_combination(uint32_t n, uint32_t k, uint64_t rank) {
    if (rank >= binomial(n, k)) {
        throw std::out_of_range("combination rank out of range");
    }
    std::vector<uint32_t> combo(k);
    uint32_t v = 0;
    for (uint32_t i = 0; i < k; i++) {
        while (true) {
            uint64_t block = binomial(n - 1 - v, k - 1 - i);
            if (rank < block) {
                break;
            }
            rank -= block;
            v++;
        }
        combo[i] = v++;
    }
    return combo;
}

bool next_combination(uint32_t n, std::vector<uint32_t> &combo) {
    const uint32_t k = static_cast<uint32_t>(combo.size());
    int i = static_cast<int>(k) - 1;
    while (i >= 0 && combo[i] == n - k + static_cast<uint32_t>(i)) {
        i--;
    }
    if (i < 0) {
        return false;
    }
    combo[i]++;
    for (uint32_t j = i + 1; j < k; j++) {
        combo[j] = combo[j - 1] + 1;
    }
    return true;
}

uint64_t exhaustive_chunks(uint32_t n, int w_max, uint64_t chunk_size) {
    if (chunk_size == 0) {
        throw std::invalid_argument("chunk_size must be positive");
    }
    uint64_t total = exhaustive_count(n, w_max);
    return (total + chunk_size - 1) / chunk_size;
}

namespace {

// Support at global index g of the weight-major enumeration.
std::vector<uint32_t> unrank_global(uint32_t n, int w_max, uint64_t g) {
    for (int w = 1; w <= w_max; w++) {
        uint64_t c = binomial(n, w);
        if (g < c) {
            return unrank_combination(n, w, g);
        }
        g -= c;
    }
    throw std::out_of_range("global index past the end of the sweep");
}

}  // namespace

ExhaustResult run_exhaustive(const UnifiedLattice &unified, int w_max, DecoderKind variant,
                             const ExhaustOptions &options) {
    const int d = unified.lattice().distance();
    if (w_max < 1 || w_max > (d - 1) / 2) {
        throw std::invalid_argument("w_max must lie in [1, (d-1)/2]");
    }
    if (options.jobs < 1) {
        throw std::invalid_argument("jobs must be >= 1");
    }
    const uint32_t n = unified.lattice().num_qubits();
    const uint64_t total = exhaustive_count(n, w_max);
    const uint64_t all_chunks = exhaustive_chunks(n, w_max, options.chunk_size);
    if (options.first_chunk > all_chunks) {
        throw std::invalid_argument("first_chunk past the end of the sweep");
    }
    uint64_t last_chunk = options.num_chunks == 0 ? all_chunks
                                                  : std::min(all_chunks, options.first_chunk + options.num_chunks);

    struct Found {
        uint64_t index;
        std::vector<uint32_t> support;
    };
    const int jobs = options.jobs;
    std::vector<std::vector<Found>> found(jobs);
    std::vector<uint64_t> tested(jobs, 0);
    std::vector<std::exception_ptr> errors(jobs);

    // Chunks are dealt round-robin so every worker sees a mix of weights.
    fan_out(jobs, [&](int t) {
        try {
            DecodeWorkspace ws(unified, variant, options.comparative);
            for (uint64_t c = options.first_chunk + t; c < last_chunk; c += jobs) {
                uint64_t begin = c * options.chunk_size;
                uint64_t end = std::min(total, begin + options.chunk_size);
                std::vector<uint32_t> combo = unrank_global(n, w_max, begin);
                for (uint64_t g = begin; g < end; g++) {
                    if (!ws.succeeds(combo)) {
                        found[t].push_back({g, combo});
                    }
                    tested[t]++;
                    if (g + 1 < end && !next_combination(n, combo)) {
                        combo = unrank_combination(n, static_cast<uint32_t>(combo.size() + 1), 0);
                    }
                }
            }
        } catch (...) {
            errors[t] = std::current_exception();
        }
    });
    for (auto &e : errors) {
        if (e) {
            std::rethrow_exception(e);
        }
    }

    std::vector<Found> merged;
    for (auto &f : found) {
        for (auto &x : f) {
            merged.push_back(std::move(x));
        }
    }
    std::sort(merged.begin(), merged.end(), [](const Found &a, const Found &b) { return a.index < b.index; });

    ExhaustResult r;
    r.d = d;
    r.w_max = w_max;
    for (uint64_t x : tested) {
        r.configs_tested += x;
    }
    for (auto &f : merged) {
        if (options.on_failure) {
            options.on_failure(f.support);
        }
        r.failures.push_back(std::move(f.support));
    }
    return r;
}

ExhaustResult run_exhaustive(int d, int w_max, DecoderKind variant, const ExhaustOptions &options) {
    UnifiedLattice unified{CodeLattice(d)};
    return run_exhaustive(unified, w_max, variant, options);
}

}  // namespace mobius
