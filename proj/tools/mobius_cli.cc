#include <CLI11.hpp>
#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <sstream>
#include <thread>

#include "mobius/analysis.h"
#include "mobius/decoder.h"
#include "mobius/io.h"
#include "mobius/noise_sim.h"

namespace fs = std::filesystem;
using namespace mobius;

namespace {

enum ExitCode { kOk = 0, kBadFlags = 2, kBadInput = 3, kBadOutput = 4, kModuleError = 5 };

class ConfigError : public std::runtime_error {
    using std::runtime_error::runtime_error;
};

int default_jobs() {
    unsigned n = std::thread::hardware_concurrency();
    return n == 0 ? 1 : static_cast<int>(n);
}

void check_distance(int d) {
    if (d < 3 || d % 2 == 0) {
        throw ConfigError("distance must be odd and >= 3, got " + std::to_string(d));
    }
}

fs::path resolve_out(const std::string &out) {
    fs::path p(out);
    const char *dir = std::getenv("MOBIUS_OUT_DIR");
    if (dir != nullptr && *dir != '\0' && p.is_relative()) {
        return fs::path(dir) / p;
    }
    return p;
}

// Writes to --out when given, stdout otherwise.
void emit(const std::string &out, const std::string &content) {
    if (out.empty()) {
        std::cout << content;
        std::cout.flush();
        return;
    }
    atomic_write(resolve_out(out), content);
}

std::string read_input(const std::string &path) {
    if (path == "-") {
        std::ostringstream buf;
        buf << std::cin.rdbuf();
        return buf.str();
    }
    return read_text(path);
}

struct Common {
    std::string out;
    int jobs = default_jobs();
};

struct DecodeArgs {
    int d = 0;
    std::string error = "-";
    std::string variant = "comparative";
    int upsilon = 1;
};

struct McArgs {
    std::vector<int> ds;
    std::vector<double> ps;
    uint64_t trials = 0;
    uint64_t seed = 1;
    std::string variant = "comparative";
    int upsilon = 1;
    std::string format = "csv";
};

struct ExhaustArgs {
    int d = 0;
    int w_max = 0;
    std::string variant = "comparative";
    int upsilon = 1;
    uint64_t chunk_size = 1 << 16;
    uint64_t first_chunk = 0;
    uint64_t num_chunks = 0;
    std::string failures_log;
};

struct FitArgs {
    std::string in;
    double discard = kLowPDiscard;
    double p_min = 0.07;
    double p_max = 0.11;
    double p_c0 = 0.09;
    double nu0 = 1.5;
};

ComparativeConfig comparative_config(int upsilon, int d) {
    ComparativeConfig cfg;
    cfg.upsilon = upsilon;
    try {
        cfg.validate(d);
    } catch (const std::invalid_argument &e) {
        throw ConfigError(e.what());
    }
    return cfg;
}

DecoderKind variant_of(const std::string &name) {
    try {
        return parse_decoder_kind(name);
    } catch (const std::invalid_argument &e) {
        throw ConfigError(e.what());
    }
}

int run_lattice(int d, const Common &c) {
    check_distance(d);
    CodeLattice lattice(d);
    emit(c.out, lattice_to_json(lattice).dump(2) + "\n");
    std::cerr << "lattice d=" << d << " qubits=" << lattice.num_qubits() << " faces=" << lattice.num_faces() << "\n";
    return kOk;
}

int run_unified(int d, const Common &c) {
    check_distance(d);
    UnifiedLattice unified{CodeLattice(d)};
    emit(c.out, unified_to_json(unified).dump(2) + "\n");
    std::cerr << "unified d=" << d << " nodes=" << unified.num_nodes() << " unit_edges=" << unified.unit_edges().size()
              << "\n";
    return kOk;
}

int run_decode(const DecodeArgs &a, const Common &c) {
    DecoderKind kind = variant_of(a.variant);
    if (a.d != 0) {
        check_distance(a.d);
        comparative_config(a.upsilon, a.d);
    }
    ErrorInput input = parse_error_input(read_input(a.error));
    int d = a.d;
    if (d == 0) {
        if (!input.d) {
            throw ConfigError("--d is required unless the error file records \"d\"");
        }
        d = *input.d;
    } else if (input.d && *input.d != d) {
        throw ConfigError("--d disagrees with the distance recorded in the error file");
    }
    check_distance(d);
    ComparativeConfig cfg = comparative_config(a.upsilon, d);
    UnifiedLattice unified{CodeLattice(d)};
    PauliXError error;
    try {
        error = PauliXError::from_qubits(input.qubits);
        unified.lattice().validate(error);
    } catch (const std::exception &e) {
        throw InputError(std::string("bad error support: ") + e.what());
    }
    DecodeResult r = decode(unified, unified.lattice().syndrome(error), kind, cfg);
    ojson doc = decode_to_json(unified.lattice(), error, r);
    emit(c.out, doc.dump() + "\n");
    std::cerr << "decode d=" << d << " w=" << error.weight() << " ell_or=" << r.ell_or
              << " variant=" << matching_variant_name(r.variant) << " success=" << (doc["success"].get<bool>() ? 1 : 0)
              << "\n";
    return kOk;
}

int run_mc_cmd(const McArgs &a, const Common &c) {
    DecoderKind kind = variant_of(a.variant);
    if (a.trials < 1) {
        throw ConfigError("--trials must be >= 1");
    }
    for (int d : a.ds) {
        check_distance(d);
        comparative_config(a.upsilon, d);
    }
    for (double p : a.ps) {
        if (!(p >= 0.0 && p <= 0.5)) {
            throw ConfigError("--p values must lie in [0, 0.5]");
        }
    }
    if (a.format != "csv" && a.format != "json") {
        throw ConfigError("--format must be csv or json");
    }
    if (c.jobs < 1) {
        throw ConfigError("--jobs must be >= 1");
    }
    std::vector<MCResult> rows;
    uint64_t failures = 0;
    for (int d : a.ds) {
        UnifiedLattice unified{CodeLattice(d)};
        MCOptions opt;
        opt.jobs = c.jobs;
        opt.comparative = comparative_config(a.upsilon, d);
        for (double p : a.ps) {
            rows.push_back(run_mc(unified, p, a.trials, a.seed, kind, opt));
            failures += rows.back().failures;
        }
    }
    if (a.format == "csv") {
        emit(c.out, mc_to_csv(rows));
    } else {
        ojson doc = ojson::array();
        for (const MCResult &r : rows) {
            ojson e;
            e["d"] = r.d;
            e["p"] = r.p;
            e["trials"] = r.trials;
            e["failures"] = r.failures;
            e["p_fail"] = r.p_fail;
            e["stderr"] = r.std_err;
            e["seed"] = r.seed;
            e["variant"] = decoder_kind_name(r.variant);
            doc.push_back(std::move(e));
        }
        emit(c.out, doc.dump(2) + "\n");
    }
    std::cerr << "mc points=" << rows.size() << " trials_each=" << a.trials << " failures=" << failures << "\n";
    return kOk;
}

int run_exhaust_cmd(const ExhaustArgs &a, const Common &c) {
    check_distance(a.d);
    DecoderKind kind = variant_of(a.variant);
    int w_max = a.w_max == 0 ? (a.d - 1) / 2 : a.w_max;
    if (w_max < 1 || w_max > (a.d - 1) / 2) {
        throw ConfigError("--w-max must lie in [1, (d-1)/2]");
    }
    if (a.chunk_size == 0) {
        throw ConfigError("--chunk-size must be positive");
    }
    if (c.jobs < 1) {
        throw ConfigError("--jobs must be >= 1");
    }
    UnifiedLattice unified{CodeLattice(a.d)};
    ExhaustOptions opt;
    opt.jobs = c.jobs;
    opt.chunk_size = a.chunk_size;
    opt.first_chunk = a.first_chunk;
    opt.num_chunks = a.num_chunks;
    opt.comparative = comparative_config(a.upsilon, a.d);
    uint64_t all = exhaustive_chunks(unified.lattice().num_qubits(), w_max, a.chunk_size);
    if (a.first_chunk > all) {
        throw ConfigError("--first-chunk past the end (" + std::to_string(all) + " chunks)");
    }
    std::string log;
    opt.on_failure = [&](const std::vector<uint32_t> &s) { log += failure_line(a.d, s) + "\n"; };
    ExhaustResult r = run_exhaustive(unified, w_max, kind, opt);
    if (!a.failures_log.empty()) {
        atomic_write(resolve_out(a.failures_log), log);
    }
    emit(c.out, exhaust_to_json(r).dump() + "\n");
    std::cerr << "exhaust d=" << a.d << " w_max=" << w_max << " configs_tested=" << r.configs_tested
              << " failures=" << r.failures.size() << "\n";
    return kOk;
}

int run_fit_lowp(const FitArgs &a, const Common &c) {
    std::vector<MCResult> rows = parse_mc_csv(read_input(a.in));
    LowPFit fit = fit_lowp(rows, a.discard);
    emit(c.out, lowp_to_json(fit).dump(2) + "\n");
    std::cerr << "fit-lowp alpha=" << fit.alpha << " gamma=" << fit.gamma << " N=" << fit.N << " beta=" << fit.beta
              << "\n";
    return kOk;
}

int run_fit_threshold(const FitArgs &a, const Common &c) {
    std::vector<MCResult> rows = parse_mc_csv(read_input(a.in));
    ThresholdOptions opt;
    opt.window = {a.p_min, a.p_max};
    opt.p_c0 = a.p_c0;
    opt.nu0 = a.nu0;
    ThresholdFit fit = fit_threshold(rows, opt);
    emit(c.out, threshold_to_json(fit).dump(2) + "\n");
    std::cerr << "fit-threshold p_c=" << fit.p_c << " nu0=" << fit.nu0 << " residual=" << fit.residual << "\n";
    return kOk;
}

}  // namespace

int main(int argc, char **argv) {
    CLI::App app{"Moebius-strip matching decoder for the triangular color code"};
    app.require_subcommand(1);

    Common common;
    int lattice_d = 0;
    auto *lattice = app.add_subcommand("lattice", "Dump the code lattice as JSON");
    lattice->add_option("--d", lattice_d, "Code distance")->required();
    lattice->add_option("--out", common.out, "Output file (default stdout)");

    int unified_d = 0;
    auto *unified = app.add_subcommand("unified", "Dump the unified lattice as JSON");
    unified->add_option("--d", unified_d, "Code distance")->required();
    unified->add_option("--out", common.out, "Output file (default stdout)");

    DecodeArgs dec;
    auto *decode_cmd = app.add_subcommand("decode", "Decode one bit-flip error");
    decode_cmd->add_option("--d", dec.d, "Code distance (optional if the error file records it)");
    decode_cmd->add_option("--error", dec.error, "Error file, '-' for stdin");
    decode_cmd->add_option("--variant", dec.variant, "moebius or comparative");
    decode_cmd->add_option("--upsilon", dec.upsilon, "Required excess of ell_alt over ell_or");
    decode_cmd->add_option("--out", common.out, "Output file (default stdout)");

    McArgs mc;
    auto *mc_cmd = app.add_subcommand("mc", "Monte Carlo failure rates under iid bit flips");
    mc_cmd->add_option("--d", mc.ds, "Code distance(s)")->required()->delimiter(',');
    mc_cmd->add_option("--p", mc.ps, "Bit-flip probability(ies)")->required()->delimiter(',');
    mc_cmd->add_option("--trials", mc.trials, "Trials per (d, p)")->required();
    mc_cmd->add_option("--seed", mc.seed, "RNG seed");
    mc_cmd->add_option("--variant", mc.variant, "moebius or comparative");
    mc_cmd->add_option("--upsilon", mc.upsilon, "Required excess of ell_alt over ell_or");
    mc_cmd->add_option("--format", mc.format, "csv or json");
    mc_cmd->add_option("--jobs", common.jobs, "Worker threads");
    mc_cmd->add_option("--out", common.out, "Output file (default stdout)");

    ExhaustArgs ex;
    auto *ex_cmd = app.add_subcommand("exhaust", "Decode every error up to a weight");
    ex_cmd->add_option("--d", ex.d, "Code distance")->required();
    ex_cmd->add_option("--w-max", ex.w_max, "Largest weight (default (d-1)/2)");
    ex_cmd->add_option("--variant", ex.variant, "moebius or comparative");
    ex_cmd->add_option("--upsilon", ex.upsilon, "Required excess of ell_alt over ell_or");
    ex_cmd->add_option("--chunk-size", ex.chunk_size, "Configurations per chunk");
    ex_cmd->add_option("--first-chunk", ex.first_chunk, "First chunk to run (for resuming)");
    ex_cmd->add_option("--num-chunks", ex.num_chunks, "Chunks to run (0 = through the end)");
    ex_cmd->add_option("--failures-log", ex.failures_log, "JSON-lines file of failing supports");
    ex_cmd->add_option("--jobs", common.jobs, "Worker threads");
    ex_cmd->add_option("--out", common.out, "Output file (default stdout)");

    FitArgs lowp;
    auto *lowp_cmd = app.add_subcommand("fit-lowp", "Fit the low-p scaling ansatz to MC CSV data");
    lowp_cmd->add_option("--in", lowp.in, "MC CSV, '-' for stdin")->required();
    lowp_cmd->add_option("--discard", lowp.discard, "Drop points with p_fail below this");
    lowp_cmd->add_option("--out", common.out, "Output file (default stdout)");

    FitArgs thr;
    auto *thr_cmd = app.add_subcommand("fit-threshold", "Fit the finite-size crossing to MC CSV data");
    thr_cmd->add_option("--in", thr.in, "MC CSV, '-' for stdin")->required();
    thr_cmd->add_option("--p-min", thr.p_min, "Window lower edge");
    thr_cmd->add_option("--p-max", thr.p_max, "Window upper edge");
    thr_cmd->add_option("--pc0", thr.p_c0, "Initial p_c");
    thr_cmd->add_option("--nu0", thr.nu0, "Initial nu0");
    thr_cmd->add_option("--out", common.out, "Output file (default stdout)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError &e) {
        int code = app.exit(e);
        return code == 0 ? kOk : kBadFlags;
    }

    try {
        if (*lattice) {
            return run_lattice(lattice_d, common);
        }
        if (*unified) {
            return run_unified(unified_d, common);
        }
        if (*decode_cmd) {
            return run_decode(dec, common);
        }
        if (*mc_cmd) {
            return run_mc_cmd(mc, common);
        }
        if (*ex_cmd) {
            return run_exhaust_cmd(ex, common);
        }
        if (*lowp_cmd) {
            return run_fit_lowp(lowp, common);
        }
        if (*thr_cmd) {
            return run_fit_threshold(thr, common);
        }
    } catch (const ConfigError &e) {
        std::cerr << "error: " << e.what() << "\n";
        return kBadFlags;
    } catch (const InputError &e) {
        std::cerr << "error: " << e.what() << "\n";
        return kBadInput;
    } catch (const OutputError &e) {
        std::cerr << "error: " << e.what() << "\n";
        return kBadOutput;
    } catch (const std::exception &e) {
        std::cerr << "error: " << e.what() << "\n";
        return kModuleError;
    }
    return kModuleError;
}
