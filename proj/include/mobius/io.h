#ifndef MOBIUS_IO_H
#define MOBIUS_IO_H

#include <filesystem>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "mobius/analysis.h"
#include "mobius/code_lattice.h"
#include "mobius/decoder.h"
#include "mobius/noise_sim.h"
#include "mobius/unified_lattice.h"

namespace mobius {

using ojson = nlohmann::ordered_json;

class InputError : public std::runtime_error {
    using std::runtime_error::runtime_error;
};

class OutputError : public std::runtime_error {
    using std::runtime_error::runtime_error;
};

const char *qubit_class_name(QubitClass c);
const char *edge_via_name(EdgeVia v);

ojson lattice_to_json(const CodeLattice &lattice);
ojson unified_to_json(const UnifiedLattice &unified);

/// An error read from a file: a JSON array of qubit indices, a JSON object
/// with "qubits" (and optionally "d"), or whitespace-separated integers.
struct ErrorInput {
    std::optional<int> d;
    std::vector<uint32_t> qubits;
};

ErrorInput parse_error_input(const std::string &text);

ojson decode_to_json(const CodeLattice &lattice, const PauliXError &error, const DecodeResult &result);

inline constexpr const char *kCsvHeader = "d,p,trials,failures,p_fail,stderr,seed,variant";

std::string mc_csv_row(const MCResult &r);
std::string mc_to_csv(const std::vector<MCResult> &rows);
std::vector<MCResult> parse_mc_csv(const std::string &text);

std::string failure_line(int d, const std::vector<uint32_t> &support);
ojson exhaust_to_json(const ExhaustResult &r);

ojson lowp_to_json(const LowPFit &fit);
ojson threshold_to_json(const ThresholdFit &fit);

std::string read_text(const std::filesystem::path &path);
/// Writes through a sibling temporary file and renames it into place.
void atomic_write(const std::filesystem::path &path, const std::string &content);

}  // namespace mobius

#endif
