#include "mobius/io.h"

#include <cerrno>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <sstream>
#include <unistd.h>

namespace mobius {

const char *qubit_class_name(QubitClass c) {
    switch (c) {
        case QubitClass::Bulk:
            return "bulk";
        case QubitClass::Boundary:
            return "boundary";
        case QubitClass::Corner:
            return "corner";
    }
    return "?";
}

const char *edge_via_name(EdgeVia v) {
    switch (v) {
        case EdgeVia::Bulk:
            return "bulk";
        case EdgeVia::Crease:
            return "crease";
        case EdgeVia::Corner:
            return "corner";
    }
    return "?";
}

namespace {

std::string color_str(Color c) { return std::string(1, color_char(c)); }

}  // namespace

ojson lattice_to_json(const CodeLattice &lattice) {
    ojson doc;
    doc["d"] = lattice.distance();
    ojson qubits = ojson::array();
    for (uint32_t q = 0; q < lattice.num_qubits(); q++) {
        ojson entry;
        entry["id"] = q;
        QubitKind kind = lattice.kind(q);
        entry["class"] = qubit_class_name(kind.cls);
        if (kind.cls != QubitClass::Bulk) {
            entry["color"] = color_str(kind.color);
        }
        entry["coord"] = {lattice.coord(q).i, lattice.coord(q).j};
        qubits.push_back(std::move(entry));
    }
    doc["qubits"] = std::move(qubits);
    ojson faces = ojson::array();
    for (uint32_t f = 0; f < lattice.num_faces(); f++) {
        ojson entry;
        entry["id"] = f;
        entry["color"] = color_str(lattice.face(f).color);
        entry["support"] = lattice.face(f).support;
        faces.push_back(std::move(entry));
    }
    doc["faces"] = std::move(faces);
    ojson boundaries;
    ojson corners;
    for (Color c : kColors) {
        auto b = lattice.boundary(c);
        boundaries[color_str(c)] = std::vector<uint32_t>(b.begin(), b.end());
        corners[color_str(c)] = lattice.corner(c);
    }
    doc["boundaries"] = std::move(boundaries);
    doc["corners"] = std::move(corners);
    return doc;
}

ojson unified_to_json(const UnifiedLattice &unified) {
    ojson doc;
    doc["d"] = unified.lattice().distance();
    ojson nodes = ojson::array();
    for (uint32_t i = 0; i < unified.num_nodes(); i++) {
        const UNode &n = unified.node(i);
        ojson entry;
        entry["id"] = i;
        entry["face"] = n.face;
        entry["panel"] = panel_name(n.panel);
        nodes.push_back(std::move(entry));
    }
    doc["nodes"] = std::move(nodes);
    ojson edges = ojson::array();
    for (const UnitEdge &e : unified.unit_edges()) {
        ojson entry;
        entry["nodes"] = {e.a, e.b};
        entry["weight"] = e.weight;
        entry["via"] = edge_via_name(e.via);
        if (e.via != EdgeVia::Bulk) {
            entry["via_color"] = color_str(e.via_color);
        }
        entry["crosses_green"] = e.crosses_green;
        entry["source_qubits"] = e.source_qubits;
        edges.push_back(std::move(entry));
    }
    doc["unit_edges"] = std::move(edges);
    return doc;
}

namespace {

std::vector<uint32_t> qubit_list(const nlohmann::json &arr) {
    if (!arr.is_array()) {
        throw InputError("qubit list must be a JSON array");
    }
    std::vector<uint32_t> out;
    for (const auto &v : arr) {
        if (!v.is_number_integer() || v.get<int64_t>() < 0 || v.get<int64_t>() > UINT32_MAX) {
            throw InputError("qubit indices must be non-negative integers");
        }
        out.push_back(v.get<uint32_t>());
    }
    return out;
}

}  // namespace

ErrorInput parse_error_input(const std::string &text) {
    size_t first = text.find_first_not_of(" \t\r\n");
    ErrorInput input;
    if (first == std::string::npos) {
        return input;
    }
    if (text[first] == '[' || text[first] == '{') {
        nlohmann::json doc;
        try {
            doc = nlohmann::json::parse(text);
        } catch (const nlohmann::json::exception &e) {
            throw InputError(std::string("malformed error JSON: ") + e.what());
        }
        if (doc.is_array()) {
            input.qubits = qubit_list(doc);
            return input;
        }
        if (!doc.contains("qubits")) {
            throw InputError("error JSON object needs a \"qubits\" array");
        }
        input.qubits = qubit_list(doc["qubits"]);
        if (doc.contains("d")) {
            if (!doc["d"].is_number_integer()) {
                throw InputError("\"d\" must be an integer");
            }
            input.d = doc["d"].get<int>();
        }
        return input;
    }
    std::istringstream in(text);
    std::string token;
    while (in >> token) {
        try {
            size_t used = 0;
            long long v = std::stoll(token, &used);
            if (used != token.size() || v < 0 || v > UINT32_MAX) {
                throw std::invalid_argument(token);
            }
            input.qubits.push_back(static_cast<uint32_t>(v));
        } catch (const std::exception &) {
            throw InputError("not a qubit index: '" + token + "'");
        }
    }
    return input;
}

ojson decode_to_json(const CodeLattice &lattice, const PauliXError &error, const DecodeResult &result) {
    ojson doc;
    ojson defects = ojson::array();
    for (const Defect &d : lattice.syndrome(error).defects) {
        defects.push_back(d.face);
    }
    doc["defects"] = std::move(defects);
    doc["ell_or"] = result.ell_or;
    doc["ell_alt"] = result.ell_alt ? ojson(*result.ell_alt) : ojson(nullptr);
    doc["predicted_parity"] = result.predicted_parity ? 1 : 0;
    doc["variant"] = matching_variant_name(result.variant);
    doc["success"] = result.predicted_parity == lattice.logical_parity(error, Color::G);
    return doc;
}

namespace {

std::string fmt_real(double x) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.12g", x);
    return buf;
}

}  // namespace

std::string mc_csv_row(const MCResult &r) {
    std::ostringstream out;
    out << r.d << ',' << fmt_real(r.p) << ',' << r.trials << ',' << r.failures << ',' << fmt_real(r.p_fail) << ','
        << fmt_real(r.std_err) << ',' << r.seed << ',' << decoder_kind_name(r.variant);
    return out.str();
}

std::string mc_to_csv(const std::vector<MCResult> &rows) {
    std::string out = std::string(kCsvHeader) + "\n";
    for (const MCResult &r : rows) {
        out += mc_csv_row(r) + "\n";
    }
    return out;
}

std::vector<MCResult> parse_mc_csv(const std::string &text) {
    std::istringstream in(text);
    std::string line;
    if (!std::getline(in, line) || line.substr(0, line.find_last_not_of("\r") + 1) != kCsvHeader) {
        throw InputError(std::string("CSV header must be '") + kCsvHeader + "'");
    }
    std::vector<MCResult> rows;
    size_t lineno = 1;
    while (std::getline(in, line)) {
        lineno++;
        if (!line.empty() && line.back() == '\r') {
            line.pop_back();
        }
        if (line.empty()) {
            continue;
        }
        std::vector<std::string> cells;
        std::istringstream ls(line);
        std::string cell;
        while (std::getline(ls, cell, ',')) {
            cells.push_back(cell);
        }
        if (cells.size() != 8) {
            throw InputError("CSV line " + std::to_string(lineno) + ": expected 8 columns");
        }
        try {
            MCResult r;
            r.d = std::stoi(cells[0]);
            r.p = std::stod(cells[1]);
            r.trials = std::stoull(cells[2]);
            r.failures = std::stoull(cells[3]);
            r.p_fail = std::stod(cells[4]);
            r.std_err = std::stod(cells[5]);
            r.seed = std::stoull(cells[6]);
            r.variant = parse_decoder_kind(cells[7]);
            rows.push_back(r);
        } catch (const std::exception &e) {
            throw InputError("CSV line " + std::to_string(lineno) + ": " + e.what());
        }
    }
    return rows;
}

std::string failure_line(int d, const std::vector<uint32_t> &support) {
    ojson doc;
    doc["d"] = d;
    doc["support"] = support;
    return doc.dump();
}

ojson exhaust_to_json(const ExhaustResult &r) {
    ojson doc;
    doc["d"] = r.d;
    doc["w_max"] = r.w_max;
    doc["configs_tested"] = r.configs_tested;
    doc["failures"] = r.failures;
    return doc;
}

ojson lowp_to_json(const LowPFit &fit) {
    ojson doc;
    ojson params;
    params["alpha"] = fit.alpha;
    params["gamma"] = fit.gamma;
    params["N"] = fit.N;
    params["beta"] = fit.beta;
    doc["params"] = std::move(params);
    doc["alpha_band"] = {fit.alpha_band.first, fit.alpha_band.second};
    ojson per_d = ojson::array();
    for (const LowPPerD &x : fit.per_d) {
        ojson e;
        e["d"] = x.d;
        e["G"] = x.gradient;
        e["A"] = x.intercept;
        e["points"] = x.points;
        per_d.push_back(std::move(e));
    }
    doc["per_d"] = std::move(per_d);
    doc["discard_threshold"] = fit.discard_threshold;
    doc["discarded_points"] = fit.discarded_points;
    return doc;
}

ojson threshold_to_json(const ThresholdFit &fit) {
    ojson doc;
    ojson params;
    params["p_c"] = fit.p_c;
    params["nu0"] = fit.nu0;
    params["A"] = fit.A;
    params["B"] = fit.B;
    params["C"] = fit.C;
    doc["params"] = std::move(params);
    doc["residual"] = fit.residual;
    doc["window"] = {fit.window.first, fit.window.second};
    doc["points"] = fit.points;
    doc["weighted"] = fit.weighted;
    doc["discarded_points"] = fit.discarded_points;
    return doc;
}

std::string read_text(const std::filesystem::path &path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw InputError("cannot read '" + path.string() + "'");
    }
    std::ostringstream buf;
    buf << in.rdbuf();
    if (in.bad()) {
        throw InputError("error while reading '" + path.string() + "'");
    }
    return buf.str();
}

void atomic_write(const std::filesystem::path &path, const std::string &content) {
    std::filesystem::path tmp = path;
    tmp += ".tmp." + std::to_string(::getpid());
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) {
            throw OutputError("cannot write '" + tmp.string() + "'");
        }
        out << content;
        out.flush();
        if (!out) {
            std::error_code ec;
            std::filesystem::remove(tmp, ec);
            throw OutputError("error while writing '" + tmp.string() + "'");
        }
    }
    std::error_code ec;
    std::filesystem::rename(tmp, path, ec);
    if (ec) {
        std::filesystem::remove(tmp, ec);
        throw OutputError("cannot move output into '" + path.string() + "'");
    }
}

}  // namespace mobius
