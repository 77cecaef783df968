#pragma once

#include <array>
#include <cstdint>
#include <fstream>
#include <istream>
#include <optional>
#include <sstream>
#include <string>

#include <json.hpp>

#include "vspin/ensemble.hpp"
#include "vspin/errors.hpp"
#include "vspin/program.hpp"
#include "vspin/pulse_engine.hpp"
#include "vspin/readout.hpp"
#include "vspin/spin_model.hpp"

namespace vspin {

struct RunSettings {
    SpinModelConfig model;
    double tol_b = 1e-9;          // |b| below this counts as zero when decoding
    double fid_sample_rate = 0.0; // Hz; 0 = auto
    int fid_periods = 1;          // commensurate window blocks
};

namespace detail {

inline void apply_setting(RunSettings &settings, const std::string &key, const std::string &value,
                          int line_no, int column) {
    auto number = [&] {
        double d = 0.0;
        if (!parse_double(value, d)) {
            throw ParseError(line_no, column, key + ": value must be a number");
        }
        return d;
    };
    if (key == "omega0") {
        settings.model.omega0 = number();
    } else if (key == "omegaQ") {
        settings.model.omegaQ = number();
    } else if (key == "lambda_scale") {
        settings.model.lambda_scale = number();
    } else if (key == "energies") {
        std::array<double, 4> energies{};
        std::stringstream ss{value};
        std::string item;
        int count = 0;
        while (std::getline(ss, item, ',')) {
            std::string trimmed;
            for (char c : item) {
                if (!std::isspace(static_cast<unsigned char>(c))) trimmed += c;
            }
            double d = 0.0;
            if (count >= 4 || !parse_double(trimmed, d)) {
                throw ParseError(line_no, column, "energies needs 4 comma-separated numbers");
            }
            energies[count++] = d;
        }
        if (count != 4) {
            throw ParseError(line_no, column, "energies needs 4 comma-separated numbers");
        }
        settings.model.explicit_energies = energies;
    } else if (key == "tol_b") {
        settings.tol_b = number();
    } else if (key == "fid.sample_rate") {
        settings.fid_sample_rate = number();
    } else if (key == "fid.periods") {
        const double d = number();
        if (d < 1.0 || d != std::floor(d)) {
            throw ParseError(line_no, column, "fid.periods must be a positive integer");
        }
        settings.fid_periods = static_cast<int>(d);
    } else {
        throw ParseError(line_no, column, "unknown config key '" + key + "'");
    }
}

}  // namespace detail

// Flat `key = value` config: omega0, omegaQ, lambda_scale, energies, tol_b,
// fid.sample_rate, fid.periods. '#' starts a comment.
inline RunSettings parse_config(std::istream &is) {
    RunSettings settings;
    std::string line;
    int line_no = 0;
    while (std::getline(is, line)) {
        ++line_no;
        const std::size_t hash = line.find('#');
        if (hash != std::string::npos) line.resize(hash);
        const auto tokens = detail::tokenize_line(line);
        if (tokens.empty()) continue;
        if (tokens.size() < 3 || tokens[1].text != "=") {
            throw ParseError(line_no, tokens[0].column, "expected: key = value");
        }
        std::string value;
        for (std::size_t k = 2; k < tokens.size(); ++k) {
            if (k > 2) value += ' ';
            value += tokens[k].text;
        }
        detail::apply_setting(settings, std::string(tokens[0].text), value, line_no,
                              tokens[2].column);
    }
    return settings;
}

inline RunSettings load_config_file(const std::string &path) {
    std::ifstream in(path);
    if (!in) {
        throw Error("file not found: " + path);
    }
    return parse_config(in);
}

// Program `set` lines override the config's model fields.
inline RunSettings with_overrides(RunSettings settings, const Program &program) {
    int n = 0;
    for (const auto &[key, value] : program.overrides) {
        ++n;
        detail::apply_setting(settings, key, value, n, 1);
    }
    return settings;
}

struct RunRecord {
    std::string program_hash;
    SpinModel model;
    Mat4 propagator;
    std::optional<DensityMatrix> final_rho;
    std::optional<ReadoutReport> readout;
    std::optional<FidSignal> fid;
};

inline std::string fnv1a_hex(std::string_view bytes) {
    std::uint64_t h = 0xcbf29ce484222325ull;
    for (char c : bytes) {
        h ^= static_cast<unsigned char>(c);
        h *= 0x100000001b3ull;
    }
    char buf[17];
    std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

inline RunRecord run_program(const Program &program, const RunSettings &base_settings) {
    const RunSettings settings = with_overrides(base_settings, program);
    const SpinModel model = build_model(settings.model);
    const Mat4 u_comp = compose(compile(program, model));

    RunRecord record{fnv1a_hex(render_program(program)), model, u_comp, std::nullopt,
                     std::nullopt, std::nullopt};

    if (!program.prepare) {
        return record;  // propagator-only run
    }
    switch (program.prepare->kind) {
        case PrepareKind::pseudo_pure:
            record.final_rho = pseudo_pure_average(model, u_comp);
            break;
        case PrepareKind::equilibrium:
            record.final_rho = apply_unitary(equilibrium_density(model), u_comp);
            break;
        case PrepareKind::basis:
            record.final_rho =
                apply_unitary(pseudo_pure_state(model, program.prepare->basis_level), u_comp);
            break;
    }

    if (program.readout) {
        const FidWindow window = plan_fid_window(model.freq(1, 2), model.freq(3, 4),
                                                 settings.fid_periods, settings.fid_sample_rate);
        FidSignal fid;
        record.readout = run_readout(model, *record.final_rho, window, settings.tol_b, &fid);
        record.fid = std::move(fid);
    }
    return record;
}

namespace detail {

inline nlohmann::ordered_json matrix_json(const Mat4 &m) {
    nlohmann::ordered_json re = nlohmann::ordered_json::array();
    nlohmann::ordered_json im = nlohmann::ordered_json::array();
    for (int i = 1; i <= 4; ++i) {
        nlohmann::ordered_json re_row = nlohmann::ordered_json::array();
        nlohmann::ordered_json im_row = nlohmann::ordered_json::array();
        for (int j = 1; j <= 4; ++j) {
            re_row.push_back(m.at(i, j).real());
            im_row.push_back(m.at(i, j).imag());
        }
        re.push_back(re_row);
        im.push_back(im_row);
    }
    return {{"re", re}, {"im", im}};
}

}  // namespace detail

// Deterministic report: fixed key order, no timestamps, shortest round-trip floats.
inline std::string report_json(const RunRecord &record, const std::string &fid_path = "") {
    nlohmann::ordered_json j;
    j["program_hash"] = record.program_hash;

    nlohmann::ordered_json model;
    model["energies"] = record.model.energies();
    model["lambdas"] = record.model.lambdas();
    model["lambda_scale"] = record.model.lambda_scale();
    model["z"] = record.model.z();
    model["omega12"] = record.model.freq(1, 2);
    model["omega23"] = record.model.freq(2, 3);
    model["omega34"] = record.model.freq(3, 4);
    j["model"] = model;

    j["propagator"] = detail::matrix_json(record.propagator);
    if (record.final_rho) {
        j["rho"] = detail::matrix_json(record.final_rho->mat());
    }
    if (record.readout) {
        const ReadoutReport &r = *record.readout;
        nlohmann::ordered_json ro;
        ro["b12"] = r.b12;
        ro["b34"] = r.b34;
        ro["decoded"] = to_string(r.decoded);
        ro["amp12_re"] = r.amp12.real();
        ro["amp12_im"] = r.amp12.imag();
        ro["amp34_re"] = r.amp34.real();
        ro["amp34_im"] = r.amp34.imag();
        ro["ref12_re"] = r.ref12.real();
        ro["ref12_im"] = r.ref12.imag();
        ro["ref34_re"] = r.ref34.real();
        ro["ref34_im"] = r.ref34.imag();
        ro["tolerance"] = r.tolerance_used;
        j["readout"] = ro;
    }
    if (!fid_path.empty()) {
        j["fid_path"] = fid_path;
    }
    return j.dump(2) + "\n";
}

}  // namespace vspin
