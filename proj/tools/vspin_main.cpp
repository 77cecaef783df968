// Command-line front end: run pulse programs, print canonical gate matrices,
// decode b ratios, and probe FID files at the model frequencies.

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "vspin/program.hpp"
#include "vspin/pulse_engine.hpp"
#include "vspin/readout.hpp"
#include "vspin/runner.hpp"

namespace {

constexpr int kExitSimError = 1;
constexpr int kExitUsage = 2;

std::string read_text_file(const std::string &path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw std::ios_base::failure("file not found: " + path);
    }
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void print_matrix(const vspin::Mat4 &m) {
    char buf[64];
    for (int i = 1; i <= 4; ++i) {
        std::string row = " ";
        for (int j = 1; j <= 4; ++j) {
            const vspin::Complex z = m.at(i, j);
            std::snprintf(buf, sizeof(buf), " %+.6f%+.6fi", z.real(), z.imag());
            row += buf;
        }
        std::cout << row << "\n";
    }
}

void print_gates() {
    std::cout << "U1 = P13 + P21 + P32 + P44\n";
    print_matrix(vspin::gate_u1());
    std::cout << "U2 = -P12 - P23 + P31 + P44\n";
    print_matrix(vspin::gate_u2());
    std::cout << "U3 = (1/sqrt2)[1 + P21 - P12 + P43 - P34]\n";
    print_matrix(vspin::gate_u3());
    std::cout << "CNOT = P33 + P44 + i(P21 + P12)\n";
    print_matrix(vspin::gate_cnot());
    std::cout << "RY_R(pi/2) = two-frequency pulse on 1-3, 2-4\n";
    print_matrix(vspin::two_frequency_propagator(
        {vspin::LevelPair{1, 3}, vspin::LevelPair{2, 4}, M_PI / 2.0}));
    std::cout << "RY_S(pi/2) = two-frequency pulse on 1-2, 3-4\n";
    print_matrix(vspin::two_frequency_propagator(
        {vspin::LevelPair{1, 2}, vspin::LevelPair{3, 4}, M_PI / 2.0}));
}

int run_command(const std::string &program_path, const std::string &config_path,
                const std::string &out_dir, bool write_fid) {
    const std::string text = read_text_file(program_path);
    vspin::RunSettings settings;
    if (!config_path.empty()) {
        settings = vspin::load_config_file(config_path);
    }
    const vspin::Program program = vspin::parse_program(text);
    const vspin::RunRecord record = vspin::run_program(program, settings);

    std::filesystem::create_directories(out_dir);
    std::string fid_name;
    if (write_fid && record.fid) {
        fid_name = "fid.csv";
        std::ofstream fid_file(std::filesystem::path(out_dir) / fid_name, std::ios::binary);
        vspin::write_fid_csv(fid_file, *record.fid);
    }
    std::ofstream report_file(std::filesystem::path(out_dir) / "report.json", std::ios::binary);
    report_file << vspin::report_json(record, fid_name);
    report_file.close();

    if (record.readout) {
        std::cout << "decoded: " << vspin::to_string(record.readout->decoded) << "\n";
    }
    std::cout << "report: " << (std::filesystem::path(out_dir) / "report.json").string() << "\n";
    return 0;
}

int spectrum_command(const std::string &fid_path, const std::string &config_path) {
    vspin::RunSettings settings;
    if (!config_path.empty()) {
        settings = vspin::load_config_file(config_path);
    }
    const vspin::SpinModel model = vspin::build_model(settings.model);
    std::ifstream in(fid_path, std::ios::binary);
    if (!in) {
        throw std::ios_base::failure("file not found: " + fid_path);
    }
    const vspin::FidSignal fid = vspin::read_fid_csv(in, model.freq(1, 2), model.freq(3, 4));
    char buf[128];
    for (const auto &[name, omega] : {std::pair<const char *, double>{"omega12", fid.omega12},
                                      {"omega34", fid.omega34}}) {
        const vspin::Complex amp = vspin::fourier_amplitude(fid, omega);
        std::snprintf(buf, sizeof(buf), "%s %.17g amp_re %.17g amp_im %.17g\n", name, omega,
                      amp.real(), amp.imag());
        std::cout << buf;
    }
    return 0;
}

}  // namespace

int main(int argc, char **argv) {
    CLI::App app{"spin-3/2 two-virtual-qubit register simulator"};
    app.require_subcommand(1);

    auto *run = app.add_subcommand("run", "run a pulse program and write report.json");
    std::string program_path, config_path, out_dir = ".";
    bool write_fid = false;
    run->add_option("program", program_path, "pulse program file")->required();
    run->add_option("--config", config_path, "key = value config file");
    run->add_option("--out", out_dir, "output directory (default .)");
    run->add_flag("--fid", write_fid, "also write fid.csv");

    auto *gates = app.add_subcommand("gates", "print the canonical gate matrices");

    auto *decode = app.add_subcommand("decode", "decode a pair of b ratios");
    double b12 = 0.0, b34 = 0.0, tol = 1e-9;
    decode->add_option("--b12", b12, "b12 ratio")->required();
    decode->add_option("--b34", b34, "b34 ratio")->required();
    decode->add_option("--tol", tol, "zero-test tolerance (default 1e-9)");

    auto *spectrum = app.add_subcommand("spectrum", "correlation amplitudes of a FID file");
    std::string fid_path, spectrum_config;
    spectrum->add_option("fid", fid_path, "fid.csv file")->required();
    spectrum->add_option("--config", spectrum_config, "key = value config file");

    CLI11_PARSE(app, argc, argv);

    try {
        if (run->parsed()) {
            return run_command(program_path, config_path, out_dir, write_fid);
        }
        if (gates->parsed()) {
            print_gates();
            return 0;
        }
        if (decode->parsed()) {
            std::cout << vspin::to_string(vspin::decode(b12, b34, tol)) << "\n";
            return 0;
        }
        if (spectrum->parsed()) {
            return spectrum_command(fid_path, spectrum_config);
        }
    } catch (const std::ios_base::failure &e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const vspin::Error &e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitSimError;
    }
    return kExitUsage;
}
