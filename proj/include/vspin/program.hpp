#pragma once

#include <cctype>
#include <charconv>
#include <cmath>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "vspin/errors.hpp"
#include "vspin/pulse_engine.hpp"
#include "vspin/spin_model.hpp"

namespace vspin {

enum class PrepareKind { pseudo_pure, equilibrium, basis };

struct PrepareStage {
    PrepareKind kind = PrepareKind::pseudo_pure;
    int basis_level = 4;

    bool operator==(const PrepareStage &) const = default;
};

struct CircuitOp {
    enum class Kind { ry_r, ry_s, pulse, pulse2, cnot, u1, u2, u3 };

    Kind kind;
    double angle = 0.0;
    Polarization pol = Polarization::y;
    LevelPair pair1{1, 2};
    LevelPair pair2{3, 4};

    bool operator==(const CircuitOp &) const = default;

    static CircuitOp rotation_r(double phi) { return {Kind::ry_r, phi}; }
    static CircuitOp rotation_s(double phi) { return {Kind::ry_s, phi}; }
    static CircuitOp named(Kind k) { return {k, 0.0}; }
    static CircuitOp single(LevelPair pair, Polarization pol, double phi) {
        return {Kind::pulse, phi, pol, pair};
    }
    static CircuitOp dual(LevelPair a, LevelPair b, Polarization pol, double phi) {
        return {Kind::pulse2, phi, pol, a, b};
    }
};

struct Program {
    std::optional<PrepareStage> prepare;
    std::vector<CircuitOp> ops;
    bool readout = false;
    // `set key = value` model overrides, in source order, values kept verbatim.
    std::vector<std::pair<std::string, std::string>> overrides;

    bool operator==(const Program &) const = default;
};

namespace detail {

struct Token {
    std::string_view text;
    int column;  // 1-based
};

inline std::vector<Token> tokenize_line(std::string_view line) {
    std::vector<Token> tokens;
    std::size_t i = 0;
    while (i < line.size()) {
        if (std::isspace(static_cast<unsigned char>(line[i]))) {
            ++i;
            continue;
        }
        const std::size_t start = i;
        while (i < line.size() && !std::isspace(static_cast<unsigned char>(line[i]))) ++i;
        tokens.push_back({line.substr(start, i - start), static_cast<int>(start) + 1});
    }
    return tokens;
}

inline bool parse_double(std::string_view text, double &out) {
    const char *first = text.data();
    const char *last = text.data() + text.size();
    const auto [ptr, ec] = std::from_chars(first, last, out);
    return ec == std::errc() && ptr == last;
}

// ANGLE := decimal | 'pi' | 'pi/2' | 'pi/4' | decimal '*pi', optionally signed.
inline bool parse_angle(std::string_view text, double &out) {
    double sign = 1.0;
    if (!text.empty() && (text.front() == '-' || text.front() == '+')) {
        if (text.front() == '-') sign = -1.0;
        text.remove_prefix(1);
    }
    if (text == "pi") {
        out = sign * M_PI;
        return true;
    }
    if (text == "pi/2") {
        out = sign * M_PI / 2.0;
        return true;
    }
    if (text == "pi/4") {
        out = sign * M_PI / 4.0;
        return true;
    }
    if (text.size() > 3 && text.substr(text.size() - 3) == "*pi") {
        double factor = 0.0;
        if (!parse_double(text.substr(0, text.size() - 3), factor)) return false;
        out = sign * factor * M_PI;
        return true;
    }
    double value = 0.0;
    if (!parse_double(text, value)) return false;
    out = sign * value;
    return true;
}

inline LevelPair parse_pair(std::string_view text, int line_no, int column) {
    const std::size_t dash = text.find('-');
    int upper = 0, lower = 0;
    bool ok = dash != std::string_view::npos && dash > 0 && dash + 1 < text.size();
    if (ok) {
        const auto up = text.substr(0, dash);
        const auto lo = text.substr(dash + 1);
        auto to_int = [](std::string_view s, int &v) {
            const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
            return ec == std::errc() && ptr == s.data() + s.size();
        };
        ok = to_int(up, upper) && to_int(lo, lower);
    }
    if (!ok) {
        throw ParseError(line_no, column, "expected level pair M-N");
    }
    if (upper < 1 || upper > kLevels || lower < 1 || lower > kLevels) {
        throw ParseError(line_no, column, "level index out of range 1..4");
    }
    if (upper >= lower) {
        throw ParseError(line_no, column,
                         "pair must be written upper-lower (E_upper > E_lower), e.g. 1-2");
    }
    return LevelPair{upper, lower};
}

// Shortest decimal that round-trips to the same double.
inline std::string double_text(double v) {
    char buf[64];
    const auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf) - 1, v);
    (void)ec;
    *ptr = '\0';
    return buf;
}

inline bool is_model_key(std::string_view key) {
    return key == "omega0" || key == "omegaQ" || key == "lambda_scale" || key == "energies";
}

inline bool valid_number_list(std::string_view value, std::size_t expected) {
    std::size_t count = 0;
    while (true) {
        const std::size_t comma = value.find(',');
        const std::string_view item =
            comma == std::string_view::npos ? value : value.substr(0, comma);
        double d = 0.0;
        std::string trimmed;
        for (char c : item) {
            if (!std::isspace(static_cast<unsigned char>(c))) trimmed += c;
        }
        if (!parse_double(trimmed, d)) return false;
        ++count;
        if (comma == std::string_view::npos) break;
        value.remove_prefix(comma + 1);
    }
    return count == expected;
}

}  // namespace detail

inline Program parse_program(std::string_view text) {
    using detail::Token;
    Program program;
    int line_no = 0;
    std::size_t pos = 0;
    while (pos <= text.size()) {
        const std::size_t eol = text.find('\n', pos);
        std::string_view line = text.substr(pos, eol == std::string_view::npos ? text.size() - pos
                                                                               : eol - pos);
        pos = eol == std::string_view::npos ? text.size() + 1 : eol + 1;
        ++line_no;

        const std::size_t hash = line.find('#');
        if (hash != std::string_view::npos) line = line.substr(0, hash);
        const std::vector<Token> tokens = detail::tokenize_line(line);
        if (tokens.empty()) continue;

        const Token &head = tokens.front();
        auto need = [&](std::size_t count, const char *what) {
            if (tokens.size() != count) {
                throw ParseError(line_no, head.column,
                                 std::string("expected: ") + what);
            }
        };
        auto angle_of = [&](const Token &tok) {
            double phi = 0.0;
            if (!detail::parse_angle(tok.text, phi) || !std::isfinite(phi)) {
                throw ParseError(line_no, tok.column, "bad angle (decimal, pi, pi/2, pi/4, or N*pi)");
            }
            return phi;
        };
        auto pol_of = [&](const Token &tok) {
            if (tok.text == "x") return Polarization::x;
            if (tok.text == "y") return Polarization::y;
            throw ParseError(line_no, tok.column, "polarization must be x or y");
        };
        auto check_before_readout = [&] {
            if (program.readout) {
                throw ParseError(line_no, head.column, "statement after readout");
            }
        };

        if (head.text == "prepare") {
            check_before_readout();
            if (program.prepare) {
                throw ParseError(line_no, head.column, "duplicate prepare");
            }
            if (tokens.size() == 2 && tokens[1].text == "pseudo_pure") {
                program.prepare = PrepareStage{PrepareKind::pseudo_pure, 4};
            } else if (tokens.size() == 2 && tokens[1].text == "equilibrium") {
                program.prepare = PrepareStage{PrepareKind::equilibrium, 4};
            } else if (tokens.size() == 3 && tokens[1].text == "basis") {
                int level = 0;
                const char *lvl_end = tokens[2].text.data() + tokens[2].text.size();
                const auto res = std::from_chars(tokens[2].text.data(), lvl_end, level);
                if (res.ec != std::errc() || res.ptr != lvl_end) {
                    throw ParseError(line_no, tokens[2].column, "basis level must be an integer");
                }
                if (level < 1 || level > kLevels) {
                    throw ParseError(line_no, tokens[2].column, "basis level out of range 1..4");
                }
                program.prepare = PrepareStage{PrepareKind::basis, level};
            } else {
                throw ParseError(line_no, head.column,
                                 "expected: prepare pseudo_pure|equilibrium|basis N");
            }
        } else if (head.text == "pulse") {
            check_before_readout();
            need(4, "pulse POL M-N ANGLE");
            const Polarization pol = pol_of(tokens[1]);
            const LevelPair pair = detail::parse_pair(tokens[2].text, line_no, tokens[2].column);
            program.ops.push_back(CircuitOp::single(pair, pol, angle_of(tokens[3])));
        } else if (head.text == "pulse2") {
            check_before_readout();
            need(5, "pulse2 POL M-N K-L ANGLE");
            const Polarization pol = pol_of(tokens[1]);
            const LevelPair p1 = detail::parse_pair(tokens[2].text, line_no, tokens[2].column);
            const LevelPair p2 = detail::parse_pair(tokens[3].text, line_no, tokens[3].column);
            if (p1.overlaps(p2)) {
                throw ParseError(line_no, tokens[3].column, "pulse2 pairs overlap");
            }
            program.ops.push_back(CircuitOp::dual(p1, p2, pol, angle_of(tokens[4])));
        } else if (head.text == "gate") {
            check_before_readout();
            need(2, "gate cnot|u1|u2|u3");
            const std::string_view name = tokens[1].text;
            if (name == "cnot") {
                program.ops.push_back(CircuitOp::named(CircuitOp::Kind::cnot));
            } else if (name == "u1") {
                program.ops.push_back(CircuitOp::named(CircuitOp::Kind::u1));
            } else if (name == "u2") {
                program.ops.push_back(CircuitOp::named(CircuitOp::Kind::u2));
            } else if (name == "u3") {
                program.ops.push_back(CircuitOp::named(CircuitOp::Kind::u3));
            } else {
                throw ParseError(line_no, tokens[1].column, "unknown gate (cnot, u1, u2, u3)");
            }
        } else if (head.text == "ry_r" || head.text == "ry_s") {
            check_before_readout();
            need(2, "ry_r ANGLE / ry_s ANGLE");
            const double phi = angle_of(tokens[1]);
            program.ops.push_back(head.text == "ry_r" ? CircuitOp::rotation_r(phi)
                                                      : CircuitOp::rotation_s(phi));
        } else if (head.text == "readout") {
            check_before_readout();
            need(1, "readout");
            if (!program.prepare) {
                throw ParseError(line_no, head.column, "readout requires a preparation stage");
            }
            program.readout = true;
        } else if (head.text == "set") {
            check_before_readout();
            // set KEY = VALUE, VALUE runs to end of line
            if (tokens.size() < 4 || tokens[2].text != "=") {
                throw ParseError(line_no, head.column, "expected: set KEY = VALUE");
            }
            const std::string key(tokens[1].text);
            if (!detail::is_model_key(key)) {
                throw ParseError(line_no, tokens[1].column,
                                 "unknown key (omega0, omegaQ, lambda_scale, energies)");
            }
            std::string value;
            for (std::size_t k = 3; k < tokens.size(); ++k) {
                if (k > 3) value += ' ';
                value += tokens[k].text;
            }
            double d = 0.0;
            const bool ok = key == "energies" ? detail::valid_number_list(value, 4)
                                              : detail::parse_double(value, d);
            if (!ok) {
                throw ParseError(line_no, tokens[3].column,
                                 key == "energies" ? "energies needs 4 comma-separated numbers"
                                                   : "value must be a number");
            }
            program.overrides.emplace_back(key, value);
        } else {
            throw ParseError(line_no, head.column,
                             "unknown statement '" + std::string(head.text) + "'");
        }
    }
    return program;
}

// Canonical text form; parse_program(render_program(p)) == p.
inline std::string render_program(const Program &program) {
    std::string out;
    for (const auto &[key, value] : program.overrides) {
        out += "set " + key + " = " + value + "\n";
    }
    if (program.prepare) {
        switch (program.prepare->kind) {
            case PrepareKind::pseudo_pure: out += "prepare pseudo_pure\n"; break;
            case PrepareKind::equilibrium: out += "prepare equilibrium\n"; break;
            case PrepareKind::basis:
                out += "prepare basis " + std::to_string(program.prepare->basis_level) + "\n";
                break;
        }
    }
    auto pair_text = [](const LevelPair &p) {
        return std::to_string(p.upper) + "-" + std::to_string(p.lower);
    };
    for (const CircuitOp &op : program.ops) {
        switch (op.kind) {
            case CircuitOp::Kind::ry_r:
                out += "ry_r " + detail::double_text(op.angle) + "\n";
                break;
            case CircuitOp::Kind::ry_s:
                out += "ry_s " + detail::double_text(op.angle) + "\n";
                break;
            case CircuitOp::Kind::pulse:
                out += std::string("pulse ") + polarization_char(op.pol) + " " +
                       pair_text(op.pair1) + " " + detail::double_text(op.angle) + "\n";
                break;
            case CircuitOp::Kind::pulse2:
                out += std::string("pulse2 ") + polarization_char(op.pol) + " " +
                       pair_text(op.pair1) + " " + pair_text(op.pair2) + " " +
                       detail::double_text(op.angle) + "\n";
                break;
            case CircuitOp::Kind::cnot: out += "gate cnot\n"; break;
            case CircuitOp::Kind::u1: out += "gate u1\n"; break;
            case CircuitOp::Kind::u2: out += "gate u2\n"; break;
            case CircuitOp::Kind::u3: out += "gate u3\n"; break;
        }
    }
    if (program.readout) {
        out += "readout\n";
    }
    return out;
}

// Lower abstract ops to transition-selective pulses. Named gates expand to
// their defining sequences; x-polarized pulse2 becomes the two commuting
// single-transition pulses it abbreviates.
inline PulseSchedule compile(const Program &program, const SpinModel &model) {
    (void)model;  // pulse construction is level-based; the model fixes frequencies downstream
    PulseSchedule schedule;
    const double half_pi = M_PI / 2.0;
    for (const CircuitOp &op : program.ops) {
        switch (op.kind) {
            case CircuitOp::Kind::ry_s:
                schedule.items.push_back(
                    TwoFrequencyPulseSpec{LevelPair{1, 2}, LevelPair{3, 4}, op.angle});
                break;
            case CircuitOp::Kind::ry_r:
                schedule.items.push_back(
                    TwoFrequencyPulseSpec{LevelPair{1, 3}, LevelPair{2, 4}, op.angle});
                break;
            case CircuitOp::Kind::cnot:
                schedule.items.push_back(PulseSpec{LevelPair{1, 2}, Polarization::x, M_PI});
                break;
            case CircuitOp::Kind::u1:
                schedule.items.push_back(PulseSpec{LevelPair{2, 3}, Polarization::y, M_PI});
                schedule.items.push_back(PulseSpec{LevelPair{1, 2}, Polarization::y, M_PI});
                break;
            case CircuitOp::Kind::u2:
                schedule.items.push_back(PulseSpec{LevelPair{1, 2}, Polarization::y, M_PI});
                schedule.items.push_back(PulseSpec{LevelPair{2, 3}, Polarization::y, M_PI});
                break;
            case CircuitOp::Kind::u3:
                schedule.items.push_back(PulseSpec{LevelPair{3, 4}, Polarization::y, half_pi});
                schedule.items.push_back(PulseSpec{LevelPair{1, 2}, Polarization::y, half_pi});
                break;
            case CircuitOp::Kind::pulse:
                schedule.items.push_back(PulseSpec{op.pair1, op.pol, op.angle});
                break;
            case CircuitOp::Kind::pulse2:
                if (op.pol == Polarization::y) {
                    schedule.items.push_back(TwoFrequencyPulseSpec{op.pair1, op.pair2, op.angle});
                } else {
                    schedule.items.push_back(PulseSpec{op.pair1, Polarization::x, op.angle});
                    schedule.items.push_back(PulseSpec{op.pair2, Polarization::x, op.angle});
                }
                break;
        }
    }
    return schedule;
}

}  // namespace vspin
