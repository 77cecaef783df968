#pragma once

#include <cmath>
#include <variant>
#include <vector>

#include "vspin/complex_matrix.hpp"
#include "vspin/errors.hpp"
#include "vspin/spin_model.hpp"

namespace vspin {

enum class Polarization { x, y };

inline char polarization_char(Polarization pol) { return pol == Polarization::x ? 'x' : 'y'; }

// One transition-selective RF pulse: a rotation by `angle` in the (upper, lower)
// two-level subspace, identity elsewhere.
struct PulseSpec {
    LevelPair pair;
    Polarization polarization;
    double angle;

    PulseSpec(LevelPair p, Polarization pol, double phi) : pair(p), polarization(pol), angle(phi) {
        if (!std::isfinite(phi)) {
            throw PulseError("pulse angle must be finite");
        }
    }

    bool operator==(const PulseSpec &) const = default;
};

// Two disjoint transitions driven simultaneously (y polarization) with a
// common rotation angle; realizes a one-virtual-qubit rotation.
struct TwoFrequencyPulseSpec {
    LevelPair pair1;
    LevelPair pair2;
    double angle;

    TwoFrequencyPulseSpec(LevelPair p1, LevelPair p2, double phi)
        : pair1(p1), pair2(p2), angle(phi) {
        if (!std::isfinite(phi)) {
            throw PulseError("pulse angle must be finite");
        }
        if (pair1.overlaps(pair2)) {
            throw PulseError("pairs overlap");
        }
    }

    bool operator==(const TwoFrequencyPulseSpec &) const = default;
};

// RF amplitude (gamma * H1 product) and duration; fixes the rotation angle via
// phi = 2 * gamma_H1 * duration * |<m|I_pol|n>|.
struct PhysicalPulseParams {
    double gamma_h1;  // rad/s
    double duration;  // s

    PhysicalPulseParams(double g, double t) : gamma_h1(g), duration(t) {
        if (!(g > 0.0) || !(t >= 0.0) || !std::isfinite(g) || !std::isfinite(t)) {
            throw PulseError("physical pulse parameters must be positive and finite");
        }
    }
};

enum class NamedGate { cnot, u1, u2, u3 };

using ScheduleItem = std::variant<PulseSpec, TwoFrequencyPulseSpec, NamedGate>;

// Temporal list of pulses: items are applied in list order, so the composed
// propagator is U_k * ... * U_2 * U_1 with the first item rightmost.
struct PulseSchedule {
    std::vector<ScheduleItem> items;
};

// Eq.-(1)-style propagator for one transition. y polarization:
//   [P_mm + P_nn] cos(phi/2) + [P_kk + P_ll] + [P_nm - P_mn] sin(phi/2)
// x polarization replaces the last term by i [P_nm + P_mn] sin(phi/2).
inline Mat4 single_pulse_propagator(const PulseSpec &spec) {
    const int m = spec.pair.upper;
    const int n = spec.pair.lower;
    const double c = std::cos(spec.angle / 2.0);
    const double s = std::sin(spec.angle / 2.0);

    Mat4 u;
    for (int k = 1; k <= kLevels; ++k) {
        u.at(k, k) = (k == m || k == n) ? c : 1.0;
    }
    if (spec.polarization == Polarization::y) {
        u.at(n, m) = s;
        u.at(m, n) = -s;
    } else {
        u.at(n, m) = Complex{0.0, s};
        u.at(m, n) = Complex{0.0, s};
    }
    return u;
}

inline double angle_from_physical(const PhysicalPulseParams &params, const LevelPair &pair,
                                  Polarization pol) {
    const SpinOperators &ops = spin_operators();
    const Mat4 &op = pol == Polarization::y ? ops.iy : ops.ix;
    const double element = std::abs(op.at(pair.upper, pair.lower));
    if (element == 0.0) {
        throw PulseError("transition not driven: zero matrix element");
    }
    return 2.0 * params.gamma_h1 * params.duration * element;
}

// Product of the two commuting single-transition y propagators at the common angle.
inline Mat4 two_frequency_propagator(const TwoFrequencyPulseSpec &spec) {
    const Mat4 u1 = single_pulse_propagator({spec.pair1, Polarization::y, spec.angle});
    const Mat4 u2 = single_pulse_propagator({spec.pair2, Polarization::y, spec.angle});
    return u2 * u1;
}

// U1 = U_a(pi) U_b(pi) = P13 + P21 + P32 + P44: cycles levels 1 -> 2 -> 3 -> 1.
inline Mat4 gate_u1() {
    return projector(1, 3) + projector(2, 1) + projector(3, 2) + projector(4, 4);
}

// U2 = U_b(pi) U_a(pi) = -P12 - P23 + P31 + P44: the inverse cycle, with signs.
inline Mat4 gate_u2() {
    return projector(3, 1) + projector(4, 4) - projector(1, 2) - projector(2, 3);
}

// Readout pulse, U3 = U_a(pi/2) U_c(pi/2) = (1/sqrt2)[1 + P21 - P12 + P43 - P34].
inline Mat4 gate_u3() {
    const double inv_sqrt2 = 1.0 / std::sqrt(2.0);
    Mat4 u = Mat4::identity() + projector(2, 1) - projector(1, 2) + projector(4, 3) -
             projector(3, 4);
    return inv_sqrt2 * u;
}

// CNOT with the R qubit as control: U_f(pi) = [P33 + P44] + i [P21 + P12].
// Swaps populations of levels 1 and 2 (|11> <-> |10>) with an i phase.
inline Mat4 gate_cnot() {
    return projector(3, 3) + projector(4, 4) +
           kImag * (projector(2, 1) + projector(1, 2));
}

inline Mat4 gate_matrix(NamedGate gate) {
    switch (gate) {
        case NamedGate::cnot: return gate_cnot();
        case NamedGate::u1: return gate_u1();
        case NamedGate::u2: return gate_u2();
        case NamedGate::u3: return gate_u3();
    }
    throw PulseError("unknown named gate");
}

inline Mat4 propagator_of(const ScheduleItem &item) {
    if (const auto *single = std::get_if<PulseSpec>(&item)) {
        return single_pulse_propagator(*single);
    }
    if (const auto *dual = std::get_if<TwoFrequencyPulseSpec>(&item)) {
        return two_frequency_propagator(*dual);
    }
    return gate_matrix(std::get<NamedGate>(item));
}

inline Mat4 compose(const PulseSchedule &schedule) {
    Mat4 total = Mat4::identity();
    for (const ScheduleItem &item : schedule.items) {
        total = propagator_of(item) * total;
    }
    return total;
}

}  // namespace vspin
