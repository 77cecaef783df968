#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <istream>
#include <ostream>
#include <string>
#include <vector>

#include "vspin/complex_matrix.hpp"
#include "vspin/ensemble.hpp"
#include "vspin/errors.hpp"
#include "vspin/pulse_engine.hpp"
#include "vspin/spin_model.hpp"

namespace vspin {

// Free-precession signal <I+(t)> on a uniform time grid.
struct FidSignal {
    std::vector<double> times;
    std::vector<Complex> samples;
    double omega12 = 0.0;
    double omega34 = 0.0;

    double dt() const { return times.size() > 1 ? times[1] - times[0] : 0.0; }
    double window() const { return static_cast<double>(times.size()) * dt(); }
};

struct FourierAmplitudes {
    Complex amp12;
    Complex amp34;
};

enum class DecodedState { b00, b01, b10, b11, ambiguous };

inline std::string to_string(DecodedState s) {
    switch (s) {
        case DecodedState::b00: return "00";
        case DecodedState::b01: return "01";
        case DecodedState::b10: return "10";
        case DecodedState::b11: return "11";
        case DecodedState::ambiguous: return "ambiguous";
    }
    return "ambiguous";
}

struct ReadoutReport {
    double b12 = 0.0;
    double b34 = 0.0;
    DecodedState decoded = DecodedState::ambiguous;
    Complex amp12, amp34;
    Complex ref12, ref34;
    double tolerance_used = 0.0;
};

// Observation window and sampling grid for one FID acquisition.
struct FidWindow {
    double duration = 0.0;     // s
    double sample_rate = 0.0;  // Hz
    std::size_t samples = 0;
    bool commensurate = false;
};

namespace detail {

// Best rational approximation p/q of x by continued fractions, numerator and
// denominator capped. Returns {0,0} when no convergent fits the cap.
inline std::pair<std::int64_t, std::int64_t> rational_approx(double x, std::int64_t cap,
                                                             double rel_tol) {
    std::int64_t p_prev = 1, q_prev = 0;
    std::int64_t p = static_cast<std::int64_t>(std::floor(x)), q = 1;
    double frac = x - std::floor(x);
    for (int iter = 0; iter < 64; ++iter) {
        if (p > 0 && std::abs(static_cast<double>(p) / static_cast<double>(q) - x) <= rel_tol * x) {
            return {p, q};
        }
        if (frac < 1e-15) break;
        const double inv = 1.0 / frac;
        const double a_d = std::floor(inv);
        if (a_d > static_cast<double>(cap)) break;
        const std::int64_t a = static_cast<std::int64_t>(a_d);
        frac = inv - a_d;
        const std::int64_t p_next = a * p + p_prev;
        const std::int64_t q_next = a * q + q_prev;
        if (p_next > cap || q_next > cap) break;
        p_prev = p;
        q_prev = q;
        p = p_next;
        q = q_next;
    }
    return {0, 0};
}

}  // namespace detail

// Choose the acquisition window: the smallest duration that holds an integer
// number of periods of both tones (capped at 1024 periods of the faster
// tone), falling back to >= 50 periods of the slower tone when the frequency
// ratio has no small rational approximation. `blocks` repeats the minimal
// commensurate window. `sample_rate` of 0 picks a dense default; an explicit
// rate is snapped so the grid covers the window exactly.
inline FidWindow plan_fid_window(double omega12, double omega34, int blocks = 1,
                                 double sample_rate = 0.0) {
    if (!(omega12 > 0.0) || !(omega34 > 0.0)) {
        throw SignalError("tone frequencies must be positive");
    }
    if (blocks < 1) {
        throw SignalError("window block count must be >= 1");
    }
    const double omega_fast = std::max(omega12, omega34);
    const double t_fast = 2.0 * M_PI / omega_fast;
    const double t_slow = 2.0 * M_PI / std::min(omega12, omega34);

    FidWindow w;
    const auto [p, q] = detail::rational_approx(omega_fast / std::min(omega12, omega34), 1024, 1e-12);
    if (p > 0) {
        // p fast periods == q slow periods
        w.duration = static_cast<double>(blocks) * static_cast<double>(p) * t_fast;
        w.commensurate = true;
    } else {
        w.duration = std::max(50.0, static_cast<double>(blocks)) * t_slow;
        w.commensurate = false;
    }

    if (sample_rate > 0.0) {
        const double n = std::round(w.duration * sample_rate);
        if (n < 2.0) {
            throw SignalError("undersampled: window holds fewer than 2 samples");
        }
        w.samples = static_cast<std::size_t>(n);
    } else {
        const double fast_periods = w.duration / t_fast;
        w.samples = static_cast<std::size_t>(std::max(4096.0, 64.0 * std::ceil(fast_periods)));
    }
    w.sample_rate = static_cast<double>(w.samples) / w.duration;
    return w;
}

// rho_out -> U3 rho_out U3*. For diagonal input this creates the (1,2) and
// (3,4) coherences (mu1 - mu2)/2 and (mu3 - mu4)/2 that precess at Omega12,
// Omega34 in the FID.
inline DensityMatrix apply_readout_pulse(const DensityMatrix &rho_out) {
    return apply_unitary(rho_out, gate_u3());
}

// samples_k = Tr[rho(t_k) I+] with rho(t) the freely precessing state.
inline FidSignal synthesize_fid(const SpinModel &model, const DensityMatrix &rho_after_pulse,
                                double duration, double sample_rate) {
    if (!(duration > 0.0) || !(sample_rate > 0.0)) {
        throw SignalError("duration and sample rate must be positive");
    }
    const double omega12 = model.freq(1, 2);
    const double omega34 = model.freq(3, 4);
    const double dt = 1.0 / sample_rate;
    const double slow_period = 2.0 * M_PI / std::min(omega12, omega34);
    if (dt > slow_period / 16.0) {
        throw SignalError("undersampled: need at least 16 samples per period of the slow tone");
    }
    if (dt * std::max(omega12, omega34) >= M_PI) {
        throw SignalError("undersampled: fast tone at or beyond the Nyquist limit");
    }
    const auto n = static_cast<std::size_t>(std::llround(duration * sample_rate));
    if (n < 2) {
        throw SignalError("undersampled: window holds fewer than 2 samples");
    }

    const Mat4 &iplus = model.operators().iplus;
    FidSignal fid;
    fid.omega12 = omega12;
    fid.omega34 = omega34;
    fid.times.reserve(n);
    fid.samples.reserve(n);
    for (std::size_t k = 0; k < n; ++k) {
        const double t = static_cast<double>(k) * dt;
        const DensityMatrix rho_t = free_precession(model, rho_after_pulse, t);
        fid.times.push_back(t);
        fid.samples.push_back(trace(rho_t.mat() * iplus));
    }
    return fid;
}

// Complex amplitude of the tone at `omega` by direct correlation. Probes both
// phase conventions exp(-i w t) and exp(+i w t) and returns the larger match,
// so a pure tone A exp(-i w t) comes back as A.
inline Complex fourier_amplitude(const FidSignal &signal, double omega) {
    const std::size_t n = signal.samples.size();
    if (n < 2 || signal.times.size() != n) {
        throw SignalError("signal too short");
    }
    if (!(omega > 0.0)) {
        throw SignalError("probe frequency must be positive");
    }
    const double dt = signal.dt();
    if (dt * omega >= M_PI) {
        throw SignalError("undersampled: probe frequency beyond the Nyquist limit");
    }
    const double periods = omega * signal.window() / (2.0 * M_PI);
    const double nearest = std::round(periods);
    const bool commensurate = nearest >= 1.0 && std::abs(periods - nearest) <= 1e-9 * std::max(1.0, periods);
    if (!commensurate && periods < 50.0) {
        throw SignalError("non-commensurate window: need whole periods or >= 50 of them");
    }

    Complex plus = 0.0, minus = 0.0;
    for (std::size_t k = 0; k < n; ++k) {
        const Complex probe = std::polar(1.0, omega * signal.times[k]);
        plus += signal.samples[k] * probe;
        minus += signal.samples[k] * std::conj(probe);
    }
    plus /= static_cast<double>(n);
    minus /= static_cast<double>(n);
    return std::abs(plus) >= std::abs(minus) ? plus : minus;
}

inline FourierAmplitudes measure_amplitudes(const FidSignal &signal) {
    return {fourier_amplitude(signal, signal.omega12), fourier_amplitude(signal, signal.omega34)};
}

// Amplitudes of the equilibrium run: the same readout pulse and extraction
// applied to rho_eq, giving the reference Fourier components against which
// computation results are ratioed.
inline FourierAmplitudes reference_amplitudes(const SpinModel &model, const FidWindow &window) {
    if (model.lambda(1) == model.lambda(2) || model.lambda(3) == model.lambda(4)) {
        throw ReferenceError("degenerate reference: lambda differences vanish");
    }
    const DensityMatrix rho = apply_readout_pulse(equilibrium_density(model));
    const FidSignal fid = synthesize_fid(model, rho, window.duration, window.sample_rate);
    return measure_amplitudes(fid);
}

inline FourierAmplitudes reference_amplitudes(const SpinModel &model) {
    return reference_amplitudes(model, plan_fid_window(model.freq(1, 2), model.freq(3, 4)));
}

// b12 = Re(amp12/ref12) * (lambda1 - lambda2), and likewise for b34. The
// common pipeline prefactor cancels in the ratio; the lambda-difference
// factor puts the sign into the convention of the decoding table.
inline std::pair<double, double> b_ratios(const SpinModel &model, const FourierAmplitudes &meas,
                                          const FourierAmplitudes &ref) {
    if (std::abs(ref.amp12) < 1e-15 || std::abs(ref.amp34) < 1e-15) {
        throw ReferenceError("reference amplitude below threshold");
    }
    const double b12 = (meas.amp12 / ref.amp12).real() * (model.lambda(1) - model.lambda(2));
    const double b34 = (meas.amp34 / ref.amp34).real() * (model.lambda(3) - model.lambda(4));
    return {b12, b34};
}

// The four-rule table; |b| < tol counts as zero, anything off-table is ambiguous.
inline DecodedState decode(double b12, double b34, double tol) {
    if (!(tol > 0.0)) {
        throw Error("decode tolerance must be positive");
    }
    const bool zero12 = std::abs(b12) < tol;
    const bool zero34 = std::abs(b34) < tol;
    if (zero12 && !zero34) {
        return b34 < 0.0 ? DecodedState::b00 : DecodedState::b01;
    }
    if (zero34 && !zero12) {
        return b12 < 0.0 ? DecodedState::b10 : DecodedState::b11;
    }
    return DecodedState::ambiguous;
}

// CSV export: header `t,re,im`, one row per sample, full double precision.
inline void write_fid_csv(std::ostream &os, const FidSignal &signal) {
    os << "t,re,im\n";
    char buf[96];
    for (std::size_t k = 0; k < signal.samples.size(); ++k) {
        std::snprintf(buf, sizeof(buf), "%.17g,%.17g,%.17g\n", signal.times[k],
                      signal.samples[k].real(), signal.samples[k].imag());
        os << buf;
    }
}

inline FidSignal read_fid_csv(std::istream &is, double omega12, double omega34) {
    std::string line;
    if (!std::getline(is, line) || line != "t,re,im") {
        throw SignalError("fid csv: missing t,re,im header");
    }
    FidSignal fid;
    fid.omega12 = omega12;
    fid.omega34 = omega34;
    std::size_t row = 1;
    while (std::getline(is, line)) {
        ++row;
        if (line.empty()) continue;
        double t = 0.0, re = 0.0, im = 0.0;
        if (std::sscanf(line.c_str(), "%lg,%lg,%lg", &t, &re, &im) != 3) {
            throw SignalError("fid csv: malformed row " + std::to_string(row));
        }
        fid.times.push_back(t);
        fid.samples.push_back(Complex{re, im});
    }
    if (fid.times.size() < 2) {
        throw SignalError("fid csv: need at least 2 samples");
    }
    const double dt = fid.times[1] - fid.times[0];
    if (!(dt > 0.0)) {
        throw SignalError("fid csv: sample times must increase");
    }
    for (std::size_t k = 1; k < fid.times.size(); ++k) {
        const double step = fid.times[k] - fid.times[k - 1];
        if (std::abs(step - dt) > 1e-9 * dt) {
            throw SignalError("fid csv: non-uniform sample spacing");
        }
    }
    return fid;
}

// Full measurement pipeline: readout pulse, FID synthesis, Fourier extraction,
// reference run, b ratios, decode.
inline ReadoutReport run_readout(const SpinModel &model, const DensityMatrix &rho_out,
                                 const FidWindow &window, double tol, FidSignal *fid_out = nullptr) {
    const DensityMatrix rho_pulse = apply_readout_pulse(rho_out);
    const FidSignal fid = synthesize_fid(model, rho_pulse, window.duration, window.sample_rate);
    const FourierAmplitudes meas = measure_amplitudes(fid);
    const FourierAmplitudes ref = reference_amplitudes(model, window);
    const auto [b12, b34] = b_ratios(model, meas, ref);

    ReadoutReport report;
    report.b12 = b12;
    report.b34 = b34;
    report.decoded = decode(b12, b34, tol);
    report.amp12 = meas.amp12;
    report.amp34 = meas.amp34;
    report.ref12 = ref.amp12;
    report.ref34 = ref.amp34;
    report.tolerance_used = tol;
    if (fid_out != nullptr) {
        *fid_out = fid;
    }
    return report;
}

}  // namespace vspin
