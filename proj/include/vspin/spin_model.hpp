#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <optional>
#include <utility>

#include "vspin/complex_matrix.hpp"
#include "vspin/errors.hpp"

namespace vspin {

// Level labels 1..4 correspond to m_z = -3/2, -1/2, +1/2, +3/2 and are
// ordered by decreasing energy (E1 > E2 > E3 > E4).
inline constexpr int kLevels = 4;

inline void check_level(int m) {
    if (m < 1 || m > kLevels) {
        throw ModelError("level index out of range: " + std::to_string(m));
    }
}

// P_mn: single unit entry at row m, column n. P_kl * P_mn = delta_lm * P_kn.
inline Mat4 projector(int m, int n) {
    check_level(m);
    check_level(n);
    return Mat4::unit(static_cast<std::size_t>(m), static_cast<std::size_t>(n));
}

// 2x2 unit matrix R_rc / S_rc in a virtual-qubit factor space.
// Index 1 is the logical |1> component, index 2 the logical |0> component.
inline Mat2 unit2(int r, int c) {
    if (r < 1 || r > 2 || c < 1 || c > 2) {
        throw ModelError("virtual spin index out of range");
    }
    return Mat2::unit(static_cast<std::size_t>(r), static_cast<std::size_t>(c));
}

// Level m as a pair of logical bits (r_bit, s_bit):
// 1 -> (1,1), 2 -> (1,0), 3 -> (0,1), 4 -> (0,0).
inline std::pair<int, int> virtual_index(int m) {
    check_level(m);
    const int r_bit = m <= 2 ? 1 : 0;
    const int s_bit = (m == 1 || m == 3) ? 1 : 0;
    return {r_bit, s_bit};
}

inline int level_of(int r_bit, int s_bit) {
    if ((r_bit != 0 && r_bit != 1) || (s_bit != 0 && s_bit != 1)) {
        throw ModelError("virtual bits must be 0 or 1");
    }
    return (1 - r_bit) * 2 + (1 - s_bit) + 1;
}

// kron(opR, opS) in the level basis; embed_two_qubit(unit2(2,2), Mat2::identity())
// is the projector onto levels {3,4}, i.e. |0><0| on the R qubit.
inline Mat4 embed_two_qubit(const Mat2 &op_r, const Mat2 &op_s) {
    return kron(op_r, op_s);
}

struct SpinOperators {
    Mat4 ix, iy, iz, iplus;
};

// Standard spin-3/2 operators in the level basis.
inline const SpinOperators &spin_operators() {
    static const SpinOperators ops = [] {
        const double root3 = std::sqrt(3.0);
        Mat4 iplus;
        iplus.at(2, 1) = root3;
        iplus.at(3, 2) = 2.0;
        iplus.at(4, 3) = root3;
        const Mat4 iminus = adjoint(iplus);
        SpinOperators o;
        o.iplus = iplus;
        o.ix = 0.5 * (iplus + iminus);
        o.iy = Complex{0.0, -0.5} * (iplus - iminus);
        o.iz = Mat4::from_rows({-1.5, 0, 0, 0,    //
                                0, -0.5, 0, 0,    //
                                0, 0, 0.5, 0,     //
                                0, 0, 0, 1.5});
        return o;
    }();
    return ops;
}

// Transition m-n with E_m > E_n, i.e. upper index numerically smaller.
struct LevelPair {
    int upper;
    int lower;

    LevelPair(int m, int n) : upper(m), lower(n) {
        check_level(m);
        check_level(n);
        if (m >= n) {
            throw ModelError("level pair must be written upper-lower with upper < lower (E_m > E_n)");
        }
    }

    bool operator==(const LevelPair &other) const = default;

    bool overlaps(const LevelPair &other) const {
        return upper == other.upper || upper == other.lower || lower == other.upper ||
               lower == other.lower;
    }
};

struct SpinModelConfig {
    double omega0 = 10.0;       // Zeeman scale, rad/s
    double omegaQ = 1.0;        // quadrupole scale, rad/s
    double lambda_scale = 1e-5; // magnitude of the largest |lambda_m|
    std::optional<std::array<double, 4>> explicit_energies;
};

class SpinModel {
  public:
    double energy(int m) const {
        check_level(m);
        return energies_[m - 1];
    }

    double lambda(int m) const {
        check_level(m);
        return lambdas_[m - 1];
    }

    const std::array<double, 4> &energies() const { return energies_; }
    const std::array<double, 4> &lambdas() const { return lambdas_; }

    // Normalization of the high-temperature equilibrium state: Z * (4 + sum lambda) = 1.
    double z() const { return z_; }

    double lambda_scale() const { return lambda_scale_; }

    // Omega_mn = E_m - E_n (rad/s, hbar = 1); antisymmetric and additive.
    double freq(int m, int n) const { return energy(m) - energy(n); }

    const SpinOperators &operators() const { return spin_operators(); }

    friend SpinModel build_model(const SpinModelConfig &cfg);

  private:
    SpinModel() = default;

    std::array<double, 4> energies_{};
    std::array<double, 4> lambdas_{};
    double z_ = 0.25;
    double lambda_scale_ = 0.0;
};

// H0 = sum_m E_m P_mm.
inline Mat4 free_hamiltonian(const SpinModel &model) {
    Mat4 h;
    for (int m = 1; m <= kLevels; ++m) {
        h.at(m, m) = model.energy(m);
    }
    return h;
}

inline SpinModel build_model(const SpinModelConfig &cfg) {
    std::array<double, 4> energies{};
    if (cfg.explicit_energies) {
        energies = *cfg.explicit_energies;
    } else {
        // First-order axial quadrupole + Zeeman spectrum, E(m_z) = -w0*m_z + wQ*(m_z^2 - 5/4),
        // listed for m_z = -3/2..+3/2 so that label 1 carries the highest energy.
        const std::array<double, 4> mz = {-1.5, -0.5, 0.5, 1.5};
        for (int i = 0; i < 4; ++i) {
            energies[i] = -cfg.omega0 * mz[i] + cfg.omegaQ * (mz[i] * mz[i] - 1.25);
        }
    }
    for (double e : energies) {
        if (!std::isfinite(e)) throw ModelError("non-finite energy");
    }
    if (!(energies[0] > energies[1] && energies[1] > energies[2] && energies[2] > energies[3])) {
        throw ModelError("level ordering: energies must satisfy E1 > E2 > E3 > E4");
    }

    const double w12 = energies[0] - energies[1];
    const double w23 = energies[1] - energies[2];
    const double w34 = energies[2] - energies[3];
    const double wmax = std::max({w12, w23, w34});
    const double tol = 1e-9 * wmax;
    if (std::abs(w12 - w23) < tol || std::abs(w23 - w34) < tol || std::abs(w12 - w34) < tol) {
        throw ModelError("equidistant levels: transition frequencies must be pairwise distinct");
    }

    if (!std::isfinite(cfg.lambda_scale)) throw ModelError("non-finite lambda_scale");

    SpinModel model;
    model.energies_ = energies;
    model.lambda_scale_ = cfg.lambda_scale;
    const double emax = std::max({std::abs(energies[0]), std::abs(energies[1]),
                                  std::abs(energies[2]), std::abs(energies[3])});
    double lambda_sum = 0.0;
    for (int i = 0; i < 4; ++i) {
        // First-order Boltzmann weight: exp(-beta*E) ~ 1 - beta*E, so lambda_m = -E_m * scale.
        model.lambdas_[i] = -cfg.lambda_scale * energies[i] / emax;
        lambda_sum += model.lambdas_[i];
    }
    model.z_ = 1.0 / (4.0 + lambda_sum);
    return model;
}

}  // namespace vspin
