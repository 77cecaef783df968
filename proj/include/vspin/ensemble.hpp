#pragma once

#include <array>
#include <cmath>

#include "vspin/complex_matrix.hpp"
#include "vspin/errors.hpp"
#include "vspin/pulse_engine.hpp"
#include "vspin/spin_model.hpp"

namespace vspin {

// Hermitian, unit-trace 4x4 state of the ensemble-averaged spin. Positivity is
// deliberately not enforced: pseudo-pure bookkeeping works with trace-1
// Hermitian deviations.
class DensityMatrix {
  public:
    explicit DensityMatrix(const Mat4 &m, double tol = 1e-12) : mat_(m) {
        if (!is_hermitian(m, tol)) {
            throw StateError("density matrix not Hermitian");
        }
        if (std::abs(trace(m) - Complex{1.0}) > tol) {
            throw StateError("density matrix trace must be 1");
        }
    }

    const Mat4 &mat() const { return mat_; }

    Complex at(int m, int n) const { return mat_.at(m, n); }

    double population(int m) const { return mat_.at(m, m).real(); }

  private:
    Mat4 mat_;
};

// Coefficients of the pseudo-pure decomposition rho_init = Z [alpha 1 + beta P_mm].
struct PseudoPureParams {
    double alpha;
    double beta;
    double z;
};

struct DiagonalPopulations {
    double mu0 = 0.0;  // identity coefficient, fixed 0; decoding uses differences only
    std::array<double, 4> mu{};
};

// Diagonal of Z [1 + sum lambda_m P_mm] for given lambdas.
inline std::array<double, 4> equilibrium_populations(const std::array<double, 4> &lambdas) {
    double sum = 0.0;
    for (double l : lambdas) sum += l;
    const double z = 1.0 / (4.0 + sum);
    return {z * (1.0 + lambdas[0]), z * (1.0 + lambdas[1]), z * (1.0 + lambdas[2]),
            z * (1.0 + lambdas[3])};
}

// High-temperature equilibrium state, Z [1 + sum lambda_m P_mm].
inline DensityMatrix equilibrium_density(const SpinModel &model) {
    const std::array<double, 4> pops = equilibrium_populations(model.lambdas());
    Mat4 rho;
    for (int m = 1; m <= kLevels; ++m) {
        rho.at(m, m) = pops[m - 1];
    }
    return DensityMatrix(rho);
}

inline DensityMatrix apply_unitary(const DensityMatrix &rho, const Mat4 &u,
                                   double unitary_tol = 1e-10) {
    if (!is_unitary(u, unitary_tol)) {
        throw EvolutionError("propagator is not unitary");
    }
    return DensityMatrix(u * rho.mat() * adjoint(u));
}

inline PseudoPureParams pseudo_pure_params(const std::array<double, 4> &lambdas, double z) {
    const double mean123 = (lambdas[0] + lambdas[1] + lambdas[2]) / 3.0;
    return {1.0 + mean123, lambdas[3] - mean123, z};
}

// alpha = 1 + (lambda1 + lambda2 + lambda3)/3, beta = lambda4 - (lambda1 + lambda2 + lambda3)/3.
inline PseudoPureParams alpha_beta(const SpinModel &model) {
    return pseudo_pure_params(model.lambdas(), model.z());
}

// Z [alpha 1 + beta P_mm]: the pseudo-pure state equivalent to level m.
inline DensityMatrix pseudo_pure_state(const SpinModel &model, int level) {
    check_level(level);
    const PseudoPureParams p = alpha_beta(model);
    Mat4 rho;
    for (int m = 1; m <= kLevels; ++m) {
        rho.at(m, m) = p.z * (p.alpha + (m == level ? p.beta : 0.0));
    }
    return DensityMatrix(rho);
}

// Three-experiment temporal average:
//   (1/3)[U rho_eq U* + (U U1) rho_eq (U U1)* + (U U2) rho_eq (U U2)*]
// which equals U rho_init U* with rho_init = Z [alpha 1 + beta P44].
inline DensityMatrix pseudo_pure_average(const SpinModel &model, const Mat4 &u_comp) {
    const DensityMatrix rho_eq = equilibrium_density(model);
    const Mat4 exp1 = u_comp;
    const Mat4 exp2 = u_comp * gate_u1();
    const Mat4 exp3 = u_comp * gate_u2();
    Mat4 sum = apply_unitary(rho_eq, exp1).mat() + apply_unitary(rho_eq, exp2).mat() +
               apply_unitary(rho_eq, exp3).mat();
    return DensityMatrix(Complex{1.0 / 3.0} * sum);
}

// Free precession under H0 in closed form: entry (m,n) picks up exp(-i (E_m - E_n) t).
inline DensityMatrix free_precession(const SpinModel &model, const DensityMatrix &rho, double t) {
    if (!std::isfinite(t)) {
        throw EvolutionError("precession time must be finite");
    }
    Mat4 evolved;
    for (int m = 1; m <= kLevels; ++m) {
        for (int n = 1; n <= kLevels; ++n) {
            if (m == n) {
                evolved.at(m, n) = rho.at(m, n);
            } else {
                evolved.at(m, n) = rho.at(m, n) * std::polar(1.0, -model.freq(m, n) * t);
            }
        }
    }
    return DensityMatrix(evolved);
}

// mu_m = rho_mm for a diagonal rho (Eq.-(9)-style output state).
inline DiagonalPopulations diagonal_populations(const DensityMatrix &rho,
                                                double off_diag_tol = 1e-10) {
    for (int m = 1; m <= kLevels; ++m) {
        for (int n = 1; n <= kLevels; ++n) {
            if (m != n && std::abs(rho.at(m, n)) > off_diag_tol) {
                throw StateError("not diagonal: coherence at (" + std::to_string(m) + "," +
                                 std::to_string(n) + ")");
            }
        }
    }
    DiagonalPopulations pops;
    for (int m = 1; m <= kLevels; ++m) {
        pops.mu[m - 1] = rho.population(m);
    }
    return pops;
}

}  // namespace vspin
