#include <catch2/catch_amalgamated.hpp>

#include "test_helpers.hpp"
#include "vspin/ensemble.hpp"
#include "vspin/spin_model.hpp"

using namespace vspin;
using vspin::testing::random_model_config;
using vspin::testing::random_unitary;

namespace {

// Exact normalized Boltzmann state for a diagonal Hamiltonian: populations
// exp(lambda_m) / sum_k exp(lambda_k), since -beta E_m = lambda_m.
Mat4 exact_equilibrium(const SpinModel &model) {
    double norm = 0.0;
    for (int m = 1; m <= 4; ++m) norm += std::exp(model.lambda(m));
    Mat4 rho;
    for (int m = 1; m <= 4; ++m) {
        rho.at(m, m) = std::exp(model.lambda(m)) / norm;
    }
    return rho;
}

SpinModel default_model(double lambda_scale = 1e-5) {
    SpinModelConfig cfg;
    cfg.lambda_scale = lambda_scale;
    return build_model(cfg);
}

}  // namespace

TEST_CASE("density matrix validation") {
    REQUIRE_NOTHROW(DensityMatrix(Complex{0.25} * Mat4::identity()));
    // wrong trace
    REQUIRE_THROWS_AS(DensityMatrix(Mat4::identity()), StateError);
    // not Hermitian
    Mat4 bad = Complex{0.25} * Mat4::identity();
    bad.at(1, 2) = 0.5;
    REQUIRE_THROWS_AS(DensityMatrix(bad), StateError);
}

TEST_CASE("equilibrium density") {
    const SpinModel zero_lambda = default_model(0.0);
    REQUIRE(max_abs_diff(equilibrium_density(zero_lambda).mat(),
                         Complex{0.25} * Mat4::identity()) == 0.0);

    // formula-level arithmetic for a symmetric lambda vector
    const auto pops = equilibrium_populations({-0.3, -0.1, 0.1, 0.3});
    REQUIRE(pops[0] == Catch::Approx(0.25 * 0.7));
    REQUIRE(pops[1] == Catch::Approx(0.25 * 0.9));
    REQUIRE(pops[2] == Catch::Approx(0.25 * 1.1));
    REQUIRE(pops[3] == Catch::Approx(0.25 * 1.3));

    const SpinModel model = default_model(1e-5);
    const DensityMatrix rho = equilibrium_density(model);
    REQUIRE(std::abs(trace(rho.mat()) - Complex{1.0}) < 1e-15);
    // first-order agreement with the exact exponential
    REQUIRE(max_abs_diff(rho.mat(), exact_equilibrium(model)) < 10.0 * 1e-5 * 1e-5);
}

TEST_CASE("high-temperature regime bound") {
    for (double scale : {1e-2, 1e-3, 1e-5}) {
        const SpinModel model = default_model(scale);
        const double err = max_abs_diff(equilibrium_density(model).mat(),
                                        exact_equilibrium(model));
        REQUIRE(err <= 10.0 * scale * scale);
    }
}

TEST_CASE("apply_unitary") {
    const SpinModel model = default_model();
    const DensityMatrix rho = equilibrium_density(model);
    REQUIRE(max_abs_diff(apply_unitary(rho, Mat4::identity()).mat(), rho.mat()) == 0.0);

    // U1 fixes level 4
    const DensityMatrix p44 = pseudo_pure_state(model, 4);
    const DensityMatrix rotated = apply_unitary(p44, gate_u1());
    REQUIRE(rotated.population(4) == Catch::Approx(p44.population(4)));

    // non-unitary input is rejected
    REQUIRE_THROWS_AS(apply_unitary(rho, Complex{2.0} * Mat4::identity()), EvolutionError);
}

TEST_CASE("readout pulse creates block coherences from populations") {
    const SpinModel model = default_model();
    Mat4 diag;
    const double mu[] = {0.4, 0.3, 0.2, 0.1};
    for (int m = 1; m <= 4; ++m) diag.at(m, m) = mu[m - 1];
    const DensityMatrix rho = apply_unitary(DensityMatrix(diag), gate_u3());

    REQUIRE(rho.at(1, 2).real() == Catch::Approx((mu[0] - mu[1]) / 2.0));
    REQUIRE(rho.at(3, 4).real() == Catch::Approx((mu[2] - mu[3]) / 2.0));
    REQUIRE(rho.at(1, 1).real() == Catch::Approx((mu[0] + mu[1]) / 2.0));
    REQUIRE(rho.at(3, 3).real() == Catch::Approx((mu[2] + mu[3]) / 2.0));
    REQUIRE(std::abs(rho.at(1, 3)) < 1e-15);
    REQUIRE(std::abs(rho.at(2, 4)) < 1e-15);
}

TEST_CASE("alpha beta") {
    auto p = pseudo_pure_params({0, 0, 0, 0}, 0.25);
    REQUIRE(p.alpha == 1.0);
    REQUIRE(p.beta == 0.0);

    p = pseudo_pure_params({0.3, 0.1, -0.1, -0.3}, 0.25);
    REQUIRE(p.alpha == Catch::Approx(1.1));
    REQUIRE(p.beta == Catch::Approx(-0.4));

    p = pseudo_pure_params({-0.3, -0.1, 0.1, 0.3}, 0.25);
    REQUIRE(p.alpha == Catch::Approx(0.9));
    REQUIRE(p.beta == Catch::Approx(0.4));

    // trace consistency Z(4 alpha + beta) = 1 on a built model
    const SpinModel model = default_model(1e-3);
    const PseudoPureParams mp = alpha_beta(model);
    REQUIRE(mp.z * (4.0 * mp.alpha + mp.beta) == Catch::Approx(1.0).margin(1e-12));
}

TEST_CASE("three-experiment average equals the pseudo-pure preparation") {
    const SpinModel model = default_model(1e-5);
    const PseudoPureParams p = alpha_beta(model);

    // identity computation: average is Z[alpha 1 + beta P44]
    const DensityMatrix avg = pseudo_pure_average(model, Mat4::identity());
    Mat4 expected;
    for (int m = 1; m <= 4; ++m) {
        expected.at(m, m) = p.z * (p.alpha + (m == 4 ? p.beta : 0.0));
    }
    REQUIRE(max_abs_diff(avg.mat(), expected) < 1e-12);

    // random computations: average == Ucomp rho_init Ucomp*
    for (int trial = 0; trial < 50; ++trial) {
        const Mat4 u = random_unitary();
        const DensityMatrix averaged = pseudo_pure_average(model, u);
        const DensityMatrix direct = apply_unitary(DensityMatrix(expected), u);
        REQUIRE(max_abs_diff(averaged.mat(), direct.mat()) < 1e-12);
    }

    // all lambda zero: maximally mixed regardless of the computation
    const SpinModel flat = default_model(0.0);
    const DensityMatrix mixed = pseudo_pure_average(flat, random_unitary());
    REQUIRE(max_abs_diff(mixed.mat(), Complex{0.25} * Mat4::identity()) < 1e-15);
}

TEST_CASE("averaging identity across random models") {
    for (int trial = 0; trial < 10; ++trial) {
        const SpinModel model = build_model(random_model_config());
        const PseudoPureParams p = alpha_beta(model);
        Mat4 init;
        for (int m = 1; m <= 4; ++m) {
            init.at(m, m) = p.z * (p.alpha + (m == 4 ? p.beta : 0.0));
        }
        const Mat4 u = random_unitary();
        REQUIRE(max_abs_diff(pseudo_pure_average(model, u).mat(),
                             apply_unitary(DensityMatrix(init), u).mat()) < 1e-12);
    }
}

TEST_CASE("free precession") {
    const SpinModel model = default_model();
    const DensityMatrix diag = equilibrium_density(model);
    REQUIRE(max_abs_diff(free_precession(model, diag, 0.37).mat(), diag.mat()) == 0.0);

    // single coherence at (2,1) picks up exp(+i Omega12 t)
    Mat4 with_coherence = diag.mat();
    with_coherence.at(2, 1) = 0.1;
    with_coherence.at(1, 2) = 0.1;
    const DensityMatrix rho(with_coherence);
    const double t = 0.73;
    const DensityMatrix evolved = free_precession(model, rho, t);
    const Complex expected_phase = std::polar(1.0, model.freq(1, 2) * t);
    REQUIRE(std::abs(evolved.at(2, 1) - 0.1 * expected_phase) < 1e-15);
    REQUIRE(std::abs(evolved.at(1, 2) - std::conj(evolved.at(2, 1))) < 1e-15);
}

TEST_CASE("free precession matches brute-force conjugation") {
    const SpinModel model = default_model();
    const DensityMatrix rho = apply_unitary(equilibrium_density(model), random_unitary());
    const double t = 0.29;

    // U = exp(-i H0 t) for the diagonal H0
    Mat4 u;
    for (int m = 1; m <= 4; ++m) {
        u.at(m, m) = std::polar(1.0, -model.energy(m) * t);
    }
    const Mat4 brute = u * rho.mat() * adjoint(u);
    REQUIRE(max_abs_diff(free_precession(model, rho, t).mat(), brute) < 1e-14);
}

TEST_CASE("free precession composes additively") {
    const SpinModel model = default_model();
    const DensityMatrix rho = apply_unitary(equilibrium_density(model), random_unitary());
    const double t1 = 0.11, t2 = 0.57;
    const DensityMatrix two_step = free_precession(model, free_precession(model, rho, t1), t2);
    const DensityMatrix one_step = free_precession(model, rho, t1 + t2);
    REQUIRE(max_abs_diff(two_step.mat(), one_step.mat()) < 1e-12);
}

TEST_CASE("operations preserve trace and hermiticity") {
    const SpinModel model = default_model(1e-3);
    DensityMatrix rho = equilibrium_density(model);
    for (int step = 0; step < 10; ++step) {
        rho = apply_unitary(rho, random_unitary(2));
        rho = free_precession(model, rho, 0.1 * step);
        REQUIRE(std::abs(trace(rho.mat()) - Complex{1.0}) < 1e-12);
        REQUIRE(max_abs_diff(rho.mat(), adjoint(rho.mat())) < 1e-12);
    }
}

TEST_CASE("diagonal populations") {
    const auto quarter = diagonal_populations(DensityMatrix(Complex{0.25} * Mat4::identity()));
    REQUIRE(quarter.mu0 == 0.0);
    for (double mu : quarter.mu) REQUIRE(mu == 0.25);

    const SpinModel model = default_model(1e-3);
    const PseudoPureParams p = alpha_beta(model);
    const auto pseudo = diagonal_populations(pseudo_pure_state(model, 4));
    REQUIRE(pseudo.mu[0] == Catch::Approx(p.z * p.alpha));
    REQUIRE(pseudo.mu[3] == Catch::Approx(p.z * (p.alpha + p.beta)));

    Mat4 with_coherence = Complex{0.25} * Mat4::identity();
    with_coherence.at(1, 2) = 0.1;
    with_coherence.at(2, 1) = 0.1;
    REQUIRE_THROWS_AS(diagonal_populations(DensityMatrix(with_coherence)), StateError);
}
