#include <catch2/catch_amalgamated.hpp>

#include "test_helpers.hpp"
#include "vspin/spin_model.hpp"

using namespace vspin;

TEST_CASE("build_model from omega0/omegaQ") {
    SpinModelConfig cfg;
    cfg.omega0 = 10.0;
    cfg.omegaQ = 1.0;
    const SpinModel model = build_model(cfg);

    REQUIRE(model.energy(1) == Catch::Approx(16.0));
    REQUIRE(model.energy(2) == Catch::Approx(4.0));
    REQUIRE(model.energy(3) == Catch::Approx(-6.0));
    REQUIRE(model.energy(4) == Catch::Approx(-14.0));
    REQUIRE(model.freq(1, 2) == Catch::Approx(12.0));
    REQUIRE(model.freq(2, 3) == Catch::Approx(10.0));
    REQUIRE(model.freq(3, 4) == Catch::Approx(8.0));
}

TEST_CASE("frequency antisymmetry and additivity") {
    const SpinModel model = build_model({});
    REQUIRE(model.freq(2, 1) == -model.freq(1, 2));
    REQUIRE(model.freq(1, 3) == Catch::Approx(model.freq(1, 2) + model.freq(2, 3)));
}

TEST_CASE("equidistant spectra are rejected") {
    SpinModelConfig zeeman_only;
    zeeman_only.omega0 = 10.0;
    zeeman_only.omegaQ = 0.0;
    REQUIRE_THROWS_AS(build_model(zeeman_only), ModelError);

    SpinModelConfig explicit_cfg;
    explicit_cfg.explicit_energies = {3.0, 1.0, -1.0, -3.0};
    REQUIRE_THROWS_AS(build_model(explicit_cfg), ModelError);
}

TEST_CASE("level ordering is enforced") {
    SpinModelConfig cfg;
    cfg.explicit_energies = {1.0, 2.0, -1.0, -3.0};
    REQUIRE_THROWS_AS(build_model(cfg), ModelError);
}

TEST_CASE("lambda convention") {
    SpinModelConfig cfg;
    cfg.lambda_scale = 1e-5;
    const SpinModel model = build_model(cfg);
    // lambda_m = -scale * E_m / max|E|: increasing with level when scale > 0
    REQUIRE(model.lambda(4) > model.lambda(3));
    REQUIRE(model.lambda(3) > model.lambda(2));
    REQUIRE(model.lambda(2) > model.lambda(1));
    REQUIRE(model.lambda(1) == Catch::Approx(-1e-5));

    double sum = 0.0;
    for (int m = 1; m <= 4; ++m) sum += model.lambda(m);
    REQUIRE(model.z() * (4.0 + sum) == Catch::Approx(1.0));
}

TEST_CASE("spin operators") {
    const SpinOperators &ops = spin_operators();
    const double root3 = std::sqrt(3.0);

    REQUIRE(ops.iplus.at(2, 1) == Complex{root3});
    REQUIRE(ops.iplus.at(3, 2) == Complex{2.0});
    REQUIRE(ops.iplus.at(4, 3) == Complex{root3});

    // ladder oracle sqrt(I(I+1) - m(m+1))/2 with I = 3/2
    REQUIRE(std::abs(ops.iy.at(1, 2)) == Catch::Approx(root3 / 2.0));
    REQUIRE(std::abs(ops.iy.at(2, 3)) == Catch::Approx(1.0));
    REQUIRE(ops.iz.at(1, 1) == Complex{-1.5});
    REQUIRE(ops.iz.at(4, 4) == Complex{1.5});

    REQUIRE(max_abs_diff(ops.iplus, ops.ix + kImag * ops.iy) < 1e-15);

    // [Ix, Iy] = i Iz
    const Mat4 commutator = ops.ix * ops.iy - ops.iy * ops.ix;
    REQUIRE(max_abs_diff(commutator, kImag * ops.iz) < 1e-13);
}

TEST_CASE("projector algebra") {
    for (int k = 1; k <= 4; ++k) {
        for (int l = 1; l <= 4; ++l) {
            for (int m = 1; m <= 4; ++m) {
                for (int n = 1; n <= 4; ++n) {
                    const Mat4 product = projector(k, l) * projector(m, n);
                    const Mat4 expected = l == m ? projector(k, n) : Mat4::zero();
                    REQUIRE(max_abs_diff(product, expected) == 0.0);
                }
            }
        }
    }
    Mat4 completeness;
    for (int m = 1; m <= 4; ++m) completeness += projector(m, m);
    REQUIRE(max_abs_diff(completeness, Mat4::identity()) == 0.0);

    REQUIRE_THROWS_AS(projector(0, 1), ModelError);
    REQUIRE_THROWS_AS(projector(1, 5), ModelError);
}

TEST_CASE("virtual index map") {
    REQUIRE(virtual_index(1) == std::pair{1, 1});
    REQUIRE(virtual_index(2) == std::pair{1, 0});
    REQUIRE(virtual_index(3) == std::pair{0, 1});
    REQUIRE(virtual_index(4) == std::pair{0, 0});
    for (int m = 1; m <= 4; ++m) {
        const auto [r, s] = virtual_index(m);
        REQUIRE(level_of(r, s) == m);
    }
    REQUIRE_THROWS_AS(virtual_index(5), ModelError);
}

TEST_CASE("embed_two_qubit respects the level map") {
    REQUIRE(max_abs_diff(embed_two_qubit(Mat2::identity(), Mat2::identity()), Mat4::identity()) ==
            0.0);
    REQUIRE(max_abs_diff(embed_two_qubit(unit2(2, 2), Mat2::identity()),
                         projector(3, 3) + projector(4, 4)) == 0.0);
    // R11 x (S21 - S12) rotates inside the {1,2} block
    REQUIRE(max_abs_diff(embed_two_qubit(unit2(1, 1), unit2(2, 1) - unit2(1, 2)),
                         projector(2, 1) - projector(1, 2)) == 0.0);

    // basis kets: embed(R_rr, S_ss) is the projector onto level_of-mapped labels
    for (int r = 1; r <= 2; ++r) {
        for (int s = 1; s <= 2; ++s) {
            const int level = 2 * (r - 1) + s;
            REQUIRE(max_abs_diff(embed_two_qubit(unit2(r, r), unit2(s, s)),
                                 projector(level, level)) == 0.0);
        }
    }
}

TEST_CASE("free hamiltonian") {
    SpinModelConfig cfg;
    cfg.omega0 = 10.0;
    cfg.omegaQ = 1.0;
    const SpinModel model = build_model(cfg);
    const Mat4 h0 = free_hamiltonian(model);

    const Mat4 expected = Mat4::from_rows({16, 0, 0, 0,  //
                                           0, 4, 0, 0,   //
                                           0, 0, -6, 0,  //
                                           0, 0, 0, -14});
    REQUIRE(max_abs_diff(h0, expected) < 1e-15);
    REQUIRE(h0.at(1, 1).real() - h0.at(2, 2).real() == Catch::Approx(model.freq(1, 2)));
    for (int m = 1; m <= 4; ++m) {
        const Mat4 comm = h0 * projector(m, m) - projector(m, m) * h0;
        REQUIRE(max_abs_diff(comm, Mat4::zero()) == 0.0);
    }
}

TEST_CASE("level pair validation") {
    REQUIRE_NOTHROW(LevelPair(1, 2));
    REQUIRE_NOTHROW(LevelPair(2, 4));
    REQUIRE_THROWS_AS(LevelPair(2, 1), ModelError);
    REQUIRE_THROWS_AS(LevelPair(3, 3), ModelError);
    REQUIRE_THROWS_AS(LevelPair(0, 2), ModelError);

    REQUIRE(LevelPair(1, 2).overlaps(LevelPair(2, 3)));
    REQUIRE_FALSE(LevelPair(1, 2).overlaps(LevelPair(3, 4)));
}
