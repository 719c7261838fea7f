#include <doctest.h>

#include <cmath>
#include <random>

#include "qlever/fock.hpp"
#include "qlever/partition_thermo.hpp"
#include "test_helpers.hpp"

using namespace qlever;
using namespace testutil;

TEST_CASE("fock_build for a single mode") {
    Matrix h(1, 1);
    h << 0.7;
    FockSystem sys = fock_build(h);
    CHECK(sys.hamiltonian(0, 0) == Complex(0.0));
    CHECK(sys.hamiltonian(1, 1) == Complex(0.7));
    CHECK(sys.number_operator(0) == 0.0);
    CHECK(sys.number_operator(1) == 1.0);
}

TEST_CASE("fock_build two-mode sectors") {
    Matrix h(2, 2);
    h << 0.0, 1.0, 1.0, 0.0;
    FockSystem sys = fock_build(h);
    // 1-particle sector spans masks {01, 10}; eigenvalues -+1.
    Matrix sector(2, 2);
    sector << sys.hamiltonian(1, 1), sys.hamiltonian(1, 2), sys.hamiltonian(2, 1),
        sys.hamiltonian(2, 2);
    EighResult eig = eigh(sector);
    CHECK(eig.energies(0) == doctest::Approx(-1.0));
    CHECK(eig.energies(1) == doctest::Approx(1.0));
    // 2-particle sector: single state, energy tr(h) = 0.
    CHECK(sys.hamiltonian(3, 3) == Complex(0.0));
    // vacuum decoupled
    CHECK(sys.hamiltonian(0, 0) == Complex(0.0));
    CHECK(std::abs(sys.hamiltonian(3, 1)) == 0.0);
}

TEST_CASE("Jordan-Wigner signs anticommute") {
    // c_0^dag c_1^dag |0> = -c_1^dag c_0^dag |0>: the hopping term between
    // modes 0 and 2 across an occupied mode 1 picks up a sign.
    Matrix h = Matrix::Zero(3, 3);
    h(0, 2) = 1.0;
    h(2, 0) = 1.0;
    FockSystem sys = fock_build(h);
    // |101> = mask 5, |110> = mask 6: c_0^dag c_2 moves across mode 1.
    unsigned from = 0b110, to = 0b011;
    CHECK(sys.hamiltonian(to, from).real() == doctest::Approx(-1.0));
    // without a fermion in between there is no sign: |100> -> |001>
    CHECK(sys.hamiltonian(0b001, 0b100).real() == doctest::Approx(1.0));
}

TEST_CASE("fock mode cap") {
    CHECK_THROWS_AS(fock_build(Matrix::Identity(13, 13)), ValidationError);
}

TEST_CASE("grand density basics") {
    Reservoir res(0.2, 0.0);
    SUBCASE("single mode reproduces the Fermi function") {
        Matrix h(1, 1);
        h << 0.3;
        FockSystem sys = fock_build(h);
        GrandDensity rho = grand_density(sys, res);
        CHECK(rho.rho.trace().real() == doctest::Approx(1.0).epsilon(1e-12));
        double n = (rho.rho.diagonal().real().array() * sys.number_operator.array()).sum();
        CHECK(n == doctest::Approx(fermi(0.3, res)).epsilon(1e-12));
    }
    SUBCASE("symmetric two-level holds one particle on average") {
        Matrix h(2, 2);
        h << 0.0, 1.0, 1.0, 0.0;
        FockSystem sys = fock_build(h);
        GrandDensity rho = grand_density(sys, res);
        double n = (rho.rho.diagonal().real().array() * sys.number_operator.array()).sum();
        CHECK(n == doctest::Approx(1.0).epsilon(1e-12));
    }
    SUBCASE("von Neumann entropy equals the free-fermion entropy") {
        Matrix h(2, 2);
        h << -1.0, 1.0, 1.0, 1.0;
        FockSystem sys = fock_build(h);
        GrandDensity rho = grand_density(sys, res);
        EighResult eig = eigh(h);
        double s_free = entropy_kernel(eig.energies(0), res) +
                        entropy_kernel(eig.energies(1), res);
        CHECK(von_neumann_entropy(rho) == doctest::Approx(s_free).epsilon(1e-10));
    }
    SUBCASE("density matrix is positive with unit trace") {
        std::mt19937_64 rng(8);
        Matrix h = random_hermitian(rng, 3);
        GrandDensity rho = grand_density(fock_build(h), res);
        CHECK(rho.rho.trace().real() == doctest::Approx(1.0).epsilon(1e-12));
        CHECK(rho.probabilities.minCoeff() >= -1e-12);
    }
}

TEST_CASE("fock_expect reproduces partitioned one-body quantities") {
    Reservoir res(0.2, 0.0);
    Matrix h(2, 2);
    h << -1.0, 1.0, 1.0, 1.0;
    Matrix pi1 = Matrix::Zero(2, 2);
    pi1(0, 0) = 1.0;
    Matrix eye = Matrix::Identity(2, 2);

    FockSystem sys = fock_build(h);
    GrandDensity rho = grand_density(sys, res);
    SpectralFrame frame = make_frame(h, Matrix::Zero(2, 2));
    Vector p = prob_weights(frame, pi1);
    SubsystemState st = subsystem_state(frame, p, "S", res);

    double n1 = fock_expect(rho, fock_one_body(0.5 * (pi1 * eye + eye * pi1)));
    double u1 = fock_expect(rho, fock_one_body(0.5 * (pi1 * h + h * pi1)));
    CHECK(n1 == doctest::Approx(st.N).epsilon(1e-10));
    CHECK(u1 == doctest::Approx(st.U).epsilon(1e-10));

    SUBCASE("total number matches the occupation sum") {
        double n_tot = fock_expect(rho, fock_one_body(eye));
        CHECK(n_tot == doctest::Approx(fermi(frame.energies(0), res) +
                                       fermi(frame.energies(1), res))
                           .epsilon(1e-12));
    }
    SUBCASE("symmetric case splits the energy evenly") {
        Matrix hs(2, 2);
        hs << 0.0, 1.0, 1.0, 0.0;
        GrandDensity rs = grand_density(fock_build(hs), res);
        double u_half = fock_expect(rs, fock_one_body(0.5 * (pi1 * hs + hs * pi1)));
        double u_tot = fock_expect(rs, fock_one_body(hs));
        CHECK(u_half == doctest::Approx(u_tot / 2).epsilon(1e-12));
    }
}

TEST_CASE("two_level_closed_form") {
    SUBCASE("symmetric") {
        TwoLevelClosedForm cf = two_level_closed_form(0.4, 0.4, 1.0);
        CHECK(cf.eps_minus == doctest::Approx(-0.6));
        CHECK(cf.eps_plus == doctest::Approx(1.4));
        CHECK(cf.p_minus == doctest::Approx(0.5));
        CHECK(cf.p_plus == doctest::Approx(0.5));
    }
    SUBCASE("detuned") {
        TwoLevelClosedForm cf = two_level_closed_form(-1.0, 1.0, 1.0);
        CHECK(cf.eps_minus == doctest::Approx(-std::sqrt(2.0)).epsilon(1e-14));
        CHECK(cf.eps_plus == doctest::Approx(std::sqrt(2.0)).epsilon(1e-14));
        CHECK(cf.p_minus == doctest::Approx((2 + std::sqrt(2.0)) / 4).epsilon(1e-14));
    }
    SUBCASE("decoupled") {
        TwoLevelClosedForm cf = two_level_closed_form(-0.5, 0.5, 0.0);
        CHECK(cf.eps_minus == doctest::Approx(-0.5));
        CHECK(cf.p_minus == doctest::Approx(1.0));
        CHECK(cf.p_plus == doctest::Approx(0.0));
    }
    SUBCASE("matches the spectral module on a parameter grid") {
        for (double e1 = -2.0; e1 <= 2.0; e1 += 0.5) {
            for (double e2 = -2.0; e2 <= 2.0; e2 += 0.5) {
                for (double w = 0.25; w <= 1.0; w += 0.25) {
                    TwoLevelClosedForm cf = two_level_closed_form(e1, e2, w);
                    Matrix h(2, 2);
                    h << e1, w, w, e2;
                    SpectralFrame f = make_frame(h, Matrix::Zero(2, 2));
                    Matrix pi1 = Matrix::Zero(2, 2);
                    pi1(0, 0) = 1.0;
                    Vector p = prob_weights(f, pi1);
                    CHECK(std::abs(f.energies(0) - cf.eps_minus) <= 1e-12);
                    CHECK(std::abs(f.energies(1) - cf.eps_plus) <= 1e-12);
                    CHECK(std::abs(p(0) - cf.p_minus) <= 1e-12);
                    CHECK(std::abs(p(1) - cf.p_plus) <= 1e-12);
                }
            }
        }
    }
}
