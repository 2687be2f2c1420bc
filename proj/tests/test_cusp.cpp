#include <catch2/catch_amalgamated.hpp>

#include "charvar/cusp_forms.hpp"
#include "test_support.hpp"

using namespace charvar;

namespace {
using FP = Poly<FieldElement>;

CuspShape<Rational> rational_shape(long tau_num = 7, long tau_den = 1, int sm = +1, int sl = +1) {
    return CuspShape<Rational>{rational(tau_num, tau_den), sm, sl};
}

FP fp(long v) { return FP(FieldElement(v), Var::tau); }
FP tau() { return FP::variable(Var::tau); }
}  // namespace

TEST_CASE("constant forms integrate to ladder multiples") {
    auto shape = rational_shape();
    for (std::size_t n = 2; n <= 6; ++n)
        for (std::size_t j = 1; j < n; ++j) {
            auto form = TorusForm<Rational>::constant(rational(1), rational(0), j);
            CHECK(integrate_form(shape, form, 1, 0, n) == h_plus_power(n, j));
            CHECK(integrate_form(shape, form, 0, 0, n).is_zero());
        }
}

TEST_CASE("omega_1 on the meridian, n = 2") {
    auto shape = rational_shape();
    auto form = TorusForm<Rational>::omega(1);
    Matrix<Rational> d = integrate_form(shape, form, 1, 0, 2);
    Matrix<Rational> expect(2);
    expect.at(0, 0) = rational(1, 2);
    expect.at(0, 1) = rational(-1, 3);
    expect.at(1, 0) = rational(1);
    expect.at(1, 1) = rational(-1, 2);
    CHECK(d == expect);
    CHECK(integrate_form(shape, form, 0, 0, 2).is_zero());
}

TEST_CASE("form construction validates indices") {
    CHECK_THROWS(TorusForm<Rational>::omega(0));
    CHECK_THROWS(TorusForm<Rational>::constant(rational(1), rational(0), 0));
    auto shape = rational_shape();
    CHECK_THROWS_AS(integrate_form(shape, TorusForm<Rational>::omega(3), 1, 0, 3), std::invalid_argument);
    CHECK(TorusForm<Rational>::omega(2).describe() == "omega_2");
    CHECK(TorusForm<Rational>::constant(rational(1), rational(0), 1).describe() == "const_1");
}

TEST_CASE("cocycle rule holds over the formal cusp shape") {
    auto shape = formal_cusp();
    for (std::size_t n = 2; n <= 6; ++n)
        for (std::size_t i = 1; i < n; ++i) {
            TorusCocycle<FP> coc;
            REQUIRE_NOTHROW(coc = cocycle_from_form(shape, TorusForm<FP>::omega(i), n));
            // straight-segment integrals agree with the twisted composition rule
            for (auto [p, q] : {std::pair<long, long>{2, 0}, {0, 3}, {1, 1}, {2, -1}, {-1, 2}})
                CHECK(coc.value(p, q) == integrate_form(shape, TorusForm<FP>::omega(i), p, q, n));
        }
}

TEST_CASE("cocycle inverse rule") {
    auto shape = formal_cusp();
    for (std::size_t n = 2; n <= 5; ++n) {
        auto coc = cocycle_from_form(shape, TorusForm<FP>::omega(1), n);
        SL2<FP> minv = shape.meridian().inverse();
        CHECK(coc.power_value(shape.meridian(), coc.on_meridian, -1) ==
              -adjoint_action(minv, coc.on_meridian));
        CHECK(coc.value(-1, 0) + adjoint_action(minv, coc.value(1, 0)) == Matrix<FP>(n));
    }
}

TEST_CASE("cup pairing reproduces the pairing constants on the diagonal") {
    auto shape = formal_cusp();
    FP a = fp(3), b = fp(-2);
    for (std::size_t n = 2; n <= 5; ++n) {
        PairingConstants pc = pairing_constants(n);
        for (std::size_t i = 1; i < n; ++i)
            for (std::size_t j = 1; j < n; ++j) {
                FP value = cup_pairing(shape, TorusForm<FP>::constant(a, b, i), TorusForm<FP>::omega(j), n);
                if (i == j) {
                    FP expect = (a * tau() - b) * FP(FieldElement(pc.at(i)), Var::tau);
                    CHECK(value == expect);
                } else {
                    CHECK(value.is_zero());
                }
            }
    }
}

TEST_CASE("cup pairing vanishes within each family and is antisymmetric") {
    auto shape = formal_cusp();
    FP a = fp(1), b = fp(4);
    for (std::size_t n = 2; n <= 5; ++n) {
        std::vector<TorusForm<FP>> forms;
        for (std::size_t i = 1; i < n; ++i) {
            forms.push_back(TorusForm<FP>::omega(i));
            forms.push_back(TorusForm<FP>::constant(a, b, i));
        }
        for (std::size_t r = 0; r < forms.size(); ++r)
            for (std::size_t c = 0; c < forms.size(); ++c) {
                FP fw = cup_pairing(shape, forms[r], forms[c], n);
                CHECK(fw == -cup_pairing(shape, forms[c], forms[r], n));
                if (forms[r].kind == forms[c].kind) CHECK(fw.is_zero());
            }
    }
}

TEST_CASE("growth exponents and square integrability") {
    for (std::size_t n = 2; n <= 6; ++n)
        for (std::size_t k = 1; k < n; ++k) {
            auto cst = TorusForm<Rational>::constant(rational(1), rational(2), k);
            auto omg = TorusForm<Rational>::omega(k);
            CHECK(growth_exponent(cst, n) == -2 * static_cast<int>(k));
            CHECK(growth_exponent(omg, n) == 2 * static_cast<int>(k));
            CHECK(square_integrable(cst, n));
            CHECK_FALSE(square_integrable(omg, n));
        }
    CHECK(growth_exponent(TorusForm<Rational>::constant(rational(1), rational(0), 1), 4) == -2);
}

TEST_CASE("cohomology basis and its pairing matrix") {
    auto shape = formal_cusp();
    FP a = fp(1), b = fp(0);
    for (std::size_t n = 2; n <= 5; ++n) {
        auto forms = cohomology_basis(shape, a, b, n);
        REQUIRE(forms.size() == 2 * (n - 1));
        Matrix<FP> gram = cup_matrix(shape, forms, n);
        CHECK(!det_scalar(gram).is_zero());

        // block structure: omega x omega and const x const blocks vanish,
        // cross blocks are diagonal with entries -+ c_i (a tau - b)
        PairingConstants pc = pairing_constants(n);
        for (std::size_t i = 1; i < n; ++i)
            for (std::size_t j = 1; j < n; ++j) {
                CHECK(gram.at(i - 1, j - 1).is_zero());
                CHECK(gram.at(n - 1 + i - 1, n - 1 + j - 1).is_zero());
                FP expect = i == j ? (a * tau() - b) * FP(FieldElement(pc.at(i)), Var::tau) : FP();
                CHECK(gram.at(n - 1 + j - 1, i - 1) == expect);
                CHECK(gram.at(i - 1, n - 1 + j - 1) == -expect);
            }
    }
}

TEST_CASE("pairing determinant squares the pairing constant, n = 2") {
    auto shape = formal_cusp();
    auto forms = cohomology_basis(shape, fp(1), fp(0), 2);
    Matrix<FP> gram = cup_matrix(shape, forms, 2);
    CHECK(gram.at(0, 0).is_zero());
    CHECK(gram.at(1, 1).is_zero());
    CHECK(gram.at(0, 1) == -tau());
    CHECK(gram.at(1, 0) == tau());
    // antisymmetric 2x2: determinant is the square of the off-diagonal entry
    CHECK(det_scalar(gram) == tau() * tau());
}

TEST_CASE("degenerate constant direction is rejected") {
    auto shape = formal_cusp();
    CHECK_THROWS_AS(cohomology_basis(shape, fp(1), tau(), 3), std::invalid_argument);

    auto rshape = rational_shape(5);
    CHECK_THROWS_AS(cohomology_basis(rshape, rational(1), rational(5), 3), std::invalid_argument);
    CHECK_NOTHROW(cohomology_basis(rshape, rational(1), rational(4), 3));
}

TEST_CASE("peripheral images carry the lifted sign") {
    for (std::size_t n = 2; n <= 5; ++n) {
        auto plus = formal_cusp(+1, +1);
        auto img = peripheral_image(plus, n, 2, 3);
        CHECK(img.zeta == 1);
        CHECK(img.s == fp(2) + fp(3) * tau());
        CHECK(img.rho == nilpotent_exp(matrix_from_rational<FP>(h_plus(n)), img.s));

        auto minus = formal_cusp(-1, +1);
        auto img_odd_p = peripheral_image(minus, n, 3, 2);
        int expect_zeta = (n % 2 == 0) ? -1 : 1;
        CHECK(img_odd_p.zeta == expect_zeta);
        CHECK(img_odd_p.rho == (expect_zeta < 0 ? -img_odd_p.unipotent : img_odd_p.unipotent));

        auto img_even_p = peripheral_image(minus, n, 2, 0);
        CHECK(img_even_p.zeta == 1);

        auto minus_l = formal_cusp(+1, -1);
        auto img_odd_q = peripheral_image(minus_l, n, 0, 1);
        CHECK(img_odd_q.zeta == expect_zeta);
    }
}
