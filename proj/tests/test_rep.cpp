#include <catch2/catch_amalgamated.hpp>

#include "charvar/linalg.hpp"
#include "charvar/sym_power.hpp"
#include "test_support.hpp"

using namespace charvar;
using charvar::testing::random_sl2;

namespace {
SL2<Rational> diag_sl2(const Rational& top) {
    return SL2<Rational>(top, rational(0), rational(0), rational(1) / top, +1);
}
}  // namespace

TEST_CASE("symmetric power of the identity and the sign rule") {
    for (std::size_t n = 2; n <= 7; ++n) {
        CHECK(sym_power(SL2<Rational>::identity(), n) == Matrix<Rational>::identity(n));
        SL2<Rational> minus_id = SL2<Rational>::identity();
        minus_id.sign = -1;
        Rational prefactor = (n % 2 == 0) ? rational(-1) : rational(1);
        CHECK(sym_power(minus_id, n) == Matrix<Rational>::identity(n) * prefactor);
    }
}

TEST_CASE("parabolic images are nilpotent exponentials, as a polynomial identity") {
    for (std::size_t n = 2; n <= 7; ++n) {
        Poly<Rational> beta = Poly<Rational>::variable(Var::beta);
        auto hp = matrix_from_rational<Poly<Rational>>(h_plus(n));
        Matrix<Poly<Rational>> expected = nilpotent_exp(hp, beta);
        CHECK(sym_power(SL2<Poly<Rational>>::parabolic(beta, +1), n) == expected);
        Poly<Rational> prefactor((n % 2 == 0) ? rational(-1) : rational(1), Var::beta);
        CHECK(sym_power(SL2<Poly<Rational>>::parabolic(beta, -1), n) == expected * prefactor);
    }
}

TEST_CASE("diagonal images act by weight scaling") {
    Matrix<Rational> d3 = sym_power(diag_sl2(rational(2)), 3);
    Matrix<Rational> expect(3);
    expect.at(0, 0) = rational(4);
    expect.at(1, 1) = rational(1);
    expect.at(2, 2) = rational(1, 4);
    CHECK(d3 == expect);
}

TEST_CASE("symmetric power is a homomorphism with determinant one") {
    std::mt19937_64 rng(101);
    auto gauss = NumberField::gaussian();
    for (std::size_t n = 2; n <= 10; ++n) {
        for (int trial = 0; trial < 5; ++trial) {
            auto a = random_sl2(gauss, rng, trial % 2 ? -1 : +1);
            auto b = random_sl2(gauss, rng);
            CHECK(sym_power(a * b, n) == sym_power(a, n) * sym_power(b, n));
        }
        auto a = random_sl2(gauss, rng);
        CHECK(det_expansion(sym_power(a, n)) == FieldElement(1));
    }
}

TEST_CASE("lie algebra images of the standard basis") {
    for (std::size_t n = 2; n <= 8; ++n) {
        Matrix<Rational> f(2), g(2), e(2);
        f.at(0, 1) = rational(1);
        g.at(1, 0) = rational(1);
        e.at(0, 0) = rational(1);
        e.at(1, 1) = rational(-1);

        Matrix<Rational> hp = sym_power_lie(f, n);
        Matrix<Rational> hm = sym_power_lie(g, n);
        CHECK(hp == h_plus(n));
        CHECK(hm == h_minus(n));
        for (std::size_t i = 0; i + 1 < n; ++i) {
            CHECK(hp.at(i, i + 1) == rational(static_cast<long>(i) + 1));
            CHECK(hm.at(i + 1, i) == rational(static_cast<long>(n - 1 - i)));
        }
        CHECK(sym_power_lie(e, n) == bracket(hp, hm));
        CHECK(sym_power_lie(e, n).trace() == 0);
        CHECK(hp.trace() == 0);
    }

    Matrix<Rational> e(2);
    e.at(0, 0) = rational(1);
    e.at(1, 1) = rational(-1);
    Matrix<Rational> expect(3);
    expect.at(0, 0) = rational(2);
    expect.at(2, 2) = rational(-2);
    CHECK(sym_power_lie(e, 3) == expect);
}

TEST_CASE("lie map preserves brackets and rejects nonzero trace") {
    std::mt19937_64 rng(102);
    for (std::size_t n = 2; n <= 6; ++n)
        for (int trial = 0; trial < 5; ++trial) {
            Matrix<Rational> x = charvar::testing::random_traceless(2, rng);
            Matrix<Rational> y = charvar::testing::random_traceless(2, rng);
            CHECK(sym_power_lie(bracket(x, y), n) ==
                  bracket(sym_power_lie(x, n), sym_power_lie(y, n)));
            CHECK(sym_power_lie(x, n).trace() == 0);
        }
    CHECK_THROWS(sym_power_lie(Matrix<Rational>::identity(2), 3));
}

TEST_CASE("one-parameter subgroups factor through the lie map") {
    for (std::size_t n = 2; n <= 6; ++n) {
        Poly<Rational> t = Poly<Rational>::variable(Var::t);
        Poly<Rational> zero;
        Poly<Rational> one(rational(1), Var::t);

        SL2<Poly<Rational>> upper(one, t, zero, one, +1);
        Matrix<Rational> f(2);
        f.at(0, 1) = rational(1);
        CHECK(sym_power(upper, n) ==
              nilpotent_exp(matrix_from_rational<Poly<Rational>>(sym_power_lie(f, n)), t));

        SL2<Poly<Rational>> lower(one, zero, t, one, +1);
        Matrix<Rational> g(2);
        g.at(1, 0) = rational(1);
        CHECK(sym_power(lower, n) ==
              nilpotent_exp(matrix_from_rational<Poly<Rational>>(sym_power_lie(g, n)), t));
    }
}

TEST_CASE("distinguished nilpotent powers") {
    for (std::size_t n = 2; n <= 8; ++n) {
        CHECK(h_plus(n).pow(n).is_zero());
        CHECK(h_minus(n).pow(n).is_zero());
        for (std::size_t i = 1; i < n; ++i) {
            CHECK(h_plus_power(n, i) == h_plus(n).pow(i));
            CHECK(h_minus_power(n, i) == h_minus(n).pow(i));
        }
        CHECK(h_plus_power(n, 0) == Matrix<Rational>::identity(n));
        CHECK(h_plus_power(n, n).is_zero());
    }
    CHECK(h_minus(3).at(1, 0) == 2);
    CHECK(h_minus(3).at(2, 1) == 1);
    CHECK(h_minus_power(3, 2).at(2, 0) == 2);
}

TEST_CASE("nilpotent exponentials") {
    CHECK(nilpotent_exp(Matrix<Rational>(4), rational(1)) == Matrix<Rational>::identity(4));

    for (std::size_t n = 2; n <= 6; ++n) {
        Matrix<Rational> series(n);
        for (std::size_t j = 1; j < n; ++j)
            series = series + h_plus_power(n, j) * (rational(1) / Rational(factorial(j)));
        CHECK(nilpotent_exp(h_plus(n), rational(1)) - Matrix<Rational>::identity(n) == series);
    }

    Poly<Rational> tau = Poly<Rational>::variable(Var::tau);
    auto hp4 = matrix_from_rational<Poly<Rational>>(h_plus(4));
    CHECK(nilpotent_exp(hp4, tau) * nilpotent_exp(hp4, -tau) == Matrix<Poly<Rational>>::identity(4));

    CHECK_THROWS(nilpotent_exp(Matrix<Rational>::identity(3), rational(1)));
}

TEST_CASE("ill-formed sl2 data is rejected") {
    CHECK_THROWS(SL2<Rational>(rational(1), rational(1), rational(1), rational(1), +1));  // det 0
    CHECK_THROWS(SL2<Rational>(rational(1), rational(0), rational(0), rational(1), 2));   // bad sign
    SL2<Rational> a = SL2<Rational>::parabolic(rational(5), +1);
    CHECK((a * a.inverse()) == SL2<Rational>::identity());
}
