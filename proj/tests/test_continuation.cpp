#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "charvar/continuation.hpp"
#include "charvar/deformation.hpp"

using namespace charvar;

namespace {

RepPoint embedded_point(const ManifoldData& data, const EmbeddedField& emb, std::size_t n) {
    RepPoint p;
    for (char g : data.pres.gens) {
        Matrix<FieldElement> m = sym_power(data.lift.images.at(g), n);
        p.images.push_back(embed_matrix(emb, m));
    }
    return p;
}

std::vector<Complex> meridian_sigmas(const Presentation& pres, const RepPoint& p, std::size_t n) {
    CMatrix mer = detail::evaluate_word_images(p.images, pres.gens, pres.cusps.at(0).meridian, n,
                                               [](const CMatrix& m) { return complex_inverse(m); });
    Poly<Complex> cp = char_poly(mer);
    std::vector<Complex> out;
    for (std::size_t i = 1; i < n; ++i) {
        Complex c = cp.coeff(n - i);
        out.push_back(i % 2 == 0 ? c : -c);
    }
    return out;
}

struct Fixture {
    ManifoldData data;
    NormalizedCusp cusp;
    EmbeddedField emb;

    Fixture()
        : data(builtin_figure_eight()),
          cusp(peripheral_parabolic_check(data)),
          emb(embed_field(data.lift.field, cusp.shape.tau)) {}

    RepPoint base(std::size_t n) const { return embedded_point(data, emb, n); }

    ContinuationSystem system(std::size_t n, const RepPoint& b) const {
        return build_system(data.pres, n, b, meridian_sigmas(data.pres, b, n));
    }
};

}  // namespace

TEST_CASE("field embedding lands in the upper half plane") {
    Fixture fx;
    Complex root = fx.emb.root;
    // root of x^2 - x + 1
    CHECK(std::abs(root * root - root + Complex(1, 0)) < 1e-12);
    Complex tau = embed(fx.emb, fx.cusp.shape.tau);
    CHECK(tau.imag() > 0);
    CHECK(std::abs(tau - Complex(0, 2 * std::sqrt(3.0))) < 1e-12);

    // rational elements embed through any field
    auto rat_field = NumberField::rationals();
    CHECK(std::abs(embed(fx.emb, FieldElement(rat_field, {rational(5, 2)})) - Complex(2.5, 0)) < 1e-15);

    auto other = std::make_shared<const NumberField>(
        "z", std::vector<Rational>{rational(2), rational(0), rational(1)});
    CHECK_THROWS_AS(embed(fx.emb, FieldElement(other, {rational(0), rational(1)})), std::invalid_argument);
}

TEST_CASE("embedded holonomy satisfies the constraint system exactly") {
    Fixture fx;
    for (std::size_t n = 2; n <= 4; ++n) {
        RepPoint base = fx.base(n);
        ContinuationSystem sys = fx.system(n, base);
        CHECK(sys.var_count() == 2 * n * n - (n * n - n));
        CHECK(sys.row_count() == n * n + 2 + (n - 1));
        CHECK(sys.residual(base).norm() < 1e-12);
    }
}

TEST_CASE("dual number jacobian matches central differences") {
    Fixture fx;
    for (std::size_t n = 2; n <= 3; ++n) {
        RepPoint base = fx.base(n);
        ContinuationSystem sys = fx.system(n, base);
        Eigen::MatrixXcd J = sys.jacobian(base);
        Eigen::VectorXcd x = sys.pack(base);
        const double h = 1e-6;
        double worst = 0;
        for (std::size_t v = 0; v < sys.var_count(); ++v) {
            Eigen::VectorXcd xp = x, xm = x;
            xp(v) += h;
            xm(v) -= h;
            Eigen::VectorXcd fd = (sys.residual(sys.unpack(xp)) - sys.residual(sys.unpack(xm))) / (2 * h);
            worst = std::max(worst, (fd - J.col(v)).norm() / std::max(1.0, J.col(v).norm()));
        }
        CHECK(worst < 1e-8);
    }
}

TEST_CASE("pack and unpack round trip") {
    Fixture fx;
    RepPoint base = fx.base(3);
    ContinuationSystem sys = fx.system(3, base);
    RepPoint back = sys.unpack(sys.pack(base));
    for (std::size_t g = 0; g < base.images.size(); ++g)
        for (std::size_t k = 0; k < 9; ++k)
            CHECK(back.images[g].entries()[k] == base.images[g].entries()[k]);
}

TEST_CASE("jacobian kernel at the base point is the leftover centralizer") {
    Fixture fx;
    for (std::size_t n = 2; n <= 4; ++n) {
        RepPoint base = fx.base(n);
        ContinuationSystem sys = fx.system(n, base);
        CHECK(kernel_dimension(sys, base) == n - 1);
    }
}

TEST_CASE("newton at the base point converges and reports conditioning") {
    Fixture fx;
    RepPoint base = fx.base(3);
    ContinuationSystem sys = fx.system(3, base);
    NewtonResult nr = newton_solve(sys, base);
    CHECK(nr.converged);
    CHECK(nr.residual_norm < 1e-12);
    CHECK(nr.condition_number >= 1.0);
    CHECK(std::isfinite(nr.condition_number));
}

TEST_CASE("isolation probe returns to the base character") {
    Fixture fx;
    for (std::size_t n = 2; n <= 3; ++n) {
        RepPoint base = fx.base(n);
        ContinuationSystem sys = fx.system(n, base);
        ProbeReport rep = unipotent_isolation_probe(sys, base, 5, 1e-2, 12345);
        CHECK(rep.trials == 5);
        CHECK(rep.converged >= 1);
        CHECK(rep.returned_to_base == rep.converged);
        CHECK(rep.max_character_distance < 1e-8);
        CHECK(rep.max_residual < 1e-12);
    }
}

TEST_CASE("zero radius probe stays put") {
    Fixture fx;
    RepPoint base = fx.base(2);
    ContinuationSystem sys = fx.system(2, base);
    ProbeReport rep = unipotent_isolation_probe(sys, base, 3, 0.0, 7);
    CHECK(rep.converged == 3);
    CHECK(rep.returned_to_base == 3);
    CHECK(rep.max_character_distance < 1e-14);
}

TEST_CASE("probe reports are reproducible for a fixed seed") {
    Fixture fx;
    RepPoint base = fx.base(2);
    ContinuationSystem sys = fx.system(2, base);
    ProbeReport r1 = unipotent_isolation_probe(sys, base, 4, 1e-2, 42);
    ProbeReport r2 = unipotent_isolation_probe(sys, base, 4, 1e-2, 42);
    CHECK(r1.converged == r2.converged);
    CHECK(r1.returned_to_base == r2.returned_to_base);
    CHECK(r1.max_character_distance == r2.max_character_distance);
    CHECK(r1.max_residual == r2.max_residual);
}

TEST_CASE("coordinate sweep realizes perturbed targets on new characters") {
    Fixture fx;
    for (std::size_t n = 2; n <= 3; ++n) {
        RepPoint base = fx.base(n);
        ContinuationSystem sys = fx.system(n, base);
        SweepReport rep = coordinate_sweep_probe(sys, base, 5, 1e-3, 999);
        CHECK(rep.converged == 5);
        CHECK(rep.hit_target == 5);
        CHECK(rep.max_target_error < 1e-10);
        // distinct targets produce measurably distinct characters
        CHECK(rep.min_character_shift > 1e-6);
    }
}

TEST_CASE("character samples are conjugation invariant") {
    Fixture fx;
    std::mt19937_64 rng(7);
    for (std::size_t n = 2; n <= 3; ++n) {
        RepPoint base = fx.base(n);
        CMatrix g = CMatrix::identity(n);
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j) g.at(i, j) += 0.25 * detail::random_unit_box(rng);
        CMatrix gi = complex_inverse(g);
        RepPoint conj;
        for (const auto& m : base.images) conj.images.push_back(g * m * gi);
        auto s1 = character_sample(fx.data.pres, base, n);
        auto s2 = character_sample(fx.data.pres, conj, n);
        CHECK(s1.size() == 160);  // freely reduced words of length 1..4 in two generators
        CHECK(character_distance(s1, s2) < 1e-9);
    }
}

TEST_CASE("character sample order is deterministic") {
    Fixture fx;
    RepPoint base = fx.base(2);
    auto s1 = character_sample(fx.data.pres, base, 2);
    auto s2 = character_sample(fx.data.pres, base, 2);
    REQUIRE(s1.size() == s2.size());
    for (std::size_t k = 0; k < s1.size(); ++k) CHECK(s1[k] == s2[k]);
}

TEST_CASE("character distance rejects mismatched samples") {
    CHECK_THROWS_AS(character_distance({Complex(1, 0)}, {Complex(1, 0), Complex(0, 0)}), std::invalid_argument);
}

TEST_CASE("gauge selection rejects points with oversized centralizer") {
    // the identity is central: its orbit moves nothing
    CHECK_THROWS_AS(gauge_coordinates(CMatrix::identity(3), 6), std::logic_error);
}

TEST_CASE("system assembly validates its inputs") {
    Fixture fx;
    RepPoint base = fx.base(2);
    CHECK_THROWS_AS(build_system(fx.data.pres, 2, base, {}), std::invalid_argument);
    Presentation no_cusp = fx.data.pres;
    no_cusp.cusps.clear();
    CHECK_THROWS_AS(build_system(no_cusp, 2, base, {Complex(0, 0)}), std::invalid_argument);
}

TEST_CASE("numeric sigma derivatives match the exact certificate") {
    Fixture fx;
    for (std::size_t n = 2; n <= 4; ++n) {
        JacobianCertificate<FieldElement> cert = sigma_derivative_matrix(fx.cusp.shape, n, 1, 0);
        REQUIRE(cert.certified);
        Eigen::MatrixXcd Jn = numeric_sigma_jacobian(fx.emb, fx.cusp.shape, n, 1, 0);
        double worst = 0;
        for (std::size_t i = 0; i + 1 < n; ++i)
            for (std::size_t j = 0; j + 1 < n; ++j) {
                Complex exact = embed(fx.emb, cert.jac.at(i, j));
                worst = std::max(worst, std::abs(exact - Jn(i, j)) / std::max(1.0, std::abs(exact)));
            }
        CHECK(worst < 1e-8);
    }
}
