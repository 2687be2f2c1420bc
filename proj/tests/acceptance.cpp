#include <chrono>
#include <functional>
#include <iomanip>
#include <iostream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "charvar/continuation.hpp"
#include "charvar/deformation.hpp"
#include "test_support.hpp"

using namespace charvar;
using charvar::testing::random_sl2;
using charvar::testing::random_traceless;

namespace {

bool fail(std::string& detail, const std::string& msg) {
    detail = msg;
    return false;
}

std::string tag(std::size_t n, int extra = 0, const char* extra_name = nullptr) {
    std::string s = "n=" + std::to_string(n);
    if (extra_name) s += std::string(", ") + extra_name + "=" + std::to_string(extra);
    return s;
}

// --- 1: symmetric power homomorphism and one-parameter laws -----------------

bool criterion1(std::string& detail) {
    std::mt19937_64 rng(1001);
    auto gauss = NumberField::gaussian();
    for (std::size_t n = 2; n <= 10; ++n) {
        for (int trial = 0; trial < 50; ++trial) {
            auto a = random_sl2(gauss, rng, trial % 2 ? -1 : +1);
            auto b = random_sl2(gauss, rng);
            if (!(sym_power(a * b, n) == sym_power(a, n) * sym_power(b, n)))
                return fail(detail, "homomorphism failed at " + tag(n, trial, "trial"));
        }

        Matrix<Rational> f(2), g(2), e(2);
        f.at(0, 1) = rational(1);
        g.at(1, 0) = rational(1);
        e.at(0, 0) = rational(1);
        e.at(1, 1) = rational(-1);
        Matrix<Rational> hp = sym_power_lie(f, n);
        if (!(hp == h_plus(n)) || !(sym_power_lie(g, n) == h_minus(n)))
            return fail(detail, "lie ladder images wrong at " + tag(n));
        for (std::size_t i = 0; i + 1 < n; ++i)
            if (!(hp.at(i, i + 1) == rational(static_cast<long>(i) + 1)))
                return fail(detail, "ladder entry wrong at " + tag(n));
        if (!(sym_power_lie(e, n) == bracket(h_plus(n), h_minus(n))))
            return fail(detail, "diagonal lie image wrong at " + tag(n));

        // unipotent law as a polynomial identity in the translation parameter
        Poly<Rational> beta = Poly<Rational>::variable(Var::beta);
        auto hp_poly = matrix_from_rational<Poly<Rational>>(h_plus(n));
        Matrix<Poly<Rational>> expected = nilpotent_exp(hp_poly, beta);
        if (!(sym_power(SL2<Poly<Rational>>::parabolic(beta, +1), n) == expected))
            return fail(detail, "unipotent law (+ lift) failed at " + tag(n));
        Poly<Rational> prefactor((n % 2 == 0) ? rational(-1) : rational(1), Var::beta);
        if (!(sym_power(SL2<Poly<Rational>>::parabolic(beta, -1), n) == expected * prefactor))
            return fail(detail, "unipotent law (- lift) failed at " + tag(n));

        // diagonal scaling with a formal weight variable, cross-multiplied
        Matrix<Poly<Rational>> dt(n);
        for (std::size_t j = 0; j < n; ++j)
            dt.at(j, j) = Poly<Rational>::monomial(Var::lambda, rational(1), 2 * (n - 1 - j));
        for (std::size_t i = 1; i < n; ++i) {
            auto hpi = matrix_from_rational<Poly<Rational>>(h_plus_power(n, i));
            if (!(dt * hpi == hpi * dt * Poly<Rational>::monomial(Var::lambda, rational(1), 2 * i)))
                return fail(detail, "diagonal scaling failed at " + tag(n, static_cast<int>(i), "i"));
        }
    }
    return true;
}

// --- 2: principal nilpotent centralizer and adjoint decomposition -----------

bool criterion2(std::string& detail) {
    for (std::size_t n = 2; n <= 10; ++n) {
        // computes ker(ad h+) on traceless matrices and checks both inclusions
        // against span{h+^i}; throws if anything is off
        std::vector<Matrix<Rational>> inv;
        try {
            inv = parabolic_invariants(n);
        } catch (const std::exception& e) {
            return fail(detail, std::string(e.what()) + " at " + tag(n));
        }
        if (inv.size() != n - 1) return fail(detail, "centralizer dimension wrong at " + tag(n));
        for (const auto& v : inv)
            if (!bracket(h_plus(n), v).is_zero()) return fail(detail, "non-invariant kernel vector at " + tag(n));

        auto dims = clebsch_gordan_dims(n);
        if (dims.size() != n - 1) return fail(detail, "component count wrong at " + tag(n));
        std::size_t total = 0;
        for (std::size_t k = 0; k < dims.size(); ++k) {
            if (dims[k] != 2 * (n - k) - 1) return fail(detail, "component dimension wrong at " + tag(n));
            total += dims[k];
        }
        if (total != n * n - 1) return fail(detail, "component dimensions do not fill sl_n at " + tag(n));
    }
    return true;
}

// --- 3: ladder trace pairing and torus cup products --------------------------

bool criterion3(std::string& detail) {
    for (std::size_t n = 2; n <= 10; ++n) {
        PairingConstants pc = pairing_constants(n);
        for (std::size_t i = 1; i < n; ++i) {
            if (!(pc.at(i) != 0)) return fail(detail, "vanishing pairing constant at " + tag(n));
            for (std::size_t j = 1; j < n; ++j) {
                Rational t = trace_form(h_minus_power(n, i), h_plus_power(n, j));
                Rational expect = (i == j) ? pc.at(i) : Rational(0);
                if (!(t == expect)) return fail(detail, "ladder pairing off-diagonal at " + tag(n));
            }
        }
    }
    for (std::size_t n = 2; n <= 8; ++n) {
        auto basis = detail::traceless_basis(n);
        Matrix<Rational> gram(basis.size());
        for (std::size_t r = 0; r < basis.size(); ++r)
            for (std::size_t c = 0; c < basis.size(); ++c) gram.at(r, c) = trace_form(basis[r], basis[c]);
        if (!(det_gaussian(gram) != 0)) return fail(detail, "degenerate trace form at " + tag(n));
    }
    // cup products against the torus volume form, symbolically in tau
    using FP = Poly<FieldElement>;
    auto shape = formal_cusp();
    FP a(FieldElement(3), Var::tau), b(FieldElement(-2), Var::tau);
    FP tau_poly = FP::variable(Var::tau);
    for (std::size_t n = 2; n <= 8; ++n) {
        PairingConstants pc = pairing_constants(n);
        for (std::size_t i = 1; i < n; ++i)
            for (std::size_t j = 1; j < n; ++j) {
                FP value = cup_pairing(shape, TorusForm<FP>::constant(a, b, i), TorusForm<FP>::omega(j), n);
                if (i == j) {
                    FP expect = (a * tau_poly - b) * FP(FieldElement(pc.at(i)), Var::tau);
                    if (!(value == expect)) return fail(detail, "cup diagonal wrong at " + tag(n));
                } else if (!value.is_zero()) {
                    return fail(detail, "cup off-diagonal nonzero at " + tag(n));
                }
            }
    }
    return true;
}

// --- 4: cusp growth exponents -------------------------------------------------

bool criterion4(std::string& detail) {
    for (std::size_t n = 2; n <= 10; ++n)
        for (std::size_t k = 1; k < n; ++k) {
            auto cst = TorusForm<Rational>::constant(rational(1), rational(2), k);
            auto omg = TorusForm<Rational>::omega(k);
            if (growth_exponent(cst, n) != -2 * static_cast<int>(k))
                return fail(detail, "constant family exponent wrong at " + tag(n));
            if (growth_exponent(omg, n) != 2 * static_cast<int>(k))
                return fail(detail, "volume-form family exponent wrong at " + tag(n));
            if (!square_integrable(cst, n)) return fail(detail, "constant family not square integrable at " + tag(n));
            if (square_integrable(omg, n)) return fail(detail, "volume-form family square integrable at " + tag(n));
        }
    return true;
}

// --- 5: peripheral q-polynomial certificates ----------------------------------

bool criterion5(std::string& detail) {
    ManifoldData data = builtin_figure_eight();
    NormalizedCusp cusp = peripheral_parabolic_check(data);
    for (std::size_t n = 2; n <= 8; ++n)
        for (int sm : {+1, -1}) {
            CuspShape<FieldElement> shape{cusp.shape.tau, sm, cusp.shape.sign_longitude};
            PeripheralImage<FieldElement> img = peripheral_image(shape, n, 1, 0);
            for (std::size_t i = 1; i < n; ++i) {
                auto qp = q_polynomial(shape, n, i, 1, 0);
                if (!qp.nonzero) return fail(detail, "vanishing q polynomial at " + tag(n, sm, "lift"));
                if (!qp.Q.coeff(0).is_zero()) return fail(detail, "q(0) != 0 at " + tag(n, sm, "lift"));
                if (qp.val_unit != n - 1 - i)
                    return fail(detail, "unit-eigenvalue valuation wrong at " + tag(n, sm, "lift"));
                if (!(qp.Q == q_polynomial_oracle(shape, n, i, 1, 0)))
                    return fail(detail, "closed form disagrees with the determinant oracle at " + tag(n, sm, "lift"));
            }
            for (std::size_t j = 1; j < n; ++j)
                for (int dir = 0; dir < 2; ++dir) {
                    FieldElement a(dir == 0 ? 1 : 0), b(dir == 0 ? 0 : 1);
                    Matrix<FieldElement> d = integrate_form(shape, TorusForm<FieldElement>::constant(a, b, j), 1, 0, n);
                    if (!direction_derivative(img, d * img.rho).Q.is_zero())
                        return fail(detail, "constant direction not annihilated at " + tag(n, sm, "lift"));
                }
        }
    return true;
}

// --- 6: peripheral coordinate jacobian certificates ----------------------------

bool criterion6(std::string& detail) {
    ManifoldData data = builtin_figure_eight();
    NormalizedCusp cusp = peripheral_parabolic_check(data);
    for (std::size_t n = 2; n <= 10; ++n)
        for (long q : {0L, 1L}) {
            auto cert = sigma_derivative_matrix(cusp.shape, n, 1, q);
            if (ring_ops<FieldElement>::is_zero(cert.det_jac))
                return fail(detail, "jacobian determinant vanishes at " + tag(n, static_cast<int>(q), "q"));
            if (!cert.certified) return fail(detail, "certificate rejected at " + tag(n, static_cast<int>(q), "q"));
        }
    auto c2 = sigma_derivative_matrix(cusp.shape, 2, 1, 0);
    Poly<FieldElement> lambda_poly(Var::lambda, {FieldElement(0), FieldElement(1)});
    if (!(c2.qs[0].Q == lambda_poly)) return fail(detail, "n=2 q polynomial is not lambda");
    if (!(c2.det_jac == FieldElement(1) || c2.det_jac == FieldElement(-1)))
        return fail(detail, "n=2 jacobian determinant is not a unit");
    std::ostringstream os;
    serialize_certificate(c2, os);
    std::string text = os.str();
    for (const char* needle : {"certificate: peripheral-coordinate-jacobian v1", "Q[1]:", "det J:", "verdict: certified"})
        if (text.find(needle) == std::string::npos)
            return fail(detail, std::string("serialized certificate is missing '") + needle + "'");
    return true;
}

// --- 7: coboundary invariance of sigma derivatives -----------------------------

bool criterion7(std::string& detail) {
    std::mt19937_64 rng(707);
    ManifoldData data = builtin_figure_eight();
    NormalizedCusp cusp = peripheral_parabolic_check(data);
    for (std::size_t n = 2; n <= 6; ++n) {
        PeripheralImage<FieldElement> img = peripheral_image(cusp.shape, n, 1, 0);
        Matrix<FieldElement> rho_inv = inverse(img.rho);
        for (std::size_t i = 1; i < n; ++i) {
            Matrix<FieldElement> d = integrate_form(cusp.shape, TorusForm<FieldElement>::omega(i), 1, 0, n);
            Matrix<FieldElement> X = d * img.rho;
            Poly<FieldElement> base = direction_derivative(img, X).Q;
            for (int trial = 0; trial < 20; ++trial) {
                auto v = matrix_from_rational<FieldElement>(random_traceless(n, rng));
                Matrix<FieldElement> shifted = X + v - img.rho * v * rho_inv;
                if (!(direction_derivative(img, shifted).Q == base))
                    return fail(detail, "sigma derivative moved at " + tag(n, trial, "trial"));
            }
        }
    }
    return true;
}

// --- 8 and 9: numerical confirmation --------------------------------------------

RepPoint embedded_point(const ManifoldData& data, const EmbeddedField& emb, std::size_t n) {
    RepPoint p;
    for (char g : data.pres.gens) p.images.push_back(embed_matrix(emb, sym_power(data.lift.images.at(g), n)));
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

bool criterion8(std::string& detail) {
    ManifoldData data = builtin_figure_eight();
    NormalizedCusp cusp = peripheral_parabolic_check(data);
    EmbeddedField emb = embed_field(data.lift.field, cusp.shape.tau);
    std::ostringstream note;
    for (std::size_t n = 2; n <= 3; ++n) {
        RepPoint base = embedded_point(data, emb, n);
        ContinuationSystem sys = build_system(data.pres, n, base, meridian_sigmas(data.pres, base, n));
        SweepReport rep = coordinate_sweep_probe(sys, base, 25, 1e-3, 2024);
        if (rep.converged != rep.trials)
            return fail(detail, std::to_string(rep.trials - rep.converged) + " sweep trials diverged at " + tag(n));
        if (rep.max_residual >= 1e-10) return fail(detail, "final residual too large at " + tag(n));
        if (rep.hit_target != rep.trials || rep.max_target_error >= 1e-9)
            return fail(detail, "target recovery failed at " + tag(n));
        if (rep.min_character_shift <= 1e-6)
            return fail(detail, "perturbed targets did not move the character at " + tag(n));

        auto cert = sigma_derivative_matrix(cusp.shape, n, 1, 0);
        Eigen::MatrixXcd Jn = numeric_sigma_jacobian(emb, cusp.shape, n, 1, 0);
        double worst = 0;
        for (std::size_t i = 0; i + 1 < n; ++i)
            for (std::size_t j = 0; j + 1 < n; ++j) {
                Complex exact = embed(emb, cert.jac.at(i, j));
                worst = std::max(worst, std::abs(exact - Jn(i, j)) / std::max(1.0, std::abs(exact)));
            }
        if (worst >= 1e-8) return fail(detail, "exact and numeric jacobians disagree at " + tag(n));
        note << (n > 2 ? "; " : "") << tag(n) << ": residual " << std::scientific << std::setprecision(1)
             << rep.max_residual << ", target error " << rep.max_target_error << ", min character shift "
             << rep.min_character_shift << ", jacobian mismatch " << worst;
    }
    detail = note.str();
    return true;
}

bool criterion9(std::string& detail) {
    ManifoldData data = builtin_figure_eight();
    NormalizedCusp cusp = peripheral_parabolic_check(data);
    EmbeddedField emb = embed_field(data.lift.field, cusp.shape.tau);
    std::ostringstream note;
    for (std::size_t n = 2; n <= 3; ++n) {
        RepPoint base = embedded_point(data, emb, n);
        ContinuationSystem sys = build_system(data.pres, n, base, meridian_sigmas(data.pres, base, n));
        ProbeReport rep = unipotent_isolation_probe(sys, base, 100, 1e-2, 31337);
        std::size_t excluded = rep.trials - rep.converged;
        if (rep.converged == 0) return fail(detail, "no trial converged at " + tag(n));
        if (rep.returned_to_base != rep.converged)
            return fail(detail, std::to_string(rep.converged - rep.returned_to_base) +
                                    " converged trials landed on another character at " + tag(n));
        note << (n > 2 ? "; " : "") << tag(n) << ": " << rep.converged << "/" << rep.trials
             << " converged (excluded " << excluded << "), max character distance " << std::scientific
             << std::setprecision(1) << rep.max_character_distance;
    }
    detail = note.str();
    return true;
}

struct Criterion {
    int id;
    const char* label;
    double budget_seconds;
    std::function<bool(std::string&)> body;
};

}  // namespace

int main() {
    std::vector<Criterion> criteria = {
        {1, "symmetric power homomorphism and one-parameter laws", 30.0, criterion1},
        {2, "principal nilpotent centralizer and adjoint decomposition", 0.0, criterion2},
        {3, "ladder trace pairing and torus cup products", 0.0, criterion3},
        {4, "cusp growth exponents", 0.0, criterion4},
        {5, "peripheral q-polynomial certificates, both lifts", 120.0, criterion5},
        {6, "coordinate jacobian certificates, two peripheral classes", 0.0, criterion6},
        {7, "coboundary invariance of sigma derivatives", 0.0, criterion7},
        {8, "newton recovery of perturbed sigma targets", 120.0, criterion8},
        {9, "return-to-base isolation probe", 300.0, criterion9},
    };

    int failures = 0;
    for (const auto& c : criteria) {
        auto t0 = std::chrono::steady_clock::now();
        bool ok = false;
        std::string detail;
        try {
            ok = c.body(detail);
        } catch (const std::exception& e) {
            detail = std::string("exception: ") + e.what();
        }
        double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        if (ok && c.budget_seconds > 0 && secs > c.budget_seconds) {
            ok = false;
            detail = "over the " + std::to_string(static_cast<int>(c.budget_seconds)) + "s budget";
        }
        std::cout << (ok ? "[PASS]" : "[FAIL]") << " criterion " << c.id << ": " << c.label << " ("
                  << std::fixed << std::setprecision(1) << secs << "s)\n";
        if (!detail.empty()) std::cout << "       " << detail << "\n";
        if (!ok) ++failures;
    }
    std::cout << (9 - failures) << "/9 criteria passed\n";
    return failures == 0 ? 0 : 1;
}
