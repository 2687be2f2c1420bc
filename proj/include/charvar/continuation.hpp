#pragma once

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>
#include <Eigen/SVD>

#include <algorithm>
#include <complex>
#include <cstddef>
#include <cstdint>
#include <iomanip>
#include <limits>
#include <memory>
#include <optional>
#include <random>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "charvar/cusp_forms.hpp"
#include "charvar/dual.hpp"
#include "charvar/linalg.hpp"
#include "charvar/manifold.hpp"

namespace charvar {

using Complex = std::complex<double>;

template <>
struct ring_ops<Complex> {
    static Complex zero() { return Complex(0.0, 0.0); }
    static Complex one() { return Complex(1.0, 0.0); }
    static bool is_zero(const Complex& a) { return a == Complex(0.0, 0.0); }
    static Complex div_int(const Complex& a, long k) {
        if (k == 0) throw std::invalid_argument("div_int: zero divisor");
        return a / static_cast<double>(k);
    }
    static std::optional<Complex> try_invert(const Complex& a) {
        if (a == Complex(0.0, 0.0)) return std::nullopt;
        return Complex(1.0, 0.0) / a;
    }
    static Complex from_rational(const Rational& q) { return Complex(q.get_d(), 0.0); }
    static std::string str(const Complex& a) {
        std::ostringstream os;
        os << a.real() << (a.imag() < 0 ? "" : "+") << a.imag() << "i";
        return os.str();
    }
};

using CMatrix = Matrix<Complex>;
using DMatrix = Matrix<Dual<Complex>>;

// --- number field embedding ------------------------------------------------

struct EmbeddedField {
    std::shared_ptr<const NumberField> field;
    Complex root;
};

inline std::vector<Complex> minimal_polynomial_roots(const std::vector<Rational>& monic) {
    std::size_t d = monic.size() - 1;
    if (d == 0) throw std::invalid_argument("minimal_polynomial_roots: constant polynomial");
    if (d == 1) return {Complex(-monic[0].get_d(), 0.0)};
    Eigen::MatrixXcd companion = Eigen::MatrixXcd::Zero(d, d);
    for (std::size_t i = 1; i < d; ++i) companion(i, i - 1) = 1.0;
    for (std::size_t i = 0; i < d; ++i) companion(i, d - 1) = Complex(-monic[i].get_d(), 0.0);
    Eigen::ComplexEigenSolver<Eigen::MatrixXcd> es(companion);
    std::vector<Complex> roots;
    for (Eigen::Index k = 0; k < es.eigenvalues().size(); ++k) roots.push_back(es.eigenvalues()(k));
    return roots;
}

inline Complex embed_with_root(const Complex& root, const FieldElement& x) {
    Complex acc(0.0, 0.0);
    const auto& c = x.coeffs();
    for (std::size_t k = c.size(); k-- > 0;) acc = acc * root + Complex(c[k].get_d(), 0.0);
    return acc;
}

// Chooses the complex place of the field under which `orient` gets a
// positive imaginary part (the upper-half-space convention for the cusp
// modulus). Falls back to the first root for rational data.
inline EmbeddedField embed_field(const std::shared_ptr<const NumberField>& field, const FieldElement& orient) {
    auto roots = minimal_polynomial_roots(field->min_poly());
    for (const auto& r : roots)
        if (embed_with_root(r, orient).imag() > 1e-12) return EmbeddedField{field, r};
    return EmbeddedField{field, roots.front()};
}

inline Complex embed(const EmbeddedField& e, const FieldElement& x) {
    if (x.field()->degree() > 1 && !x.field()->same_as(*e.field))
        throw std::invalid_argument("embed: element from a different field");
    return embed_with_root(e.root, x);
}

inline CMatrix embed_matrix(const EmbeddedField& e, const Matrix<FieldElement>& M) {
    return M.map([&](const FieldElement& x) { return embed(e, x); });
}

// --- numeric helpers ---------------------------------------------------------

inline Eigen::MatrixXcd to_eigen(const CMatrix& m) {
    Eigen::MatrixXcd out(m.size(), m.size());
    for (std::size_t i = 0; i < m.size(); ++i)
        for (std::size_t j = 0; j < m.size(); ++j) out(i, j) = m.at(i, j);
    return out;
}

inline CMatrix from_eigen(const Eigen::MatrixXcd& m) {
    CMatrix out(static_cast<std::size_t>(m.rows()));
    for (Eigen::Index i = 0; i < m.rows(); ++i)
        for (Eigen::Index j = 0; j < m.cols(); ++j) out.at(i, j) = m(i, j);
    return out;
}

inline CMatrix complex_inverse(const CMatrix& m) {
    return from_eigen(to_eigen(m).partialPivLu().inverse());
}

// (A + eps B)^{-1} = A^{-1} - eps A^{-1} B A^{-1}
inline DMatrix dual_inverse(const DMatrix& m) {
    std::size_t n = m.size();
    CMatrix a(n), b(n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) { a.at(i, j) = m.at(i, j).a; b.at(i, j) = m.at(i, j).b; }
    CMatrix ainv = complex_inverse(a);
    CMatrix slope = -(ainv * b * ainv);
    DMatrix out(n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) out.at(i, j) = Dual<Complex>(ainv.at(i, j), slope.at(i, j));
    return out;
}

namespace detail {

template <class R, class InvFn>
Matrix<R> evaluate_word_images(const std::vector<Matrix<R>>& images, const std::vector<char>& gens,
                               const std::string& word, std::size_t n, InvFn inv) {
    Matrix<R> acc = Matrix<R>::identity(n);
    for (char c : word) {
        char base = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
        std::size_t idx = gens.size();
        for (std::size_t k = 0; k < gens.size(); ++k)
            if (gens[k] == base) { idx = k; break; }
        if (idx == gens.size()) throw std::invalid_argument("evaluate_word_images: unknown letter in word");
        if (std::isupper(static_cast<unsigned char>(c)))
            acc = acc * inv(images[idx]);
        else
            acc = acc * images[idx];
    }
    return acc;
}

inline double u01(std::mt19937_64& rng) {
    return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

inline Complex random_unit_box(std::mt19937_64& rng) {
    return Complex(2.0 * u01(rng) - 1.0, 2.0 * u01(rng) - 1.0);
}

inline std::string format_sci(double v) {
    std::ostringstream os;
    os << std::scientific << std::setprecision(3) << v;
    return os.str();
}

}  // namespace detail

// --- the constraint system ---------------------------------------------------

struct RepPoint {
    std::vector<CMatrix> images;  // one per presentation generator, in order
};

// Polynomial system cutting out unipotent-boundary representations near the
// base point with prescribed meridian symmetric functions: relator entries,
// determinant of each generator, and sigma_1..sigma_{n-1} of the meridian
// word. Conjugation freedom is removed by freezing a transversal set of the
// first generator's entries; the leftover centralizer directions are handled
// by least-squares steps.
class ContinuationSystem {
public:
    Presentation pres;
    std::size_t n = 0;
    std::string sigma_word;               // meridian word the targets refer to
    std::vector<Complex> sigma_targets;   // sigma_i targets, i = 1..n-1
    std::vector<std::size_t> frozen;      // coordinate indices into generator 0's entry block
    std::vector<Complex> frozen_values;

    std::size_t gen_count() const { return pres.gens.size(); }
    std::size_t coord_count() const { return gen_count() * n * n; }
    std::size_t var_count() const { return coord_count() - frozen.size(); }
    std::size_t row_count() const { return pres.relators.size() * n * n + gen_count() + (n - 1); }

    bool is_frozen(std::size_t coord) const {
        for (std::size_t f : frozen)
            if (f == coord) return true;
        return false;
    }

    Eigen::VectorXcd pack(const RepPoint& p) const {
        Eigen::VectorXcd x(var_count());
        std::size_t v = 0;
        for (std::size_t g = 0; g < gen_count(); ++g)
            for (std::size_t e = 0; e < n * n; ++e) {
                std::size_t coord = g * n * n + e;
                if (is_frozen(coord)) continue;
                x(v++) = p.images[g].entries()[e];
            }
        return x;
    }

    RepPoint unpack(const Eigen::VectorXcd& x) const {
        RepPoint p;
        std::size_t v = 0;
        for (std::size_t g = 0; g < gen_count(); ++g) {
            CMatrix m(n);
            for (std::size_t e = 0; e < n * n; ++e) {
                std::size_t coord = g * n * n + e;
                Complex val;
                if (is_frozen(coord)) {
                    for (std::size_t f = 0; f < frozen.size(); ++f)
                        if (frozen[f] == coord) { val = frozen_values[f]; break; }
                } else {
                    val = x(v++);
                }
                m.at(e / n, e % n) = val;
            }
            p.images.push_back(std::move(m));
        }
        return p;
    }

    template <class R, class InvFn>
    std::vector<R> residual_rows(const std::vector<Matrix<R>>& images, InvFn inv) const {
        std::vector<R> rows;
        rows.reserve(row_count());
        for (const auto& rel : pres.relators) {
            Matrix<R> val = detail::evaluate_word_images(images, pres.gens, rel, n, inv);
            Matrix<R> diff = val - Matrix<R>::identity(n);
            for (const R& e : diff.entries()) rows.push_back(e);
        }
        for (const auto& img : images) rows.push_back(det_expansion(img) - ring_ops<R>::one());
        Matrix<R> mer = detail::evaluate_word_images(images, pres.gens, sigma_word, n, inv);
        Poly<R> cp = char_poly(mer);
        for (std::size_t i = 1; i < n; ++i) {
            R coeff = cp.coeff(n - i);
            R sigma = (i % 2 == 0) ? coeff : -coeff;
            rows.push_back(sigma - R(sigma_targets[i - 1]));
        }
        return rows;
    }

    Eigen::VectorXcd residual(const RepPoint& p) const {
        auto rows = residual_rows<Complex>(p.images, [](const CMatrix& m) { return complex_inverse(m); });
        Eigen::VectorXcd r(rows.size());
        for (std::size_t k = 0; k < rows.size(); ++k) r(k) = rows[k];
        return r;
    }

    // Forward-mode derivative: one dual-number sweep per variable.
    Eigen::MatrixXcd jacobian(const RepPoint& p) const {
        Eigen::MatrixXcd J(row_count(), var_count());
        std::size_t v = 0;
        for (std::size_t g = 0; g < gen_count(); ++g)
            for (std::size_t e = 0; e < n * n; ++e) {
                std::size_t coord = g * n * n + e;
                if (is_frozen(coord)) continue;
                std::vector<DMatrix> dual_images;
                for (std::size_t h = 0; h < gen_count(); ++h) {
                    DMatrix dm(n);
                    for (std::size_t k = 0; k < n * n; ++k) {
                        Complex base = p.images[h].entries()[k];
                        Complex slope = (h == g && k == e) ? Complex(1.0, 0.0) : Complex(0.0, 0.0);
                        dm.at(k / n, k % n) = Dual<Complex>(base, slope);
                    }
                    dual_images.push_back(std::move(dm));
                }
                auto rows = residual_rows<Dual<Complex>>(dual_images, [](const DMatrix& m) { return dual_inverse(m); });
                for (std::size_t r = 0; r < rows.size(); ++r) J(r, v) = rows[r].b;
                ++v;
            }
        return J;
    }
};

// Greedy transversal selection: entries of the first generator's image that
// the conjugation orbit moves independently. Returns coordinate indices
// (row-major into the entry block); their count must be n^2 - dim centralizer.
inline std::vector<std::size_t> gauge_coordinates(const CMatrix& g0, std::size_t expected_rank) {
    std::size_t n = g0.size();
    std::size_t nn = n * n;
    // columns: directions v = E_{ab}; rows: coordinates of [v, g0]
    Eigen::MatrixXcd A = Eigen::MatrixXcd::Zero(nn, nn);
    for (std::size_t a = 0; a < n; ++a)
        for (std::size_t b = 0; b < n; ++b) {
            CMatrix v(n);
            v.at(a, b) = Complex(1.0, 0.0);
            CMatrix img = v * g0 - g0 * v;
            std::size_t col = a * n + b;
            for (std::size_t k = 0; k < nn; ++k) A(k, col) = img.entries()[k];
        }
    double scale = A.cwiseAbs().maxCoeff();
    double tol = scale * 1e-9;
    std::vector<std::size_t> picked;
    std::vector<bool> used(nn, false);
    Eigen::MatrixXcd W = A;
    for (std::size_t col = 0; col < nn; ++col) {
        std::size_t best = nn;
        double best_abs = tol;
        for (std::size_t r = 0; r < nn; ++r) {
            if (used[r]) continue;
            double v = std::abs(W(r, col));
            if (v > best_abs) { best_abs = v; best = r; }
        }
        if (best == nn) continue;
        used[best] = true;
        picked.push_back(best);
        for (std::size_t r = 0; r < nn; ++r) {
            if (r == best) continue;
            Complex f = W(r, col) / W(best, col);
            for (std::size_t c = col; c < nn; ++c) W(r, c) -= f * W(best, c);
        }
    }
    if (picked.size() != expected_rank)
        throw std::logic_error("gauge_coordinates: orbit rank " + std::to_string(picked.size()) +
                               ", expected " + std::to_string(expected_rank));
    std::sort(picked.begin(), picked.end());
    return picked;
}

// Assembles the system at a base point; sigma targets default to the base
// point's own meridian symmetric functions.
inline ContinuationSystem build_system(const Presentation& pres, std::size_t n, const RepPoint& base,
                                       const std::vector<Complex>& sigma_targets, std::size_t cusp_index = 0) {
    if (pres.cusps.empty()) throw std::invalid_argument("build_system: presentation has no cusp data");
    if (cusp_index >= pres.cusps.size()) throw std::out_of_range("build_system: no such cusp");
    if (sigma_targets.size() != n - 1) throw std::invalid_argument("build_system: expected n-1 sigma targets");
    ContinuationSystem sys;
    sys.pres = pres;
    sys.n = n;
    sys.sigma_word = pres.cusps[cusp_index].meridian;
    sys.sigma_targets = sigma_targets;
    // centralizer of a regular element has dimension n, so the orbit moves
    // n^2 - n coordinates of the first generator independently
    sys.frozen = gauge_coordinates(base.images.at(0), n * n - n);
    for (std::size_t f : sys.frozen) sys.frozen_values.push_back(base.images[0].entries()[f]);
    return sys;
}

struct NewtonOptions {
    int max_iterations = 60;
    double tolerance = 1e-12;
    double svd_threshold = 1e-10;
    double min_step = 1e-6;
};

struct NewtonResult {
    bool converged = false;
    int iterations = 0;
    double residual_norm = 0.0;     // recomputed at the returned point
    double condition_number = 0.0;  // of the final Jacobian, over its numerical rank
    RepPoint point;
};

inline NewtonResult newton_solve(const ContinuationSystem& sys, const RepPoint& start, const NewtonOptions& opts = {}) {
    Eigen::VectorXcd x = sys.pack(start);
    NewtonResult res;
    Eigen::VectorXcd r = sys.residual(sys.unpack(x));
    double rn = r.norm();
    for (int it = 0; it < opts.max_iterations; ++it) {
        if (rn < opts.tolerance) break;
        Eigen::MatrixXcd J = sys.jacobian(sys.unpack(x));
        Eigen::JacobiSVD<Eigen::MatrixXcd> svd(J, Eigen::ComputeThinU | Eigen::ComputeThinV);
        svd.setThreshold(opts.svd_threshold);
        Eigen::VectorXcd step = svd.solve(r);
        double t = 1.0;
        bool accepted = false;
        while (t >= opts.min_step) {
            Eigen::VectorXcd xt = x - t * step;
            Eigen::VectorXcd rt = sys.residual(sys.unpack(xt));
            if (rt.norm() < rn) {
                x = xt;
                r = rt;
                rn = rt.norm();
                accepted = true;
                break;
            }
            t *= 0.5;
        }
        res.iterations = it + 1;
        if (!accepted) break;
    }
    res.point = sys.unpack(x);
    res.residual_norm = sys.residual(res.point).norm();
    res.converged = res.residual_norm < opts.tolerance;
    {
        Eigen::JacobiSVD<Eigen::MatrixXcd> svd(sys.jacobian(res.point));
        const auto& sv = svd.singularValues();
        if (sv.size() > 0 && sv(0) > 0.0) {
            double cut = sv(0) * opts.svd_threshold;
            double smallest = sv(0);
            for (Eigen::Index k = 0; k < sv.size(); ++k)
                if (sv(k) > cut) smallest = sv(k);
            res.condition_number = sv(0) / smallest;
        }
    }
    return res;
}

// Dimension of the numerical kernel of the system Jacobian at a point;
// at the base representation this is exactly the leftover centralizer
// freedom, dim = n - 1.
inline std::size_t kernel_dimension(const ContinuationSystem& sys, const RepPoint& p, double rel_tol = 1e-8) {
    Eigen::MatrixXcd J = sys.jacobian(p);
    Eigen::JacobiSVD<Eigen::MatrixXcd> svd(J);
    const auto& sv = svd.singularValues();
    if (sv.size() == 0) return 0;
    double cut = sv(0) * rel_tol;
    std::size_t dim = 0;
    for (Eigen::Index k = 0; k < sv.size(); ++k)
        if (sv(k) < cut) ++dim;
    dim += static_cast<std::size_t>(std::max<Eigen::Index>(0, static_cast<Eigen::Index>(sys.var_count()) - sv.size()));
    return dim;
}

// --- characters ---------------------------------------------------------------

// Traces over all freely reduced words of length 1..max_len in the
// generators and their inverses, in a deterministic order.
inline std::vector<Complex> character_sample(const Presentation& pres, const RepPoint& p, std::size_t n,
                                             std::size_t max_len = 4) {
    std::size_t g = pres.gens.size();
    std::vector<CMatrix> letters;  // 2g letters: gen, gen^{-1} alternating
    for (std::size_t k = 0; k < g; ++k) {
        letters.push_back(p.images[k]);
        letters.push_back(complex_inverse(p.images[k]));
    }
    auto cancels = [](std::size_t x, std::size_t y) { return (x ^ 1) == y; };
    std::vector<Complex> out;
    struct Node { std::vector<std::size_t> word; CMatrix mat; };
    std::vector<Node> frontier;
    for (std::size_t L = 1; L <= max_len; ++L) {
        std::vector<Node> next;
        if (L == 1) {
            for (std::size_t l = 0; l < letters.size(); ++l) next.push_back({{l}, letters[l]});
        } else {
            for (const auto& node : frontier)
                for (std::size_t l = 0; l < letters.size(); ++l) {
                    if (cancels(node.word.back(), l)) continue;
                    next.push_back({[&] { auto w = node.word; w.push_back(l); return w; }(), node.mat * letters[l]});
                }
        }
        for (const auto& node : next) out.push_back(node.mat.trace());
        frontier = std::move(next);
    }
    return out;
}

inline double character_distance(const std::vector<Complex>& s1, const std::vector<Complex>& s2) {
    if (s1.size() != s2.size()) throw std::invalid_argument("character_distance: sample size mismatch");
    double d = 0.0;
    for (std::size_t k = 0; k < s1.size(); ++k) d = std::max(d, std::abs(s1[k] - s2[k]));
    return d;
}

// --- probes --------------------------------------------------------------------

struct ProbeReport {
    std::size_t trials = 0;
    std::size_t converged = 0;
    std::size_t returned_to_base = 0;  // character distance below the match tolerance
    double max_character_distance = 0.0;
    double max_residual = 0.0;
    std::vector<std::string> failures;
};

// Perturbs the starting point inside a ball and lets Newton reconverge with
// the base character as target: every run must come back to the base
// character (local isolation of the unipotent-boundary point).
inline ProbeReport unipotent_isolation_probe(const ContinuationSystem& sys, const RepPoint& base,
                                             std::size_t trials, double radius, std::uint64_t seed,
                                             double match_tol = 1e-8) {
    std::mt19937_64 rng(seed);
    auto base_sample = character_sample(sys.pres, base, sys.n);
    Eigen::VectorXcd x0 = sys.pack(base);
    ProbeReport rep;
    rep.trials = trials;
    for (std::size_t t = 0; t < trials; ++t) {
        Eigen::VectorXcd x = x0;
        for (Eigen::Index k = 0; k < x.size(); ++k) x(k) += radius * detail::random_unit_box(rng);
        NewtonResult nr = newton_solve(sys, sys.unpack(x));
        if (!nr.converged) {
            rep.failures.push_back("trial " + std::to_string(t) + ": no convergence, residual " +
                                   detail::format_sci(nr.residual_norm));
            continue;
        }
        ++rep.converged;
        rep.max_residual = std::max(rep.max_residual, nr.residual_norm);
        double d = character_distance(base_sample, character_sample(sys.pres, nr.point, sys.n));
        rep.max_character_distance = std::max(rep.max_character_distance, d);
        if (d < match_tol)
            ++rep.returned_to_base;
        else
            rep.failures.push_back("trial " + std::to_string(t) + ": converged to a different character, distance " +
                                   std::to_string(d));
    }
    return rep;
}

struct SweepReport {
    std::size_t trials = 0;
    std::size_t converged = 0;
    std::size_t hit_target = 0;       // achieved sigmas match the perturbed targets
    double max_residual = 0.0;
    double max_target_error = 0.0;
    double min_character_shift = 0.0;  // smallest move away from the base character
    std::vector<std::string> failures;
};

// Perturbs the sigma targets and resolves from the base point: the solved
// representation must realize the requested symmetric functions, moving to
// a genuinely nearby character. This is the coordinate property in action.
inline SweepReport coordinate_sweep_probe(const ContinuationSystem& sys, const RepPoint& base, std::size_t trials,
                                          double target_perturbation, std::uint64_t seed, double match_tol = 1e-8) {
    std::mt19937_64 rng(seed);
    auto base_sample = character_sample(sys.pres, base, sys.n);
    SweepReport rep;
    rep.trials = trials;
    rep.min_character_shift = std::numeric_limits<double>::infinity();
    for (std::size_t t = 0; t < trials; ++t) {
        ContinuationSystem pert = sys;
        for (auto& s : pert.sigma_targets) s += target_perturbation * detail::random_unit_box(rng);
        NewtonResult nr = newton_solve(pert, base);
        if (!nr.converged) {
            rep.failures.push_back("trial " + std::to_string(t) + ": no convergence, residual " +
                                   detail::format_sci(nr.residual_norm));
            continue;
        }
        ++rep.converged;
        rep.max_residual = std::max(rep.max_residual, nr.residual_norm);
        // recompute the achieved sigmas from scratch
        CMatrix mer = detail::evaluate_word_images(nr.point.images, pert.pres.gens, pert.sigma_word, pert.n,
                                                   [](const CMatrix& m) { return complex_inverse(m); });
        Poly<Complex> cp = char_poly(mer);
        double err = 0.0;
        for (std::size_t i = 1; i < pert.n; ++i) {
            Complex coeff = cp.coeff(pert.n - i);
            Complex sigma = (i % 2 == 0) ? coeff : -coeff;
            err = std::max(err, std::abs(sigma - pert.sigma_targets[i - 1]));
        }
        rep.max_target_error = std::max(rep.max_target_error, err);
        if (err < match_tol) ++rep.hit_target;
        else rep.failures.push_back("trial " + std::to_string(t) + ": target error " + std::to_string(err));
        double shift = character_distance(base_sample, character_sample(pert.pres, nr.point, pert.n));
        rep.min_character_shift = std::min(rep.min_character_shift, shift);
    }
    if (rep.converged == 0) rep.min_character_shift = 0.0;
    return rep;
}

// --- exact vs numeric sigma derivatives ----------------------------------------

// Numeric counterpart of the certificate matrix: J[i][j] = -d/deps of the
// lambda^{n-j} characteristic coefficient along the omega_i deformation,
// evaluated with complex dual numbers. Matches the exact certificate under
// the recorded orientation convention.
inline Eigen::MatrixXcd numeric_sigma_jacobian(const EmbeddedField& emb, const CuspShape<FieldElement>& shape,
                                               std::size_t n, long p, long q) {
    PeripheralImage<FieldElement> img = peripheral_image(shape, n, p, q);
    CMatrix rho = embed_matrix(emb, img.rho);
    Eigen::MatrixXcd J(n - 1, n - 1);
    for (std::size_t i = 1; i < n; ++i) {
        CMatrix d = embed_matrix(emb, integrate_form(shape, TorusForm<FieldElement>::omega(i), p, q, n));
        DMatrix rho_eps(n);
        CMatrix slope = d * rho;
        for (std::size_t r = 0; r < n; ++r)
            for (std::size_t c = 0; c < n; ++c) rho_eps.at(r, c) = Dual<Complex>(rho.at(r, c), slope.at(r, c));
        Poly<Dual<Complex>> cp = char_poly(rho_eps);
        for (std::size_t j = 1; j < n; ++j) J(i - 1, j - 1) = -cp.coeff(n - j).b;
    }
    return J;
}

}  // namespace charvar
