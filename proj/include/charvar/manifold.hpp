#pragma once

#include <cctype>
#include <cstddef>
#include <fstream>
#include <istream>
#include <map>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "charvar/cusp_forms.hpp"
#include "charvar/number_field.hpp"
#include "charvar/sym_power.hpp"

namespace charvar {

// Group presentation with marked peripheral pairs. Words are strings over
// single-letter generator names; an uppercase letter means the inverse.
struct Presentation {
    std::vector<char> gens;
    std::vector<std::string> relators;
    struct Cusp {
        std::string meridian, longitude;
    };
    std::vector<Cusp> cusps;

    bool has_gen(char g) const {
        for (char c : gens)
            if (c == g) return true;
        return false;
    }
    void check_word(const std::string& w, const std::string& what) const {
        for (char c : w) {
            char base = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
            if (!has_gen(base))
                throw std::invalid_argument(what + ": letter '" + std::string(1, c) + "' is not a declared generator");
        }
    }
};

// Exact SL(2) matrices over a number field, one per generator.
struct HolonomyLift {
    std::shared_ptr<const NumberField> field;
    std::map<char, SL2<FieldElement>> images;
};

struct ManifoldData {
    std::string name;
    Presentation pres;
    HolonomyLift lift;
};

inline SL2<FieldElement> evaluate_word(const HolonomyLift& lift, const std::string& word) {
    SL2<FieldElement> acc = SL2<FieldElement>::identity();
    for (char c : word) {
        char base = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
        auto it = lift.images.find(base);
        if (it == lift.images.end())
            throw std::invalid_argument(std::string("evaluate_word: no matrix for generator '") + base + "'");
        bool inv = std::isupper(static_cast<unsigned char>(c));
        acc = acc * (inv ? it->second.inverse() : it->second);
    }
    return acc;
}

// rho_n of a word: symmetric power of the exact SL(2) product.
inline Matrix<FieldElement> rho_n_of_word(const HolonomyLift& lift, std::size_t n, const std::string& word) {
    return sym_power(evaluate_word(lift, word), n);
}

struct RelatorReport {
    bool ok = true;  // every relator is exactly the identity
    // +1 identity, -1 minus identity, 0 neither; one entry per relator.
    std::vector<int> signs;
    std::string detail;
};

// Exact relator check. A relator landing on -Id means the chosen matrices
// lift the holonomy only projectively; that is reported, not accepted.
inline RelatorReport check_relators(const ManifoldData& data) {
    RelatorReport rep;
    for (std::size_t k = 0; k < data.pres.relators.size(); ++k) {
        SL2<FieldElement> val = evaluate_word(data.lift, data.pres.relators[k]);
        bool is_id = val.a == FieldElement(1) && val.d == FieldElement(1) && val.b.is_zero() && val.c.is_zero();
        bool is_neg = val.a == FieldElement(-1) && val.d == FieldElement(-1) && val.b.is_zero() && val.c.is_zero();
        int sign = is_id ? +1 : (is_neg ? -1 : 0);
        rep.signs.push_back(sign);
        if (sign != +1) {
            rep.ok = false;
            if (!rep.detail.empty()) rep.detail += "; ";
            rep.detail += "relator " + std::to_string(k + 1) + " (" + data.pres.relators[k] + ") evaluates to " +
                          (sign == -1 ? "-Id" : "a non-central matrix");
        }
    }
    return rep;
}

// Outcome of normalizing one cusp: the conjugated lift sending the meridian
// to sign * [[1,1],[0,1]] and the longitude to sign * [[1,tau],[0,1]].
struct NormalizedCusp {
    CuspShape<FieldElement> shape;
    Matrix<FieldElement> conj;      // change-of-basis matrix T (GL2)
    HolonomyLift normalized_lift;   // every generator conjugated by T
    SL2<FieldElement> meridian_image, longitude_image;  // normalized images
};

// Verifies that the marked peripheral pair is a commuting pair of
// +-parabolics and conjugates the whole lift so the pair becomes upper
// triangular with unit meridian translation.
inline NormalizedCusp peripheral_parabolic_check(const ManifoldData& data, std::size_t cusp_index = 0) {
    if (cusp_index >= data.pres.cusps.size())
        throw std::out_of_range("peripheral_parabolic_check: no such cusp");
    const auto& cusp = data.pres.cusps[cusp_index];
    SL2<FieldElement> M = evaluate_word(data.lift, cusp.meridian);
    SL2<FieldElement> L = evaluate_word(data.lift, cusp.longitude);
    if (!((M * L).as_matrix() == (L * M).as_matrix()))
        throw std::domain_error("peripheral_parabolic_check: meridian and longitude do not commute");

    auto classify = [](const SL2<FieldElement>& g, const char* what) -> int {
        FieldElement tr = g.a + g.d;
        int sign;
        if (tr == FieldElement(2)) sign = +1;
        else if (tr == FieldElement(-2)) sign = -1;
        else throw std::domain_error(std::string("peripheral_parabolic_check: ") + what + " is not parabolic (trace != +-2)");
        FieldElement sa = sign < 0 ? -g.a : g.a;
        if (g.b.is_zero() && g.c.is_zero() && sa == FieldElement(1))
            throw std::domain_error(std::string("peripheral_parabolic_check: ") + what + " is +-Id, not parabolic");
        return sign;
    };
    int sign_m = classify(M, "meridian");
    int sign_l = classify(L, "longitude");

    // P = sign_m * M - Id is nonzero nilpotent; basis (P v, v) with P v != 0
    // turns sign_m * M into [[1,1],[0,1]].
    Matrix<FieldElement> M0 = M.as_matrix() * FieldElement(sign_m);
    Matrix<FieldElement> P = M0 - Matrix<FieldElement>::identity(2);
    std::vector<FieldElement> v{FieldElement(1), FieldElement(0)};
    std::vector<FieldElement> Pv{P.at(0, 0), P.at(1, 0)};
    if (Pv[0].is_zero() && Pv[1].is_zero()) {
        v = {FieldElement(0), FieldElement(1)};
        Pv = {P.at(0, 1), P.at(1, 1)};
    }
    Matrix<FieldElement> C(2);
    C.at(0, 0) = Pv[0]; C.at(1, 0) = Pv[1];
    C.at(0, 1) = v[0];  C.at(1, 1) = v[1];
    Matrix<FieldElement> T = inverse(C);

    auto conjugate = [&](const SL2<FieldElement>& g) {
        Matrix<FieldElement> m = T * g.as_matrix() * C;
        return SL2<FieldElement>(m.at(0, 0), m.at(0, 1), m.at(1, 0), m.at(1, 1), 1);
    };

    SL2<FieldElement> Mn = conjugate(M);
    SL2<FieldElement> Ln = conjugate(L);
    FieldElement sm(sign_m), sl(sign_l);
    if (!(Mn.a == sm && Mn.d == sm && Mn.b == sm && Mn.c.is_zero()))
        throw std::logic_error("peripheral_parabolic_check: meridian normalization failed");
    if (!(Ln.a == sl && Ln.d == sl && Ln.c.is_zero()))
        throw std::domain_error("peripheral_parabolic_check: longitude does not share the meridian's fixed direction");
    FieldElement tau = Ln.b / sl;
    if (tau.is_zero())
        throw std::domain_error("peripheral_parabolic_check: longitude is trivial after normalization (tau = 0)");

    NormalizedCusp out{CuspShape<FieldElement>{tau, sign_m, sign_l}, T,
                       HolonomyLift{data.lift.field, {}},
                       SL2<FieldElement>::parabolic(FieldElement(1), sign_m),
                       SL2<FieldElement>::parabolic(tau, sign_l)};
    for (const auto& [g, img] : data.lift.images) out.normalized_lift.images.emplace(g, conjugate(img));
    return out;
}

// Built-in figure-eight knot complement: two-bridge presentation with
// meridian a and the standard longitude, holonomy over Q(omega),
// omega^2 = omega - 1.
inline ManifoldData builtin_figure_eight() {
    auto F = NumberField::sixth_root();
    FieldElement w = FieldElement::generator(F);
    ManifoldData data;
    data.name = "fig8";
    data.pres.gens = {'a', 'b'};
    data.pres.relators = {"abABaBAbaB"};
    data.pres.cusps = {{"a", "BabAAbaB"}};
    data.lift.field = F;
    data.lift.images.emplace('a', SL2<FieldElement>(FieldElement(1), FieldElement(1), FieldElement(0), FieldElement(1)));
    data.lift.images.emplace('b', SL2<FieldElement>(FieldElement(1), FieldElement(0), w, FieldElement(1)));
    return data;
}

struct ParseError : std::runtime_error {
    std::size_t line;
    ParseError(std::size_t line_, const std::string& msg)
        : std::runtime_error("line " + std::to_string(line_) + ": " + msg), line(line_) {}
};

namespace detail {

inline std::string trim(const std::string& s) {
    std::size_t b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return "";
    std::size_t e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

inline std::vector<std::string> split_ws(const std::string& s) {
    std::vector<std::string> out;
    std::istringstream is(s);
    std::string tok;
    while (is >> tok) out.push_back(tok);
    return out;
}

inline std::vector<Rational> parse_rational_list(const std::string& s, std::size_t line) {
    std::vector<Rational> out;
    std::size_t start = 0;
    while (start <= s.size()) {
        std::size_t comma = s.find(',', start);
        std::string piece = comma == std::string::npos ? s.substr(start) : s.substr(start, comma - start);
        piece = trim(piece);
        if (piece.empty()) throw ParseError(line, "empty coefficient in '" + s + "'");
        try {
            out.push_back(parse_rational(piece));
        } catch (const std::invalid_argument& e) {
            throw ParseError(line, e.what());
        }
        if (comma == std::string::npos) break;
        start = comma + 1;
    }
    return out;
}

}  // namespace detail

// Text format, one directive per line ('#' starts a comment):
//   manifold: <name>
//   field: <monic minimal polynomial, rational coefficients lowest-first>
//   gens: a b ...
//   rel: <word>
//   cusp: <meridian word> <longitude word>
//   mat <gen>: <4 field elements a b c d, each a comma-separated rational list>
inline ManifoldData parse_manifold(std::istream& in) {
    ManifoldData data;
    data.lift.field = NumberField::rationals();
    bool field_declared = false, gens_declared = false;
    std::map<char, bool> have_mat;
    std::string raw;
    std::size_t lineno = 0;
    while (std::getline(in, raw)) {
        ++lineno;
        std::string line = raw;
        std::size_t hash = line.find('#');
        if (hash != std::string::npos) line = line.substr(0, hash);
        line = detail::trim(line);
        if (line.empty()) continue;
        std::size_t colon = line.find(':');
        if (colon == std::string::npos) throw ParseError(lineno, "expected '<directive>: <payload>'");
        std::string head = detail::trim(line.substr(0, colon));
        std::string payload = detail::trim(line.substr(colon + 1));
        if (head == "manifold") {
            data.name = payload;
        } else if (head == "field") {
            if (field_declared) throw ParseError(lineno, "duplicate field directive");
            if (!data.lift.images.empty()) throw ParseError(lineno, "field must be declared before matrices");
            auto coeffs = detail::parse_rational_list(payload, lineno);
            if (coeffs.size() < 2) throw ParseError(lineno, "field polynomial must have degree >= 1");
            if (!(coeffs.back() == Rational(1))) throw ParseError(lineno, "field polynomial must be monic");
            data.lift.field = std::make_shared<const NumberField>("parsed", coeffs);
            field_declared = true;
        } else if (head == "gens") {
            if (gens_declared) throw ParseError(lineno, "duplicate gens directive");
            for (const auto& tok : detail::split_ws(payload)) {
                if (tok.size() != 1 || !std::islower(static_cast<unsigned char>(tok[0])))
                    throw ParseError(lineno, "generators must be single lowercase letters, got '" + tok + "'");
                if (data.pres.has_gen(tok[0])) throw ParseError(lineno, "duplicate generator '" + tok + "'");
                data.pres.gens.push_back(tok[0]);
            }
            if (data.pres.gens.empty()) throw ParseError(lineno, "gens directive lists no generators");
            gens_declared = true;
        } else if (head == "rel") {
            if (!gens_declared) throw ParseError(lineno, "rel before gens");
            if (payload.empty()) throw ParseError(lineno, "empty relator");
            try {
                data.pres.check_word(payload, "relator");
            } catch (const std::invalid_argument& e) {
                throw ParseError(lineno, e.what());
            }
            data.pres.relators.push_back(payload);
        } else if (head == "cusp") {
            if (!gens_declared) throw ParseError(lineno, "cusp before gens");
            auto words = detail::split_ws(payload);
            if (words.size() != 2) throw ParseError(lineno, "cusp needs exactly a meridian and a longitude word");
            try {
                data.pres.check_word(words[0], "meridian");
                data.pres.check_word(words[1], "longitude");
            } catch (const std::invalid_argument& e) {
                throw ParseError(lineno, e.what());
            }
            data.pres.cusps.push_back({words[0], words[1]});
        } else if (head.size() > 4 && head.substr(0, 4) == "mat ") {
            if (!gens_declared) throw ParseError(lineno, "mat before gens");
            std::string gname = detail::trim(head.substr(4));
            if (gname.size() != 1 || !data.pres.has_gen(gname[0]))
                throw ParseError(lineno, "mat for unknown generator '" + gname + "'");
            char g = gname[0];
            if (have_mat[g]) throw ParseError(lineno, std::string("duplicate matrix for generator '") + g + "'");
            auto toks = detail::split_ws(payload);
            if (toks.size() != 4) throw ParseError(lineno, "mat needs exactly 4 field elements");
            std::vector<FieldElement> ent;
            for (const auto& tok : toks) {
                auto coeffs = detail::parse_rational_list(tok, lineno);
                if (coeffs.size() > data.lift.field->degree())
                    throw ParseError(lineno, "coefficient list longer than the field degree in '" + tok + "'");
                ent.emplace_back(data.lift.field, coeffs);
            }
            try {
                data.lift.images.emplace(g, SL2<FieldElement>(ent[0], ent[1], ent[2], ent[3]));
            } catch (const std::invalid_argument& e) {
                throw ParseError(lineno, e.what());
            }
            have_mat[g] = true;
        } else {
            throw ParseError(lineno, "unknown directive '" + head + "'");
        }
    }
    if (!gens_declared) throw ParseError(lineno, "missing gens directive");
    for (char g : data.pres.gens)
        if (!have_mat[g]) throw ParseError(lineno, std::string("missing matrix for generator '") + g + "'");
    return data;
}

inline ManifoldData parse_manifold_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open manifold file: " + path);
    return parse_manifold(in);
}

inline void serialize_manifold(const ManifoldData& data, std::ostream& os) {
    if (!data.name.empty()) os << "manifold: " << data.name << "\n";
    if (data.lift.field->degree() > 1) {
        os << "field:";
        const auto& mp = data.lift.field->min_poly();
        for (std::size_t k = 0; k < mp.size(); ++k) os << (k ? "," : " ") << mp[k].get_str();
        os << "\n";
    }
    os << "gens:";
    for (char g : data.pres.gens) os << " " << g;
    os << "\n";
    for (const auto& r : data.pres.relators) os << "rel: " << r << "\n";
    for (const auto& c : data.pres.cusps) os << "cusp: " << c.meridian << " " << c.longitude << "\n";
    for (char g : data.pres.gens) {
        const auto& m = data.lift.images.at(g);
        os << "mat " << g << ": " << m.a.to_string() << " " << m.b.to_string() << " " << m.c.to_string() << " "
           << m.d.to_string() << "\n";
    }
}

}  // namespace charvar
