// Prints the ladder pairing constants, the cup-product matrix of the
// cohomology basis over a formal cusp modulus, and the growth exponents
// that sort the forms into square-integrable and non-integrable families.

#include <iostream>

#include "charvar/cusp_forms.hpp"

using namespace charvar;
using FP = Poly<FieldElement>;

int main() {
    std::cout << "pairing constants c_i = trace(h-^i h+^i):\n";
    for (std::size_t n = 2; n <= 6; ++n) {
        PairingConstants pc = pairing_constants(n);
        std::cout << "  n=" << n << ":";
        for (std::size_t i = 1; i < n; ++i) std::cout << " " << pc.at(i).get_str();
        std::cout << "\n";
    }

    std::cout << "\ncup-product matrix of the cohomology basis, n = 3, formal tau,\n"
                 "constant directions normalized by (a, b) = (1, 0):\n";
    auto shape = formal_cusp();
    auto forms = cohomology_basis(shape, FP(FieldElement(1), Var::tau), FP(FieldElement(0), Var::tau), 3);
    Matrix<FP> gram = cup_matrix(shape, forms, 3);
    for (std::size_t r = 0; r < gram.size(); ++r) {
        std::cout << "  " << forms[r].describe() << ":";
        for (std::size_t c = 0; c < gram.size(); ++c) std::cout << "\t" << gram.at(r, c).to_string();
        std::cout << "\n";
    }
    std::cout << "det = " << det_scalar(gram).to_string() << "\n";

    std::cout << "\ngrowth exponents along the cusp (negative = square integrable), n = 5:\n";
    for (std::size_t k = 1; k < 5; ++k) {
        auto cst = TorusForm<Rational>::constant(rational(1), rational(0), k);
        auto omg = TorusForm<Rational>::omega(k);
        std::cout << "  " << cst.describe() << ": " << growth_exponent(cst, 5)
                  << (square_integrable(cst, 5) ? "  (L2)" : "") << "\n";
        std::cout << "  " << omg.describe() << ": +" << growth_exponent(omg, 5)
                  << (square_integrable(omg, 5) ? "  (L2)" : "") << "\n";
    }
    return 0;
}
