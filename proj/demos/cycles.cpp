// Odd- and even-cycle inequalities, the lattice construction and the PR reduction.
#include <cmath>
#include <iostream>
#include <numbers>

#include <ksbox/ksbox.hpp>

int main()
{
    using namespace ksbox;

    const auto kcbs = kcbs_model(5);
    const auto bounds = kcbs_bounds(5);
    std::cout << "KCBS n=5: classical " << bounds.classical << ", quantum " << bounds.quantum
              << ", rho33 threshold " << kcbs_threshold(5) << "\n";
    std::cout << "  max eigenvalue of K_5: " << eigenvalues_hermitian(kcbs.op()).eigenvalues.front() << "\n";

    const auto chained = chained_model(4);
    const double value = chained_value(chained, singlet());
    std::cout << "Chained n=4, singlet: " << value << " (" << to_string(chained_violation(value, 4))
              << " form violated)\n";

    for (int m : {1, 2, 4, 8, 32}) {
        const CVModel model(m);
        std::cout << "  lattice M=" << m << ": chained value " << cv_chained_value(model, 4) << "\n";
    }

    for (int n : {4, 10, 100}) {
        const auto t = marginal_thresholds(n);
        std::cout << "n=" << n << ": p_c " << t.p_c << ", p_q " << t.p_q << ", p_ns " << t.p_ns << "\n";
    }
    std::cout << "derived PR(3) == PR(3): " << std::boolalpha << (derived_pr_box(3) == pr_box(3)) << "\n";
}
