#pragma once

// Shared test helpers: random states and independent reference computations.

#include <cmath>
#include <complex>
#include <cstdint>
#include <numbers>
#include <vector>

#include <ksbox/ksbox.hpp>

namespace ksbox::testing {

inline double normal(Rng& rng)
{
    // Box-Muller; 1 - u keeps the log argument in (0, 1].
    const double u = 1.0 - rng.uniform();
    const double v = rng.uniform();
    return std::sqrt(-2.0 * std::log(u)) * std::cos(2.0 * std::numbers::pi * v);
}

inline CMatrix ginibre(int rows, int cols, Rng& rng)
{
    CMatrix g(rows, cols);
    for (int r = 0; r < rows; ++r)
        for (int c = 0; c < cols; ++c) g(r, c) = Complex(normal(rng), normal(rng));
    return g;
}

/// Random density matrix of the given rank: G G^dagger / Tr, symmetrised.
inline DensityMatrix random_density(int dim, int rank, Rng& rng)
{
    const CMatrix g = ginibre(dim, rank, rng);
    CMatrix rho = g * g.adjoint();
    rho /= rho.trace().real();
    rho = 0.5 * (rho + rho.adjoint());
    return DensityMatrix(rho);
}

/// Random state mixing a singlet-like pure state with noise, so that a
/// fraction of samples violate the chained inequality.
inline DensityMatrix random_two_qubit(Rng& rng)
{
    const int kind = static_cast<int>(rng.below(3));
    if (kind == 0) return random_density(4, 1 + static_cast<int>(rng.below(4)), rng);
    const double w = rng.uniform();
    CMatrix mix = w * singlet().matrix() + (1 - w) * random_density(4, 1 + static_cast<int>(rng.below(4)), rng).matrix();
    if (kind == 2) {
        // Local unitary twist keeps the spectrum but moves the correlations.
        const CMatrix h = ginibre(2, 2, rng);
        Eigen::ComplexEigenSolver<CMatrix> es(h + h.adjoint());
        const CMatrix u = es.eigenvectors();
        const CMatrix uu = kron(CMatrix::Identity(2, 2), u);
        mix = uu * mix * uu.adjoint();
    }
    mix = 0.5 * (mix + mix.adjoint());
    mix /= mix.trace().real();
    return DensityMatrix(mix);
}

/// Number of ordered input pairs (x, y), x != y, on which a chart of the given
/// degree outputs (1, 1). Brute force over the canonical chart.
inline int count_failing_pairs(int n_inputs, int degree)
{
    const Chart chart = Chart::canonical(n_inputs, degree);
    int fails = 0;
    for (int x = 1; x <= n_inputs; ++x)
        for (int y = 1; y <= n_inputs; ++y)
            if (x != y && chart.output(x) == 1 && chart.output(y) == 1) ++fails;
    return fails;
}

/// Roots of the characteristic polynomial of a real symmetric 3x3 matrix via
/// the trigonometric cubic solution, sorted descending.
inline std::vector<double> symmetric3_roots(const Eigen::Matrix3d& a)
{
    // det(lambda I - A) = lambda^3 - c2 lambda^2 + c1 lambda - c0
    const double c2 = a.trace();
    const double c1 = a(0, 0) * a(1, 1) + a(0, 0) * a(2, 2) + a(1, 1) * a(2, 2) - a(0, 1) * a(1, 0) -
                      a(0, 2) * a(2, 0) - a(1, 2) * a(2, 1);
    const double c0 = a.determinant();
    // Depressed cubic t^3 + pt + q with lambda = t + c2/3.
    const double shift = c2 / 3.0;
    const double p = c1 - c2 * c2 / 3.0;
    const double q = -2.0 * c2 * c2 * c2 / 27.0 + c2 * c1 / 3.0 - c0;
    std::vector<double> roots;
    if (std::abs(p) < 1e-300) {
        roots.assign(3, shift + std::cbrt(-q));
    } else {
        const double r = 2.0 * std::sqrt(-p / 3.0);
        const double arg = std::clamp(3.0 * q / (p * r), -1.0, 1.0);
        const double phi = std::acos(arg) / 3.0;
        for (int k = 0; k < 3; ++k) roots.push_back(shift + r * std::cos(phi - 2.0 * std::numbers::pi * k / 3.0));
    }
    std::sort(roots.begin(), roots.end(), std::greater<>());
    return roots;
}

}  // namespace ksbox::testing
