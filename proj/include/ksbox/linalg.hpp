#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <functional>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "errors.hpp"

namespace ksbox {

using Complex = std::complex<double>;
using CMatrix = Eigen::MatrixXcd;
using CVector = Eigen::VectorXcd;

inline CMatrix pauli_x()
{
    CMatrix m(2, 2);
    m << 0, 1, 1, 0;
    return m;
}

inline CMatrix pauli_y()
{
    CMatrix m(2, 2);
    m << 0, Complex(0, -1), Complex(0, 1), 0;
    return m;
}

inline CMatrix pauli_z()
{
    CMatrix m(2, 2);
    m << 1, 0, 0, -1;
    return m;
}

inline CMatrix kron(const CMatrix& a, const CMatrix& b)
{
    CMatrix out(a.rows() * b.rows(), a.cols() * b.cols());
    for (Eigen::Index i = 0; i < a.rows(); ++i)
        for (Eigen::Index j = 0; j < a.cols(); ++j)
            out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    return out;
}

inline double max_abs(const CMatrix& m) { return m.size() ? m.cwiseAbs().maxCoeff() : 0.0; }

/// Largest |H - H^dagger| entry.
inline double hermiticity_defect(const CMatrix& h) { return max_abs(h - h.adjoint()); }

struct SpectralResult {
    std::vector<double> eigenvalues;      ///< sorted descending
    double orthonormality_residual = 0.0; ///< max |V^T V - I| of the accumulated rotations
    int sweeps = 0;
};

namespace detail {

/// Cyclic Jacobi on a real symmetric matrix, in place. Returns sweeps used.
inline int jacobi_sweeps(Eigen::MatrixXd& s, Eigen::MatrixXd& v, double tol, int max_sweeps)
{
    const Eigen::Index n = s.rows();
    auto off_norm = [&] {
        double acc = 0.0;
        for (Eigen::Index i = 0; i < n; ++i)
            for (Eigen::Index j = 0; j < n; ++j)
                if (i != j) acc += s(i, j) * s(i, j);
        return std::sqrt(acc);
    };

    int sweep = 0;
    for (; sweep < max_sweeps && off_norm() > tol; ++sweep) {
        for (Eigen::Index p = 0; p < n - 1; ++p)
            for (Eigen::Index q = p + 1; q < n; ++q) {
                const double apq = s(p, q);
                if (apq == 0.0) continue;
                const double tau = (s(q, q) - s(p, p)) / (2.0 * apq);
                const double t = (tau >= 0 ? 1.0 : -1.0) / (std::abs(tau) + std::sqrt(1.0 + tau * tau));
                const double c = 1.0 / std::sqrt(1.0 + t * t);
                const double sn = t * c;
                for (Eigen::Index k = 0; k < n; ++k) {
                    const double skp = s(k, p);
                    const double skq = s(k, q);
                    s(k, p) = c * skp - sn * skq;
                    s(k, q) = sn * skp + c * skq;
                }
                for (Eigen::Index k = 0; k < n; ++k) {
                    const double spk = s(p, k);
                    const double sqk = s(q, k);
                    s(p, k) = c * spk - sn * sqk;
                    s(q, k) = sn * spk + c * sqk;
                }
                for (Eigen::Index k = 0; k < n; ++k) {
                    const double vkp = v(k, p);
                    const double vkq = v(k, q);
                    v(k, p) = c * vkp - sn * vkq;
                    v(k, q) = sn * vkp + c * vkq;
                }
            }
    }
    return sweep;
}

}  // namespace detail

/// Eigenvalues of a small Hermitian matrix via cyclic Jacobi rotations on the
/// real symmetric embedding [[Re H, -Im H], [Im H, Re H]]. Every eigenvalue of
/// H appears twice in the embedding; one copy of each pair is returned.
inline SpectralResult eigenvalues_hermitian(const CMatrix& h, double tol = 1e-12, int max_sweeps = 100)
{
    if (h.rows() != h.cols()) throw InvalidArgument("eigensolver: matrix must be square");
    if (h.rows() == 0) return {};
    const double scale = std::max(1.0, max_abs(h));
    if (hermiticity_defect(h) > std::max(tol, 1e-12) * scale)
        throw InvalidState("hermiticity", "eigensolver input is not Hermitian");

    const Eigen::Index d = h.rows();
    Eigen::MatrixXd s(2 * d, 2 * d);
    const Eigen::MatrixXd re = 0.5 * (h.real() + h.real().transpose());
    const Eigen::MatrixXd im = 0.5 * (h.imag() - h.imag().transpose());
    s.topLeftCorner(d, d) = re;
    s.bottomRightCorner(d, d) = re;
    s.topRightCorner(d, d) = -im;
    s.bottomLeftCorner(d, d) = im;

    Eigen::MatrixXd v = Eigen::MatrixXd::Identity(2 * d, 2 * d);
    SpectralResult result;
    result.sweeps = detail::jacobi_sweeps(s, v, tol * scale, max_sweeps);

    std::vector<double> doubled(static_cast<std::size_t>(2 * d));
    for (Eigen::Index i = 0; i < 2 * d; ++i) doubled[i] = s(i, i);
    std::sort(doubled.begin(), doubled.end(), std::greater<>());
    for (std::size_t i = 0; i < doubled.size(); i += 2) result.eigenvalues.push_back(0.5 * (doubled[i] + doubled[i + 1]));

    result.orthonormality_residual =
        (v.transpose() * v - Eigen::MatrixXd::Identity(2 * d, 2 * d)).cwiseAbs().maxCoeff();
    return result;
}

}  // namespace ksbox
