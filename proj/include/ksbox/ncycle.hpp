#pragma once

#include <array>
#include <cmath>
#include <numbers>
#include <string>
#include <vector>

#include "errors.hpp"
#include "linalg.hpp"

namespace ksbox {

/// Validated density matrix: Hermitian and unit trace within 1e-12, no
/// eigenvalue below -1e-10.
class DensityMatrix {
public:
    static constexpr double hermiticity_tol = 1e-12;
    static constexpr double trace_tol = 1e-12;
    static constexpr double psd_tol = 1e-10;

    explicit DensityMatrix(CMatrix entries) : m_(std::move(entries))
    {
        if (m_.rows() == 0 || m_.rows() != m_.cols())
            throw InvalidState("shape", "density matrix must be square and non-empty");
        if (hermiticity_defect(m_) > hermiticity_tol)
            throw InvalidState("hermiticity", "rho differs from its adjoint by " + fmt_num(hermiticity_defect(m_)));
        const Complex tr = m_.trace();
        if (std::abs(tr - Complex(1.0, 0.0)) > trace_tol)
            throw InvalidState("trace", "trace of rho is " + fmt_num(tr.real()) + " (must be 1)");
        spectrum_ = eigenvalues_hermitian(m_).eigenvalues;
        if (spectrum_.back() < -psd_tol)
            throw InvalidState("PSD", "rho has negative eigenvalue " + fmt_num(spectrum_.back()));
    }

    /// |psi><psi| for a normalised state vector.
    static DensityMatrix pure(const CVector& psi) { return DensityMatrix(psi * psi.adjoint()); }

    static DensityMatrix maximally_mixed(int dim)
    {
        return DensityMatrix(CMatrix::Identity(dim, dim) / static_cast<double>(dim));
    }

    int dim() const noexcept { return static_cast<int>(m_.rows()); }
    const CMatrix& matrix() const noexcept { return m_; }
    Complex operator()(int row, int col) const { return m_(row, col); }
    /// Eigenvalues sorted descending.
    const std::vector<double>& spectrum() const noexcept { return spectrum_; }

private:
    static std::string fmt_num(double x) { return std::to_string(x); }

    CMatrix m_;
    std::vector<double> spectrum_;
};

inline double expectation(const CMatrix& op, const DensityMatrix& rho) { return (op * rho.matrix()).trace().real(); }

// ---------------------------------------------------------------------------
// Odd cycles (KCBS)

inline void require_odd_cycle(int n)
{
    if (n < 5 || n % 2 == 0) throw InvalidDimension("parity: odd-cycle inequality requires odd n >= 5");
}

struct CycleBounds {
    double classical;
    double quantum;
};

/// Noncontextual bound (n-1)/2 and the odd-cycle Lovasz theta n cos(pi/n)/(1+cos(pi/n)).
inline CycleBounds kcbs_bounds(int n)
{
    require_odd_cycle(n);
    const double c = std::cos(std::numbers::pi / n);
    return {(n - 1) / 2.0, n * c / (1.0 + c)};
}

/// Smallest rho_33 at which a qutrit violates the odd n-cycle inequality
/// under the optimal projector configuration (strict violation above it).
inline double kcbs_threshold(int n)
{
    require_odd_cycle(n);
    const double c = std::cos(std::numbers::pi / n);
    return (c * (n - 1) - 1.0) / (n * (2.0 * c - 1.0));
}

/// Optimal qutrit projectors for the odd n-cycle and their sum K_n.
class KcbsModel {
public:
    explicit KcbsModel(int n) : n_(n)
    {
        require_odd_cycle(n);
        const double pi = std::numbers::pi;
        const double c = std::cos(pi / n);
        theta_ = std::acos(std::sqrt(c / (1.0 + c)));
        k1_ = n / (2.0 * (1.0 + c));
        k3_ = n * c / (1.0 + c);

        op_ = CMatrix::Zero(3, 3);
        for (int j = 1; j <= n; ++j) {
            const double phase = j * pi * (n - 1) / n;
            CVector v(3);
            v << std::sin(theta_) * std::cos(phase), std::sin(theta_) * std::sin(phase), std::cos(theta_);
            vectors_.push_back(v);
            projectors_.push_back(v * v.adjoint());
            op_ += projectors_.back();
        }
    }

    int n() const noexcept { return n_; }
    double theta() const noexcept { return theta_; }
    /// |psi_j> for j = 1..n (stored 0-based).
    const std::vector<CVector>& vectors() const noexcept { return vectors_; }
    const std::vector<CMatrix>& projectors() const noexcept { return projectors_; }
    /// Numerically summed K_n.
    const CMatrix& op() const noexcept { return op_; }
    /// Closed-form spectrum (k1, k1, k3).
    std::array<double, 3> eigenvalues() const noexcept { return {k1_, k1_, k3_}; }
    double k1() const noexcept { return k1_; }
    double k3() const noexcept { return k3_; }

private:
    int n_;
    double theta_ = 0.0;
    double k1_ = 0.0;
    double k3_ = 0.0;
    std::vector<CVector> vectors_;
    std::vector<CMatrix> projectors_;
    CMatrix op_;
};

inline KcbsModel kcbs_model(int n) { return KcbsModel(n); }

/// Tr(K_n rho) = k1 (rho_11 + rho_22) + k3 rho_33.
inline double kcbs_value(const KcbsModel& model, const DensityMatrix& rho)
{
    if (rho.dim() != 3) throw InvalidArgument("dimension mismatch: KCBS value needs a 3x3 density matrix");
    return model.k1() * (rho(0, 0).real() + rho(1, 1).real()) + model.k3() * rho(2, 2).real();
}

// ---------------------------------------------------------------------------
// Even cycles (chained Bell)

inline void require_even_cycle(int n)
{
    if (n < 4 || n % 2 != 0) throw InvalidDimension("parity: chained inequality requires even n >= 4");
}

/// Observables X_1..X_n on two qubits and the reduced operator O_n.
class ChainedModel {
public:
    explicit ChainedModel(int n) : n_(n)
    {
        require_even_cycle(n);
        const double pi = std::numbers::pi;
        const CMatrix id = CMatrix::Identity(2, 2);
        for (int j = 1; j <= n; ++j) {
            const CMatrix local = std::cos(j * pi / n) * pauli_x() + std::sin(j * pi / n) * pauli_z();
            observables_.push_back(j % 2 == 0 ? kron(local, id) : kron(id, local));
        }
        const CMatrix sx = pauli_x();
        const CMatrix sz = pauli_z();
        op_ = std::cos(pi / n) * (kron(sx, sx) + kron(sz, sz)) + std::sin(pi / n) * (kron(sx, sz) - kron(sz, sx));
    }

    int n() const noexcept { return n_; }
    /// X_j for j = 1..n (stored 0-based).
    const std::vector<CMatrix>& observables() const noexcept { return observables_; }
    const CMatrix& observable(int j) const { return observables_.at(static_cast<std::size_t>(j - 1)); }
    /// O_n. Its symmetric part times n/2 is the chained expression; the
    /// sigma_x sigma_z - sigma_z sigma_x part cancels in the term-by-term sum.
    const CMatrix& op() const noexcept { return op_; }

    /// sum_{j<n} X_j X_{j+1} - X_n X_1, summed term by term.
    CMatrix chained_operator() const
    {
        CMatrix acc = CMatrix::Zero(4, 4);
        for (int j = 1; j < n_; ++j) acc += observable(j) * observable(j + 1);
        acc -= observable(n_) * observable(1);
        return acc;
    }

private:
    int n_;
    std::vector<CMatrix> observables_;
    CMatrix op_;
};

inline ChainedModel chained_model(int n) { return ChainedModel(n); }

/// sum_{j<n} <X_j X_{j+1}> - <X_n X_1>, term by term.
inline double chained_value(const ChainedModel& model, const DensityMatrix& rho)
{
    if (rho.dim() != 4) throw InvalidArgument("dimension mismatch: chained value needs a 4x4 density matrix");
    double total = 0.0;
    for (int j = 1; j < model.n(); ++j) total += expectation(model.observable(j) * model.observable(j + 1), rho);
    total -= expectation(model.observable(model.n()) * model.observable(1), rho);
    return total;
}

/// (n/2) Tr(O_n rho). Matches chained_value only when <sigma_x sigma_z> = <sigma_z sigma_x>.
inline double chained_value_via_operator(const ChainedModel& model, const DensityMatrix& rho)
{
    if (rho.dim() != 4) throw InvalidArgument("dimension mismatch: chained value needs a 4x4 density matrix");
    return 0.5 * model.n() * expectation(model.op(), rho);
}

/// Which signed form of the chained inequality a value breaks. Flipping the
/// outcomes of X_n negates the expression, so |value| > n-2 is a violation of
/// one of the two forms.
enum class ChainedForm { none, canonical, flipped };

inline ChainedForm chained_violation(double value, int n)
{
    require_even_cycle(n);
    if (value > n - 2) return ChainedForm::canonical;
    if (-value > n - 2) return ChainedForm::flipped;
    return ChainedForm::none;
}

inline const char* to_string(ChainedForm form)
{
    switch (form) {
    case ChainedForm::canonical: return "canonical";
    case ChainedForm::flipped: return "flipped";
    default: return "none";
    }
}

struct GapCondition {
    double gap;       ///< lambda_1 - lambda_4 of rho
    double threshold; ///< (n-2)/n
    bool satisfied;   ///< gap > threshold; false rules out a violation
};

/// Necessary condition for violating the chained inequality with the optimal
/// settings. Necessary only: satisfied does not imply a violation.
inline GapCondition chained_necessary_condition(const DensityMatrix& rho, int n)
{
    require_even_cycle(n);
    if (rho.dim() != 4) throw InvalidArgument("dimension mismatch: gap condition needs a 4x4 density matrix");
    const auto& ev = rho.spectrum();
    const double gap = ev.front() - ev.back();
    const double threshold = static_cast<double>(n - 2) / n;
    return {gap, threshold, gap > threshold};
}

/// (0, 1/sqrt2, -1/sqrt2, 0): the state reaching |value| = n cos(pi/n).
inline DensityMatrix singlet()
{
    CVector psi = CVector::Zero(4);
    psi(1) = 1.0 / std::numbers::sqrt2;
    psi(2) = -1.0 / std::numbers::sqrt2;
    return DensityMatrix::pure(psi);
}

}  // namespace ksbox
