#pragma once

#include <cmath>
#include <complex>
#include <numbers>
#include <optional>

#include "errors.hpp"
#include "linalg.hpp"
#include "ncycle.hpp"
#include "rational.hpp"

namespace ksbox {

/// Amplitudes over a contiguous window of packet indices [lo, hi].
struct LatticeState {
    int lo = 0;
    int hi = -1;
    CVector amplitudes;

    int size() const noexcept { return hi - lo + 1; }
    Complex at(int packet) const
    {
        return (packet < lo || packet > hi) ? Complex{} : amplitudes(packet - lo);
    }
    double norm() const { return amplitudes.norm(); }
};

struct CVStates {
    LatticeState psi0;  ///< uniform over the M odd packets of the band
    LatticeState psi1;  ///< uniform over the M even packets of the band
    LatticeState plus;  ///< (psi0 + psi1)/sqrt2
    LatticeState minus; ///< (psi0 - psi1)/sqrt2
};

/// Packet-lattice model of the continuous-variable chained construction.
///
/// Packet k is a copy of a localized wavefunction translated by k lattice
/// units (L = hbar = 1). The band holds the 2M packets 2m and 2m+1 for
/// m = m0 .. m0+M-1, with m0 = -(M/2) + band_shift. The window adds one guard
/// cell each side so a single X application never leaves it.
class CVModel {
public:
    explicit CVModel(int packets_per_parity, int band_shift = 0) : m_(packets_per_parity)
    {
        if (m_ < 1) throw InvalidDimension("dimension: M must be >= 1");
        band_lo_ = 2 * (-(m_ / 2) + band_shift);
        band_hi_ = band_lo_ + 2 * m_ - 1;
        lo_ = band_lo_ - 1;
        hi_ = band_hi_ + 1;

        const int w = window_size();
        x0_ = CMatrix::Zero(w, w);
        for (int i = 0; i + 1 < w; ++i) {
            x0_(i, i + 1) = 0.5;
            x0_(i + 1, i) = 0.5;
        }
    }

    int packets_per_parity() const noexcept { return m_; }
    /// N = 2M.
    int total_packets() const noexcept { return 2 * m_; }
    int window_lo() const noexcept { return lo_; }
    int window_hi() const noexcept { return hi_; }
    int band_lo() const noexcept { return band_lo_; }
    int band_hi() const noexcept { return band_hi_; }
    int window_size() const noexcept { return hi_ - lo_ + 1; }

    /// Sign of Z on packet k: (-1)^k.
    static int z_sign(int packet) noexcept { return (packet % 2 == 0) ? 1 : -1; }

    CMatrix z_operator() const
    {
        CMatrix z = CMatrix::Zero(window_size(), window_size());
        for (int k = lo_; k <= hi_; ++k) z(k - lo_, k - lo_) = z_sign(k);
        return z;
    }

    /// X(0): packet k -> (packet k-1 + packet k+1)/2.
    const CMatrix& x0() const noexcept { return x0_; }

    /// U(phi) = exp(i Z phi / 2), diagonal.
    CVector u_diagonal(double phi) const
    {
        CVector u(window_size());
        for (int k = lo_; k <= hi_; ++k) u(k - lo_) = std::polar(1.0, z_sign(k) * phi / 2.0);
        return u;
    }

    LatticeState empty_state() const { return {lo_, hi_, CVector::Zero(window_size())}; }

private:
    int m_;
    int band_lo_ = 0;
    int band_hi_ = 0;
    int lo_ = 0;
    int hi_ = 0;
    CMatrix x0_;
};

inline CVStates build_states(const CVModel& model)
{
    CVStates s{model.empty_state(), model.empty_state(), model.empty_state(), model.empty_state()};
    const double amp = 1.0 / std::sqrt(static_cast<double>(model.packets_per_parity()));
    for (int k = model.band_lo(); k <= model.band_hi(); ++k) {
        auto& target = (k % 2 != 0) ? s.psi0 : s.psi1;
        target.amplitudes(k - model.window_lo()) = amp;
    }
    s.plus.amplitudes = (s.psi0.amplitudes + s.psi1.amplitudes) / std::numbers::sqrt2;
    s.minus.amplitudes = (s.psi0.amplitudes - s.psi1.amplitudes) / std::numbers::sqrt2;
    return s;
}

inline CVStates build_states(int packets_per_parity) { return build_states(CVModel(packets_per_parity)); }

/// X(phi) = U^dagger(phi) X(0) U(phi) on the window.
inline CMatrix x_phi(const CVModel& model, double phi)
{
    const CVector u = model.u_diagonal(phi);
    return u.conjugate().asDiagonal() * model.x0() * u.asDiagonal();
}

inline Complex braket(const LatticeState& bra, const CMatrix& op, const LatticeState& ket)
{
    return bra.amplitudes.dot(op * ket.amplitudes);
}

/// Amplitude matrix of (|+>|-> - |->|+>)/sqrt2; entry (i, j) is the amplitude of
/// window cell i on the first factor and j on the second.
inline CMatrix entangled_state(const CVModel& model)
{
    const CVStates s = build_states(model);
    return (s.plus.amplitudes * s.minus.amplitudes.transpose() - s.minus.amplitudes * s.plus.amplitudes.transpose()) /
           std::numbers::sqrt2;
}

/// <psi| A (x) B |psi> for a two-party amplitude matrix Psi: sum conj(Psi) .* (A Psi B^T).
inline double two_party_expectation(const CMatrix& psi, const CMatrix& a, const CMatrix& b)
{
    return (psi.conjugate().cwiseProduct(a * psi * b.transpose())).sum().real();
}

/// <X(phi) (x) X(theta)> in the entangled state; equals -((N-1)/N)^2 cos(phi - theta).
inline double cv_joint_expectation(const CVModel& model, double phi, double theta)
{
    return two_party_expectation(entangled_state(model), x_phi(model, phi), x_phi(model, theta));
}

/// Chained expression with X_j = X(j pi / n), X_j on the first factor for
/// even j and on the second for odd j.
inline double cv_chained_value(const CVModel& model, int n)
{
    require_even_cycle(n);
    const CMatrix psi = entangled_state(model);
    const double pi = std::numbers::pi;
    auto term = [&](int j, int k) {
        // X_j X_k with j, k of opposite parity: the even one sits on factor 1.
        const int first = (j % 2 == 0) ? j : k;
        const int second = (j % 2 == 0) ? k : j;
        return two_party_expectation(psi, x_phi(model, first * pi / n), x_phi(model, second * pi / n));
    };
    double total = 0.0;
    for (int j = 1; j < n; ++j) total += term(j, j + 1);
    total -= term(n, 1);
    return total;
}

/// Closed form -((N-1)/N)^2 n cos(pi/n).
inline double cv_chained_closed_form(int packets_per_parity, int n)
{
    require_even_cycle(n);
    const double ratio = (2.0 * packets_per_parity - 1.0) / (2.0 * packets_per_parity);
    return -ratio * ratio * n * std::cos(std::numbers::pi / n);
}

/// <psi_+|X(0)|psi_+> (sign = +1) or <psi_-|X(0)|psi_-> (sign = -1), exactly.
/// Amplitudes are +-1/sqrt(2M) on the band, so the bracket is a rational
/// number; computed by summing over every adjacent packet pair.
inline Rational x0_expectation_exact(int packets_per_parity, int sign)
{
    if (packets_per_parity < 1) throw InvalidDimension("dimension: M must be >= 1");
    if (sign != 1 && sign != -1) throw InvalidArgument("sign must be +1 or -1");
    const CVModel model(packets_per_parity);
    // psi_- carries +1 on odd packets (psi0) and -1 on even ones (psi1).
    auto amp_sign = [&](int k) { return (sign == 1 || k % 2 != 0) ? 1 : -1; };
    Rational total(0);
    for (int k = model.band_lo(); k <= model.band_hi(); ++k)
        for (int l : {k - 1, k + 1})
            if (l >= model.band_lo() && l <= model.band_hi()) total += Rational(amp_sign(k) * amp_sign(l), 2);
    return total / Rational(2 * packets_per_parity);
}

/// Smallest M for which |closed-form value| exceeds the classical bound n-2.
inline std::optional<int> cv_violation_crossover(int n, int max_packets = 1 << 20)
{
    require_even_cycle(n);
    for (int m = 1; m <= max_packets; ++m)
        if (-cv_chained_closed_form(m, n) > n - 2) return m;
    return std::nullopt;
}

}  // namespace ksbox
