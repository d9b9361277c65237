#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>
#include <vector>

#include "errors.hpp"
#include "ncycle.hpp"
#include "nsboxes.hpp"
#include "random.hpp"
#include "rational.hpp"

namespace ksbox {

/// Input relabelling that turns a (2n-1)-input KS_{1/2} box into an n-input
/// PR box. Alice: 1 -> 1, i -> 2i-2; Bob: 1 -> 1, i -> 2i-1.
class RelabelMap {
public:
    explicit RelabelMap(int n) : n_(n)
    {
        if (n < 2) throw InvalidDimension("dimension: PR box requires n >= 2");
    }

    int n() const noexcept { return n_; }
    int ks_dimension() const noexcept { return 2 * n_ - 1; }

    int alice(int x) const
    {
        check(x);
        return x == 1 ? 1 : 2 * x - 2;
    }
    int bob(int y) const
    {
        check(y);
        return y == 1 ? 1 : 2 * y - 1;
    }

private:
    void check(int input) const
    {
        if (input < 1 || input > n_) throw InvalidArgument("PR input out of range");
    }

    int n_;
};

inline RelabelMap relabel_map(int n) { return RelabelMap(n); }

/// Exact composition of KS_{1/2} on 2n-1 inputs with the relabelling and
/// Bob's output flip.
inline ExactBox derived_pr_box(int n)
{
    const RelabelMap map(n);
    const ExactBox ks = ks_box(map.ks_dimension(), Rational(1, 2));
    ExactBox out(n, n);
    for (int x = 1; x <= n; ++x)
        for (int y = 1; y <= n; ++y) {
            const auto& src = ks.block(map.alice(x), map.bob(y));
            auto& dst = out.block(x, y);
            for (int a = 0; a < 2; ++a)
                for (int b = 0; b < 2; ++b) dst[a][1 - b] = src[a][b];
        }
    return out;
}

/// Empirical PR box: per round draw uniform PR inputs, query KS_{1/2} through
/// the relabelling, flip Bob's bit. Counts are kept per block.
struct EmpiricalBox {
    int n = 0;
    std::vector<std::uint64_t> counts;  ///< [(x-1)*n + (y-1)][2a+b]
    std::vector<std::uint64_t> visits;  ///< rounds per input pair

    std::uint64_t count(int a, int b, int x, int y) const
    {
        return counts[static_cast<std::size_t>(((x - 1) * n + (y - 1)) * 4 + 2 * a + b)];
    }
    std::uint64_t rounds_at(int x, int y) const { return visits[static_cast<std::size_t>((x - 1) * n + (y - 1))]; }
    double frequency(int a, int b, int x, int y) const
    {
        const auto v = rounds_at(x, y);
        return v ? double(count(a, b, x, y)) / double(v) : 0.0;
    }
    FloatBox to_box() const
    {
        FloatBox box(n, n);
        for (int x = 1; x <= n; ++x)
            for (int y = 1; y <= n; ++y)
                for (int a = 0; a < 2; ++a)
                    for (int b = 0; b < 2; ++b) box.block(x, y)[a][b] = frequency(a, b, x, y);
        return box;
    }
};

inline EmpiricalBox simulate_pr_from_ks(int n, std::uint64_t rounds, Rng& rng)
{
    if (rounds < 1) throw InvalidArgument("rounds must be >= 1");
    const RelabelMap map(n);
    const ExactBox ks = ks_box(map.ks_dimension(), Rational(1, 2));
    EmpiricalBox emp;
    emp.n = n;
    emp.counts.assign(static_cast<std::size_t>(n * n * 4), 0);
    emp.visits.assign(static_cast<std::size_t>(n * n), 0);
    const auto un = static_cast<std::uint64_t>(n);
    for (std::uint64_t r = 0; r < rounds; ++r) {
        const int x = static_cast<int>(rng.below(un)) + 1;
        const int y = static_cast<int>(rng.below(un)) + 1;
        const auto [a, b] = sample(ks, map.alice(x), map.bob(y), rng);
        const auto cell = static_cast<std::size_t>((x - 1) * n + (y - 1));
        ++emp.visits[cell];
        ++emp.counts[cell * 4 + static_cast<std::size_t>(2 * a + (1 - b))];
    }
    return emp;
}

/// Chained-expression value reached by the KS_p-backed strategy:
/// (n-1)(4p-1) + 1. Unequal KS inputs give correlator 4p-1 after Bob's flip,
/// the shared input gives -1.
template <class T>
T chained_value_from_ks(int n, const T& p)
{
    require_even_cycle(n);
    require_ks_marginal(p);
    return T(n - 1) * (T(4) * p - T(1)) + T(1);
}

struct MarginalThresholds {
    double p_c;  ///< (n-2) / (2(n-1)): meets the classical bound n-2
    double p_q;  ///< (n(cos(pi/n)+1) - 2) / (4(n-1)): meets n cos(pi/n)
    double p_ns; ///< 1/2: meets the no-signalling maximum n
};

inline MarginalThresholds marginal_thresholds(int n)
{
    require_even_cycle(n);
    const double c = std::cos(std::numbers::pi / n);
    return {(n - 2.0) / (2.0 * (n - 1)), (n * (c + 1.0) - 2.0) / (4.0 * (n - 1)), 0.5};
}

/// Exact p_c.
inline Rational classical_threshold_exact(int n)
{
    require_even_cycle(n);
    return Rational(n - 2, 2 * (n - 1));
}

struct ChainedEstimate {
    double value = 0.0;
    double std_error = 0.0;
    std::uint64_t rounds = 0;
};

/// Monte Carlo estimate of the chained value under the KS_p-backed strategy.
/// Each round picks a term j uniformly; terms j < n query KS_p at the PR-relabelled
/// unequal inputs (alice(j+1), bob(j)), the closing term queries the shared
/// input (1, 1). Outputs map to +-1 with Bob's bit flipped; the estimator is
/// n * sign_j * a' b'.
inline ChainedEstimate simulate_chained_from_ks(int n, double p, std::uint64_t rounds, Rng& rng)
{
    require_even_cycle(n);
    require_ks_marginal(p);
    if (rounds < 1) throw InvalidArgument("rounds must be >= 1");
    const RelabelMap map(n);
    const FloatBox ks = ks_box(map.ks_dimension(), p);
    double sum = 0.0;
    double sum_sq = 0.0;
    for (std::uint64_t r = 0; r < rounds; ++r) {
        const int j = static_cast<int>(rng.below(static_cast<std::uint64_t>(n))) + 1;
        const bool closing = j == n;
        const int x = closing ? map.alice(1) : map.alice(j + 1);
        const int y = closing ? map.bob(1) : map.bob(j);
        const auto [a, b] = sample(ks, x, y, rng);
        const int alice_pm = a == 0 ? 1 : -1;
        const int bob_pm = (1 - b) == 0 ? 1 : -1;
        const double sample_value = n * (closing ? -1.0 : 1.0) * alice_pm * bob_pm;
        sum += sample_value;
        sum_sq += sample_value * sample_value;
    }
    ChainedEstimate est;
    est.rounds = rounds;
    est.value = sum / double(rounds);
    const double var = std::max(0.0, sum_sq / double(rounds) - est.value * est.value);
    est.std_error = std::sqrt(var / double(rounds));
    return est;
}

}  // namespace ksbox
