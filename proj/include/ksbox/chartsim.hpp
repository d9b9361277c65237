#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "errors.hpp"
#include "nsboxes.hpp"
#include "random.hpp"
#include "rational.hpp"

namespace ksbox {

/// Shared 0/1 labelling of the N inputs. Both parties answer with the label
/// of their own input.
class Chart {
public:
    explicit Chart(std::vector<int> assignment) : assignment_(std::move(assignment))
    {
        if (assignment_.empty()) throw InvalidDimension("chart: N must be positive");
        for (int bit : assignment_)
            if (bit != 0 && bit != 1) throw InvalidArgument("chart: labels must be 0 or 1");
    }

    /// Degree-M chart with its ones on vertices 1..M.
    static Chart canonical(int n_inputs, int degree)
    {
        if (degree < 0 || degree > n_inputs) throw InvalidArgument("chart: degree must lie in [0, N]");
        std::vector<int> bits(static_cast<std::size_t>(n_inputs), 0);
        for (int i = 0; i < degree; ++i) bits[i] = 1;
        return Chart(std::move(bits));
    }

    int size() const noexcept { return static_cast<int>(assignment_.size()); }
    int degree() const noexcept
    {
        int m = 0;
        for (int bit : assignment_) m += bit;
        return m;
    }
    /// Output for 1-indexed input x.
    int output(int x) const { return assignment_.at(static_cast<std::size_t>(x - 1)); }
    const std::vector<int>& assignment() const noexcept { return assignment_; }

    /// Cyclic shift of the polygon labelling by `steps` vertices.
    Chart rotated(int steps) const
    {
        const int n = size();
        std::vector<int> bits(assignment_.size());
        for (int i = 0; i < n; ++i) bits[static_cast<std::size_t>(((i + steps) % n + n) % n)] = assignment_[i];
        return Chart(std::move(bits));
    }

private:
    std::vector<int> assignment_;
};

template <class T>
struct StrategyTerm {
    int degree;
    T weight;
    friend bool operator==(const StrategyTerm&, const StrategyTerm&) = default;
};

/// Probability mixture over chart degrees.
template <class T>
struct MixedStrategy {
    std::vector<StrategyTerm<T>> support;

    T total_weight() const
    {
        T sum(0);
        for (const auto& t : support) sum += t.weight;
        return sum;
    }
    T mean_degree() const
    {
        T sum(0);
        for (const auto& t : support) sum += t.weight * T(t.degree);
        return sum;
    }
};

/// Probability that chart C_M satisfies a.b=0 on a uniformly random ordered
/// input pair: (N^2 - M^2 + M) / N^2.
template <class T = Rational>
T perp_success(int n_inputs, int degree)
{
    if (n_inputs < 1) throw InvalidDimension("dimension: N must be positive");
    if (degree < 0 || degree > n_inputs) throw InvalidArgument("chart degree must satisfy 0 <= M <= N");
    const std::int64_t n = n_inputs;
    const std::int64_t m = degree;
    return T(n * n - m * m + m) / T(n * n);
}

template <class T>
struct OptimalStrategy {
    MixedStrategy<T> strategy;
    T value;
};

/// Optimal chart mixture for simulating KS_p with N inputs.
///
/// Np integral: the single chart C_{Np}. Otherwise charts C_m and C_{m+1}
/// with m = floor(Np), weighted (m+1-Np, Np-m). The value is
/// 1 - (2Np - M)(M - 1)/N^2 with M = ceil(Np).
template <class T>
OptimalStrategy<T> optimal_strategy(int n_inputs, const T& p)
{
    if (n_inputs < 2) throw InvalidDimension("dimension: KS box requires N >= 2");
    require_ks_marginal(p);

    const T mean = T(n_inputs) * p;
    const auto lo = static_cast<int>(floor_int(mean));
    OptimalStrategy<T> out;
    int ceil_degree = lo;
    if (is_integral(mean)) {
        out.strategy.support.push_back({lo, T(1)});
    } else {
        ceil_degree = lo + 1;
        out.strategy.support.push_back({lo, T(lo + 1) - mean});
        out.strategy.support.push_back({lo + 1, mean - T(lo)});
    }
    const T m(ceil_degree);
    out.value = T(1) - (T(2) * mean - m) * (m - T(1)) / T(std::int64_t{n_inputs} * n_inputs);
    return out;
}

/// Exact optimum of the chart-mixture linear program
///   max sum_i w_i perp_success(N, i)  s.t.  sum_i w_i i = Np, sum_i w_i = 1, w >= 0,
/// by exhaustive search over every support of size one or two in {0..N}.
/// A basic optimal solution of this program has at most two nonzero weights,
/// so the search is exact.
template <class T>
T lp_oracle(int n_inputs, const T& p)
{
    if (n_inputs < 1) throw InvalidDimension("dimension: N must be positive");
    if (p < T(0)) throw InvalidMarginal("marginal bound: p must be nonnegative");
    const T mean = T(n_inputs) * p;
    if (mean > T(n_inputs)) throw InvalidArgument("infeasible mean: Np exceeds N");

    bool found = false;
    T best(0);
    auto consider = [&](const T& v) {
        if (!found || v > best) best = v;
        found = true;
    };
    for (int i = 0; i <= n_inputs; ++i) {
        if (T(i) == mean) consider(perp_success<T>(n_inputs, i));
        for (int j = i + 1; j <= n_inputs; ++j) {
            if (T(i) > mean || T(j) < mean) continue;
            const T w_hi = (mean - T(i)) / T(j - i);
            const T w_lo = T(1) - w_hi;
            consider(w_lo * perp_success<T>(n_inputs, i) + w_hi * perp_success<T>(n_inputs, j));
        }
    }
    return best;
}

/// Large-N limit of the optimal simulation probability: 1 - p^2.
template <class T>
T asymptotic_limit(const T& p)
{
    require_ks_marginal(p);
    return T(1) - p * p;
}

struct SimulationTally {
    std::uint64_t rounds = 0;
    std::uint64_t successes = 0;
    std::uint64_t alice_ones = 0;

    double success_fraction() const { return rounds ? double(successes) / double(rounds) : 0.0; }
    double alice_marginal() const { return rounds ? double(alice_ones) / double(rounds) : 0.0; }

    SimulationTally& operator+=(const SimulationTally& other)
    {
        rounds += other.rounds;
        successes += other.successes;
        alice_ones += other.alice_ones;
        return *this;
    }
};

/// Monte Carlo play of the optimal mixture. Each round draws a degree from the
/// mixture, a shared uniform rotation of the canonical chart, and independent
/// uniform inputs; a round succeeds unless x != y and both outputs are 1.
/// Tallies from workers with derived seeds may be summed.
template <class T>
SimulationTally simulate_strategy(int n_inputs, const T& p, std::uint64_t rounds, Rng& rng)
{
    if (rounds < 1) throw InvalidArgument("rounds must be >= 1");
    const auto optimal = optimal_strategy(n_inputs, p);
    const auto& support = optimal.strategy.support;
    const double first_weight = to_double(support.front().weight);
    const auto n = static_cast<std::uint64_t>(n_inputs);

    SimulationTally tally;
    tally.rounds = rounds;
    for (std::uint64_t r = 0; r < rounds; ++r) {
        const int degree =
            (support.size() == 1 || rng.uniform() < first_weight) ? support.front().degree : support.back().degree;
        const auto shift = rng.below(n);
        const auto x = rng.below(n);
        const auto y = rng.below(n);
        // Canonical chart rotated by `shift`: vertex v carries a one iff (v - shift) mod N < degree.
        const int a = ((x + n - shift) % n) < static_cast<std::uint64_t>(degree) ? 1 : 0;
        const int b = ((y + n - shift) % n) < static_cast<std::uint64_t>(degree) ? 1 : 0;
        if (!(x != y && a == 1 && b == 1)) ++tally.successes;
        tally.alice_ones += static_cast<std::uint64_t>(a);
    }
    return tally;
}

}  // namespace ksbox
