#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <string>
#include <type_traits>
#include <utility>
#include <vector>

#include "errors.hpp"
#include "random.hpp"
#include "rational.hpp"

namespace ksbox {

/// Joint outcome distribution for one input pair, indexed [a][b].
template <class T>
using Block = std::array<std::array<T, 2>, 2>;

template <class T>
inline constexpr bool is_exact_v = std::is_same_v<T, Rational>;

/// Tolerance used when checking box invariants: zero in exact mode.
template <class T>
constexpr double box_tolerance() { return is_exact_v<T> ? 0.0 : 1e-12; }

/// Bipartite two-outcome box P(a,b|x,y). Inputs are 1-indexed, outputs {0,1}.
/// Storage is dense, one 2x2 block per input pair.
template <class T>
class BasicBox {
public:
    using value_type = T;

    BasicBox(int n_alice, int n_bob) : n_alice_(n_alice), n_bob_(n_bob)
    {
        if (n_alice < 1 || n_bob < 1)
            throw InvalidDimension("box needs at least one input per party");
        blocks_.resize(static_cast<std::size_t>(n_alice) * n_bob, Block<T>{{{T(0), T(0)}, {T(0), T(0)}}});
    }

    int n_alice() const noexcept { return n_alice_; }
    int n_bob() const noexcept { return n_bob_; }

    const Block<T>& block(int x, int y) const { return blocks_[index(x, y)]; }
    Block<T>& block(int x, int y) { return blocks_[index(x, y)]; }

    const T& prob(int a, int b, int x, int y) const { return block(x, y)[a][b]; }

    /// P(a|x) measured while Bob uses input y.
    T alice_marginal(int a, int x, int y) const { return block(x, y)[a][0] + block(x, y)[a][1]; }
    /// P(b|y) measured while Alice uses input x.
    T bob_marginal(int b, int x, int y) const { return block(x, y)[0][b] + block(x, y)[1][b]; }

    bool in_range(int x, int y) const noexcept { return x >= 1 && x <= n_alice_ && y >= 1 && y <= n_bob_; }

    /// Throws InvalidArgument when an entry leaves [0,1] or a block does not sum to 1.
    void validate() const
    {
        const double tol = box_tolerance<T>();
        for (int x = 1; x <= n_alice_; ++x)
            for (int y = 1; y <= n_bob_; ++y) {
                T sum(0);
                for (int a = 0; a < 2; ++a)
                    for (int b = 0; b < 2; ++b) {
                        const T& v = prob(a, b, x, y);
                        if (to_double(v) < -tol || to_double(v) > 1 + tol)
                            throw InvalidArgument("probability range: entry outside [0,1] at " + where(x, y, a, b));
                        sum += v;
                    }
                if (std::abs(to_double(sum - T(1))) > tol || (is_exact_v<T> && sum != T(1)))
                    throw InvalidArgument("normalization: block (" + std::to_string(x) + "," +
                                          std::to_string(y) + ") does not sum to 1");
            }
    }

    friend bool operator==(const BasicBox& lhs, const BasicBox& rhs)
    {
        return lhs.n_alice_ == rhs.n_alice_ && lhs.n_bob_ == rhs.n_bob_ && lhs.blocks_ == rhs.blocks_;
    }

private:
    std::size_t index(int x, int y) const
    {
        if (!in_range(x, y))
            throw InvalidArgument("input pair (" + std::to_string(x) + "," + std::to_string(y) +
                                  ") out of range");
        return static_cast<std::size_t>(x - 1) * n_bob_ + (y - 1);
    }

    static std::string where(int x, int y, int a, int b)
    {
        return "(x=" + std::to_string(x) + ",y=" + std::to_string(y) + ",a=" + std::to_string(a) +
               ",b=" + std::to_string(b) + ")";
    }

    int n_alice_;
    int n_bob_;
    std::vector<Block<T>> blocks_;
};

using ExactBox = BasicBox<Rational>;
using FloatBox = BasicBox<double>;

template <class T>
void require_ks_marginal(const T& p)
{
    if (p < T(0) || p > T(1) / T(2))
        throw InvalidMarginal("marginal bound: KS box requires 0 <= p <= 1/2 (off-diagonal entry 1-2p "
                              "would be negative)");
}

/// N-input KS_p box: diagonal blocks [1-p, 0; 0, p], off-diagonal [1-2p, p; p, 0].
template <class T>
BasicBox<T> ks_box(int n_inputs, const T& p)
{
    if (n_inputs < 2) throw InvalidDimension("dimension: KS box requires N >= 2");
    require_ks_marginal(p);

    const Block<T> same{{{T(1) - p, T(0)}, {T(0), p}}};
    const Block<T> differ{{{T(1) - T(2) * p, p}, {p, T(0)}}};
    BasicBox<T> box(n_inputs, n_inputs);
    for (int x = 1; x <= n_inputs; ++x)
        for (int y = 1; y <= n_inputs; ++y) box.block(x, y) = (x == y) ? same : differ;
    return box;
}

/// Generalized PR box on n inputs: outputs differ only on input pair (1,1).
template <class T = Rational>
BasicBox<T> pr_box(int n_inputs)
{
    if (n_inputs < 2) throw InvalidDimension("dimension: PR box requires n >= 2");
    const T half = T(1) / T(2);
    const Block<T> anti{{{T(0), half}, {half, T(0)}}};
    const Block<T> corr{{{half, T(0)}, {T(0), half}}};
    BasicBox<T> box(n_inputs, n_inputs);
    for (int x = 1; x <= n_inputs; ++x)
        for (int y = 1; y <= n_inputs; ++y) box.block(x, y) = (x == 1 && y == 1) ? anti : corr;
    return box;
}

struct NoSignallingReport {
    bool pass = true;
    double worst_alice = 0.0;   ///< max |P(a|x,y) - P(a|x,y')|
    double worst_bob = 0.0;     ///< max |P(b|x,y) - P(b|x',y)|
    double worst_deviation() const { return std::max(worst_alice, worst_bob); }
};

/// Compares every party marginal across all counterpart inputs. In exact mode
/// `tol` is ignored and equality is exact.
template <class T>
NoSignallingReport check_no_signalling(const BasicBox<T>& box, double tol = 1e-12)
{
    NoSignallingReport report;
    bool exact_equal = true;

    // Largest spread max - min of P(out|own input) over the counterpart's inputs.
    auto scan = [&](int own_count, int other_count, auto&& marginal) {
        double worst = 0.0;
        for (int own = 1; own <= own_count; ++own)
            for (int out = 0; out < 2; ++out) {
                T lo = marginal(out, own, 1);
                T hi = lo;
                for (int other = 2; other <= other_count; ++other) {
                    const T v = marginal(out, own, other);
                    lo = std::min(lo, v);
                    hi = std::max(hi, v);
                }
                if (lo != hi) exact_equal = false;
                worst = std::max(worst, to_double(hi - lo));
            }
        return worst;
    };
    report.worst_alice = scan(box.n_alice(), box.n_bob(),
                              [&](int a, int x, int y) { return box.alice_marginal(a, x, y); });
    report.worst_bob = scan(box.n_bob(), box.n_alice(),
                            [&](int b, int y, int x) { return box.bob_marginal(b, x, y); });

    report.pass = is_exact_v<T> ? exact_equal : report.worst_deviation() <= tol;
    return report;
}

struct PerpEntry {
    int x, y, a, b;
    double probability;
    friend bool operator==(const PerpEntry&, const PerpEntry&) = default;
};

/// Which supported events break the KS conditions (a=b on equal inputs,
/// a.b=0 on unequal inputs).
struct PerpReport {
    bool holds_equal_inputs = true;
    bool holds_product_zero = true;
    std::vector<PerpEntry> offending_entries;
    bool holds() const noexcept { return holds_equal_inputs && holds_product_zero; }
};

template <class T>
PerpReport check_perp(const BasicBox<T>& box)
{
    PerpReport report;
    for (int x = 1; x <= box.n_alice(); ++x)
        for (int y = 1; y <= box.n_bob(); ++y)
            for (int a = 0; a < 2; ++a)
                for (int b = 0; b < 2; ++b) {
                    const T& v = box.prob(a, b, x, y);
                    if (v == T(0)) continue;
                    if (x == y && a != b) {
                        report.holds_equal_inputs = false;
                        report.offending_entries.push_back({x, y, a, b, to_double(v)});
                    } else if (x != y && a == 1 && b == 1) {
                        report.holds_product_zero = false;
                        report.offending_entries.push_back({x, y, a, b, to_double(v)});
                    }
                }
    return report;
}

/// Deterministic box in which both parties read their output off a shared
/// 0/1 labelling of the inputs.
template <class T = Rational>
BasicBox<T> deterministic_box(const std::vector<int>& labels)
{
    const int n = static_cast<int>(labels.size());
    BasicBox<T> box(n, n);
    for (int x = 1; x <= n; ++x)
        for (int y = 1; y <= n; ++y) box.block(x, y)[labels[x - 1]][labels[y - 1]] = T(1);
    return box;
}

/// Draws one joint outcome (a, b) from block (x, y).
template <class T>
std::pair<int, int> sample(const BasicBox<T>& box, int x, int y, Rng& rng)
{
    const Block<T>& blk = box.block(x, y);
    const double u = rng.uniform();
    double acc = 0.0;
    for (int a = 0; a < 2; ++a)
        for (int b = 0; b < 2; ++b) {
            const double v = to_double(blk[a][b]);
            acc += v;
            if (u < acc && v > 0.0) return {a, b};
        }
    // u landed in the rounding tail: return the last supported outcome.
    for (int k = 3; k >= 0; --k)
        if (to_double(blk[k / 2][k % 2]) > 0.0) return {k / 2, k % 2};
    throw InvalidArgument("normalization: block has no support");
}

}  // namespace ksbox
