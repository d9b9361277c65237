// Optimal classical simulation of KS_p boxes, exact and sampled.
#include <iostream>

#include <ksbox/ksbox.hpp>

int main()
{
    using namespace ksbox;

    const ExactBox box = ks_box(5, Rational(1, 2));
    std::cout << "KS_{1/2}, N=5: no-signalling " << (check_no_signalling(box).pass ? "ok" : "FAIL")
              << ", perp " << (check_perp(box).holds() ? "ok" : "FAIL") << "\n\n";

    std::cout << " N   p     optimal      lp_oracle    1-p^2\n";
    for (int n : {2, 5, 8, 12, 100})
        for (Rational p : {Rational(1, 10), Rational(3, 10), Rational(1, 2)}) {
            const auto opt = optimal_strategy(n, p);
            std::cout << fmt::format("{:3d}  {:4}  {:<11}  {:<11}  {}\n", n, format_real(to_double(p)),
                                     to_string(opt.value), to_string(lp_oracle(n, p)),
                                     format_real(to_double(asymptotic_limit(p))));
        }

    Rng rng(7);
    const auto tally = simulate_strategy(5, 0.5, 1'000'000, rng);
    std::cout << "\nMonte Carlo N=5 p=1/2: " << tally.success_fraction() << " (closed form 0.84)\n";
}
