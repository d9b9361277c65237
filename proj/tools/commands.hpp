#pragma once

// Command implementations behind the ksbox CLI. Each command writes its report
// to `out` and returns the process exit status.

#include <cmath>
#include <cstdint>
#include <fstream>
#include <numbers>
#include <ostream>
#include <sstream>
#include <string>

#include <ksbox/ksbox.hpp>

namespace ksbox::cli {

enum class Format { json, csv };

struct RunConfig {
    std::uint64_t seed = 0;
    Format format = Format::json;
    std::string output;  ///< empty: standard output
    bool exact = false;
};

/// Generator identity reported alongside every seed.
inline constexpr const char* rng_name = "xoshiro256**/splitmix64";

inline Json metadata(const RunConfig& cfg, const char* command)
{
    return {{"command", command},
            {"seed", cfg.seed},
            {"rng", rng_name},
            {"mode", cfg.exact ? "exact" : "float"}};
}

inline void reject_exact(const RunConfig& cfg, const char* command)
{
    if (cfg.exact)
        throw InvalidArgument(std::string("numeric mode: --exact is not available for '") + command +
                              "' (eigenvalue-dependent)");
}

inline void emit(std::ostream& out, const Json& j) { out << j.dump(2) << '\n'; }

// ---------------------------------------------------------------------------

struct BoxArgs {
    std::string kind;  ///< "ks" or "pr"
    int n = 0;
    std::string p = "0";
};

template <class T>
int write_box(const RunConfig& cfg, const BoxArgs& args, const BasicBox<T>& box, std::ostream& out)
{
    const auto ns = check_no_signalling(box);
    const auto perp = check_perp(box);
    if (cfg.format == Format::csv) {
        out << "x,y,a,b,probability\n";
        for (int x = 1; x <= box.n_alice(); ++x)
            for (int y = 1; y <= box.n_bob(); ++y)
                for (int a = 0; a < 2; ++a)
                    for (int b = 0; b < 2; ++b) {
                        out << x << ',' << y << ',' << a << ',' << b << ',';
                        if constexpr (is_exact_v<T>)
                            out << to_string(box.prob(a, b, x, y));
                        else
                            out << format_real(box.prob(a, b, x, y));
                        out << '\n';
                    }
        return 0;
    }
    Json offenders = Json::array();
    for (const auto& e : perp.offending_entries)
        offenders.push_back({{"x", e.x}, {"y", e.y}, {"a", e.a}, {"b", e.b}, {"probability", e.probability}});
    Json j = metadata(cfg, "box");
    j["kind"] = args.kind;
    j["n"] = args.n;
    if (args.kind == "ks") j["p"] = args.p;
    j["box"] = box_to_json(box);
    j["no_signalling"] = {{"pass", ns.pass}, {"worst_deviation", ns.worst_deviation()}};
    j["perp"] = {{"holds_equal_inputs", perp.holds_equal_inputs},
                 {"holds_product_zero", perp.holds_product_zero},
                 {"offending_entries", offenders}};
    emit(out, j);
    return 0;
}

inline int cmd_box(const RunConfig& cfg, const BoxArgs& args, std::ostream& out)
{
    if (args.kind == "ks") {
        if (cfg.exact) return write_box(cfg, args, ks_box(args.n, parse_rational(args.p)), out);
        return write_box(cfg, args, ks_box(args.n, to_double(parse_rational(args.p))), out);
    }
    if (args.kind == "pr") {
        if (cfg.exact) return write_box(cfg, args, pr_box<Rational>(args.n), out);
        return write_box(cfg, args, pr_box<double>(args.n), out);
    }
    throw InvalidArgument("box kind must be 'ks' or 'pr'");
}

// ---------------------------------------------------------------------------

struct SimChartsArgs {
    int n = 0;
    std::string p = "0";
    std::uint64_t rounds = 0;
};

struct ChartsReport {
    double closed_form = 0.0;
    double oracle = 0.0;
    std::string closed_form_exact;
    std::string oracle_exact;
    bool agree = false;
    Json support = Json::array();
};

inline ChartsReport charts_report(const RunConfig& cfg, int n, const std::string& p_text)
{
    ChartsReport r;
    if (cfg.exact) {
        const Rational p = parse_rational(p_text);
        const auto opt = optimal_strategy(n, p);
        const Rational oracle = lp_oracle(n, p);
        r.closed_form = to_double(opt.value);
        r.oracle = to_double(oracle);
        r.closed_form_exact = to_string(opt.value);
        r.oracle_exact = to_string(oracle);
        r.agree = opt.value == oracle;
        for (const auto& t : opt.strategy.support) r.support.push_back({{"degree", t.degree}, {"weight", to_string(t.weight)}});
    } else {
        const double p = to_double(parse_rational(p_text));
        const auto opt = optimal_strategy(n, p);
        r.closed_form = opt.value;
        r.oracle = lp_oracle(n, p);
        r.agree = std::abs(r.closed_form - r.oracle) <= 1e-12;
        for (const auto& t : opt.strategy.support) r.support.push_back({{"degree", t.degree}, {"weight", t.weight}});
    }
    return r;
}

/// Exit status 1 when the closed form and the LP oracle disagree.
inline int cmd_sim_charts(const RunConfig& cfg, const SimChartsArgs& args, std::ostream& out)
{
    const ChartsReport r = charts_report(cfg, args.n, args.p);
    const double p = to_double(parse_rational(args.p));

    double mc = 0.0;
    double sigma = 0.0;
    double marginal = 0.0;
    if (args.rounds > 0) {
        Rng rng(cfg.seed);
        const auto tally = simulate_strategy(args.n, p, args.rounds, rng);
        mc = tally.success_fraction();
        marginal = tally.alice_marginal();
        sigma = std::sqrt(r.closed_form * (1.0 - r.closed_form) / double(args.rounds));
    }

    if (cfg.format == Format::csv) {
        out << "N,p,closed_form,lp_oracle,monte_carlo,rounds,seed\n";
        out << args.n << ',' << format_real(p) << ',' << format_real(r.closed_form) << ',' << format_real(r.oracle)
            << ',' << (args.rounds ? format_real(mc) : "") << ',' << args.rounds << ',' << cfg.seed << '\n';
    } else {
        Json j = metadata(cfg, "sim charts");
        j["N"] = args.n;
        j["p"] = args.p;
        j["closed_form"] = r.closed_form;
        j["lp_oracle"] = r.oracle;
        if (cfg.exact) {
            j["closed_form_exact"] = r.closed_form_exact;
            j["lp_oracle_exact"] = r.oracle_exact;
        }
        j["agree"] = r.agree;
        j["support"] = r.support;
        j["asymptotic_limit"] = asymptotic_limit(p);
        j["perfect_simulation"] = p * args.n <= 1.0;
        if (args.rounds > 0)
            j["monte_carlo"] = {{"value", mc},
                                {"sigma", sigma},
                                {"deviation_sigmas", sigma > 0 ? (mc - r.closed_form) / sigma : 0.0},
                                {"alice_marginal", marginal},
                                {"rounds", args.rounds}};
        emit(out, j);
    }
    return r.agree ? 0 : 1;
}

// ---------------------------------------------------------------------------

struct IneqArgs {
    std::string kind;  ///< "kcbs" or "chained"
    int n = 0;
    std::string rho_file;
};

inline DensityMatrix load_density_matrix(const std::string& path)
{
    std::ifstream in(path);
    if (!in) throw InvalidArgument("cannot open density-matrix file '" + path + "'");
    Json j;
    try {
        j = Json::parse(in);
    } catch (const Json::exception& e) {
        throw InvalidState("shape", std::string("density-matrix file is not valid JSON: ") + e.what());
    }
    return density_matrix_from_json(j);
}

inline int cmd_inequality(const RunConfig& cfg, const IneqArgs& args, std::ostream& out)
{
    reject_exact(cfg, "ineq");
    Json j = metadata(cfg, "ineq");
    j["kind"] = args.kind;
    j["n"] = args.n;
    if (args.kind == "kcbs") {
        const auto bounds = kcbs_bounds(args.n);
        const double threshold = kcbs_threshold(args.n);
        j["classical_bound"] = bounds.classical;
        j["quantum_bound"] = bounds.quantum;
        j["rho33_threshold"] = threshold;
        if (!args.rho_file.empty()) {
            const auto rho = load_density_matrix(args.rho_file);
            const auto model = kcbs_model(args.n);
            const double value = kcbs_value(model, rho);
            j["value"] = value;
            j["rho33"] = rho(2, 2).real();
            j["violated"] = value > bounds.classical;
        }
    } else if (args.kind == "chained") {
        require_even_cycle(args.n);
        j["classical_bound"] = args.n - 2;
        j["quantum_bound"] = args.n * std::cos(std::numbers::pi / args.n);
        j["gap_threshold"] = (args.n - 2.0) / args.n;
        if (!args.rho_file.empty()) {
            const auto rho = load_density_matrix(args.rho_file);
            const auto model = chained_model(args.n);
            const double value = chained_value(model, rho);
            const auto gap = chained_necessary_condition(rho, args.n);
            const auto form = chained_violation(value, args.n);
            j["value"] = value;
            j["abs_value"] = std::abs(value);
            j["violated"] = form != ChainedForm::none;
            j["violated_form"] = to_string(form);
            j["gap"] = gap.gap;
            j["gap_condition_satisfied"] = gap.satisfied;
        }
    } else {
        throw InvalidArgument("inequality kind must be 'kcbs' or 'chained'");
    }
    if (cfg.format == Format::csv) {
        out << "key,value\n";
        for (const auto& [key, value] : j.items()) out << key << ',' << (value.is_string() ? value.get<std::string>() : value.dump()) << '\n';
    } else {
        emit(out, j);
    }
    return 0;
}

// ---------------------------------------------------------------------------

struct CvArgs {
    int n = 4;
    int packets = 1;  ///< M
};

inline int cmd_cv(const RunConfig& cfg, const CvArgs& args, std::ostream& out)
{
    reject_exact(cfg, "cv");
    const CVModel model(args.packets);
    const double value = cv_chained_value(model, args.n);
    const double limit = -args.n * std::cos(std::numbers::pi / args.n);
    const auto crossover = cv_violation_crossover(args.n);
    Json j{{"M", args.packets},
           {"n", args.n},
           {"value", value},
           {"limit", limit},
           {"classical_bound", args.n - 2},
           {"closed_form", cv_chained_closed_form(args.packets, args.n)},
           {"violates", std::abs(value) > args.n - 2},
           {"crossover_M", crossover ? Json(*crossover) : Json()},
           {"seed", cfg.seed}};
    if (cfg.format == Format::csv) {
        out << "M,n,value,limit,classical_bound\n"
            << args.packets << ',' << args.n << ',' << format_real(value) << ',' << format_real(limit) << ','
            << args.n - 2 << '\n';
    } else {
        emit(out, j);
    }
    return 0;
}

// ---------------------------------------------------------------------------

struct ReduceArgs {
    int n = 2;
    std::uint64_t rounds = 0;
};

/// Exit status 1 when the derived box is not the PR box (or Monte Carlo
/// leaves the 3-sigma band).
inline int cmd_reduce(const RunConfig& cfg, const ReduceArgs& args, std::ostream& out)
{
    const RelabelMap map(args.n);
    const ExactBox derived = derived_pr_box(args.n);
    const bool matches = derived == pr_box<Rational>(args.n);

    Json j = metadata(cfg, "reduce");
    j["n"] = args.n;
    j["ks_dimension"] = map.ks_dimension();
    Json alice = Json::array();
    Json bob = Json::array();
    for (int i = 1; i <= args.n; ++i) {
        alice.push_back(map.alice(i));
        bob.push_back(map.bob(i));
    }
    j["relabel"] = {{"alice", alice}, {"bob", bob}};
    j["derived_box"] = box_to_json(derived);
    j["matches_pr"] = matches;

    bool mc_ok = true;
    if (args.rounds > 0) {
        Rng rng(cfg.seed);
        const auto emp = simulate_pr_from_ks(args.n, args.rounds, rng);
        double worst_z = 0.0;
        for (int x = 1; x <= args.n; ++x)
            for (int y = 1; y <= args.n; ++y)
                for (int a = 0; a < 2; ++a)
                    for (int b = 0; b < 2; ++b) {
                        const double target = to_double(derived.prob(a, b, x, y));
                        const double visits = double(emp.rounds_at(x, y));
                        const double sd = std::sqrt(target * (1 - target) / visits);
                        const double dev = std::abs(emp.frequency(a, b, x, y) - target);
                        if (sd == 0.0) {
                            if (dev != 0.0) worst_z = INFINITY;
                        } else {
                            worst_z = std::max(worst_z, dev / sd);
                        }
                    }
        mc_ok = worst_z <= 3.0;
        j["monte_carlo"] = {{"rounds", args.rounds}, {"max_abs_z", worst_z}, {"within_3sigma", mc_ok}};
    }
    if (cfg.format == Format::csv) {
        out << "x,y,a,b,probability\n";
        for (int x = 1; x <= args.n; ++x)
            for (int y = 1; y <= args.n; ++y)
                for (int a = 0; a < 2; ++a)
                    for (int b = 0; b < 2; ++b)
                        out << x << ',' << y << ',' << a << ',' << b << ',' << to_string(derived.prob(a, b, x, y)) << '\n';
    } else {
        emit(out, j);
    }
    return (matches && mc_ok) ? 0 : 1;
}

// ---------------------------------------------------------------------------

struct SweepArgs {
    std::string what;
    int n_min = 0;  ///< 0: the sweep's natural starting point
    int n_max = 0;
    int p_steps = 50;  ///< optimal-sim: p = k/100 for k = 0..p_steps
    std::uint64_t rounds = 0;
};

inline int cmd_sweep(const RunConfig& cfg, const SweepArgs& args, std::ostream& out)
{
    Json rows = Json::array();
    std::ostringstream csv;
    auto start = [&](int natural) { return std::max(args.n_min, natural); };

    if (args.what == "optimal-sim") {
        if (args.p_steps < 0 || args.p_steps > 50) throw InvalidArgument("--p-steps must lie in [0, 50]");
        const int n_max = args.n_max ? args.n_max : 12;
        csv << "N,p,closed_form,lp_oracle,monte_carlo,rounds,seed\n";
        for (int n = start(2); n <= n_max; ++n)
            for (int k = 0; k <= args.p_steps; ++k) {
                const Rational p(k, 100);
                const Rational closed = optimal_strategy(n, p).value;
                const Rational oracle = lp_oracle(n, p);
                std::string mc;
                if (args.rounds > 0) {
                    Rng rng(cfg.seed);
                    mc = format_real(simulate_strategy(n, to_double(p), args.rounds, rng).success_fraction());
                }
                csv << n << ',' << format_real(to_double(p)) << ',' << format_real(to_double(closed)) << ','
                    << format_real(to_double(oracle)) << ',' << mc << ',' << args.rounds << ',' << cfg.seed << '\n';
                rows.push_back({{"N", n}, {"p", to_double(p)}, {"closed_form", to_double(closed)},
                                {"lp_oracle", to_double(oracle)}, {"monte_carlo", mc}, {"rounds", args.rounds},
                                {"seed", cfg.seed}});
            }
    } else if (args.what == "kcbs-threshold") {
        reject_exact(cfg, "sweep kcbs-threshold");
        const int n_max = args.n_max ? args.n_max : 51;
        csv << "n,threshold,classical_bound,quantum_bound\n";
        for (int n = start(5) | 1; n <= n_max; n += 2) {
            const auto b = kcbs_bounds(n);
            const double t = kcbs_threshold(n);
            csv << n << ',' << format_real(t) << ',' << format_real(b.classical) << ',' << format_real(b.quantum) << '\n';
            rows.push_back({{"n", n}, {"threshold", t}, {"classical_bound", b.classical}, {"quantum_bound", b.quantum}});
        }
    } else if (args.what == "chained-gap") {
        reject_exact(cfg, "sweep chained-gap");
        const int n_max = args.n_max ? args.n_max : 40;
        csv << "n,gap_threshold\n";
        for (int n = (start(4) + 1) / 2 * 2; n <= n_max; n += 2) {
            const double t = (n - 2.0) / n;
            csv << n << ',' << format_real(t) << '\n';
            rows.push_back({{"n", n}, {"gap_threshold", t}});
        }
    } else if (args.what == "ks-thresholds") {
        const int n_max = args.n_max ? args.n_max : 100;
        csv << "n,p_c,p_q,p_ns\n";
        for (int n = (start(4) + 1) / 2 * 2; n <= n_max; n += 2) {
            const auto t = marginal_thresholds(n);
            csv << n << ',' << format_real(t.p_c) << ',' << format_real(t.p_q) << ',' << format_real(t.p_ns) << '\n';
            rows.push_back({{"n", n}, {"p_c", t.p_c}, {"p_q", t.p_q}, {"p_ns", t.p_ns}});
        }
    } else {
        throw InvalidArgument("unknown sweep kind '" + args.what +
                              "' (expected optimal-sim, kcbs-threshold, chained-gap, ks-thresholds)");
    }
    if (rows.empty()) throw InvalidArgument("sweep range is empty");

    if (cfg.format == Format::json) {
        Json j = metadata(cfg, "sweep");
        j["what"] = args.what;
        j["rows"] = rows;
        emit(out, j);
    } else {
        out << csv.str();
    }
    return 0;
}

}  // namespace ksbox::cli
