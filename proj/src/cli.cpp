#include "chebmark/cli.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "chebmark/extremal_fraction.hpp"
#include "chebmark/harmonic_measure.hpp"
#include "chebmark/interval_system.hpp"
#include "chebmark/rational_class.hpp"
#include "chebmark/verify.hpp"
#include "json.hpp"

namespace chebmark::cli {

namespace {

std::string fmt(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

void write_output(const std::string& path, const std::string& text) {
    if (path.empty()) {
        std::cout << text;
        return;
    }
    std::ofstream out(path, std::ios::binary);
    if (!out) raise(errc::invalid_parameters, "cannot open output file '" + path + "'");
    out << text;
}

// Total `grid` rows distributed over the bands by length (largest remainder),
// midpoint nodes so the singular endpoints are never sampled.
std::vector<double> density_grid(const IntervalSystem& e, int grid) {
    const int l = e.band_count();
    const double total = e.total_band_length();
    std::vector<int> counts(static_cast<std::size_t>(l), 0);
    std::vector<std::pair<double, int>> remainders;
    int assigned = 0;
    for (int k = 0; k < l; ++k) {
        auto [lo, hi] = e.band(k);
        const double share = grid * (hi - lo) / total;
        counts[static_cast<std::size_t>(k)] = static_cast<int>(share);
        assigned += counts[static_cast<std::size_t>(k)];
        remainders.push_back({share - std::floor(share), k});
    }
    std::sort(remainders.begin(), remainders.end(), [](const auto& a, const auto& b) {
        if (a.first != b.first) return a.first > b.first;
        return a.second < b.second;
    });
    for (int i = 0; i < grid - assigned; ++i)
        ++counts[static_cast<std::size_t>(remainders[static_cast<std::size_t>(i)].second)];
    std::vector<double> xs;
    for (int k = 0; k < l; ++k) {
        auto [lo, hi] = e.band(k);
        const int nk = counts[static_cast<std::size_t>(k)];
        for (int i = 0; i < nk; ++i) xs.push_back(lo + (hi - lo) * (i + 0.5) / nk);
    }
    return xs;
}

int cmd_density(const std::string& intervals, const std::string& pole_lit, int grid,
                const std::string& out) {
    const IntervalSystem e = make_interval_system(parse_endpoint_list(intervals));
    const PolePoint pole = parse_pole(pole_lit);
    const DensityEvaluator density = pole_density(e, pole);
    const std::vector<double> xs = density_grid(e, grid);
    std::vector<double> vals(xs.size());
    density.eval_many(xs, vals);
    std::ostringstream csv;
    csv << "x,density\n";
    for (std::size_t i = 0; i < xs.size(); ++i)
        csv << fmt(xs[i]) << "," << fmt(vals[i]) << "\n";
    write_output(out, csv.str());
    return 0;
}

int cmd_measure(const std::string& intervals, const std::string& pole_lit,
                const std::string& poles_lit, const std::string& out) {
    const IntervalSystem e = make_interval_system(parse_endpoint_list(intervals));
    if (!poles_lit.empty()) {
        // Full configuration: per-pole band measures plus the quantization
        // signature.
        const PoleConfiguration cfg =
            PoleConfiguration::from_poles(parse_pole_list(poles_lit));
        nlohmann::json j;
        nlohmann::json per_pole = nlohmann::json::array();
        std::vector<double> sums(static_cast<std::size_t>(e.band_count()), 0.0);
        for (const auto& p : cfg.poles()) {
            const BandMeasureVector omega = band_measures(e, p);
            per_pole.push_back({{"pole", format_pole(p)}, {"omega", omega.values}});
            for (std::size_t k = 0; k < omega.values.size(); ++k) sums[k] += omega.values[k];
        }
        j["per_pole"] = per_pole;
        j["sums"] = sums;
        const QuantizationSignature sig = quantization_check(e, cfg);
        j["q"] = sig.q;
        j["residuals"] = sig.residuals;
        write_output(out, j.dump(2) + "\n");
        return 0;
    }
    const BandMeasureVector omega = band_measures(e, parse_pole(pole_lit));
    std::ostringstream csv;
    csv << "band_index,omega\n";
    for (std::size_t k = 0; k < omega.values.size(); ++k)
        csv << (k + 1) << "," << fmt(omega.values[k]) << "\n";
    write_output(out, csv.str());
    return 0;
}

int cmd_extremal(const std::string& intervals, const std::string& poles_lit,
                 const std::string& out) {
    const IntervalSystem e = make_interval_system(parse_endpoint_list(intervals));
    const PoleConfiguration cfg = PoleConfiguration::from_poles(parse_pole_list(poles_lit));
    const ExtremalFraction ef = build_extremal(e, cfg);
    nlohmann::json j;
    j["q"] = ef.quantization().q;
    j["zeros"] = ef.zeros();
    nlohmann::json blocks = nlohmann::json::array();
    for (const auto& [lo, hi] : ef.e_tilde()) blocks.push_back({lo, hi});
    j["e_tilde"] = blocks;
    j["markov_constant"] = ef.markov_constant();
    j["numerator_coeffs"] = ef.numerator();
    write_output(out, j.dump(2) + "\n");
    return 0;
}

int cmd_bound(const std::string& intervals, const std::string& poles_lit, int grid,
              const std::string& out) {
    const IntervalSystem e = make_interval_system(parse_endpoint_list(intervals));
    const PoleConfiguration cfg = PoleConfiguration::from_poles(parse_pole_list(poles_lit));
    const ExtremalFraction ef = build_extremal(e, cfg);
    std::ostringstream csv;
    csv << "x,bound\n";
    for (int k = 0; k < e.band_count(); ++k) {
        auto [lo, hi] = e.band(k);
        for (int i = 0; i < grid; ++i) {
            double x = lo + (hi - lo) * i / (grid - 1);
            if (i == 0) x = lo;
            if (i == grid - 1) x = hi;
            csv << fmt(x) << "," << fmt(ef.bound_profile(x)) << "\n";
        }
    }
    write_output(out, csv.str());
    return 0;
}

int cmd_verify(int samples, std::uint64_t seed, double epsilon, int grid, double tol,
               const std::vector<std::string>& fixture_filter, bool exploratory,
               const std::string& out) {
    BatchConfig config;
    config.fixtures = default_fixtures();
    if (!fixture_filter.empty()) {
        std::vector<FixtureSpec> kept;
        for (auto& f : config.fixtures)
            if (std::find(fixture_filter.begin(), fixture_filter.end(), f.name) !=
                fixture_filter.end())
                kept.push_back(std::move(f));
        if (kept.empty()) raise(errc::invalid_parameters, "no fixture matches the filter");
        config.fixtures = std::move(kept);
    }
    config.samples = samples;
    config.seed = seed;
    config.epsilon = epsilon;
    config.grid = grid;
    config.tol_pointwise = config.tol_markov = config.tol_bernstein = tol;
    config.exploratory_non_star = exploratory;
    const std::vector<VerificationReport> reports = batch_verify(config);
    write_output(out, reports_to_json(reports));
    for (const auto& r : reports)
        if (!r.pass && !r.exploratory) return 1;
    return 0;
}

int cmd_reproduce(const std::string& what, double a, double b, int n, const std::string& out) {
    if (what == "m4") {
        const CounterexampleReport rep = reproduce_remark_m4({0.05, 0.1, 0.15, 0.2, 0.3});
        write_output(out, counterexample_to_json(rep));
        return rep.pass ? 0 : 1;
    }
    if (what == "rusak") {
        const CounterexampleReport rep = reproduce_rusak_remark();
        write_output(out, counterexample_to_json(rep));
        return rep.pass ? 0 : 1;
    }
    if (what == "corollary") {
        if (n <= 0 || n % 2 != 0)
            raise(errc::invalid_parameters, "the corollary needs a positive even n");
        const IntervalSystem e = quadratic_inverse_image(a, b);
        std::vector<PolePoint> poles(static_cast<std::size_t>(2 * n), PolePoint::infinity());
        const ExtremalFraction ef = build_extremal(e, PoleConfiguration::from_poles(poles));
        const double markov = ef.markov_constant();
        const double closed_form = static_cast<double>(n) * n * b / (b * b - a * a);
        // S_n(x) = T_{n/2}((2x^2 - b^2 - a^2)/(b^2 - a^2)) must agree with the
        // built fraction on E.
        double sn_err = 0.0;
        for (int k = 0; k < e.band_count(); ++k) {
            auto [lo, hi] = e.band(k);
            for (int i = 0; i <= 400; ++i) {
                const double x = lo + (hi - lo) * i / 400.0;
                const double u = (2.0 * x * x - b * b - a * a) / (b * b - a * a);
                const double sn =
                    std::cos((n / 2) * std::acos(std::min(1.0, std::max(-1.0, u))));
                sn_err = std::max(sn_err, std::fabs(ef.m_eval(x) - sn));
            }
        }
        const double rel_err = std::fabs(markov - closed_form) / closed_form;
        nlohmann::json j;
        j["a"] = a;
        j["b"] = b;
        j["n"] = n;
        j["markov_constant"] = markov;
        j["closed_form_constant"] = closed_form;
        j["constant_rel_error"] = rel_err;
        j["sn_max_error"] = sn_err;
        const bool pass = rel_err <= 1e-8 && sn_err <= 1e-8;
        j["pass"] = pass;
        write_output(out, j.dump(2) + "\n");
        return pass ? 0 : 1;
    }
    raise(errc::invalid_parameters, "unknown reproduce target '" + what + "'");
}

int cmd_scan(double from, double to, int steps, const std::string& out) {
    if (!(from > 0.0 && to < 1.0 && from < to) || steps < 2)
        raise(errc::invalid_parameters, "scan needs 0 < from < to < 1 and steps >= 2");
    std::ostringstream csv;
    csv << "a,t3_prime_abs,m4_prime_abs,margin\n";
    for (int i = 0; i < steps; ++i) {
        const double a = from + (to - from) * i / (steps - 1);
        const double t3 = std::fabs(12.0 * a * a - 3.0);
        const double m4 = 16.0 * a / (1.0 - a * a);
        csv << fmt(a) << "," << fmt(t3) << "," << fmt(m4) << "," << fmt(t3 - m4) << "\n";
    }
    write_output(out, csv.str());
    return 0;
}

}  // namespace

int run(const std::vector<std::string>& args) {
    CLI::App app{"Extremal Chebyshev-Markov fractions on several intervals"};
    app.require_subcommand(1);

    double default_tol = 1e-7;
    if (const char* env = std::getenv("CHEBMARK_DEFAULT_TOL")) {
        char* end = nullptr;
        const double v = std::strtod(env, &end);
        if (end != env && v > 0.0) default_tol = v;
    }

    std::string intervals = "-1,1";
    std::string pole = "inf";
    std::string poles;
    std::string out;
    int grid = 256;
    int verify_grid = 2001;
    int samples = 200;
    std::uint64_t seed = 1;
    double epsilon = 0.05;
    double tol = default_tol;
    std::vector<std::string> fixture_filter;
    bool exploratory = false;
    std::string what;
    double a = 0.5, b = 1.0;
    int n = 4;
    double from = 0.05, to = 0.4;
    int steps = 36;

    auto* density = app.add_subcommand("density", "harmonic-measure density as CSV");
    density->add_option("--intervals", intervals)->required();
    density->add_option("--pole", pole);
    density->add_option("--grid", grid);
    density->add_option("--out", out);

    auto* measure = app.add_subcommand("measure", "band measures (CSV) or full quantization (JSON)");
    measure->add_option("--intervals", intervals)->required();
    measure->add_option("--pole", pole);
    measure->add_option("--poles", poles);
    measure->add_option("--out", out);

    auto* extremal = app.add_subcommand("extremal", "extremal fraction summary as JSON");
    extremal->add_option("--intervals", intervals)->required();
    extremal->add_option("--poles", poles)->required();
    extremal->add_option("--out", out);

    auto* bound = app.add_subcommand("bound", "sharp derivative bound profile as CSV");
    bound->add_option("--intervals", intervals)->required();
    bound->add_option("--poles", poles)->required();
    bound->add_option("--grid", grid);
    bound->add_option("--out", out);

    auto* verify = app.add_subcommand("verify", "run the inequality suites over sampled members");
    verify->add_option("--samples", samples);
    verify->add_option("--seed", seed);
    verify->add_option("--epsilon", epsilon);
    verify->add_option("--grid", verify_grid);
    verify->add_option("--tol", tol);
    verify->add_option("--fixture", fixture_filter);
    verify->add_flag("--exploratory", exploratory);
    verify->add_option("--out", out);

    auto* reproduce = app.add_subcommand("reproduce", "classical constant and counterexample reproductions as JSON");
    reproduce->add_option("target", what)->required()->check(CLI::IsMember({"m4", "rusak", "corollary"}));
    reproduce->add_option("--a", a);
    reproduce->add_option("--b", b);
    reproduce->add_option("--n", n);
    reproduce->add_option("--out", out);

    auto* scan = app.add_subcommand("scan", "crossover sweep of the m4 remark as CSV");
    scan->add_option("--from", from);
    scan->add_option("--to", to);
    scan->add_option("--steps", steps);
    scan->add_option("--out", out);

    try {
        std::vector<std::string> reversed(args.rbegin(), args.rend());
        app.parse(reversed);
    } catch (const CLI::ParseError& err) {
        if (err.get_exit_code() == 0) {
            // --help and friends
            std::cout << app.help();
            return 0;
        }
        std::cerr << "error: " << err.what() << "\n";
        return 2;
    }

    try {
        if (density->parsed()) return cmd_density(intervals, pole, grid, out);
        if (measure->parsed()) return cmd_measure(intervals, pole, poles, out);
        if (extremal->parsed()) return cmd_extremal(intervals, poles, out);
        if (bound->parsed()) return cmd_bound(intervals, poles, grid, out);
        if (verify->parsed())
            return cmd_verify(samples, seed, epsilon, verify_grid, tol, fixture_filter,
                              exploratory, out);
        if (reproduce->parsed()) return cmd_reproduce(what, a, b, n, out);
        if (scan->parsed()) return cmd_scan(from, to, steps, out);
    } catch (const Error& err) {
        std::cerr << "error: " << err.what() << "\n";
        return err.code() == errc::quantization_violated ? 3 : 2;
    } catch (const std::exception& err) {
        std::cerr << "error: " << err.what() << "\n";
        return 2;
    }
    return 2;
}

}  // namespace chebmark::cli
