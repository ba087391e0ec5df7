// Acceptance suite: runs the battery of closed-form reproductions and
// property checks at fixed tolerances, one pass/fail line per criterion.
// Exit code 0 only when every criterion passes.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <numbers>
#include <string>
#include <vector>

#include "chebmark/cli.hpp"
#include "chebmark/detail/splitmix64.hpp"
#include "chebmark/extremal_fraction.hpp"
#include "chebmark/harmonic_measure.hpp"
#include "chebmark/rational_class.hpp"
#include "chebmark/verify.hpp"

using namespace chebmark;

namespace {

constexpr double kPi = std::numbers::pi;

int g_failures = 0;

void report(int index, const std::string& name, bool pass, const std::string& detail) {
    std::printf("%s criterion %2d: %s (%s)\n", pass ? "PASS" : "FAIL", index, name.c_str(),
                detail.c_str());
    std::fflush(stdout);
    if (!pass) ++g_failures;
}

std::string fmt(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.3g", v);
    return buf;
}

PoleConfiguration all_infinity(int n) {
    return PoleConfiguration::from_poles(
        std::vector<PolePoint>(static_cast<std::size_t>(2 * n), PolePoint::infinity()));
}

PoleConfiguration symmetric_real_pairs(int n, double xi) {
    std::vector<PolePoint> poles;
    for (int i = 0; i < n; ++i) {
        poles.push_back(PolePoint::real(xi));
        poles.push_back(PolePoint::real(-xi));
    }
    return PoleConfiguration::from_poles(poles);
}

// 1. Single-interval pole density against the closed form.
void criterion_1() {
    const IntervalSystem one = make_interval_system({-1.0, 1.0});
    double worst = 0.0;
    for (double xi : {2.0, -2.0, 5.0, -5.0}) {
        const DensityEvaluator d = pole_density(one, PolePoint::real(xi));
        std::vector<double> xs(1001), vals(1001);
        for (int i = 0; i < 1001; ++i) xs[static_cast<std::size_t>(i)] = -0.99 + 1.98 * i / 1000.0;
        d.eval_many(xs, vals);
        for (int i = 0; i < 1001; ++i) {
            const double x = xs[static_cast<std::size_t>(i)];
            const double want = std::sqrt(xi * xi - 1.0) /
                                (kPi * std::fabs(xi - x) * std::sqrt(1.0 - x * x));
            worst = std::max(worst, std::fabs(vals[static_cast<std::size_t>(i)] - want));
        }
    }
    report(1, "single-interval density closed form", worst <= 1e-8,
           "max err " + fmt(worst) + ", tol 1e-8");
}

// 2. Two-interval equilibrium density against its closed form.
void criterion_2() {
    const IntervalSystem e = make_interval_system({-1.0, -0.5, 0.5, 1.0});
    const DensityEvaluator d = pole_density(e, PolePoint::infinity());
    double worst = 0.0;
    for (int k = 0; k < 2; ++k) {
        auto [lo, hi] = e.band(k);
        for (int i = 0; i <= 500; ++i) {
            const double x = lo + 0.002 * (hi - lo) + (hi - lo) * 0.996 * i / 500.0;
            const double want =
                std::fabs(x) / (kPi * std::sqrt((1.0 - x * x) * (x * x - 0.25)));
            worst = std::max(worst, std::fabs(d(x) - want));
        }
    }
    report(2, "two-interval equilibrium density", worst <= 1e-8,
           "max err " + fmt(worst) + ", tol 1e-8");
}

// 3. Random systems: unit mass and nonnegative density.
void criterion_3() {
    detail::SplitMix64 rng(2024);
    double worst_mass = 0.0;
    double worst_neg = 0.0;
    for (int trial = 0; trial < 20; ++trial) {
        const int l = 1 + static_cast<int>(rng.uniform() * 4);
        std::vector<double> endpoints(static_cast<std::size_t>(2 * l));
        bool ok = false;
        while (!ok) {
            endpoints.front() = -1.0;
            endpoints.back() = 1.0;
            for (std::size_t i = 1; i + 1 < endpoints.size(); ++i)
                endpoints[i] = -0.95 + 1.9 * rng.uniform();
            std::sort(endpoints.begin() + 1, endpoints.end() - 1);
            ok = true;
            for (std::size_t i = 1; i < endpoints.size(); ++i)
                if (endpoints[i] - endpoints[i - 1] < 0.05) ok = false;
        }
        const IntervalSystem e = make_interval_system(endpoints);
        const double mag = 1.1 + 8.9 * rng.uniform();
        const PolePoint xi = PolePoint::real(rng.uniform() < 0.5 ? mag : -mag);
        const DensityEvaluator d = pole_density(e, xi);
        double mass = 0.0;
        for (int k = 0; k < l; ++k) mass += d.band_integral(k);
        worst_mass = std::max(worst_mass, std::fabs(mass - 1.0));
        for (int k = 0; k < l; ++k) {
            auto [lo, hi] = e.band(k);
            std::vector<double> xs(101), vals(101);
            for (int i = 0; i <= 100; ++i)
                xs[static_cast<std::size_t>(i)] = lo + (hi - lo) * (i + 0.5) / 101.0;
            d.eval_many(xs, vals);
            for (double v : vals) worst_neg = std::min(worst_neg, v);
        }
    }
    report(3, "random systems: mass and positivity",
           worst_mass <= 1e-8 && worst_neg >= -1e-10,
           "max |mass-1| " + fmt(worst_mass) + ", min density " + fmt(worst_neg));
}

// 4. Finite-difference Laplace oracle battery.
void criterion_4() {
    const auto start = std::chrono::steady_clock::now();
    struct Case {
        std::vector<double> endpoints;
        PolePoint pole;
        int band;
    };
    const std::vector<Case> battery = {
        {{-1.0, 1.0}, PolePoint::real(2.0), 0},
        {{-1.0, -0.5, 0.5, 1.0}, PolePoint::real(3.0), 0},
        {{-1.0, -0.5, 0.5, 1.0}, PolePoint::complex_point(1.0, 1.0), 0},
        {{-1.0, -0.25, 0.25, 1.0}, PolePoint::real(-2.0), 1},
        {{-1.0, -0.5, 0.0, 0.75}, PolePoint::real(2.5), 0},
        {{-0.75, -0.25, 0.25, 0.75}, PolePoint::real(1.5), 1},
    };
    double worst = 0.0;
    bool pass = true;
    for (const auto& c : battery) {
        const IntervalSystem e = make_interval_system(c.endpoints);
        const BandMeasureVector bm = band_measures(e, c.pole);
        const double fd = laplace_fd_oracle(e, c.pole, c.band, 1.0 / 32);
        const double err = std::fabs(fd - bm.values[static_cast<std::size_t>(c.band)]);
        worst = std::max(worst, err);
        if (err > 2e-2) pass = false;
    }
    const double seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    pass = pass && seconds <= 30.0;
    report(4, "laplace oracle battery", pass,
           "max err " + fmt(worst) + ", tol 2e-2, " + fmt(seconds) + " s");
}

std::vector<std::pair<std::string, ExtremalFraction>> gamma_fixtures() {
    std::vector<std::pair<std::string, ExtremalFraction>> out;
    const IntervalSystem one = make_interval_system({-1.0, 1.0});
    out.emplace_back("l1-inf-n4", build_extremal(one, all_infinity(4)));
    const IntervalSystem two = make_interval_system({-1.0, -0.5, 0.5, 1.0});
    for (int n : {2, 4, 6})
        out.emplace_back("l2-inf-n" + std::to_string(n), build_extremal(two, all_infinity(n)));
    for (int n : {2, 4, 6})
        out.emplace_back("l2-pm2-n" + std::to_string(n),
                         build_extremal(two, symmetric_real_pairs(n, 2.0)));
    return out;
}

// 5. Phase structure: total mass n*pi, per-band increments q_k*pi, zero counts.
void criterion_5(const std::vector<std::pair<std::string, ExtremalFraction>>& fixtures) {
    double worst = 0.0;
    bool counts_ok = true;
    for (const auto& [name, ef] : fixtures) {
        const IntervalSystem& e = ef.system();
        const int n = ef.poles().n();
        worst = std::max(worst, std::fabs(ef.gamma(e.endpoints().back()) - n * kPi));
        std::size_t zi = 0;
        for (int k = 0; k < e.band_count(); ++k) {
            auto [lo, hi] = e.band(k);
            const int q = ef.quantization().q[static_cast<std::size_t>(k)];
            const double inc = ef.gamma(hi) - ef.gamma(lo);
            worst = std::max(worst, std::fabs(inc - q * kPi));
            int in_band = 0;
            for (double z : ef.zeros())
                if (z >= lo && z <= hi) ++in_band;
            if (in_band != q) counts_ok = false;
            zi += static_cast<std::size_t>(q);
        }
        if (zi != ef.zeros().size()) counts_ok = false;
    }
    report(5, "gamma structure across fixtures", worst <= 1e-8 && counts_ok,
           "max phase err " + fmt(worst) + ", zero counts " + (counts_ok ? "exact" : "WRONG"));
}

// 6. m_4 closed forms on the symmetric fixture.
void criterion_6() {
    const double a = 0.5;
    const IntervalSystem e = make_interval_system({-1.0, -a, a, 1.0});
    const ExtremalFraction ef = build_extremal(e, all_infinity(4));
    double worst_s = 0.0, worst_r = 0.0;
    for (int k = 0; k < 2; ++k) {
        auto [lo, hi] = e.band(k);
        for (int i = 0; i <= 500; ++i) {
            const double x = lo + (hi - lo) * i / 500.0;
            const double u = (2.0 * x * x - 1.0 - a * a) / (1.0 - a * a);
            const double s4 = 2.0 * u * u - 1.0;
            const double m4 = (8.0 * x * x * x * x - 8.0 * x * x * (1.0 + a * a) + 1.0 +
                               6.0 * a * a + a * a * a * a) /
                              ((1.0 - a * a) * (1.0 - a * a));
            worst_s = std::max(worst_s, std::fabs(ef.m_eval(x) - s4));
            worst_r = std::max(worst_r, std::fabs(ef.m_eval(x) - m4));
        }
    }
    const double deriv_err = std::fabs(ef.m_prime(a) - (-16.0 * a / (1.0 - a * a)));
    report(6, "m4 closed-form match", worst_s <= 1e-8 && worst_r <= 1e-8 && deriv_err <= 1e-8,
           "S_n err " + fmt(worst_s) + ", remark err " + fmt(worst_r) + ", m4'(a) err " +
               fmt(deriv_err));
}

// 7. Markov constants.
void criterion_7() {
    const ExtremalFraction sym =
        build_extremal(make_interval_system({-1.0, -0.5, 0.5, 1.0}), all_infinity(4));
    const double want = 16.0 * 1.0 / (1.0 - 0.25);
    const double rel = std::fabs(sym.markov_constant() - want) / want;
    const ExtremalFraction classical =
        build_extremal(make_interval_system({-1.0, 1.0}), all_infinity(4));
    const double classical_err = std::fabs(classical.markov_constant() - 16.0);
    report(7, "markov constants", rel <= 1e-8 && classical_err <= 1e-8,
           "corollary rel err " + fmt(rel) + ", classical err " + fmt(classical_err));
}

// 8. Sharpness: the extremal fraction attains its own bound.
void criterion_8() {
    bool pass = true;
    double worst = 0.0;
    for (const auto& fixture : default_fixtures()) {
        const ExtremalFraction ef = build_extremal(fixture.system, fixture.poles);
        const RationalFraction m{ef.numerator(), ef.poles()};
        const VerificationReport rep = check_pointwise(m, ef, 2001, 1e-8);
        worst = std::max(worst, std::fabs(rep.max_violation));
        if (!rep.pass || std::fabs(rep.max_violation) > 1e-8) pass = false;
        for (double z : ef.zeros()) {
            const double eq = std::fabs(std::fabs(r_prime(m, z)) - ef.bound_profile(z));
            worst = std::max(worst, eq);
            if (eq > 1e-8) pass = false;
        }
        // sampled points in the |m'| region
        const IntervalSystem& e = ef.system();
        std::size_t zi = 0;
        for (int k = 0; k < e.band_count(); ++k) {
            auto [lo, hi] = e.band(k);
            const int q = ef.quantization().q[static_cast<std::size_t>(k)];
            const double zlo = ef.zeros()[zi];
            const double zhi = ef.zeros()[zi + static_cast<std::size_t>(q) - 1];
            zi += static_cast<std::size_t>(q);
            for (int i = 0; i <= 50; ++i) {
                for (double x : {lo + (zlo - lo) * i / 50.0, zhi + (hi - zhi) * i / 50.0}) {
                    const double eq = std::fabs(std::fabs(r_prime(m, x)) - ef.bound_profile(x));
                    worst = std::max(worst, eq);
                    if (eq > 1e-8) pass = false;
                }
            }
        }
    }
    report(8, "sharpness of the pointwise bound", pass,
           "max |equality defect| " + fmt(worst) + ", tol 1e-8");
}

// 9. Fuzzing suite: 200 samples per fixture, zero violations.
void criterion_9() {
    const auto start = std::chrono::steady_clock::now();
    BatchConfig config;
    config.fixtures = default_fixtures();
    config.samples = 200;
    config.seed = 1;
    config.epsilon = 0.05;
    config.grid = 2001;
    const std::vector<VerificationReport> reports = batch_verify(config);
    bool pass = true;
    double worst = -1e300;
    for (const auto& rep : reports) {
        if (!rep.pass) pass = false;
        if (!rep.error.empty()) pass = false;
        if (rep.claim != "pointwise-extremal") worst = std::max(worst, rep.max_violation);
    }
    const double seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    report(9, "fuzzing suite (600 star samples)", pass,
           "max sampled violation " + fmt(worst) + ", " + fmt(seconds) + " s");
}

// 10. T_3 vs m_4 remark.
void criterion_10() {
    const CounterexampleReport rep = reproduce_remark_m4({0.1});
    const double t3 = rep.entries[0].t3_prime_abs;
    const double m4 = rep.entries[0].m4_prime_abs;
    const bool values_ok = std::fabs(t3 - 2.88) <= 1e-12 &&
                           std::fabs(m4 - 1.6161616161616161) <= 1e-12 && t3 > m4;
    const bool bracket_ok = rep.crossover_lo > 0.16 && rep.crossover_hi < 0.17;
    report(10, "remark counterexample (T3 vs m4)", values_ok && bracket_ok && rep.pass,
           "T3' " + fmt(t3) + " > m4' " + fmt(m4) + ", crossover (" + fmt(rep.crossover_lo) +
               ", " + fmt(rep.crossover_hi) + ")");
}

// 11. Rusak remark.
void criterion_11() {
    const CounterexampleReport rep = reproduce_rusak_remark();
    const bool values_ok = std::fabs(rep.r_prime_at_1 - 639.0 / 10201.0) <= 1e-12 &&
                           std::fabs(rep.m2_prime_at_1 - 404.0 / 10201.0) <= 1e-12;
    const bool order_ok = rep.r_prime_at_1 > rep.m2_prime_at_1;
    const bool norm_ok = rep.r_norm <= 1.0 + 1e-12;
    report(11, "rusak remark (|xi| <= 1 endpoint failure)",
           values_ok && order_ok && norm_ok && rep.pass,
           "r'(1) " + fmt(rep.r_prime_at_1) + " > m2'(1) " + fmt(rep.m2_prime_at_1) +
               ", ||r|| " + fmt(rep.r_norm));
}

// 12. Identity suite and convexity.
void criterion_12(const std::vector<std::pair<std::string, ExtremalFraction>>& fixtures) {
    double worst_identity = 0.0;
    double worst_convexity = 0.0;
    for (const auto& [name, ef] : fixtures) {
        const IntervalSystem& e = ef.system();
        for (int k = 0; k < e.band_count(); ++k) {
            auto [lo, hi] = e.band(k);
            const int points = 1001 / e.band_count();
            for (int i = 0; i < points; ++i) {
                const double x = lo + (hi - lo) * (i + 0.5) / points;
                const double ratio = ef.m_prime(x) / ef.gamma_prime(x);
                const double identity = ratio * ratio + ef.m_eval(x) * ef.m_eval(x);
                worst_identity = std::max(worst_identity, std::fabs(identity - 1.0));
            }
        }
        const ConvexityReport convexity = ef.convexity_report();
        worst_convexity = std::min(worst_convexity, convexity.min_second_difference);
    }
    report(12, "pell identity and gamma' convexity",
           worst_identity <= 1e-8 && worst_convexity >= -1e-8,
           "max identity defect " + fmt(worst_identity) + ", min second diff " +
               fmt(worst_convexity));
}

// 13. Byte determinism of the verify surface.
void criterion_13() {
    const std::vector<std::string> args = {"verify",  "--samples", "20",   "--seed", "3",
                                           "--epsilon", "0.05",    "--grid", "501"};
    std::string first, second;
    for (std::string* out : {&first, &second}) {
        std::vector<std::string> full = args;
        const std::string path = "acceptance_verify_run.json";
        full.push_back("--out");
        full.push_back(path);
        if (cli::run(full) != 0) {
            report(13, "verify determinism", false, "verify run failed");
            return;
        }
        FILE* f = std::fopen(path.c_str(), "rb");
        char buf[4096];
        std::size_t got;
        while ((got = std::fread(buf, 1, sizeof buf, f)) > 0) out->append(buf, got);
        std::fclose(f);
        std::remove(path.c_str());
    }
    report(13, "verify determinism", !first.empty() && first == second,
           "two runs, " + std::to_string(first.size()) + " bytes each");
}

}  // namespace

int main() {
    const auto start = std::chrono::steady_clock::now();
    criterion_1();
    criterion_2();
    criterion_3();
    criterion_4();
    const auto fixtures = gamma_fixtures();
    criterion_5(fixtures);
    criterion_6();
    criterion_7();
    criterion_8();
    criterion_9();
    criterion_10();
    criterion_11();
    criterion_12(fixtures);
    criterion_13();
    const double seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    std::printf("%d/13 criteria passed in %.1f s\n", 13 - g_failures, seconds);
    return g_failures == 0 ? 0 : 1;
}
