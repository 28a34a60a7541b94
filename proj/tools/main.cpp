#include <CLI11.hpp>
#include <json.hpp>

#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <ctime>
#include <fstream>
#include <iostream>
#include <numbers>
#include <sstream>
#include <thread>
#include <vector>

#include "verify.hpp"
#include "wulff/closedform.hpp"
#include "wulff/gauge.hpp"
#include "wulff/grid2d.hpp"
#include "wulff/saturation.hpp"

using nlohmann::json;
using namespace wulff;

namespace {

constexpr const char* kSchemaVersion = "1";

// exit-code contract: 0 ok, 1 verify failure, 2 config error, 3 solver
// failure, 4 oracle mismatch
enum ExitCode { kOk = 0, kVerifyFail = 1, kConfigError = 2, kSolverFail = 3, kOracleFail = 4 };

int thread_cap() {
    unsigned hw = std::thread::hardware_concurrency();
    if (hw == 0) hw = 1;
    if (const char* env = std::getenv("WULFF_SPECTRA_THREADS")) {
        const long v = std::strtol(env, nullptr, 10);
        if (v >= 1) return static_cast<int>(std::min<long>(v, hw));
    }
    return static_cast<int>(hw);
}

// deterministic map over indices: results land by position regardless of
// the thread schedule
template <typename F>
void parallel_for(int count, F&& body) {
    const int threads = std::min(thread_cap(), count);
    if (threads <= 1) {
        for (int i = 0; i < count; ++i) body(i);
        return;
    }
    std::vector<std::thread> pool;
    pool.reserve(threads);
    for (int t = 0; t < threads; ++t)
        pool.emplace_back([&, t] {
            for (int i = t; i < count; i += threads) body(i);
        });
    for (auto& th : pool) th.join();
}

std::string fnv1a_hash(const std::string& s) {
    std::uint64_t h = 1469598103934665603ull;
    for (unsigned char c : s) {
        h ^= c;
        h *= 1099511628211ull;
    }
    std::ostringstream os;
    os << std::hex << h;
    return os.str();
}

std::string timestamp() {
    const auto now = std::chrono::system_clock::now();
    const std::time_t t = std::chrono::system_clock::to_time_t(now);
    char buf[32];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", std::gmtime(&t));
    return buf;
}

std::string fmt(double v) {
    std::ostringstream os;
    os.precision(12);
    os << v;
    return os.str();
}

struct GlobalOpts {
    int n = 2;
    std::string gauge = "euclidean";
    std::string out;
    double tol = 0;  // 0 = per-command default
    std::uint64_t seed = 0;
    bool as_json = false;
};

json meta_record(const std::string& command, const json& config) {
    json rec;
    rec["schema_version"] = kSchemaVersion;
    rec["command"] = command;
    rec["config"] = config;
    rec["config_hash"] = fnv1a_hash(command + config.dump());
    rec["generated_at"] = timestamp();
    return rec;
}

void emit(const GlobalOpts& g, const json& doc) {
    if (!g.out.empty()) {
        std::ofstream f(g.out);
        f << doc.dump(2) << '\n';
    }
    std::cout << doc.dump(2) << '\n';
}

double resolve_volume(const std::string& vol, double kappa) {
    if (vol == "auto") return kappa;
    const double v = std::stod(vol);
    if (!(v > 0)) throw CLI::ValidationError("--volume must be positive or 'auto'");
    return v;
}

int cmd_curve(const GlobalOpts& g, const std::string& volume, double amin, double amax,
              int steps) {
    const auto gauge = Gauge::parse(g.gauge, g.n);
    const double kappa = gauge.wulff_measure().kappa_n;
    const double V = resolve_volume(volume, kappa);

    std::vector<double> alphas(steps);
    for (int k = 0; k < steps; ++k)
        alphas[k] = steps == 1 ? amin : amin + (amax - amin) * k / (steps - 1.0);

    const double alpha_c = closedform::critical_alpha(g.n, kappa);
    std::vector<saturation::CurveSample> samples(alphas.size());
    std::atomic<bool> failed{false};
    parallel_for(static_cast<int>(alphas.size()), [&](int i) {
        samples[i].alpha = alphas[i];
        try {
            auto [split, lam] = saturation::min_over_pairs(g.n, kappa, V, alphas[i]);
            samples[i].s_opt = split.s;
            samples[i].lambda_min = lam;
            samples[i].regime =
                closedform::nonlocal_pair_eigenvalue(
                    saturation::pair_from_split(g.n, kappa, V, split.s), alphas[i])
                    .regime;
        } catch (const std::exception& e) {
            samples[i].ok = false;
            samples[i].error = e.what();
            failed = true;
        }
    });

    const std::string out = g.out.empty() ? "curve.csv" : g.out;
    {
        std::ofstream csv(out);
        if (!csv) throw std::runtime_error("cannot write " + out);
        csv << "alpha,lambda_min,split_s,regime\n";
        for (const auto& s : samples) {
            if (!s.ok) {
                csv << fmt(s.alpha) << ",nan,nan,failed\n";
                continue;
            }
            csv << fmt(s.alpha) << ',' << fmt(s.lambda_min) << ',' << fmt(s.s_opt) << ','
                << closedform::to_string(s.regime) << '\n';
        }
    }

    json config{{"n", g.n},          {"gauge", g.gauge},  {"volume", V},
                {"alpha_min", amin}, {"alpha_max", amax}, {"steps", steps},
                {"seed", g.seed}};
    json rec = meta_record("curve", config);
    rec["results"] = {{"kappa_n", kappa},
                      {"alpha_c", alpha_c},
                      {"critical_alpha_scaled", alpha_c / std::pow(V, 1.0 + 2.0 / g.n)},
                      {"rows", samples.size()},
                      {"csv", out}};
    std::ofstream meta(out + ".meta.json");
    meta << rec.dump(2) << '\n';
    std::cout << rec.dump(2) << '\n';
    return failed ? kSolverFail : kOk;
}

int cmd_critical_alpha(const GlobalOpts& g) {
    const auto gauge = Gauge::parse(g.gauge, g.n);
    const double kappa = gauge.wulff_measure().kappa_n;
    const double ac = closedform::critical_alpha(g.n, kappa);
    const double oracle = closedform::critical_alpha_limit_oracle(g.n, kappa);
    const double rel = std::fabs(ac - oracle) / std::fabs(ac);

    json rec = meta_record("critical-alpha", json{{"n", g.n}, {"gauge", g.gauge}});
    rec["results"] = {{"n", g.n},
                      {"kappa_n", kappa},
                      {"alpha_c", ac},
                      {"oracle_alpha_c", oracle},
                      {"rel_diff", rel}};
    emit(g, rec);
    return rel <= 1e-6 ? kOk : kOracleFail;
}

int cmd_twisted(const GlobalOpts& g, double r1, double r2) {
    const auto res = closedform::twisted_pair_eigenvalue(g.n, r1, r2);
    json rec =
        meta_record("twisted", json{{"n", g.n}, {"gauge", g.gauge}, {"r1", r1}, {"r2", r2}});
    json out{{"lambda", res.lambda},
             {"regime", closedform::to_string(res.regime)},
             {"theta_star", closedform::theta_star(g.n)},
             {"threshold_ratio", closedform::threshold_ratio(g.n)},
             {"zero_average", res.zero_average}};
    if (res.c1) out["c1"] = *res.c1;
    if (res.c2) out["c2"] = *res.c2;
    if (res.c) out["c"] = *res.c;
    rec["results"] = out;
    if (g.as_json) {
        emit(g, rec);
    } else {
        std::cout << "lambda_T = " << fmt(res.lambda) << "  regime "
                  << closedform::to_string(res.regime) << '\n';
        if (!g.out.empty()) {
            std::ofstream f(g.out);
            f << rec.dump(2) << '\n';
        }
    }
    return kOk;
}

int cmd_eig_pair(const GlobalOpts& g, double r1, double r2, double alpha) {
    const auto gauge = Gauge::parse(g.gauge, g.n);
    const double kappa = gauge.wulff_measure().kappa_n;
    const auto res =
        closedform::nonlocal_pair_eigenvalue(closedform::WulffPair(g.n, r1, r2, kappa), alpha);
    json rec = meta_record(
        "eig-pair",
        json{{"n", g.n}, {"gauge", g.gauge}, {"r1", r1}, {"r2", r2}, {"alpha", alpha}});
    json out{{"lambda", res.lambda},
             {"regime", closedform::to_string(res.regime)},
             {"kappa_n", kappa},
             {"zero_average", res.zero_average}};
    if (res.c1) out["c1"] = *res.c1;
    if (res.c2) out["c2"] = *res.c2;
    if (res.c) out["c"] = *res.c;
    rec["results"] = out;
    if (g.as_json) {
        emit(g, rec);
    } else {
        std::cout << "lambda = " << fmt(res.lambda) << "  regime "
                  << closedform::to_string(res.regime) << '\n';
        if (!g.out.empty()) {
            std::ofstream f(g.out);
            f << rec.dump(2) << '\n';
        }
    }
    return kOk;
}

int cmd_grid2d(const GlobalOpts& g, const std::string& domain, double area, double h,
               double amin, double amax, int steps, const std::string& efn_out) {
    const auto gauge = Gauge::parse(g.gauge, 2);
    variational::CartesianGrid2D grid;
    if (domain == "disk")
        grid = variational::make_disk_grid(area, h);
    else if (domain == "square")
        grid = variational::make_square_grid(area, h);
    else if (domain.rfind("file:", 0) == 0)
        grid = variational::load_mask(domain.substr(5));
    else
        throw CLI::ValidationError("--domain must be disk, square, or file:<path>");

    std::vector<double> alphas(steps);
    for (int k = 0; k < steps; ++k)
        alphas[k] = steps == 1 ? amin : amin + (amax - amin) * k / (steps - 1.0);

    variational::MinimizeOptions mopts;
    mopts.seed = g.seed;
    if (g.tol > 0) mopts.grad_tol = g.tol;

    bool all_converged = true;
    std::vector<variational::MinimizeResult> results;
    results.reserve(alphas.size());
    for (double alpha : alphas) {
        results.push_back(variational::minimize_rayleigh(grid, gauge, alpha, mopts));
        all_converged = all_converged && results.back().converged;
    }

    const std::string out = g.out.empty() ? "grid2d.csv" : g.out;
    {
        std::ofstream csv(out);
        if (!csv) throw std::runtime_error("cannot write " + out);
        csv << "alpha,lambda,converged\n";
        for (size_t k = 0; k < alphas.size(); ++k)
            csv << fmt(alphas[k]) << ',' << fmt(results[k].lambda) << ','
                << (results[k].converged ? 1 : 0) << '\n';
    }
    if (!efn_out.empty()) variational::write_csv(results.back().u, efn_out);

    json config{{"n", 2},            {"gauge", g.gauge}, {"domain", domain},
                {"area", area},      {"h", h},           {"alpha_min", amin},
                {"alpha_max", amax}, {"steps", steps},   {"seed", g.seed}};
    json rec = meta_record("grid2d", config);
    rec["results"] = {{"mask_nodes", grid.count()},
                      {"mask_area", grid.area()},
                      {"lambda_last", results.back().lambda},
                      {"csv", out}};
    std::ofstream meta(out + ".meta.json");
    meta << rec.dump(2) << '\n';
    std::cout << rec.dump(2) << '\n';
    return all_converged ? kOk : kSolverFail;
}

int cmd_verify(const GlobalOpts& g, const std::vector<std::string>& suites,
               double perturb_kappa) {
    const auto results = wulffcli::run_verify_suites(suites, 1.0 + perturb_kappa, g.seed);
    bool all = true;
    std::string first_fail;
    for (const auto& r : results) {
        std::cout << (r.pass ? "PASS" : "FAIL") << "  " << r.name << ": " << r.detail << '\n';
        if (!r.pass && all) {
            all = false;
            first_fail = r.name;
        }
    }
    if (!all) std::cout << "verify failed in suite: " << first_fail << '\n';
    return all ? kOk : kVerifyFail;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{
        "wulff-spectra: first eigenvalue of the anisotropic Laplacian with a nonlocal "
        "average coupling, on Wulff-set unions and 2-D grids"};
    app.require_subcommand(1);

    GlobalOpts g;
    app.add_option("--n", g.n, "ambient dimension (>= 2)")->capture_default_str();
    app.add_option("--gauge", g.gauge,
                   "gauge spec: euclidean | p:<float> | ellipse:<a11>,<a12>,<a22>")
        ->capture_default_str();
    app.add_option("--out", g.out, "output file (CSV for curve/grid2d, JSON otherwise)");
    app.add_option("--tol", g.tol, "tolerance override for iterative solvers");
    app.add_option("--seed", g.seed, "seed for randomized restarts")->capture_default_str();
    app.add_flag("--json", g.as_json, "print machine-readable JSON");

    auto* curve = app.add_subcommand("curve", "minimum-eigenvalue-vs-alpha saturation curve");
    curve->fallthrough();
    std::string volume = "auto";
    double amin = 0.0, amax = 60.0;
    int steps = 120;
    curve->add_option("--volume", volume, "domain measure, or 'auto' for kappa_n")
        ->capture_default_str();
    curve->add_option("--alpha-min", amin, "sweep start")->capture_default_str();
    curve->add_option("--alpha-max", amax, "sweep end")->capture_default_str();
    curve->add_option("--steps", steps, "sweep points")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();

    auto* crit = app.add_subcommand("critical-alpha",
                                    "critical weight: displayed formula vs the limit oracle");
    crit->fallthrough();

    auto* twisted = app.add_subcommand("twisted", "twisted eigenvalue of a Wulff pair");
    twisted->fallthrough();
    double r1 = 0, r2 = 1, alpha = 0;
    twisted->add_option("--r1", r1, "smaller radius")->required();
    twisted->add_option("--r2", r2, "larger radius")->required();

    auto* eig = app.add_subcommand("eig-pair", "nonlocal eigenvalue of a Wulff pair");
    eig->fallthrough();
    eig->add_option("--r1", r1, "smaller radius")->required();
    eig->add_option("--r2", r2, "larger radius")->required();
    eig->add_option("--alpha", alpha, "nonlocal weight")->required();

    auto* grid = app.add_subcommand("grid2d", "2-D variational solve on a mask");
    grid->fallthrough();
    grid->set_help_flag("--help", "print help");  // frees -h for the spacing option
    std::string domain = "disk", efn_out;
    double area = std::numbers::pi, h = 1.0 / 64;
    double gamin = 0.0, gamax = 0.0;
    int gsteps = 1;
    grid->add_option("--domain", domain, "disk | square | file:<path>")->capture_default_str();
    grid->add_option("--area", area, "target measure")->capture_default_str();
    grid->add_option("--h", h, "grid spacing")->capture_default_str();
    grid->add_option("--alpha", gamin, "single weight (or sweep start)")->capture_default_str();
    grid->add_option("--alpha-max", gamax, "sweep end");
    grid->add_option("--steps", gsteps, "sweep points")->check(CLI::PositiveNumber);
    grid->add_option("--eigenfunction-out", efn_out, "CSV for the final eigenfunction");

    auto* verify = app.add_subcommand("verify", "run the library property suites");
    verify->fallthrough();
    std::vector<std::string> suites;
    double perturb_kappa = 0.0;
    verify->add_option("--suite", suites, "run only the named suites");
    verify->add_option("--perturb-kappa", perturb_kappa,
                       "fault-injection hook: relative kappa skew on one side of the "
                       "round-trip/scaling identities");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kConfigError;
    }

    try {
        if (g.n < 2) throw CLI::ValidationError("--n must be >= 2");
        if (curve->parsed()) return cmd_curve(g, volume, amin, amax, steps);
        if (crit->parsed()) return cmd_critical_alpha(g);
        if (twisted->parsed()) return cmd_twisted(g, r1, r2);
        if (eig->parsed()) return cmd_eig_pair(g, r1, r2, alpha);
        if (grid->parsed())
            return cmd_grid2d(g, domain, area, h, gamin, gsteps == 1 ? gamin : gamax, gsteps,
                              efn_out);
        if (verify->parsed()) return cmd_verify(g, suites, perturb_kappa);
    } catch (const CLI::ValidationError& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return kConfigError;
    } catch (const std::invalid_argument& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return kConfigError;
    } catch (const std::exception& e) {
        std::cerr << "solver error: " << e.what() << '\n';
        return kSolverFail;
    }
    return kConfigError;
}
