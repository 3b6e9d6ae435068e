// Command-line front end: body/function specs in, radial samples and
// verification reports out.  Exit codes: 0 success (all checks pass),
// 1 check failure, 2 malformed input.

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include "radialbodies/io.hpp"

using namespace radialbodies;

namespace {

json load_json(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw SpecError("cannot open \"" + path + "\"");
    try {
        return json::parse(in);
    } catch (const json::parse_error& e) {
        throw SpecError(path + ": " + e.what());
    }
}

Point parse_point(const std::string& csv) {
    Point p;
    std::stringstream ss(csv);
    std::string tok;
    while (std::getline(ss, tok, ',')) p.push_back(std::stod(tok));
    if (p.empty()) throw SpecError("expected a comma-separated point, got \"" + csv + "\"");
    return p;
}

double parse_p(const std::string& s) {
    if (s == "inf" || s == "+inf" || s == "infinity")
        return std::numeric_limits<double>::infinity();
    return std::stod(s);
}

/// Either a file stream or stdout.
class OutFile {
public:
    explicit OutFile(const std::string& path) {
        if (!path.empty()) {
            file_.open(path);
            if (!file_) throw SpecError("cannot write \"" + path + "\"");
        }
    }
    std::ostream& stream() { return file_.is_open() ? file_ : std::cout; }

private:
    std::ofstream file_;
};

struct CommonArgs {
    std::string body_path, function_path, out_path, p_str = "1";
    std::vector<std::string> p_list;
    std::size_t grid = 64;
    std::uint64_t seed = 0;
    double tol = -1.0;
    std::size_t mc_samples = 0;
};

void add_common(CLI::App* cmd, CommonArgs& a, bool body, bool function) {
    if (body) cmd->add_option("--body", a.body_path, "body spec (JSON file)");
    if (function) cmd->add_option("--function", a.function_path, "function spec (JSON file)");
    cmd->add_option("--p", a.p_str, "moment index p in (-1, inf]");
    cmd->add_option("--p-list", a.p_list, "list of moment indices");
    cmd->add_option("--grid", a.grid, "direction count (>= 8)")->check(CLI::Range(8, 1 << 20));
    cmd->add_option("--seed", a.seed, "random seed");
    cmd->add_option("--tol", a.tol, "tolerance override");
    cmd->add_option("--out", a.out_path, "output path (prefix for multi-file outputs)");
    cmd->add_option("--mc-samples", a.mc_samples, "Monte Carlo sample count");
}

int cmd_covariogram(const CommonArgs& a, const std::string& ray_str) {
    ConvexBody K = body_from_json(load_json(a.body_path));
    OutFile out(a.out_path);
    std::ostream& os = out.stream();
    const int n = K.dimension();
    if (!ray_str.empty()) {
        Point dir = parse_point(ray_str);
        double tau = 1.0 / difference_body_gauge(K, dir);
        os << "index";
        for (int i = 1; i <= n; ++i) os << ",x_" << i;
        os << ",value\n";
        for (std::size_t i = 0; i < a.grid; ++i) {
            double r = 1.1 * tau * static_cast<double>(i) / (a.grid - 1);
            Point x = scaled(dir, r);
            os << i;
            for (double c : x) os << "," << io_detail::num(c);
            os << "," << io_detail::num(covariogram(K, x)) << "\n";
        }
        return 0;
    }
    ConvexBody DK = difference_body(K);
    auto [lo, hi] = DK.bounding_box();
    if (n != 2) throw SpecError("lattice output requires a 2D body; use --ray");
    os << "index,x_1,x_2,value\n";
    std::size_t idx = 0;
    for (std::size_t iy = 0; iy < a.grid; ++iy) {
        for (std::size_t ix = 0; ix < a.grid; ++ix) {
            Point x = {lo[0] + (hi[0] - lo[0]) * ix / (a.grid - 1.0),
                       lo[1] + (hi[1] - lo[1]) * iy / (a.grid - 1.0)};
            os << idx++ << "," << io_detail::num(x[0]) << "," << io_detail::num(x[1]) << ","
               << io_detail::num(covariogram(K, x)) << "\n";
        }
    }
    return 0;
}

int emit_radial(const LogConcaveFn& g, const json& source, const CommonArgs& a,
                const std::optional<ConvexBody>& mc_body,
                QuadratureSpec spec = {}) {
    double p = parse_p(a.p_str);
    if (a.tol > 0.0) spec.legendre_tol = a.tol;
    DirectionGrid grid = make_direction_grid(g.dimension, a.grid, std::nullopt, a.seed);
    StarGauge sg = radial_samples(g, PIndex::of(p), grid, spec);

    json summary = radial_summary_json(source, p, grid, sg.radial_values);
    if (mc_body && a.mc_samples > 0) {
        json checks = json::array();
        std::size_t step = std::max<std::size_t>(grid.directions.size() / 8, 1);
        for (std::size_t i = 0; i < grid.directions.size(); i += step) {
            McEstimate est = radial_mean_direct_mc(*mc_body, PIndex::of(p), grid.directions[i],
                                                   a.mc_samples, Rng::derive_seed(a.seed, i));
            checks.push_back({{"index", i},
                              {"estimate", est.value == 0.0 ? 0.0 : 1.0 / est.value},
                              {"std_error", est.std_error},
                              {"quadrature", sg.radial_values[i]}});
        }
        summary["mc_check"] = std::move(checks);
    }

    if (a.out_path.empty()) {
        write_radial_csv(std::cout, grid, sg.radial_values);
        std::cout << summary.dump(2) << "\n";
    } else {
        std::ofstream csv(a.out_path + ".csv");
        if (!csv) throw SpecError("cannot write \"" + a.out_path + ".csv\"");
        write_radial_csv(csv, grid, sg.radial_values);
        std::ofstream js(a.out_path + ".json");
        if (!js) throw SpecError("cannot write \"" + a.out_path + ".json\"");
        js << summary.dump(2) << "\n";
    }
    return 0;
}

int cmd_ballbody(const CommonArgs& a) {
    json fj = load_json(a.function_path);
    return emit_radial(function_from_json(fj), fj, a, std::nullopt);
}

int cmd_radialmean(const CommonArgs& a, const std::string& request_path) {
    if (!request_path.empty()) {
        json req = load_json(request_path);
        ConvexBody K = body_from_json(io_detail::require(req, "body"));
        CommonArgs b;
        b.p_str = io_detail::num(req.value("p", 1.0));
        b.grid = req.value("grid", std::size_t{64});
        b.seed = req.value("seed", std::uint64_t{0});
        b.out_path = req.value("out", std::string());
        if (req.contains("mc")) {
            b.mc_samples = req["mc"].value("samples", std::size_t{1000000});
            b.seed = req["mc"].value("seed", b.seed);
        }
        QuadratureSpec spec = req.contains("quadrature") ? quadspec_from_json(req["quadrature"])
                                                         : QuadratureSpec{};
        RadialMeanBody body(K);
        return emit_radial(body.covariogram, body_to_json(K), b, K, spec);
    }
    ConvexBody K = body_from_json(load_json(a.body_path));
    RadialMeanBody body(K);
    return emit_radial(body.covariogram, body_to_json(K), a, K);
}

int cmd_limits(const CommonArgs& a) {
    ConvexBody K = body_from_json(load_json(a.body_path));
    RadialMeanBody body(K);
    ConvexBody DK = difference_body(K);
    double vol = volume(K);
    DirectionGrid grid = make_direction_grid(K.dimension(), a.grid, std::nullopt, a.seed);

    std::vector<double> p_high = {5.0, 25.0, 100.0, 200.0};
    std::vector<double> p_low = {-0.9, -0.99, -0.999};
    if (!a.p_list.empty()) {
        p_high.clear();
        p_low.clear();
        for (const auto& s : a.p_list) {
            double p = parse_p(s);
            (p > 0 ? p_high : p_low).push_back(p);
        }
    }

    OutFile out(a.out_path);
    std::ostream& os = out.stream();
    os << "p,limit,max_rel_deviation\n";
    for (double p : p_high) {
        StarGauge sg = radial_samples(body.covariogram, PIndex::of(p), grid);
        double worst = 0.0;
        for (std::size_t i = 0; i < grid.directions.size(); ++i) {
            double rho_dk = 1.0 / minkowski_functional(DK, grid.directions[i]);
            worst = std::max(worst, std::fabs(sg.radial_values[i] - rho_dk) / rho_dk);
        }
        os << io_detail::num(p) << ",difference-body," << io_detail::num(worst) << "\n";
    }
    for (double p : p_low) {
        StarGauge sg = scaled_limit_samples(body, p, grid);
        double worst = 0.0;
        for (std::size_t i = 0; i < grid.directions.size(); ++i) {
            double target = vol / polar_projection_gauge(K, grid.directions[i]);
            worst = std::max(worst, std::fabs(sg.radial_values[i] - target) / target);
        }
        os << io_detail::num(p) << ",polar-projection," << io_detail::num(worst) << "\n";
    }
    return 0;
}

int cmd_verify(const std::string& suite_path, const CommonArgs& a) {
    json suite = load_json(suite_path);
    if (a.seed != 0)
        for (auto& e : suite) e["seed"] = a.seed;
    std::vector<VerificationReport> reports = run_suite(suite);
    json out = json::array();
    bool all_pass = true;
    for (const auto& rep : reports) {
        out.push_back(report_to_json(rep));
        all_pass = all_pass && rep.pass;
    }
    OutFile file(a.out_path);
    file.stream() << out.dump(2) << "\n";
    std::cout << (all_pass ? "PASS" : "FAIL") << " " << reports.size() << " checks\n";
    return all_pass ? 0 : 1;
}

int cmd_study(const CommonArgs& a, const std::string& x_str) {
    json fj = load_json(a.function_path);
    LogConcaveFn g = function_from_json(fj);
    double p = parse_p(a.p_str);
    Point x;
    if (!x_str.empty()) {
        x = parse_point(x_str);
    } else {
        x.assign(g.dimension, 0.0);
        x[0] = 1.0;
    }
    std::vector<std::size_t> node_counts = {8, 12, 16, 24, 32, 48, 64, 96};
    std::vector<double> tols = {1e-6, 1e-9, 1e-12};
    // finest setting as reference
    QuadratureSpec best;
    best.jacobi_nodes = 128;
    best.legendre_tol = 1e-13;
    double reference = ball_gauge(g, p, x, best);

    OutFile out(a.out_path);
    std::ostream& os = out.stream();
    os << "jacobi_nodes,legendre_tol,gauge,delta_from_reference\n";
    for (std::size_t n : node_counts) {
        for (double t : tols) {
            QuadratureSpec spec;
            spec.jacobi_nodes = n;
            spec.legendre_tol = t;
            double v = ball_gauge(g, p, x, spec);
            os << n << "," << io_detail::num(t) << "," << io_detail::num(v) << ","
               << io_detail::num(v - reference) << "\n";
        }
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"radial mean bodies: gauges of log-concave functions and their limits"};
    app.require_subcommand(1);

    CommonArgs cov_args, ball_args, rad_args, lim_args, ver_args, study_args;
    std::string ray_str, request_path, suite_path, x_str;

    CLI::App* cov = app.add_subcommand("covariogram", "sample g_K over a lattice or ray");
    add_common(cov, cov_args, true, false);
    cov->add_option("--ray", ray_str, "ray direction, comma separated");

    CLI::App* ball = app.add_subcommand("ballbody", "radial samples of K_p(g)");
    add_common(ball, ball_args, false, true);

    CLI::App* rad = app.add_subcommand("radialmean", "radial samples of R_p K");
    add_common(rad, rad_args, true, false);
    rad->add_option("--request", request_path, "request JSON (body/p/grid/mc)");

    CLI::App* lim = app.add_subcommand("limits",
                                       "deviation tables against DK and the polar projection body");
    add_common(lim, lim_args, true, false);

    CLI::App* ver = app.add_subcommand("verify", "run a verification suite");
    ver->add_option("--suite", suite_path, "suite config (JSON array)")->required();
    add_common(ver, ver_args, false, false);

    CLI::App* study = app.add_subcommand("study", "quadrature-setting convergence table");
    add_common(study, study_args, false, true);
    study->add_option("--x", x_str, "probe point, comma separated");

    CLI11_PARSE(app, argc, argv);

    try {
        if (cov->parsed()) return cmd_covariogram(cov_args, ray_str);
        if (ball->parsed()) return cmd_ballbody(ball_args);
        if (rad->parsed()) return cmd_radialmean(rad_args, request_path);
        if (lim->parsed()) return cmd_limits(lim_args);
        if (ver->parsed()) return cmd_verify(suite_path, ver_args);
        if (study->parsed()) return cmd_study(study_args, x_str);
    } catch (const SpecError& e) {
        std::cerr << "input error: " << e.what() << "\n";
        return 2;
    } catch (const std::invalid_argument& e) {
        std::cerr << "input error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 2;
}
