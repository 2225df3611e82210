#include "homoghj/cli.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "homoghj/closed_form.hpp"
#include "homoghj/errors.hpp"
#include "homoghj/experiments.hpp"
#include "homoghj/fd_solver.hpp"
#include "homoghj/fem_effham.hpp"

namespace homoghj {

namespace {

struct Settings {
    std::string example;
    double dx = 1.0 / 512.0;
    double c_cfl = 0.9;
    std::optional<double> T;
    std::vector<double> domain;
    std::vector<double> window;
    std::optional<double> eps;
    std::optional<double> M;
    std::vector<double> p;
    std::vector<double> sigma;
    int N = 0;
    std::string out_dir;
    unsigned threads = 0;
    std::string config;
    double x = 0.0;
    double t = 1.0;
};

std::string num(double v, int prec = 17) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.*g", prec, v);
    return buf;
}

std::string join_ids(bool (*pred)(const std::string&)) {
    std::string s;
    for (const auto& id : example_ids())
        if (pred(id)) s += (s.empty() ? "" : ", ") + id;
    return s;
}

void require_example(const std::string& id, bool (*pred)(const std::string&), const char* cmd) {
    if (!pred(id)) {
        throw ConfigError(std::string("--example: '") + id + "' is not valid for " + cmd + " (valid: " + join_ids(pred) +
                          ")");
    }
}

bool is_fd_id(const std::string& id) { return is_vanishing_id(id) || is_homogenization_id(id); }
bool is_exact_id(const std::string& id) {
    return id == "5.1" || id == "5.2" || id == "5.3" || id == "5.4" || id == "5.5" || id == "6.1";
}

std::optional<std::pair<double, double>> as_interval(const std::vector<double>& v, const char* flag) {
    if (v.empty()) return std::nullopt;
    if (v.size() != 2 || !(v[0] < v[1])) throw ConfigError(std::string(flag) + ": expected two increasing numbers a,b");
    return std::make_pair(v[0], v[1]);
}

FDSuiteOptions fd_options(const Settings& s) {
    FDSuiteOptions o;
    if (!(s.dx > 0.0)) throw ConfigError("--dx: must be positive");
    if (!(s.c_cfl > 0.0 && s.c_cfl <= 1.0)) throw ConfigError("--c-cfl: must lie in (0, 1]");
    o.dx = s.dx;
    o.c_cfl = s.c_cfl;
    if (s.T) {
        if (!(*s.T > 0.0)) throw ConfigError("--T: must be positive");
        o.T = s.T;
    }
    o.domain = as_interval(s.domain, "--domain");
    o.window = as_interval(s.window, "--window");
    o.threads = s.threads;
    return o;
}

std::filesystem::path out_dir(const Settings& s) {
    if (!s.out_dir.empty()) return s.out_dir;
    if (const char* env = std::getenv("HOMOGHJ_OUT"); env != nullptr && *env != '\0') return env;
    return "out";
}

void print_report(const ExperimentReport& rep, const std::vector<std::filesystem::path>& files, std::ostream& out) {
    for (const auto& s : rep.series) {
        out << s.name << ": slope " << num(s.fitted_slope, 6) << " (rms residual " << num(s.fit_residual, 3) << ", "
            << s.points.size() << " points in " << parameter_name(s.parameter) << ")\n";
    }
    for (const auto& c : rep.checks) out << (c.passed ? "PASS " : "FAIL ") << c.name << ": " << c.detail << "\n";
    for (const auto& f : files) out << "wrote " << f.string() << "\n";
}

int cmd_fd_suite(const Settings& s, bool vanishing, std::ostream& out) {
    require_example(s.example, vanishing ? is_vanishing_id : is_homogenization_id, vanishing ? "vanish" : "homog");
    ExperimentReport rep = run_fd_report(s.example, fd_options(s));
    const auto files = write_outputs(rep, out_dir(s));
    print_report(rep, files, out);
    return 0;
}

int cmd_effham(const Settings& s, std::ostream& out) {
    require_example(s.example, is_effham_id, "effham");
    EffHamSuiteOptions o;
    if (!s.p.empty()) {
        if (s.p.size() != 2) throw ConfigError("--p: expected two numbers p1,p2");
        o.p = {s.p[0], s.p[1]};
    }
    for (double v : s.sigma)
        if (!(v > 0.0)) throw ConfigError("--sigma: values must be positive");
    o.sigmas = s.sigma;
    if (s.N != 0 && s.N < 2) throw ConfigError("--N: must be at least 2");
    o.N = s.N;
    o.threads = s.threads;
    ExperimentReport rep = run_effham_suite(s.example, o);
    const auto files = write_outputs(rep, out_dir(s));
    print_report(rep, files, out);
    return 0;
}

int cmd_sharpness(const Settings& s, std::ostream& out) {
    ExperimentReport rep = run_sharpness_suite();
    const auto files = write_outputs(rep, out_dir(s));
    print_report(rep, files, out);
    return 0;
}

int cmd_solve(const Settings& s, std::ostream& out) {
    require_example(s.example, is_fd_id, "solve");
    const FDSuiteOptions o = fd_options(s);
    CauchyExample ex = cauchy_example(s.example);
    if (o.T) ex.T = *o.T;
    if (o.domain) std::tie(ex.a, ex.b) = *o.domain;
    if (o.window) std::tie(ex.w0, ex.w1) = *o.window;
    InitialDatum1D g = ex.data.front();
    if (s.M) {
        if (s.example != "5.5") throw ConfigError("--M: only example 5.5 has a scale parameter");
        g = InitialDatum1D::double_well(*s.M);
    } else if (s.example == "5.5") {
        g = InitialDatum1D::double_well(1.0);
    }
    const Grid1D grid = Grid1D::with_spacing(ex.a, ex.b, o.dx);
    const double radius = default_gradient_radius(ex.H, g, ex.a, ex.b);
    const double eps = s.eps ? *s.eps : eps_min(o.dx, ex.H.flux, radius);
    FDConfig cfg{grid, eps, ex.T, o.c_cfl, radius};
    try {
        cfg.validate(ex.H.flux);
    } catch (const ConfigError& e) {
        throw ConfigError(std::string("--eps: ") + e.what());
    }
    const GridFunction1D u = solve(cfg, ex.H, g);

    std::function<double(double)> ref;
    if (is_vanishing_id(s.example)) {
        if (s.example == "5.5") {
            ref = [&](double x) { return hopf_lax(ex.H.flux, g, x, ex.T); };
        } else {
            ref = [&](double x) { return exact_limit_solution(s.example, x, ex.T); };
        }
    }
    const auto dir = out_dir(s);
    std::filesystem::create_directories(dir);
    const auto path = dir / ("solve_" + s.example + ".csv");
    std::ofstream os(path, std::ios::binary);
    if (!os) throw std::runtime_error("cannot open " + path.string() + " for writing");
    os << "x,u\n";
    for (std::size_t i = 0; i < u.values.size(); ++i) os << num(grid.x(i)) << "," << num(u.values[i]) << "\n";
    os.close();
    out << "example " << s.example << ": eps = " << num(eps) << ", dx = " << num(o.dx) << ", T = " << num(ex.T)
        << ", gradient radius = " << num(radius, 8) << "\n";
    if (ref) out << "sup error on [" << num(ex.w0) << ", " << num(ex.w1) << "]: " << num(sup_error(u, ref, ex.w0, ex.w1)) << "\n";
    out << "wrote " << path.string() << "\n";
    return 0;
}

int cmd_exact(const Settings& s, std::ostream& out) {
    require_example(s.example, is_exact_id, "exact");
    if (s.example == "6.1") {
        const Vec2 p = s.p.size() == 2 ? Vec2{s.p[0], s.p[1]} : Vec2{3.0, 1.0};
        QuadratureConfig q;
        q.abs_tol = 1e-13;
        out << num(exact_linear_effham(p, q)) << "\n";
        return 0;
    }
    if (s.example == "5.5") {
        const double M = s.M ? *s.M : 1.0;
        out << num(hopf_lax(Flux1D::abs_power(0.25, 4.0), InitialDatum1D::double_well(M), s.x, s.t)) << "\n";
        return 0;
    }
    out << num(exact_limit_solution(s.example, s.x, s.t)) << "\n";
    return 0;
}

// ---------------------------------------------------------------- parsing

struct Commands {
    CLI::App* vanish = nullptr;
    CLI::App* homog = nullptr;
    CLI::App* effham = nullptr;
    CLI::App* sharpness = nullptr;
    CLI::App* solve = nullptr;
    CLI::App* exact = nullptr;
};

void add_common(CLI::App* sub, Settings& s) {
    sub->add_option("--out", s.out_dir, "Output directory (default: $HOMOGHJ_OUT, else ./out)");
    sub->add_option("--threads", s.threads, "Worker threads, 0 = all cores")->capture_default_str();
    sub->add_option("--config", s.config, "Flat JSON object of option values keyed by long flag name");
}

void add_fd(CLI::App* sub, Settings& s) {
    sub->add_option("--example", s.example, "Example id")->required();
    sub->add_option("--dx", s.dx, "Mesh size")->capture_default_str();
    sub->add_option("--c-cfl", s.c_cfl, "CFL number in (0, 1]")->capture_default_str();
    sub->add_option("--T", s.T, "Final time (default: per example)");
    sub->add_option("--domain", s.domain, "Computational domain a,b (default: per example)")->delimiter(',')->expected(2);
    sub->add_option("--window", s.window, "Measurement window w0,w1 (default: per example)")->delimiter(',')->expected(2);
}

Commands build_app(CLI::App& app, Settings& s) {
    app.require_subcommand(1);
    app.footer("Examples:\n" + example_catalog_text() +
               "\nExit status: 0 success, 2 configuration error, 1 numerical failure.");
    Commands c;
    c.vanish = app.add_subcommand("vanish", "Vanishing-viscosity rate for examples 5.1-5.5");
    add_fd(c.vanish, s);
    add_common(c.vanish, s);

    c.homog = app.add_subcommand("homog", "Homogenization Cauchy differences for examples 5.6-5.11");
    add_fd(c.homog, s);
    add_common(c.homog, s);

    c.effham = app.add_subcommand("effham", "Effective Hamiltonian by P1 elements and policy iteration (6.1, 6.2)");
    c.effham->add_option("--example", s.example, "Example id (6.1 or 6.2)")->required();
    c.effham->add_option("--p", s.p, "Point p1,p2 for the 6.1 series (default 3,1)")->delimiter(',')->expected(2);
    c.effham->add_option("--sigma", s.sigma, "Discount values for the sigma series (comma separated)")
        ->delimiter(',')
        ->expected(1, 64);
    c.effham->add_option("--N", s.N, "Finest mesh h = 1/N (default 256 for 6.1, 64 for 6.2)");
    add_common(c.effham, s);

    c.sharpness = app.add_subcommand("sharpness", "Closed-form checks of the sharp lower bounds");
    add_common(c.sharpness, s);

    c.solve = app.add_subcommand("solve", "Single finite-difference solve, nodal values to CSV");
    add_fd(c.solve, s);
    c.solve->add_option("--eps", s.eps, "Viscosity (default: eps_min)");
    c.solve->add_option("--M", s.M, "Scale of the double-well datum (example 5.5)");
    add_common(c.solve, s);

    c.exact = app.add_subcommand("exact", "Evaluate a closed-form reference value");
    c.exact->add_option("--example", s.example, "Example id (5.1-5.5, 6.1)")->required();
    c.exact->add_option("--x", s.x, "Position")->capture_default_str();
    c.exact->add_option("--t", s.t, "Time")->capture_default_str();
    c.exact->add_option("--p", s.p, "Point p1,p2 (6.1)")->delimiter(',')->expected(2);
    c.exact->add_option("--M", s.M, "Scale of the double-well datum (5.5)");
    c.exact->add_option("--config", s.config, "Flat JSON object of option values keyed by long flag name");
    return c;
}

std::string json_to_arg(const nlohmann::json& v, const std::string& key) {
    if (v.is_string()) return v.get<std::string>();
    if (v.is_number_integer()) return std::to_string(v.get<long long>());
    if (v.is_number()) return num(v.get<double>());
    if (v.is_boolean()) return v.get<bool>() ? "true" : "false";
    if (v.is_array()) {
        std::string s;
        for (const auto& e : v) {
            if (e.is_array() || e.is_object()) throw ConfigError("--config: key '" + key + "' has a nested value");
            s += (s.empty() ? "" : ",") + json_to_arg(e, key);
        }
        return s;
    }
    throw ConfigError("--config: key '" + key + "' has an unsupported value");
}

bool given_on_command_line(const std::vector<std::string>& args, const std::string& flag) {
    return std::any_of(args.begin(), args.end(),
                       [&](const std::string& a) { return a == flag || a.rfind(flag + "=", 0) == 0; });
}

/// Appends "--key value" for every config key not already given explicitly.
void merge_config(CLI::App& app, std::vector<std::string>& args) {
    std::string sub_name, path;
    for (std::size_t i = 0; i < args.size(); ++i) {
        if (sub_name.empty() && !args[i].empty() && args[i][0] != '-') sub_name = args[i];
        if (args[i] == "--config" && i + 1 < args.size()) path = args[i + 1];
        if (args[i].rfind("--config=", 0) == 0) path = args[i].substr(9);
    }
    if (path.empty()) return;
    CLI::App* sub = sub_name.empty() ? nullptr : app.get_subcommand_no_throw(sub_name);
    if (sub == nullptr) return;  // the parser reports the missing subcommand

    std::ifstream is(path);
    if (!is) throw ConfigError("--config: cannot read '" + path + "'");
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(is);
    } catch (const nlohmann::json::exception& e) {
        throw ConfigError("--config: '" + path + "' is not valid JSON (" + e.what() + ")");
    }
    if (!j.is_object()) throw ConfigError("--config: top level must be a JSON object");
    for (auto it = j.begin(); it != j.end(); ++it) {
        const std::string flag = "--" + it.key();
        if (it.key() == "config" || sub->get_option_no_throw(flag) == nullptr) {
            throw ConfigError("--config: unknown key '" + it.key() + "' for subcommand " + sub_name);
        }
        if (given_on_command_line(args, flag)) continue;
        args.push_back(flag);
        args.push_back(json_to_arg(it.value(), it.key()));
    }
}

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    Settings s;
    CLI::App app{"Numerical laboratory for viscous Hamilton-Jacobi equations: vanishing viscosity, "
                 "periodic homogenization and effective Hamiltonians",
                 argc > 0 ? std::filesystem::path(argv[0]).filename().string() : "homoghj"};
    const Commands c = build_app(app, s);

    std::vector<std::string> args;
    for (int i = 1; i < argc; ++i) args.emplace_back(argv[i]);
    try {
        merge_config(app, args);
        std::reverse(args.begin(), args.end());
        app.parse(args);
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) {
            return app.exit(e, out, err);
        }
        err << "error: " << e.what() << "\n";
        if (auto* sub = app.get_subcommands().empty() ? nullptr : app.get_subcommands().front(); sub != nullptr) {
            err << "run '" << app.get_name() << " " << sub->get_name() << " --help' for the flags\n";
        } else {
            err << "run '" << app.get_name() << " --help' for the subcommands\n";
        }
        return 2;
    } catch (const ConfigError& e) {
        err << "error: " << e.what() << "\n";
        return 2;
    }

    try {
        if (c.vanish->parsed()) return cmd_fd_suite(s, true, out);
        if (c.homog->parsed()) return cmd_fd_suite(s, false, out);
        if (c.effham->parsed()) return cmd_effham(s, out);
        if (c.sharpness->parsed()) return cmd_sharpness(s, out);
        if (c.solve->parsed()) return cmd_solve(s, out);
        if (c.exact->parsed()) return cmd_exact(s, out);
    } catch (const ConfigError& e) {
        err << "error: " << e.what() << "\n";
        return 2;
    } catch (const NumericalFailure& e) {
        err << "numerical failure in stage '" << e.stage() << "': " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return 1;
    }
    return 2;
}

}  // namespace homoghj
