#include "ggbm/cli.hpp"

#include "ggbm/bounds.hpp"
#include "ggbm/errors.hpp"
#include "ggbm/geometry.hpp"
#include "ggbm/measure.hpp"
#include "ggbm/verify.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

namespace ggbm::cli {

std::string format_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.12g", v);
    return std::string(buf);
}

std::string csv_line(const std::vector<std::string>& fields) {
    std::string out;
    for (std::size_t i = 0; i < fields.size(); ++i) {
        if (i) out += ',';
        out += fields[i];
    }
    return out;
}

namespace {

std::string fixed(double v, int decimals) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.*f", decimals, v);
    return std::string(buf);
}

// "a:b:step" -> inclusive grid a, a+step, ..., b (within rounding slack).
std::vector<double> parse_range(const std::string& text) {
    double a = 0.0, b = 0.0, step = 0.0;
    char tail = '\0';
    if (std::sscanf(text.c_str(), "%lf:%lf:%lf%c", &a, &b, &step, &tail) != 3) {
        throw std::invalid_argument("range: expected a:b:step, got '" + text + "'");
    }
    if (!(step > 0.0) || !(a <= b)) {
        throw std::invalid_argument("range: requires a <= b and step > 0");
    }
    std::vector<double> out;
    const auto count = static_cast<long>(std::floor((b - a) / step + 1e-9)) + 1;
    out.reserve(static_cast<std::size_t>(count));
    for (long i = 0; i < count; ++i) out.push_back(a + step * static_cast<double>(i));
    return out;
}

int as_dimension(double x) {
    const double r = std::round(x);
    if (std::fabs(x - r) > 1e-9 || r < 2.0) {
        throw std::invalid_argument("dimension grid values must be integers >= 2");
    }
    return static_cast<int>(r);
}

void write_text_file(const std::string& path, const std::string& content) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write " + path);
    out << content;
    if (!out) throw std::runtime_error("write failed for " + path);
}

std::string ensure_out_dir(const std::string& dir) {
    std::error_code ec;
    std::filesystem::create_directories(dir, ec);
    if (ec) {
        throw std::runtime_error("cannot create output directory " + dir + ": " +
                                 ec.message());
    }
    return dir;
}

// ---------------------------------------------------------------------------
// Subcommand payloads
// ---------------------------------------------------------------------------

struct BoundsArgs {
    int n = 2;
    double p = 2.0;
};

struct TableArgs {
    std::string vary = "n";
    std::string range;
    int n = 2;
    double p = 2.0;
};

struct CurveArgs : TableArgs {
    std::string out_dir;
    bool loglog = false;
};

struct VerifyArgs {
    std::string bodies;
    int n = 2;
    double p = 2.0;
    std::vector<double> lambda_grid{0.25, 0.5, 0.75};
    double alpha = -1.0; // < 0: default to lower_bound(n, p)
    std::string out_dir;
    std::int64_t samples = 200000;
    std::uint64_t seed = 1;
};

struct CounterArgs {
    int n = 2;
    double p = 2.0;
    double q = 0.5;
    double trunc_radius = 30.0;
    std::vector<double> angles{1.40, 1.45, 1.50, 1.52, 1.55};
    std::vector<double> drops{0.05, 0.1, 0.2};
    std::string out_dir;
};

struct AsymArgs {
    double p = 2.0;
    std::vector<double> n_list{50, 100, 200, 400};
};

int cmd_bounds(const BoundsArgs& a) {
    const bounds::BoundParams params{a.n, a.p};
    const bounds::BoundPair pair = bounds::bound_pair(params);
    std::cout << "n = " << a.n << ", p = " << format_double(a.p) << "\n"
              << "lower = " << fixed(pair.lower, 6) << "\n"
              << "upper = " << fixed(pair.upper, 6) << "\n"
              << "interval [" << fixed(pair.lower, 6) << ", " << fixed(pair.upper, 6)
              << "]\n"
              << "rounded3 [" << fixed(bounds::round_half_away(pair.lower, 3), 3)
              << ", " << fixed(bounds::round_half_away(pair.upper, 3), 3) << "]\n";
    return exit_ok;
}

// One bound-table row per grid value of the varying parameter.
struct GridRow {
    int n;
    double p;
    double x; // the varying value
    bounds::BoundPair pair;
};

std::vector<GridRow> bound_grid(const TableArgs& a) {
    if (a.vary != "n" && a.vary != "p") {
        throw std::invalid_argument("--vary must be 'n' or 'p'");
    }
    if (a.range.empty()) throw std::invalid_argument("--range is required");
    std::vector<GridRow> rows;
    for (double x : parse_range(a.range)) {
        const int n = a.vary == "n" ? as_dimension(x) : a.n;
        const double p = a.vary == "p" ? x : a.p;
        rows.push_back({n, p, x, bounds::bound_pair({n, p})});
    }
    return rows;
}

int cmd_table(const TableArgs& a) {
    std::cout << "n,p,lower,upper\n";
    for (const GridRow& r : bound_grid(a)) {
        std::cout << csv_line({std::to_string(r.n), format_double(r.p),
                               format_double(r.pair.lower),
                               format_double(r.pair.upper)})
                  << "\n";
    }
    return exit_ok;
}

int cmd_curve(const CurveArgs& a) {
    if (a.out_dir.empty()) throw std::invalid_argument("--out is required");
    const std::vector<GridRow> rows = bound_grid(a);
    ensure_out_dir(a.out_dir);

    std::ostringstream csv;
    csv << "x,lower,upper,ref_half_inv_n,ref_leading,ref_classical\n";
    SvgSeries lower{"lower bound", {}}, upper{"upper bound", {}},
        half_inv{"1/(2n)", {}}, leading{"(p-1)/(pn)", {}}, classical{"1/n", {}};
    for (const GridRow& r : rows) {
        const double ref_half_inv_n = 1.0 / (2.0 * r.n);
        const double ref_leading = (r.p - 1.0) / (r.p * r.n);
        const double ref_classical = 1.0 / r.n;
        csv << csv_line({format_double(r.x), format_double(r.pair.lower),
                         format_double(r.pair.upper), format_double(ref_half_inv_n),
                         format_double(ref_leading), format_double(ref_classical)})
            << "\n";
        lower.points.emplace_back(r.x, r.pair.lower);
        upper.points.emplace_back(r.x, r.pair.upper);
        half_inv.points.emplace_back(r.x, ref_half_inv_n);
        leading.points.emplace_back(r.x, ref_leading);
        classical.points.emplace_back(r.x, ref_classical);
    }
    const std::string stem = a.out_dir + "/curve_" + a.vary;
    write_text_file(stem + ".csv", csv.str());
    const std::string fixed_part =
        a.vary == "n" ? "p = " + format_double(a.p) : "n = " + std::to_string(a.n);
    write_svg_chart(stem + ".svg",
                    "Brunn-Minkowski exponent bounds (" + fixed_part + ")", a.vary,
                    "exponent", {lower, upper, half_inv, leading, classical}, a.loglog);
    std::cout << "wrote " << stem << ".csv\n" << "wrote " << stem << ".svg\n";
    return exit_ok;
}

int cmd_verify(const VerifyArgs& a) {
    if (a.bodies.empty()) throw std::invalid_argument("--bodies is required");
    if (a.lambda_grid.empty()) throw std::invalid_argument("--lambda-grid is empty");
    const bounds::BoundParams params{a.n, a.p};
    params.validate();
    std::pair<geom::Body, geom::Body> pair = [&] {
        try {
            return geom::body_pair_from_json_file(a.bodies);
        } catch (const nlohmann::json::exception& e) {
            throw std::invalid_argument("body json (" + a.bodies + "): " + e.what());
        }
    }();
    const double alpha = a.alpha > 0.0 ? a.alpha : bounds::lower_bound(params);
    measure::QuadratureSpec spec;
    spec.mc_samples = a.samples;
    spec.seed = a.seed;

    std::ostringstream csv;
    csv << verify::deficit_csv_header() << "\n";
    bool violated = false;
    for (double lam : a.lambda_grid) {
        const verify::DeficitReport r =
            verify::bm_deficit(pair.first, pair.second, lam, alpha, params, spec);
        violated = violated || r.certified_violation();
        csv << verify::to_csv_row(r) << "\n";
    }
    std::cout << csv.str();
    if (!a.out_dir.empty()) {
        ensure_out_dir(a.out_dir);
        write_text_file(a.out_dir + "/deficits.csv", csv.str());
        std::cout << "wrote " << a.out_dir << "/deficits.csv\n";
    }
    return violated ? exit_violation : exit_ok;
}

int cmd_counterexample(const CounterArgs& a) {
    const bounds::BoundParams params{a.n, a.p};
    const auto witness = verify::counterexample_search(params, a.q, a.angles,
                                                       a.drops, a.trunc_radius);
    std::ostringstream csv;
    csv << verify::witness_csv_header() << "\n";
    if (witness) csv << verify::to_csv_row(*witness) << "\n";
    std::cout << csv.str();
    if (!witness) std::cout << "no certified violation found\n";
    if (!a.out_dir.empty()) {
        ensure_out_dir(a.out_dir);
        write_text_file(a.out_dir + "/witness.csv", csv.str());
        std::cout << "wrote " << a.out_dir << "/witness.csv\n";
    }
    return witness ? exit_violation : exit_ok;
}

int cmd_asymptotics(const AsymArgs& a) {
    if (a.n_list.empty()) throw std::invalid_argument("asymptotics: empty n list");
    double prev = 1.0;
    std::vector<std::pair<double, double>> fit_points; // (log n, log |resid|)
    std::cout << "n,lower,upper,leading,n2_resid_lower,n2_resid_upper,two_term_resid\n";
    for (double nd : a.n_list) {
        const int n = as_dimension(nd);
        if (!(nd > prev)) {
            throw std::invalid_argument("asymptotics: n list must be ascending");
        }
        prev = nd;
        const bounds::BoundParams params{n, a.p};
        const double lower = bounds::lower_bound(params);
        const double upper = bounds::upper_bound(params);
        const double leading = bounds::upper_bound_asymptotic_n(params);
        const double two_term = bounds::lower_bound_asymptotic_n(params);
        const double resid = std::fabs(lower - two_term);
        std::cout << csv_line({std::to_string(n), format_double(lower),
                               format_double(upper), format_double(leading),
                               format_double(n * n * (lower - leading)),
                               format_double(n * n * (upper - leading)),
                               format_double(resid)})
                  << "\n";
        if (resid > 0.0) fit_points.emplace_back(std::log(nd), std::log(resid));
    }
    if (fit_points.size() < a.n_list.size() || fit_points.size() < 2) {
        // A vanishing remainder (p = 1) leaves nothing to fit.
        std::cout << "# fitted_decay_order = exact\n";
        return exit_ok;
    }
    // Least-squares slope of log |resid| against log n; decay order = -slope.
    double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
    for (const auto& [x, y] : fit_points) {
        sx += x;
        sy += y;
        sxx += x * x;
        sxy += x * y;
    }
    const double m = static_cast<double>(fit_points.size());
    const double slope = (m * sxy - sx * sy) / (m * sxx - sx * sx);
    std::cout << "# fitted_decay_order = " << format_double(-slope) << "\n";
    return exit_ok;
}

} // namespace

int run(const std::vector<std::string>& args) {
    CLI::App app{"Bounds and empirical checks for the Brunn-Minkowski exponent "
                 "of generalized Gaussian measures"};
    app.name("ggbm");
    app.set_config("--config", "", "key=value config file (flags win)");
    app.require_subcommand(0, 1);

    BoundsArgs bounds_args;
    auto* sub_bounds =
        app.add_subcommand("bounds", "lower/upper bound at one (n, p)");
    sub_bounds->add_option("--n", bounds_args.n, "dimension (>= 2)")->required();
    sub_bounds->add_option("--p", bounds_args.p, "homogeneity exponent (>= 1)")
        ->required();

    TableArgs table_args;
    auto* sub_table =
        app.add_subcommand("table", "bound table over a range of n or p");
    sub_table->add_option("--vary", table_args.vary, "varying parameter: n or p")
        ->required();
    sub_table->add_option("--range", table_args.range, "grid a:b:step")->required();
    sub_table->add_option("--n", table_args.n, "fixed dimension when varying p");
    sub_table->add_option("--p", table_args.p, "fixed exponent when varying n");

    CurveArgs curve_args;
    auto* sub_curve =
        app.add_subcommand("curve", "CSV + SVG bound curves with references");
    sub_curve->add_option("--vary", curve_args.vary, "varying parameter: n or p")
        ->required();
    sub_curve->add_option("--range", curve_args.range, "grid a:b:step")->required();
    sub_curve->add_option("--n", curve_args.n, "fixed dimension when varying p");
    sub_curve->add_option("--p", curve_args.p, "fixed exponent when varying n");
    sub_curve->add_option("--out", curve_args.out_dir, "output directory")
        ->required();
    sub_curve->add_flag("--loglog", curve_args.loglog, "log-log chart axes");

    VerifyArgs verify_args;
    auto* sub_verify =
        app.add_subcommand("verify", "deficit report for a body pair (JSON file)");
    sub_verify->add_option("--bodies", verify_args.bodies, "JSON file with K and L")
        ->required();
    sub_verify->add_option("--n", verify_args.n, "dimension")->required();
    sub_verify->add_option("--p", verify_args.p, "homogeneity exponent")->required();
    sub_verify
        ->add_option("--lambda-grid", verify_args.lambda_grid,
                     "comma-separated weights in [0, 1]")
        ->delimiter(',');
    sub_verify->add_option("--alpha", verify_args.alpha,
                           "exponent (default: lower_bound(n, p))");
    sub_verify->add_option("--samples", verify_args.samples,
                           "Monte Carlo samples (n >= 4)");
    sub_verify->add_option("--seed", verify_args.seed, "Monte Carlo seed");
    sub_verify->add_option("--out", verify_args.out_dir,
                           "directory for deficits.csv");

    CounterArgs counter_args;
    auto* sub_counter = app.add_subcommand(
        "counterexample", "certified violation search on cone pairs");
    sub_counter->add_option("--n", counter_args.n, "dimension")->required();
    sub_counter->add_option("--p", counter_args.p, "homogeneity exponent")
        ->required();
    sub_counter->add_option("--q", counter_args.q, "candidate exponent")->required();
    sub_counter->add_option("--R", counter_args.trunc_radius, "truncation radius");
    sub_counter
        ->add_option("--angles", counter_args.angles, "comma-separated cone angles")
        ->delimiter(',');
    sub_counter
        ->add_option("--drops", counter_args.drops, "comma-separated drops")
        ->delimiter(',');
    sub_counter->add_option("--out", counter_args.out_dir,
                            "directory for witness.csv");

    AsymArgs asym_args;
    auto* sub_asym = app.add_subcommand(
        "asymptotics", "large-n remainder table and fitted decay order");
    sub_asym->add_option("--p", asym_args.p, "homogeneity exponent")->required();
    sub_asym
        ->add_option("--n-list", asym_args.n_list,
                     "comma-separated ascending dimensions")
        ->delimiter(',');

    try {
        std::vector<std::string> reversed(args.rbegin(), args.rend());
        app.parse(reversed);
    } catch (const CLI::CallForHelp& e) {
        app.exit(e);
        return exit_ok;
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return exit_usage;
    }

    try {
        if (sub_bounds->parsed()) return cmd_bounds(bounds_args);
        if (sub_table->parsed()) return cmd_table(table_args);
        if (sub_curve->parsed()) return cmd_curve(curve_args);
        if (sub_verify->parsed()) return cmd_verify(verify_args);
        if (sub_counter->parsed()) return cmd_counterexample(counter_args);
        if (sub_asym->parsed()) return cmd_asymptotics(asym_args);
        std::cerr << app.help();
        return exit_usage;
    } catch (const std::invalid_argument& e) {
        std::cerr << "usage error: " << e.what() << "\n";
        return exit_usage;
    } catch (const std::domain_error& e) {
        std::cerr << "usage error: " << e.what() << "\n";
        return exit_usage;
    } catch (const std::exception& e) {
        std::cerr << "numeric/runtime failure: " << e.what() << "\n";
        return exit_numeric;
    }
}

int run(int argc, char** argv) {
    std::vector<std::string> args;
    args.reserve(argc > 0 ? static_cast<std::size_t>(argc - 1) : 0);
    for (int i = 1; i < argc; ++i) args.emplace_back(argv[i]);
    return run(args);
}

} // namespace ggbm::cli
