// uwoc: underwater optical wireless link calculator around time-domain
// hybrid PAM. Subcommands cover analytic BER curves, Monte-Carlo runs,
// FEC-limit search, power-split optimization, maximum-distance solving,
// figure sweeps, and eye-diagram export.
//
// Exit codes: 0 success, 1 domain/no-solution errors, 2 configuration errors.

#include <CLI11.hpp>
#include <json.hpp>

#include <algorithm>
#include <fstream>
#include <iostream>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "uwoc/uwoc.hpp"

namespace {

using nlohmann::json;

// Artifact rows go to --out when given, otherwise to stdout; the one-line
// summary goes to the other stream so piped artifacts stay clean.
struct OutputTarget {
    std::ofstream file;
    bool to_file = false;

    std::ostream& artifact() { return to_file ? static_cast<std::ostream&>(file) : std::cout; }
    std::ostream& summary() { return to_file ? std::cout : std::cerr; }
};

OutputTarget open_output(const std::string& path) {
    OutputTarget t;
    if (!path.empty() && path != "-") {
        t.file.open(path, std::ios::binary);
        if (!t.file) throw uwoc::ConfigError("cannot open output file '" + path + "'");
        t.to_file = true;
    }
    return t;
}

std::uint64_t ensure_seed(const std::optional<std::uint64_t>& seed) {
    if (seed) return *seed;
    std::random_device rd;
    return (static_cast<std::uint64_t>(rd()) << 32) ^ rd();
}

std::string g6(double v) { return uwoc::format_g6(v); }

json fec_json(const uwoc::TdhpParams& params, const uwoc::FecSearchResult& r) {
    return json{{"p", params.p},
                {"q", params.q},
                {"threshold", r.threshold},
                {"snr_db", r.snr_db},
                {"snr_linear", r.snr_linear},
                {"converged", r.converged}};
}

json estimate_json(const uwoc::BerEstimate& est) {
    return json{{"p", est.params.p},
                {"q", est.params.q},
                {"snr_db", uwoc::linear_to_db(est.snr_linear)},
                {"n_symbols", est.n_symbols},
                {"seed", est.seed},
                {"bits_pam2", est.bits_pam2},
                {"bits_pam4", est.bits_pam4},
                {"errors_pam2", est.bit_errors_pam2},
                {"errors_pam4", est.bit_errors_pam4},
                {"ber_pam2", est.ber_pam2},
                {"ber_pam4", est.ber_pam4},
                {"ber_tdhp", est.ber_tdhp},
                {"ber_ratio_weighted", est.ber_ratio_weighted},
                {"ci95", est.ci95_halfwidth},
                {"ci95_weighted", est.ci95_halfwidth_weighted},
                {"low_error_count", est.low_error_count}};
}

void write_sweep_svg(const std::string& path, const std::vector<uwoc::SweepRecord>& records,
                     uwoc::SweepVariable variable) {
    const bool fec_axis = variable == uwoc::SweepVariable::Q;
    std::vector<uwoc::PlotSeries> series;
    for (const uwoc::SweepRecord& r : records) {
        const std::string label = r.channel + " / " + r.mode;
        auto it = std::find_if(series.begin(), series.end(),
                               [&](const uwoc::PlotSeries& s) { return s.label == label; });
        if (it == series.end()) {
            series.push_back({label, {}});
            it = series.end() - 1;
        }
        it->points.emplace_back(r.value, fec_axis ? r.fec_limit_db : r.lmax_m);
    }
    std::ofstream out(path, std::ios::binary);
    if (!out) throw uwoc::ConfigError("cannot open SVG output file '" + path + "'");
    const std::string x_label(uwoc::to_string(variable));
    uwoc::write_line_plot(out, series, "sweep of " + x_label, x_label,
                          fec_axis ? "FEC limit [dB]" : "L_max [m]");
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"underwater optical wireless link calculator (time-domain hybrid PAM)"};
    app.fallthrough();
    app.require_subcommand(0, 1);

    // global options
    std::string config_path, out_path, format = "csv";
    std::optional<std::uint64_t> seed_flag;
    unsigned threads = 0;
    std::optional<double> threshold_flag;
    std::string aperture_flag;
    app.add_option("--config", config_path, "key = value config file");
    app.add_option("--out", out_path, "artifact output path (default: stdout)");
    app.add_option("--format", format, "artifact format")
        ->check(CLI::IsMember({"csv", "json"}));
    app.add_option("--seed", seed_flag, "RNG master seed (auto-generated and reported if absent)");
    app.add_option("--threads", threads, "worker cap for Monte-Carlo chunks (0 = hardware)");
    app.add_option("--fec-threshold", threshold_flag, "BER threshold for FEC-limit searches")
        ->check(CLI::Range(1e-12, 0.499));
    app.add_option("--aperture", aperture_flag, "receiver aperture source")
        ->check(CLI::IsMember({"explicit", "from-fov"}));

    // shared per-command option storage
    std::optional<double> p_flag, q_flag, k_flag;
    std::string channel_flag;
    double tol_db = 0.01;
    double snr_db = 0.0;

    auto* ber = app.add_subcommand("ber", "closed-form BER over an SNR grid");
    std::string snr_grid_spec = "0:20:0.5";
    ber->add_option("--p", p_flag, "PAM4 ratio")->check(CLI::Range(0.0, 1.0));
    ber->add_option("--q", q_flag, "power control factor")->check(CLI::Range(0.0, 1.0));
    ber->add_option("--snr-grid", snr_grid_spec, "SNR grid in dB, start:stop:step");

    auto* mc = app.add_subcommand("mc", "Monte-Carlo BER measurement");
    std::size_t symbols = 1000000;
    double noise_sigma = 1.0;
    std::string layout_name = "block";
    std::size_t chunk_symbols = 1u << 20;
    mc->add_option("--p", p_flag, "PAM4 ratio")->check(CLI::Range(0.0, 1.0));
    mc->add_option("--q", q_flag, "power control factor")->check(CLI::Range(0.0, 1.0));
    mc->add_option("--snr-db", snr_db, "operating SNR in dB")->required();
    mc->add_option("--symbols", symbols, "number of symbols")->check(CLI::PositiveNumber);
    mc->add_option("--noise-sigma", noise_sigma, "noise sigma override (0 = noise-free)")
        ->check(CLI::NonNegativeNumber);
    mc->add_option("--layout", layout_name, "PAM4 placement")
        ->check(CLI::IsMember({"block", "interleaved"}));
    mc->add_option("--chunk-symbols", chunk_symbols, "symbols per Monte-Carlo chunk")
        ->check(CLI::PositiveNumber);

    auto* fec = app.add_subcommand("fec-limit", "SNR where the BER crosses the FEC threshold");
    fec->add_option("--p", p_flag, "PAM4 ratio")->check(CLI::Range(0.0, 1.0));
    fec->add_option("--q", q_flag, "power control factor")->check(CLI::Range(0.0, 1.0));
    fec->add_option("--tol-db", tol_db, "bisection tolerance in dB")->check(CLI::PositiveNumber);

    auto* optq = app.add_subcommand("optimize-q", "best power split for a fixed PAM4 ratio");
    std::string q_grid_spec = "0:0.9:0.1";
    bool refine = false;
    optq->add_option("--p", p_flag, "PAM4 ratio, inside (0, 1)")->check(CLI::Range(0.0, 1.0));
    optq->add_option("--q-grid", q_grid_spec, "candidate grid, start:stop:step");
    optq->add_flag("--refine", refine, "golden-section pass around the grid minimum");
    optq->add_option("--tol-db", tol_db, "bisection tolerance in dB")->check(CLI::PositiveNumber);

    auto* lmax = app.add_subcommand("lmax", "maximum distance for a channel and operating point");
    std::optional<double> required_snr_db;
    lmax->add_option("--p", p_flag, "PAM4 ratio")->check(CLI::Range(0.0, 1.0));
    lmax->add_option("--q", q_flag, "power control factor")->check(CLI::Range(0.0, 1.0));
    lmax->add_option("--channel", channel_flag, "channel preset")
        ->check(CLI::IsMember({"red", "green", "blue"}));
    lmax->add_option("--k", k_flag, "custom beam attenuation [1/m]")
        ->check(CLI::NonNegativeNumber);
    lmax->add_option("--required-snr-db", required_snr_db,
                     "skip the FEC search and use this SNR directly");

    auto* sweep = app.add_subcommand("sweep", "figure-reproduction sweeps");
    std::string variable_name = "p";
    std::string grid_spec, p_grid_spec = "0:1:0.1";
    std::vector<std::string> channel_names = {"red", "green", "blue"};
    bool no_optimize = false;
    std::string svg_path;
    sweep->add_option("--variable", variable_name, "swept parameter")
        ->check(CLI::IsMember({"p", "q", "theta", "phi", "fov"}));
    sweep->add_option("--grid", grid_spec, "swept grid, start:stop:step (default per variable)");
    sweep->add_option("--p-grid", p_grid_spec, "p grid for geometry sweeps");
    sweep->add_option("--q-grid", q_grid_spec, "candidate q grid for optimum rows");
    sweep->add_option("--channels", channel_names, "channel presets")
        ->delimiter(',')
        ->check(CLI::IsMember({"red", "green", "blue"}));
    sweep->add_option("--p", p_flag, "fixed p for q sweeps")->check(CLI::Range(0.0, 1.0));
    sweep->add_flag("--no-optimize", no_optimize, "emit only q = 0 baseline rows");
    sweep->add_option("--svg", svg_path, "also write a line plot to this path");

    auto* eye = app.add_subcommand("eye", "export folded eye-diagram traces");
    std::string eye_format_name = "tdhp";
    std::optional<double> eye_snr_db;
    bool noise_free = false;
    int samples_per_symbol = 16;
    int n_traces = 1000;
    eye->add_option("--eye-format", eye_format_name, "pam2, pam4, or tdhp")
        ->check(CLI::IsMember({"pam2", "pam4", "tdhp"}));
    eye->add_option("--p", p_flag, "PAM4 ratio (tdhp format)")->check(CLI::Range(0.0, 1.0));
    eye->add_option("--q", q_flag, "power control factor")->check(CLI::Range(0.0, 1.0));
    auto* eye_snr_opt = eye->add_option("--snr-db", eye_snr_db, "decision-instant SNR in dB");
    eye->add_flag("--noise-free", noise_free, "no channel noise")->excludes(eye_snr_opt);
    eye->add_option("--samples-per-symbol", samples_per_symbol, "NRZ samples per symbol")
        ->check(CLI::Range(2, 1024));
    eye->add_option("--traces", n_traces, "number of traces")->check(CLI::PositiveNumber);

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }

    try {
        // settings: catalog defaults, then config file, then flags
        uwoc::RunSettings settings;
        if (!config_path.empty())
            uwoc::apply_config(uwoc::parse_config_file(config_path), settings);
        if (threshold_flag) settings.fec_threshold = *threshold_flag;
        if (!aperture_flag.empty())
            settings.aperture_mode = uwoc::aperture_mode_from_name(aperture_flag);
        if (seed_flag) settings.seed = *seed_flag;
        if (!channel_flag.empty()) settings.channel = uwoc::ChannelPreset::from_name(channel_flag);
        if (k_flag) settings.channel = uwoc::ChannelPreset::custom(*k_flag);
        if (p_flag) settings.params.p = *p_flag;
        if (q_flag) settings.params.q = *q_flag;
        settings.geometry.validate();
        settings.params.validate();

        OutputTarget out = open_output(out_path);
        const bool as_json = format == "json";

        if (app.got_subcommand(ber)) {
            const std::vector<double> grid = uwoc::parse_grid_spec(snr_grid_spec);
            const double q_eff = settings.params.effective_q();
            if (as_json) {
                json rows = json::array();
                for (double db : grid)
                    rows.push_back({{"snr_db", db},
                                    {"ber_pam2", uwoc::ber_pam2(uwoc::db_to_linear(db), q_eff)},
                                    {"ber_pam4", uwoc::ber_pam4(uwoc::db_to_linear(db), q_eff)},
                                    {"ber_tdhp", uwoc::ber_tdhp(uwoc::db_to_linear(db),
                                                                settings.params)}});
                out.artifact() << rows.dump(2) << '\n';
            } else {
                out.artifact() << "snr_db,ber_pam2,ber_pam4,ber_tdhp\n";
                for (double db : grid) {
                    const double s = uwoc::db_to_linear(db);
                    out.artifact() << g6(db) << ',' << g6(uwoc::ber_pam2(s, q_eff)) << ','
                                   << g6(uwoc::ber_pam4(s, q_eff)) << ','
                                   << g6(uwoc::ber_tdhp(s, settings.params)) << '\n';
                }
            }
            out.summary() << "wrote " << grid.size() << " BER rows (p=" << g6(settings.params.p)
                          << ", q=" << g6(settings.params.q) << ")\n";
        } else if (app.got_subcommand(mc)) {
            const std::uint64_t seed = ensure_seed(settings.seed);
            uwoc::McOptions opt;
            opt.threads = threads;
            opt.chunk_symbols = chunk_symbols;
            opt.noise_sigma = noise_sigma;
            opt.layout = layout_name == "interleaved" ? uwoc::FrameLayout::Interleaved
                                                      : uwoc::FrameLayout::Pam4Block;
            const uwoc::BerEstimate est = uwoc::measure_ber(
                settings.params, uwoc::db_to_linear(snr_db), symbols, seed, opt);
            if (as_json)
                out.artifact() << estimate_json(est).dump(2) << '\n';
            else
                uwoc::write_ber_estimate_csv(out.artifact(), est);
            if (est.low_error_count)
                out.summary() << "warning: fewer than 10 errors expected at this operating "
                                 "point; increase --symbols\n";
            out.summary() << "BER " << g6(est.ber_tdhp) << " (ratio-weighted "
                          << g6(est.ber_ratio_weighted) << " +- " << g6(est.ci95_halfwidth_weighted)
                          << ") over " << est.bits_pam2 + est.bits_pam4 << " bits, seed " << seed
                          << '\n';
        } else if (app.got_subcommand(fec)) {
            const uwoc::FecSearchResult r =
                uwoc::fec_limit_snr(settings.params, settings.fec_threshold, tol_db);
            if (as_json) {
                out.artifact() << fec_json(settings.params, r).dump(2) << '\n';
            } else {
                out.artifact() << "p,q,threshold,snr_db,snr_linear,converged\n"
                               << g6(settings.params.p) << ',' << g6(settings.params.q) << ','
                               << g6(r.threshold) << ',' << g6(r.snr_db) << ','
                               << g6(r.snr_linear) << ',' << (r.converged ? 1 : 0) << '\n';
            }
            out.summary() << "FEC limit " << g6(r.snr_db) << " dB (" << g6(r.snr_linear)
                          << " linear) at threshold " << g6(r.threshold) << " (p="
                          << g6(settings.params.p) << ", q=" << g6(settings.params.q) << ")\n";
        } else if (app.got_subcommand(optq)) {
            const std::vector<double> grid = uwoc::parse_grid_spec(q_grid_spec);
            const double p = p_flag ? *p_flag : settings.params.p;
            const uwoc::QOptimum opt =
                uwoc::optimize_q(p, settings.fec_threshold, grid, refine, tol_db);
            if (as_json) {
                json rows = json::array();
                for (const auto& [q, db] : opt.grid) rows.push_back({{"q", q}, {"fec_db", db}});
                out.artifact() << json{{"p", p},
                                       {"q_star", opt.q_star},
                                       {"fec_db_at_q_star", opt.snr_at_fec_limit_db},
                                       {"grid", rows}}
                                      .dump(2)
                               << '\n';
            } else {
                out.artifact() << "q,fec_limit_db\n";
                for (const auto& [q, db] : opt.grid)
                    out.artifact() << g6(q) << ',' << g6(db) << '\n';
            }
            const double baseline = uwoc::fec_limit_snr({p, 0.0}, settings.fec_threshold).snr_db;
            out.summary() << "q* = " << g6(opt.q_star) << " (FEC limit "
                          << g6(opt.snr_at_fec_limit_db) << " dB at p=" << g6(p)
                          << "; baseline q=0: " << g6(baseline) << " dB)\n";
        } else if (app.got_subcommand(lmax)) {
            double fec_db;
            uwoc::LmaxResult res;
            if (required_snr_db) {
                fec_db = *required_snr_db;
                res = uwoc::solve_lmax(settings.geometry, settings.channel.attenuation_per_m,
                                       uwoc::db_to_linear(fec_db), settings.aperture_mode);
            } else {
                const uwoc::FecSearchResult r =
                    uwoc::fec_limit_snr(settings.params, settings.fec_threshold);
                fec_db = r.snr_db;
                res = uwoc::solve_lmax(settings.geometry, settings.channel.attenuation_per_m,
                                       r.snr_linear, settings.aperture_mode);
            }
            if (as_json) {
                out.artifact() << json{{"channel", settings.channel.name()},
                                       {"K_per_m", settings.channel.attenuation_per_m},
                                       {"p", settings.params.p},
                                       {"q", settings.params.q},
                                       {"fec_limit_db", fec_db},
                                       {"lmax_m", res.l_max_m},
                                       {"residual", res.residual}}
                                      .dump(2)
                               << '\n';
            } else {
                out.artifact() << "channel,K_per_m,p,q,fec_limit_db,lmax_m,residual\n"
                               << settings.channel.name() << ','
                               << g6(settings.channel.attenuation_per_m) << ','
                               << g6(settings.params.p) << ',' << g6(settings.params.q) << ','
                               << g6(fec_db) << ',' << g6(res.l_max_m) << ','
                               << g6(res.residual) << '\n';
            }
            out.summary() << "L_max = " << g6(res.l_max_m) << " m (" << settings.channel.name()
                          << ", K=" << g6(settings.channel.attenuation_per_m) << " 1/m, p="
                          << g6(settings.params.p) << ", q=" << g6(settings.params.q)
                          << ", FEC limit " << g6(fec_db) << " dB, aperture "
                          << uwoc::to_string(settings.aperture_mode) << ")\n";
        } else if (app.got_subcommand(sweep)) {
            uwoc::SweepSpec spec;
            spec.variable = uwoc::sweep_variable_from_name(variable_name);
            spec.grid = grid_spec.empty() ? uwoc::default_sweep_grid(spec.variable)
                                          : uwoc::parse_grid_spec(grid_spec);
            spec.p_grid = uwoc::parse_grid_spec(p_grid_spec);
            spec.q_grid = uwoc::parse_grid_spec(q_grid_spec);
            // fixed p for q sweeps: flag, then config file, then 0.5
            spec.fixed_p = 0.5;
            if (settings.params.p > 0.0 && settings.params.p < 1.0)
                spec.fixed_p = settings.params.p;
            if (p_flag) spec.fixed_p = *p_flag;
            spec.geometry = settings.geometry;
            spec.optimize = !no_optimize;
            spec.threshold = settings.fec_threshold;
            spec.aperture_mode = settings.aperture_mode;
            for (const std::string& name : channel_names)
                spec.channels.push_back(uwoc::ChannelPreset::from_name(name));
            const std::vector<uwoc::SweepRecord> records = uwoc::run_sweep(spec);
            if (as_json) {
                json rows = json::array();
                for (const uwoc::SweepRecord& r : records)
                    rows.push_back({{"variable", uwoc::to_string(r.variable)},
                                    {"value", r.value},
                                    {"channel", r.channel},
                                    {"p", r.p},
                                    {"q_used", r.q_used},
                                    {"mode", r.mode},
                                    {"fec_limit_db", r.fec_limit_db},
                                    {"lmax_m", r.lmax_m}});
                out.artifact() << rows.dump(2) << '\n';
            } else {
                uwoc::write_sweep_csv(out.artifact(), records);
            }
            if (!svg_path.empty()) write_sweep_svg(svg_path, records, spec.variable);
            out.summary() << "wrote " << records.size() << " sweep records (variable="
                          << uwoc::to_string(spec.variable) << ")\n";
        } else if (app.got_subcommand(eye)) {
            if (!eye_snr_db && !noise_free)
                throw uwoc::ConfigError("eye: pass --snr-db or --noise-free");
            const std::uint64_t seed = ensure_seed(settings.seed);
            const uwoc::EyeFormat fmt = eye_format_name == "pam2" ? uwoc::EyeFormat::Pam2
                                        : eye_format_name == "pam4" ? uwoc::EyeFormat::Pam4
                                                                    : uwoc::EyeFormat::Tdhp;
            std::optional<double> snr_linear;
            if (eye_snr_db) snr_linear = uwoc::db_to_linear(*eye_snr_db);
            const uwoc::EyeTraceSet set = uwoc::eye_traces(fmt, settings.params, snr_linear,
                                                           samples_per_symbol, n_traces, seed);
            if (as_json) {
                out.artifact() << json{{"format", eye_format_name},
                                       {"samples_per_symbol", set.samples_per_symbol},
                                       {"window_symbols", set.window_symbols},
                                       {"seed", seed},
                                       {"traces", set.traces}}
                                      .dump()
                               << '\n';
            } else {
                uwoc::write_eye_csv(out.artifact(), set);
            }
            out.summary() << "wrote " << set.traces.size() << " eye traces (" << eye_format_name
                          << ", " << samples_per_symbol << " samples/symbol, "
                          << (eye_snr_db ? "snr " + g6(*eye_snr_db) + " dB" : "noise-free")
                          << ", seed " << seed << ")\n";
        } else {
            std::cerr << app.help();
            return 2;
        }
        return 0;
    } catch (const uwoc::ConfigError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    } catch (const uwoc::NoSolutionError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
}
