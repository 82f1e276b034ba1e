// abscat: Aharonov-Bohm scattering off a magnetic vortex in conical space.
// SPDX-License-Identifier: Apache-2.0
#pragma once

// Command-line surface: xsec / sweep / mc / validate with CSV + JSON
// emission. All physics options live at the top level so a flat
// `key = value` config file (loaded via --config, '#' comments, flags take
// precedence) covers every command. Angles are radians only.

#include <cstdint>
#include <filesystem>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "abscat/classical.hpp"
#include "abscat/core.hpp"
#include "abscat/errors.hpp"
#include "abscat/io.hpp"
#include "abscat/partial_wave.hpp"
#include "abscat/quasiclassical.hpp"
#include "abscat/validate.hpp"

namespace abscat {

struct HelpRequest {
    std::string text;
};

struct RunConfig {
    std::string command;
    ScatterConfig scatter;
    double k = 0.0;
    double krc = 0.0;
    bool k_given = false;
    bool krc_given = false;
    int grid_n = 721;
    double phi_min = -pi;
    double phi_max = pi;
    std::string tier = "all";
    std::string axis = "alpha";
    std::string values_raw;
    std::vector<double> values;
    double phi = 0.0;  // observation angle for sweeps
    std::uint64_t samples = 1000000;
    int bins = 181;
    std::uint64_t seed = 1;
    int threads = 1;
    std::string out_dir = ".";
    std::string regulator = "abel";
    double reg_strength = 0.0;
    std::string config_file;

    Kinematics kinematics() const { return {k_given ? k : krc / scatter.r_c}; }

    SummationParams summation() const {
        SummationParams p;
        p.regulator = regulator_from_string(regulator);
        p.strength = reg_strength;
        // CLI output records regulated singular-direction rows through the
        // flag column instead of failing the run.
        p.allow_singular = true;
        return p;
    }
};

/// Sweep value list: "start:stop:step" (inclusive) or a comma list.
inline std::vector<double> parse_values(const std::string& spec) {
    if (spec.empty()) throw UsageError("--values: empty value list");
    std::vector<double> out;
    const auto to_double = [](const std::string& tok) {
        try {
            std::size_t pos = 0;
            const double v = std::stod(tok, &pos);
            if (pos != tok.size()) throw std::invalid_argument(tok);
            return v;
        } catch (const std::exception&) {
            throw UsageError("--values: malformed number '" + tok + "'");
        }
    };
    if (spec.find(':') != std::string::npos) {
        std::stringstream ss(spec);
        std::string a, b, c;
        if (!std::getline(ss, a, ':') || !std::getline(ss, b, ':') || !std::getline(ss, c))
            throw UsageError("--values: expected start:stop:step, got '" + spec + "'");
        const double start = to_double(a), stop = to_double(b), step = to_double(c);
        if (!(step > 0.0) || stop < start)
            throw UsageError("--values: need step > 0 and stop >= start");
        const int n = static_cast<int>(std::floor((stop - start) / step + 1e-9)) + 1;
        for (int i = 0; i < n; ++i) out.push_back(start + static_cast<double>(i) * step);
        return out;
    }
    std::stringstream ss(spec);
    std::string tok;
    while (std::getline(ss, tok, ',')) out.push_back(to_double(tok));
    if (out.empty()) throw UsageError("--values: empty value list");
    return out;
}

inline RunConfig parse_config(int argc, const char* const* argv) {
    RunConfig rc;
    double xic_value = 0.0;
    std::string spin_str = "none";

    CLI::App app{
        "abscat: quantum scattering off an impenetrable magnetic vortex in Euclidean and "
        "conical space (exact partial-wave, quasiclassical and classical tiers)"};
    app.require_subcommand(1);
    app.allow_config_extras(CLI::config_extras_mode::error);  // unknown keys are usage errors

    app.add_option("--alpha", rc.scatter.alpha, "flux ratio Phi/Phi_0");
    app.add_option("--eta", rc.scatter.eta, "cone deficit parameter (eta < 1)");
    app.add_option("--rc", rc.scatter.r_c, "core radius (length)");
    auto* opt_xic = app.add_option("--xic", xic_value, "geodesic core radius (default: rc)");
    app.add_option("--spin", spin_str, "spin mode")
        ->check(CLI::IsMember({"none", "up", "down", "unpolarized"}));
    auto* opt_k = app.add_option("--k", rc.k, "transverse wavenumber (1/length)");
    auto* opt_krc = app.add_option("--krc", rc.krc, "dimensionless hardness k*rc");
    app.add_option("--grid", rc.grid_n, "number of grid angles")->check(CLI::Range(2, 5000000));
    app.add_option("--phi-min", rc.phi_min, "grid start angle (radians)");
    app.add_option("--phi-max", rc.phi_max, "grid end angle (radians)");
    app.add_option("--tier", rc.tier, "tier selector")
        ->check(CLI::IsMember({"exact", "quasiclassical", "classical", "all"}));
    app.add_option("--axis", rc.axis, "sweep axis")
        ->check(CLI::IsMember({"alpha", "eta", "k", "krc", "rc", "phi"}));
    app.add_option("--values", rc.values_raw, "sweep values: start:stop:step or comma list");
    app.add_option("--phi", rc.phi, "observation angle for sweeps (radians)");
    app.add_option("--samples", rc.samples, "Monte Carlo sample count");
    app.add_option("--bins", rc.bins, "Monte Carlo histogram bins");
    app.add_option("--seed", rc.seed, "random seed");
    app.add_option("--threads", rc.threads, "worker thread cap")->check(CLI::Range(1, 1024));
    app.add_option("--out", rc.out_dir, "output directory");
    app.add_option("--regulator", rc.regulator, "mode-sum regulator family")
        ->check(CLI::IsMember({"abel", "gaussian", "cesaro"}));
    app.add_option("--reg-strength", rc.reg_strength,
                   "regulator strength (0: per-family default)");
    auto* opt_config =
        app.set_config("--config", "", "flat key=value configuration file ('#' comments)");

    const char* const subcommands[][2] = {
        {"xsec", "differential cross section over an angle grid"},
        {"sweep", "parameter sweep at a fixed observation angle"},
        {"mc", "classical Monte Carlo impact-parameter histogram"},
        {"validate", "optical-theorem and cross-tier validation suite"},
    };
    for (const auto& sc : subcommands) app.add_subcommand(sc[0], sc[1])->fallthrough();

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp&) {
        throw HelpRequest{app.help()};
    } catch (const CLI::ParseError& e) {
        throw UsageError(e.what());
    }

    rc.command = app.get_subcommands().front()->get_name();
    rc.k_given = opt_k->count() > 0;
    rc.krc_given = opt_krc->count() > 0;
    if (rc.k_given && rc.krc_given)
        throw UsageError("conflicting kinematics: give exactly one of --k / --krc");
    if (!rc.k_given && !rc.krc_given)
        throw UsageError("missing kinematics: give exactly one of --k / --krc");
    if (opt_xic->count() > 0) rc.scatter.xi_c = xic_value;
    rc.scatter.spin = spin_from_string(spin_str);
    if (opt_config->count() > 0) rc.config_file = opt_config->as<std::string>();

    if (!(rc.phi_min < rc.phi_max)) throw UsageError("--phi-min must be below --phi-max");
    if (rc.command == "sweep") rc.values = parse_values(rc.values_raw);
    try {
        rc.scatter.validate();
        rc.kinematics().validate();
    } catch (const DomainError& e) {
        throw UsageError(e.what());
    }
    return rc;
}

namespace detail {

/// Effective configuration echoed into every output. The block is itself a
/// valid flat config file: exactly one kinematic key appears (the one the
/// user supplied), so re-running with it reproduces the outputs.
inline KvList config_echo(const RunConfig& rc) {
    KvList kv;
    kv.emplace_back("alpha", fmt17(rc.scatter.alpha));
    kv.emplace_back("eta", fmt17(rc.scatter.eta));
    kv.emplace_back("rc", fmt17(rc.scatter.r_c));
    kv.emplace_back("xic", fmt17(rc.scatter.geodesic_radius()));
    kv.emplace_back("spin", to_string(rc.scatter.spin));
    if (rc.k_given)
        kv.emplace_back("k", fmt17(rc.k));
    else
        kv.emplace_back("krc", fmt17(rc.krc));
    kv.emplace_back("grid", std::to_string(rc.grid_n));
    kv.emplace_back("phi-min", fmt17(rc.phi_min));
    kv.emplace_back("phi-max", fmt17(rc.phi_max));
    kv.emplace_back("tier", rc.tier);
    if (!rc.values_raw.empty()) {
        kv.emplace_back("axis", rc.axis);
        kv.emplace_back("values", rc.values_raw);
    }
    kv.emplace_back("phi", fmt17(rc.phi));
    kv.emplace_back("samples", std::to_string(rc.samples));
    kv.emplace_back("bins", std::to_string(rc.bins));
    kv.emplace_back("seed", std::to_string(rc.seed));
    kv.emplace_back("threads", std::to_string(rc.threads));
    kv.emplace_back("regulator", rc.regulator);
    kv.emplace_back("reg-strength", fmt17(rc.reg_strength));
    kv.emplace_back("out", rc.out_dir);
    return kv;
}

inline nlohmann::ordered_json config_json(const RunConfig& rc) {
    nlohmann::ordered_json j;
    j["command"] = rc.command;
    j["alpha"] = rc.scatter.alpha;
    j["eta"] = rc.scatter.eta;
    j["rc"] = rc.scatter.r_c;
    j["xic"] = rc.scatter.geodesic_radius();
    j["spin"] = to_string(rc.scatter.spin);
    j["k"] = rc.kinematics().k;
    j["krc"] = hardness(rc.scatter, rc.kinematics());
    j["kinematics_given"] = rc.k_given ? "k" : "krc";
    j["grid"] = rc.grid_n;
    j["phi_min"] = rc.phi_min;
    j["phi_max"] = rc.phi_max;
    j["tier"] = rc.tier;
    if (!rc.values_raw.empty()) {
        j["axis"] = rc.axis;
        j["values"] = rc.values_raw;
    }
    j["phi"] = rc.phi;
    j["samples"] = rc.samples;
    j["bins"] = rc.bins;
    j["seed"] = rc.seed;
    j["threads"] = rc.threads;
    j["regulator"] = rc.regulator;
    j["reg_strength"] = rc.reg_strength;
    j["out"] = rc.out_dir;
    return j;
}

inline std::string out_path(const RunConfig& rc, const std::string& name) {
    return (std::filesystem::path(rc.out_dir) / name).string();
}

inline void write_summary(const RunConfig& rc, const std::vector<CheckEntry>& checks,
                          nlohmann::ordered_json extra_totals = {}) {
    nlohmann::ordered_json j;
    j["config"] = config_json(rc);
    nlohmann::ordered_json totals;
    totals["sigma_tot"] = total_xsec(rc.scatter);
    totals["sigma_classical"] = classical_total(rc.scatter);
    if (!extra_totals.is_null())
        for (auto& [k, v] : extra_totals.items()) totals[k] = v;
    j["totals"] = totals;
    nlohmann::ordered_json arr = nlohmann::ordered_json::array();
    for (const auto& c : checks) arr.push_back(check_to_json(c));
    j["checks"] = arr;
    write_text_file(out_path(rc, "summary.json"), j.dump(2) + "\n");
}

inline bool tier_selected(const RunConfig& rc, const std::string& tier) {
    return rc.tier == "all" || rc.tier == tier;
}

inline int run_xsec(const RunConfig& rc) {
    const auto echo = config_echo(rc);
    const KvList cmd_info = {{"command", rc.command}};
    const auto grid = AngleGrid::uniform(rc.phi_min, rc.phi_max, static_cast<std::size_t>(rc.grid_n));
    const Kinematics kin = rc.kinematics();
    nlohmann::ordered_json extra;
    std::vector<CheckEntry> notes;
    if (tier_selected(rc, "exact")) {
        const auto t = exact_cross_section(rc.scatter, kin, grid, rc.summation(), rc.threads);
        write_text_file(out_path(rc, "xsec_exact.csv"), cross_section_csv(t, echo, cmd_info));
        extra["integrated_exact"] = t.integrated;
    }
    if (tier_selected(rc, "quasiclassical")) {
        try {
            const auto t = quasiclassical_table(rc.scatter, kin, grid);
            write_text_file(out_path(rc, "xsec_quasiclassical.csv"),
                            cross_section_csv(t, echo, cmd_info));
            extra["integrated_quasiclassical"] = t.integrated;
        } catch (const RegimeError& e) {
            extra["quasiclassical_skipped"] = e.what();
        }
    }
    if (tier_selected(rc, "classical")) {
        try {
            const auto t = classical_table(rc.scatter, grid);
            write_text_file(out_path(rc, "xsec_classical.csv"),
                            cross_section_csv(t, echo, cmd_info));
            extra["integrated_classical"] = t.integrated;
        } catch (const RegimeError& e) {
            extra["classical_skipped"] = e.what();
        }
    }
    write_summary(rc, notes, extra);
    return 0;
}

inline int run_sweep(const RunConfig& rc) {
    const auto echo = config_echo(rc);
    const Kinematics base_kin = rc.kinematics();
    std::vector<std::vector<std::string>> rows;
    for (const double v : rc.values) {
        ScatterConfig sc = rc.scatter;
        Kinematics kin = base_kin;
        double phi = rc.phi;
        if (rc.axis == "alpha") sc.alpha = v;
        else if (rc.axis == "eta") sc.eta = v;
        else if (rc.axis == "rc") sc.r_c = v;
        else if (rc.axis == "k") kin.k = v;
        else if (rc.axis == "krc") kin.k = v / sc.r_c;
        else if (rc.axis == "phi") phi = v;

        const auto emit = [&](const std::string& tier, double value, const std::string& flag) {
            rows.push_back({fmt17(v), fmt17(phi), fmt17(value), tier, flag});
        };
        const auto guard = [&](const std::string& tier, auto&& fn) {
            try {
                fn();
            } catch (const Error& e) {
                (void)e;
                emit(tier, std::numeric_limits<double>::quiet_NaN(), "error");
            }
        };
        if (tier_selected(rc, "exact"))
            guard("exact", [&] {
                const auto t = exact_cross_section(sc, kin, AngleGrid(std::vector<double>{phi}),
                                                   rc.summation(), 1);
                emit("exact", t.rows.front().value, t.rows.front().flag);
            });
        if (tier_selected(rc, "quasiclassical"))
            guard("quasiclassical",
                  [&] { emit("quasiclassical", differential_xsec(sc, kin, phi), "ok"); });
        if (tier_selected(rc, "classical"))
            guard("classical", [&] { emit("classical", classical_density(sc, phi), "ok"); });
    }
    write_text_file(out_path(rc, "sweep.csv"),
                    render_csv(echo, {{"command", rc.command}}, "value,phi,dsigma_dphi,tier,flag",
                               rows));
    write_summary(rc, {});
    return 0;
}

inline int run_mc(const RunConfig& rc) {
    const auto hist = mc_xsec(rc.scatter, rc.samples, rc.bins, rc.seed, rc.threads);
    KvList info;
    info.emplace_back("command", rc.command);
    info.emplace_back("rng", "splitmix64-counter");
    info.emplace_back("mc_total_weight", fmt17(hist.total_weight));
    std::vector<std::vector<std::string>> rows;
    rows.reserve(hist.bins());
    for (std::size_t i = 0; i < hist.bins(); ++i)
        rows.push_back({fmt17(hist.center(i)), fmt17(hist.density[i]), "classical-mc", "ok"});
    write_text_file(out_path(rc, "mc.csv"),
                    render_csv(config_echo(rc), info, "phi,dsigma_dphi,tier,flag", rows));
    nlohmann::ordered_json extra;
    extra["sigma_mc"] = hist.total_weight;
    extra["rng"] = "splitmix64-counter";
    write_summary(rc, {}, extra);
    return 0;
}

/// Numerically integrate the full quasiclassical curve; the Fraunhofer
/// kernels have width ~1/(k r_c), so the uniform grid resolves them.
inline CheckEntry qclass_total_integral(const ScatterConfig& c, Kinematics kin) {
    const std::size_t m = 200001;
    double acc = 0.0;
    for (std::size_t j = 0; j < m; ++j) {
        const double phi = -pi + two_pi * (static_cast<double>(j) + 0.5) / static_cast<double>(m);
        acc += differential_xsec(c, kin, phi);
    }
    acc *= two_pi / static_cast<double>(m);
    return make_check("qclass_total_integral", acc, total_xsec(c), 0.02,
                      {{"quadrature_points", std::to_string(m)}});
}

inline int run_validate(const RunConfig& rc) {
    const Kinematics kin = rc.kinematics();
    const ScatterConfig& sc = rc.scatter;
    std::vector<CheckEntry> checks;
    if (sc.eta == 0.0) {
        checks.push_back(optical_theorem_euclidean(sc, kin));
    } else if (sc.eta > 0.0 && sc.eta < 0.5) {
        checks.push_back(optical_theorem_conical(sc, kin));
        if (sc.spin == SpinMode::Spinless) {
            const auto [lhs, rhs] = semifluxon_gate_identity(sc, kin, 0.0);
            checks.push_back(make_check(
                "semifluxon_gate_identity", lhs, rhs, 1e-12,
                {{"forward_window_ratio", fmt17(forward_window_ratio(sc, kin))},
                 {"window_note", "ratio <= 0.1 required for the forward approximation"}}));
        }
    }
    if (sc.spin != SpinMode::Unpolarized || sc.eta == 0.0)
        checks.push_back(exact_conservation(sc, kin, rc.summation()));
    if (sc.eta < 0.5) checks.push_back(qclass_total_integral(sc, kin));
    write_summary(rc, checks);
    bool all = true;
    for (const auto& c : checks) all = all && c.pass;
    return all ? 0 : 1;
}

}  // namespace detail

inline int run(const RunConfig& rc) {
    std::error_code ec;
    std::filesystem::create_directories(rc.out_dir, ec);
    if (ec) throw Error("cannot create output directory '" + rc.out_dir + "': " + ec.message());
    if (rc.command == "xsec") return detail::run_xsec(rc);
    if (rc.command == "sweep") return detail::run_sweep(rc);
    if (rc.command == "mc") return detail::run_mc(rc);
    if (rc.command == "validate") return detail::run_validate(rc);
    throw UsageError("unknown command '" + rc.command + "'");
}

inline int cli_main(int argc, const char* const* argv) {
    try {
        const RunConfig rc = parse_config(argc, argv);
        return run(rc);
    } catch (const HelpRequest& h) {
        std::cout << h.text;
        return 0;
    } catch (const UsageError& e) {
        std::cerr << "usage error: " << e.what() << "\n";
        return 2;
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    }
}

}  // namespace abscat
