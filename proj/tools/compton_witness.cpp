//---------------------------------*-C++-*-----------------------------------//
// SPDX-License-Identifier: Apache-2.0
//---------------------------------------------------------------------------//
//! \file tools/compton_witness.cpp
//! Command-line front end: scans, witness reports, thresholds, Monte Carlo.
//---------------------------------------------------------------------------//
#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "cli_args.hpp"
#include "compton/montecarlo.hpp"
#include "compton/state_spec.hpp"
#include "compton/witness.hpp"

using nlohmann::json;

namespace compton::cli
{
namespace
{
enum ExitCode : int
{
    ok = 0,
    usage = 2,
    statistical = 3,
};

//---------------------------------------------------------------------------//
// OPTIONS
//---------------------------------------------------------------------------//
struct ScanOptions
{
    std::string energy = "1";
    std::string theta;
    std::string phi = "0";
    std::string state;
    std::string theta_a;
    std::string theta_b;
    std::string phi_a = "0";
    std::string dphi;
    std::string frame_phi = "0";
};

struct WitnessOptions
{
    std::string state;
    std::string energy = "1";
    std::string theta_a;
    std::string theta_b;
    std::string frame_phi = "0";
    bool optimize = false;
    bool bose = false;
    bool ideal = false;
    bool separable = false;
    std::size_t sic = 0;
    std::size_t m = 3;
    std::size_t restarts = 64;
    std::uint64_t seed = 0;
};

struct McOptions
{
    std::string state = "bell:psi+:lin";
    std::string energy = "1";
    long long n = 100000;
    std::uint64_t seed = 0;
    std::string window_a = "80:84";
    std::string window_b = "80:84";
    std::size_t bins = 36;
    std::string frame_phi = "0";
    double smear_deg = 0;
    bool no_bose = false;
    std::string out = "events.csv";
    std::string events;
};

ThetaWindow parse_window(std::string const& text)
{
    auto const [lo, hi] = parse_angle_pair(text);
    return {lo, hi};
}

double angle_or_optimum(std::string const& text, double k)
{
    return text.empty() ? max_visibility(k).theta : parse_angle(text);
}

std::string fmt(double v)
{
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.12g", v);
    return buf;
}

void print_json(json const& j)
{
    std::cout << j.dump(2) << '\n';
}

//---------------------------------------------------------------------------//
// SCAN
//---------------------------------------------------------------------------//
int run_scan(std::string const& quantity, ScanOptions const& o)
{
    double const k = parse_energy(o.energy);
    if (quantity == "visibility" || quantity == "envelope")
    {
        auto const g = parse_angle_grid(o.theta.empty() ? "0:180" : o.theta);
        std::cout << "theta_deg," << quantity << '\n';
        for (double t : g.values)
        {
            double const v = quantity == "visibility" ? visibility(k, t)
                                                      : envelope(k, t);
            std::cout << fmt(t / deg) << ',' << fmt(v) << '\n';
        }
        return ok;
    }
    if (quantity == "sigma-single")
    {
        auto const rho = parse_single_state(o.state.empty() ? "H" : o.state);
        auto const gt = parse_angle_grid(o.theta.empty() ? "90" : o.theta);
        auto const gp = parse_angle_grid(o.phi);
        std::cout << "theta_deg,phi_deg,sigma,envelope\n";
        for (double t : gt.values)
            for (double p : gp.values)
            {
                auto const s = sigma_single(rho, k, t, p);
                std::cout << fmt(t / deg) << ',' << fmt(p / deg) << ','
                          << fmt(s.value) << ',' << fmt(s.envelope) << '\n';
            }
        return ok;
    }
    if (quantity == "sigma-multi")
    {
        auto const rho = parse_state(o.state.empty() ? "bell:psi+:lin"
                                                     : o.state);
        double const ta = angle_or_optimum(o.theta_a, k);
        double const tb = angle_or_optimum(o.theta_b, k);
        double const pa = parse_angle(o.phi_a);
        double const frame = parse_angle(o.frame_phi);
        auto const gd = parse_angle_grid(o.dphi.empty() ? "0:360" : o.dphi);
        std::cout << "dphi_deg,sigma\n";
        for (double d : gd.values)
        {
            TwoPhotonSetting s{k, k, ta, tb, pa, pa + d, frame};
            std::cout << fmt(d / deg) << ','
                      << fmt(sigma_two_photon(rho, s).value) << '\n';
        }
        return ok;
    }
    throw Error(ErrorCode::bad_spec, "unknown scan quantity " + quantity);
}

//---------------------------------------------------------------------------//
// WITNESS
//---------------------------------------------------------------------------//
json bounds_json(double sep_lo, double sep_hi, double ent_lo, double ent_hi)
{
    return {{"sep_lo", sep_lo},
            {"sep_hi", sep_hi},
            {"ent_lo", ent_lo},
            {"ent_hi", ent_hi}};
}

int run_witness(WitnessOptions const& o)
{
    if (o.state.empty())
    {
        throw Error(ErrorCode::bad_spec, "--state is required");
    }
    auto const rho = parse_state(o.state);
    double const k = parse_energy(o.energy);
    double const ta = angle_or_optimum(o.theta_a, k);
    double const tb = angle_or_optimum(o.theta_b, k);
    double const va = o.ideal ? 1.0 : visibility(k, ta);
    double const vb = o.ideal ? 1.0 : visibility(k, tb);

    json report;
    report["state"] = o.state;
    report["energy"] = k;
    report["energy_kev"] = k * kev_per_unit;
    report["theta_a_deg"] = ta / deg;
    report["theta_b_deg"] = tb / deg;
    report["visibility_a"] = va;
    report["visibility_b"] = vb;
    bool entangled = false;

    if (o.sic > 0)
    {
        std::size_t const m = o.sic;
        double value = sic_witness(rho, default_sic(), m, va, vb);
        if (o.optimize)
        {
            auto const r = sic_entangled_range(rho, m, va, vb, o.restarts,
                                               o.seed);
            report["range"] = {{"lo", r.lo}, {"hi", r.hi}};
        }
        auto const sep = sic_separable_range(m, va, vb, o.restarts, o.seed);
        report["witness"] = "sic";
        report["n_settings"] = m;
        report["value"] = value;
        report["bounds"] = {{"sep_lo", sep.lo}, {"sep_hi", sep.hi}};
        if (o.ideal || (va == 1 && vb == 1))
        {
            auto const tab = sic_separable_bounds(m);
            report["bounds"]["sep_lo"] = tab.lo;
            report["bounds"]["sep_hi"] = tab.hi;
        }
        if (m == 2)
        {
            report["notes"] = json::array(
                {"separable upper bound for 2 SIC states: product-state "
                 "optimization reaches ((1+sqrt3)/2)^2 = "
                     + fmt(sic_bounds::upper_m2_brute_force)
                     + "; the alternative value ((1+sqrt3)/3)^2 = "
                     + fmt(sic_bounds::upper_m2_text)
                     + " is exceeded by product states and is not used"});
        }
        double const lo = report["bounds"]["sep_lo"];
        double const hi = report["bounds"]["sep_hi"];
        entangled = value > hi + 1e-9 || value < lo - 1e-9;
    }
    else
    {
        ComptonWitnessOptions opts;
        opts.k_a = opts.k_b = k;
        opts.theta_a = ta;
        opts.theta_b = tb;
        opts.frame_phi = parse_angle(o.frame_phi);
        opts.enforce_bose = o.bose;
        opts.optimize = o.optimize;
        opts.n_restarts = o.restarts;
        opts.seed = o.seed;
        opts.m = o.m;
        opts.ideal = o.ideal;
        auto const r = mub_witness_compton(rho, opts);
        report["witness"] = "mub";
        report["n_settings"] = r.n_settings;
        report["value"] = r.value;
        report["params"] = r.params;
        report["visibility_product"] = r.visibility_product;
        report["bose"] = o.bose;
        report["optimized"] = o.optimize;
        report["bounds"] = bounds_json(r.sep_lo, r.sep_hi, r.ent_lo, r.ent_hi);
        if (o.separable)
        {
            report["separable_max"] = separable_mub_max(opts).value;
        }
        entangled = r.value > r.sep_hi + 1e-9;
    }
    std::string const verdict = entangled ? "ENTANGLED" : "INCONCLUSIVE";
    report["verdict"] = verdict;
    print_json(report);
    std::cerr << verdict << '\n';
    return ok;
}

//---------------------------------------------------------------------------//
// THRESHOLDS
//---------------------------------------------------------------------------//
int run_thresholds()
{
    auto const t = protocol_thresholds();
    auto residual = [](double k, double target) {
        double const v = max_visibility(k).value;
        return v * v - target;
    };
    json j;
    j["k_ent"] = t.k_ent;
    j["k_tel"] = t.k_tel;
    j["k_chsh"] = t.k_chsh;
    j["kev_ent"] = t.k_ent * kev_per_unit;
    j["kev_tel"] = t.k_tel * kev_per_unit;
    j["kev_chsh"] = t.k_chsh * kev_per_unit;
    j["residuals"] = {{"ent", residual(t.k_ent, 1.0 / 3)},
                      {"tel", residual(t.k_tel, 2.0 / 3)},
                      {"chsh", residual(t.k_chsh, 1 / std::sqrt(2.0))}};
    print_json(j);
    return ok;
}

//---------------------------------------------------------------------------//
// MONTE CARLO
//---------------------------------------------------------------------------//
RunConfig run_config(McOptions const& o)
{
    if (o.n < 1)
    {
        throw Error(ErrorCode::bad_config, "--n must be at least 1");
    }
    RunConfig cfg;
    cfg.state = o.state;
    cfg.k_a = cfg.k_b = parse_energy(o.energy);
    cfg.n_events = static_cast<std::size_t>(o.n);
    cfg.seed = o.seed;
    cfg.window_a = parse_window(o.window_a);
    cfg.window_b = parse_window(o.window_b);
    cfg.azimuth_bins = o.bins;
    cfg.frame_phi = parse_angle(o.frame_phi);
    cfg.enforce_bose = !o.no_bose;
    cfg.validate();
    return cfg;
}

json config_json(RunConfig const& c, double smear_deg)
{
    return {{"state", c.state},
            {"k_a", c.k_a},
            {"k_b", c.k_b},
            {"n_events", c.n_events},
            {"seed", c.seed},
            {"window_a", {c.window_a.lo, c.window_a.hi}},
            {"window_b", {c.window_b.lo, c.window_b.hi}},
            {"azimuth_bins", c.azimuth_bins},
            {"frame_phi", c.frame_phi},
            {"enforce_bose", c.enforce_bose},
            {"smear_deg", smear_deg}};
}

RunConfig config_from_json(json const& j)
{
    RunConfig c;
    c.state = j.value("state", c.state);
    c.k_a = j.value("k_a", c.k_a);
    c.k_b = j.value("k_b", c.k_b);
    c.n_events = j.value("n_events", c.n_events);
    c.seed = j.value("seed", c.seed);
    if (j.contains("window_a"))
        c.window_a = {j["window_a"][0], j["window_a"][1]};
    if (j.contains("window_b"))
        c.window_b = {j["window_b"][0], j["window_b"][1]};
    c.azimuth_bins = j.value("azimuth_bins", c.azimuth_bins);
    c.frame_phi = j.value("frame_phi", c.frame_phi);
    c.enforce_bose = j.value("enforce_bose", c.enforce_bose);
    return c;
}

int run_mc_generate(McOptions const& o)
{
    auto const cfg = run_config(o);
    auto events = sample_events(cfg);
    events = smear(std::move(events), o.smear_deg, cfg.seed);
    {
        std::ofstream os(o.out, std::ios::binary);
        if (!os)
        {
            throw Error(ErrorCode::bad_config, "cannot write " + o.out);
        }
        write_events_csv(os, events);
    }
    std::ofstream meta(o.out + ".json", std::ios::binary);
    meta << config_json(cfg, o.smear_deg).dump(2) << '\n';
    std::cerr << "wrote " << events.size() << " events to " << o.out << '\n';
    return ok;
}

int run_mc_analyze(McOptions const& o, std::set<std::string> const& given)
{
    std::ifstream is(o.events, std::ios::binary);
    if (!is)
    {
        throw Error(ErrorCode::bad_config, "cannot read " + o.events);
    }
    // Sidecar metadata first, explicit flags on top
    RunConfig cfg;
    std::ifstream meta(o.events + ".json");
    if (meta)
    {
        cfg = config_from_json(json::parse(meta));
    }
    if (given.count("state"))
        cfg.state = o.state;
    if (given.count("energy"))
        cfg.k_a = cfg.k_b = parse_energy(o.energy);
    if (given.count("theta-window-a"))
        cfg.window_a = parse_window(o.window_a);
    if (given.count("theta-window-b"))
        cfg.window_b = parse_window(o.window_b);
    if (given.count("bins"))
        cfg.azimuth_bins = o.bins;
    if (given.count("frame-phi"))
        cfg.frame_phi = parse_angle(o.frame_phi);
    if (given.count("no-bose"))
        cfg.enforce_bose = false;
    cfg.validate();

    auto const events = read_events_csv(is, cfg);
    auto const r = estimate_witness(events, cfg);
    json j;
    j["n_events"] = r.n_events;
    j["value"] = r.value;
    j["sigma"] = r.sigma;
    j["correlation"] = r.correlation;
    j["correlation_sigma"] = r.correlation_sigma;
    j["min_cell_count"] = r.min_cell_count;
    j["visibility_product"] = r.bounds.visibility_product;
    j["bounds"] = bounds_json(r.bounds.sep_lo, r.bounds.sep_hi,
                              r.bounds.ent_lo, r.bounds.ent_hi);
    j["expected"] = expected_estimate(parse_state(cfg.state), cfg);
    j["verdict"] = r.value - 3 * r.sigma > r.bounds.sep_hi ? "ENTANGLED"
                                                           : "INCONCLUSIVE";
    print_json(j);
    return ok;
}

//---------------------------------------------------------------------------//
// CONFIG FILE
//---------------------------------------------------------------------------//
/*!
 * Convert a JSON object into flag tokens; placed ahead of the user's flags
 * so that explicit flags win.
 */
std::vector<std::string> config_tokens(std::string const& path)
{
    std::ifstream is(path);
    if (!is)
    {
        throw Error(ErrorCode::bad_config, "cannot read config " + path);
    }
    json j;
    try
    {
        j = json::parse(is);
    }
    catch (json::exception const& e)
    {
        throw Error(ErrorCode::bad_config,
                    std::string("bad config JSON: ") + e.what());
    }
    if (!j.is_object())
    {
        throw Error(ErrorCode::bad_config, "config must be a JSON object");
    }
    std::vector<std::string> tokens;
    for (auto const& [key, value] : j.items())
    {
        std::string const flag = "--" + key;
        if (value.is_boolean())
        {
            if (value.get<bool>())
                tokens.push_back(flag);
        }
        else if (value.is_string())
        {
            tokens.push_back(flag);
            tokens.push_back(value.get<std::string>());
        }
        else if (value.is_number_integer())
        {
            tokens.push_back(flag);
            tokens.push_back(std::to_string(value.get<long long>()));
        }
        else if (value.is_number())
        {
            tokens.push_back(flag);
            tokens.push_back(fmt(value.get<double>()));
        }
        else
        {
            throw Error(ErrorCode::bad_config,
                        "unsupported config value for " + key);
        }
    }
    return tokens;
}

int main_impl(int argc, char** argv)
{
    // Pull out --config and splice its tokens after the subcommand path
    std::vector<std::string> args(argv + 1, argv + argc);
    std::optional<std::string> config_path;
    for (std::size_t i = 0; i < args.size(); ++i)
    {
        if (args[i] == "--config" && i + 1 < args.size())
        {
            config_path = args[i + 1];
            args.erase(args.begin() + i, args.begin() + i + 2);
            break;
        }
        if (args[i].rfind("--config=", 0) == 0)
        {
            config_path = args[i].substr(9);
            args.erase(args.begin() + i);
            break;
        }
    }
    if (config_path)
    {
        static std::set<std::string> const commands{
            "scan", "witness", "thresholds", "mc", "generate", "analyze",
            "visibility", "envelope", "sigma-single", "sigma-multi"};
        std::size_t pos = 0;
        while (pos < args.size() && commands.count(args[pos]))
            ++pos;
        auto tokens = config_tokens(*config_path);
        args.insert(args.begin() + pos, tokens.begin(), tokens.end());
    }

    CLI::App app{"Compton-scattering entanglement witnesses"};
    app.require_subcommand(1);
    app.option_defaults()->multi_option_policy(CLI::MultiOptionPolicy::TakeLast);
    std::string config_doc;
    app.add_option("--config", config_doc,
                   "JSON file of flag values (explicit flags win)");

    ScanOptions scan_opts;
    auto* scan = app.add_subcommand("scan", "Tabulate cross-section quantities");
    scan->require_subcommand(1);
    std::string scan_quantity;
    for (auto const* q :
         {"visibility", "envelope", "sigma-single", "sigma-multi"})
    {
        auto* sub = scan->add_subcommand(q);
        sub->add_option("--energy", scan_opts.energy,
                        "Incoming energy (units of 511 keV, or with keV)");
        sub->callback([&scan_quantity, q] { scan_quantity = q; });
        if (std::string(q) == "sigma-multi")
        {
            sub->add_option("--state", scan_opts.state, "Two-photon state");
            sub->add_option("--theta-a", scan_opts.theta_a,
                            "Scattering angle of photon a (default optimum)");
            sub->add_option("--theta-b", scan_opts.theta_b,
                            "Scattering angle of photon b (default optimum)");
            sub->add_option("--phi-a", scan_opts.phi_a, "Azimuth of photon a");
            sub->add_option("--dphi", scan_opts.dphi,
                            "Range of phi_b - phi_a, lo:hi[:step]");
            sub->add_option("--frame-phi", scan_opts.frame_phi);
        }
        else
        {
            sub->add_option("--theta", scan_opts.theta,
                            "Scattering angle or range lo:hi[:step][deg|rad]");
            if (std::string(q) == "sigma-single")
            {
                sub->add_option("--state", scan_opts.state,
                                "H, V, R, L, D, A or mixed");
                sub->add_option("--phi", scan_opts.phi,
                                "Azimuth or range relative to the frame");
            }
        }
    }

    WitnessOptions wit;
    auto* witness = app.add_subcommand("witness", "Evaluate a witness");
    witness->add_option("--state", wit.state, "Two-photon state")->required();
    witness->add_option("--energy", wit.energy);
    witness->add_option("--theta-a", wit.theta_a);
    witness->add_option("--theta-b", wit.theta_b);
    witness->add_option("--frame-phi", wit.frame_phi);
    witness->add_flag("--optimize", wit.optimize,
                      "Maximize over local unitaries");
    witness->add_flag("--bose", wit.bose, "Enforce Bose symmetry");
    witness->add_flag("--ideal", wit.ideal, "Unit visibility");
    witness->add_flag("--separable", wit.separable,
                      "Also report the separable optimum");
    witness->add_option("--sic", wit.sic, "Use m SIC states (1..4)")
        ->check(CLI::Range(1, 4));
    witness->add_option("--m", wit.m, "Number of MUBs (1..3)")
        ->check(CLI::Range(1, 3));
    witness->add_option("--restarts", wit.restarts)->check(CLI::Range(1, 100000));
    witness->add_option("--seed", wit.seed);

    auto* thresholds
        = app.add_subcommand("thresholds", "Energy thresholds of the protocols");

    McOptions mc_opts;
    auto* mc = app.add_subcommand("mc", "Monte Carlo event generation");
    mc->require_subcommand(1);
    auto* gen = mc->add_subcommand("generate", "Sample events to CSV");
    auto* ana = mc->add_subcommand("analyze", "Estimate I3 from events");
    for (auto* sub : {gen, ana})
    {
        sub->add_option("--state", mc_opts.state);
        sub->add_option("--energy", mc_opts.energy);
        sub->add_option("--theta-window-a", mc_opts.window_a, "lo:hi degrees");
        sub->add_option("--theta-window-b", mc_opts.window_b, "lo:hi degrees");
        sub->add_option("--bins", mc_opts.bins, "Azimuth bins")
            ->check(CLI::Range(4, 100000));
        sub->add_option("--frame-phi", mc_opts.frame_phi);
        sub->add_flag("--no-bose", mc_opts.no_bose);
    }
    gen->add_option("--n", mc_opts.n, "Number of events");
    gen->add_option("--seed", mc_opts.seed);
    gen->add_option("--smear", mc_opts.smear_deg,
                    "Gaussian angular resolution in degrees")
        ->check(CLI::NonNegativeNumber);
    gen->add_option("--out", mc_opts.out, "Event CSV path");
    ana->add_option("events", mc_opts.events, "Event CSV path")->required();

    std::vector<char const*> cargs{argv[0]};
    for (auto const& a : args)
        cargs.push_back(a.c_str());
    try
    {
        app.parse(static_cast<int>(cargs.size()), cargs.data());
    }
    catch (CLI::CallForHelp const& e)
    {
        return app.exit(e);
    }
    catch (CLI::CallForAllHelp const& e)
    {
        return app.exit(e);
    }
    catch (CLI::ParseError const& e)
    {
        app.exit(e);
        return usage;
    }

    if (scan->parsed())
        return run_scan(scan_quantity, scan_opts);
    if (witness->parsed())
        return run_witness(wit);
    if (thresholds->parsed())
        return run_thresholds();
    if (gen->parsed())
        return run_mc_generate(mc_opts);
    if (ana->parsed())
    {
        std::set<std::string> given;
        for (auto const* name : {"state", "energy", "theta-window-a",
                                 "theta-window-b", "bins", "frame-phi",
                                 "no-bose"})
        {
            if (ana->count(std::string("--") + name) > 0)
                given.insert(name);
        }
        return run_mc_analyze(mc_opts, given);
    }
    return usage;
}
}  // namespace
}  // namespace compton::cli

int main(int argc, char** argv)
{
    using compton::ErrorCode;
    try
    {
        return compton::cli::main_impl(argc, argv);
    }
    catch (compton::Error const& e)
    {
        std::cerr << "error: " << e.what() << '\n';
        return e.code() == ErrorCode::insufficient_statistics
                   ? compton::cli::statistical
                   : compton::cli::usage;
    }
    catch (nlohmann::json::exception const& e)
    {
        std::cerr << "error: " << e.what() << '\n';
        return compton::cli::usage;
    }
}
