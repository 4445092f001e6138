// Command-line front end: diagonalize the spin model, run phase-space
// evolutions, tabulate the semiclassical potential, and render grid files
// as PGM heatmaps. Every output file embeds a digest of the parameter set
// that produced it, and identical configs produce byte-identical outputs.

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <numbers>
#include <stdexcept>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "spinphase/spinphase.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using nlohmann::ordered_json;
using namespace spinphase;

namespace {

// Bad user input (flags, config file, state selection). Exits with code 2;
// everything else that throws exits with code 3.
struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct StateSpec {
    std::string type = "doublet";
    int n0 = 0;       // sharp_angle
    int i = 0;        // doublet / eigenstate
    int j = 1;        // doublet
    int sign = +1;    // doublet
    std::vector<double> raw;  // raw: interleaved re,im pairs
};

struct RunConfig {
    Fe8Params params;
    EvolutionConfig evo;
    int snapshot_every = 5;
    StateSpec state;

    // Canonical key=value string in fixed order; the digest of this string
    // stamps every output file.
    std::string canonical() const {
        auto d = [](double x) { return detail::format_double(x); };
        std::string s;
        s += "j=" + std::to_string(params.j);
        s += ";d=" + d(params.d_anis);
        s += ";e=" + d(params.e_anis);
        s += ";g=" + d(params.g_factor);
        s += ";mu=" + d(params.mu_b_over_kb);
        s += ";hpar=" + d(params.h_par);
        s += ";hperp=" + d(params.h_perp);
        s += ";alpha=" + d(params.alpha);
        s += ";dt=" + d(evo.dt);
        s += ";steps=" + std::to_string(evo.steps);
        s += ";snap=" + std::to_string(snapshot_every);
        s += ";state=" + state.type;
        if (state.type == "doublet")
            s += "(" + std::to_string(state.i) + "," + std::to_string(state.j) + "," +
                 std::to_string(state.sign) + ")";
        else if (state.type == "sharp_angle")
            s += "(" + std::to_string(state.n0) + ")";
        else if (state.type == "eigenstate")
            s += "(" + std::to_string(state.i) + ")";
        else if (state.type == "raw") {
            s += "(";
            for (std::size_t k = 0; k < state.raw.size(); ++k) {
                if (k) s += ",";
                s += d(state.raw[k]);
            }
            s += ")";
        }
        return s;
    }

    std::string digest() const { return params_digest(canonical()); }
};

void reject_unknown_keys(const json& obj, const std::vector<std::string>& allowed,
                         const char* where) {
    for (const auto& item : obj.items())
        if (std::find(allowed.begin(), allowed.end(), item.key()) == allowed.end())
            throw ConfigError(std::string(where) + ": unknown key '" + item.key() + "'");
}

RunConfig load_config(const std::string& path) {
    std::ifstream is(path);
    if (!is) throw ConfigError("cannot open config file: " + path);
    json doc;
    try {
        is >> doc;
    } catch (const std::exception& e) {
        throw ConfigError(std::string("config is not valid JSON: ") + e.what());
    }
    if (!doc.is_object()) throw ConfigError("config root must be a JSON object");
    reject_unknown_keys(doc,
                        {"j", "d_anis", "e_anis", "g_factor", "mu_b_over_kb", "h_par",
                         "h_perp", "alpha", "dt", "steps", "snapshot_every", "initial_state"},
                        "config");

    RunConfig cfg;
    auto take_double = [&](const json& obj, const char* key, double& dst) {
        if (!obj.contains(key)) return;
        if (!obj[key].is_number()) throw ConfigError(std::string(key) + " must be a number");
        dst = obj[key].get<double>();
    };
    auto take_int = [&](const json& obj, const char* key, int& dst) {
        if (!obj.contains(key)) return;
        if (!obj[key].is_number_integer())
            throw ConfigError(std::string(key) + " must be an integer");
        dst = obj[key].get<int>();
    };

    take_int(doc, "j", cfg.params.j);
    take_double(doc, "d_anis", cfg.params.d_anis);
    take_double(doc, "e_anis", cfg.params.e_anis);
    take_double(doc, "g_factor", cfg.params.g_factor);
    take_double(doc, "mu_b_over_kb", cfg.params.mu_b_over_kb);
    take_double(doc, "h_par", cfg.params.h_par);
    take_double(doc, "h_perp", cfg.params.h_perp);
    take_double(doc, "alpha", cfg.params.alpha);
    take_double(doc, "dt", cfg.evo.dt);
    take_int(doc, "steps", cfg.evo.steps);
    take_int(doc, "snapshot_every", cfg.snapshot_every);

    if (doc.contains("initial_state")) {
        const json& st = doc["initial_state"];
        if (!st.is_object()) throw ConfigError("initial_state must be an object");
        if (st.contains("type")) {
            if (!st["type"].is_string()) throw ConfigError("initial_state.type must be a string");
            cfg.state.type = st["type"].get<std::string>();
        }
        if (cfg.state.type == "doublet") {
            reject_unknown_keys(st, {"type", "i", "j", "sign"}, "initial_state");
            take_int(st, "i", cfg.state.i);
            take_int(st, "j", cfg.state.j);
            take_int(st, "sign", cfg.state.sign);
        } else if (cfg.state.type == "sharp_angle") {
            reject_unknown_keys(st, {"type", "n0"}, "initial_state");
            take_int(st, "n0", cfg.state.n0);
        } else if (cfg.state.type == "eigenstate") {
            reject_unknown_keys(st, {"type", "i"}, "initial_state");
            take_int(st, "i", cfg.state.i);
        } else if (cfg.state.type == "raw") {
            reject_unknown_keys(st, {"type", "amps"}, "initial_state");
            if (!st.contains("amps") || !st["amps"].is_array())
                throw ConfigError("initial_state.amps must be an array of re,im pairs");
            for (const json& v : st["amps"]) {
                if (!v.is_number()) throw ConfigError("initial_state.amps entries must be numbers");
                cfg.state.raw.push_back(v.get<double>());
            }
        } else {
            throw ConfigError("initial_state.type must be one of doublet, sharp_angle, "
                              "eigenstate, raw");
        }
    }

    try {
        cfg.params.validate();
        cfg.evo.validate();
    } catch (const std::invalid_argument& e) {
        throw ConfigError(e.what());
    }
    if (cfg.snapshot_every < 1) throw ConfigError("snapshot_every must be at least 1");
    if (cfg.state.type == "raw") {
        const std::size_t want = 2 * std::size_t(cfg.params.dim().n_dim);
        if (cfg.state.raw.size() != want)
            throw ConfigError("initial_state.amps must hold " + std::to_string(want) +
                              " numbers (re,im per basis state)");
    }
    return cfg;
}

StateVector make_state(const RunConfig& cfg, const SpectrumResult& spec) {
    try {
        if (cfg.state.type == "sharp_angle")
            return sharp_angle_state(cfg.params.dim(), cfg.state.n0);
        if (cfg.state.type == "eigenstate") return spec.state(cfg.state.i);
        if (cfg.state.type == "raw") {
            Eigen::VectorXcd amps(cfg.params.dim().n_dim);
            for (int k = 0; k < amps.size(); ++k)
                amps(k) = complexd(cfg.state.raw[2 * k], cfg.state.raw[2 * k + 1]);
            const double norm = amps.norm();
            if (std::abs(norm - 1.0) > 1e-8)
                throw ConfigError("initial_state.amps is not normalized");
            return StateVector{cfg.params.dim(), amps / norm};
        }
        return doublet_combination(spec, cfg.state.i, cfg.state.j, cfg.state.sign);
    } catch (const std::invalid_argument& e) {
        throw ConfigError(e.what());
    }
}

std::ofstream open_out(const fs::path& path) {
    std::ofstream os(path, std::ios::binary);
    if (!os) throw std::runtime_error("cannot open output file: " + path.string());
    return os;
}

void run_spectrum(const std::string& config_path, const std::string& out_dir) {
    const RunConfig cfg = load_config(config_path);
    const SpectrumResult spec = diagonalize(build_hamiltonian(cfg.params));
    fs::create_directories(out_dir);
    const fs::path csv = fs::path(out_dir) / "spectrum.csv";
    {
        std::ofstream os = open_out(csv);
        os << "# params=" << cfg.digest() << "\n";
        os << "index,energy_kelvin,gap_to_previous_kelvin\n";
        for (int i = 0; i < spec.eigenvalues.size(); ++i) {
            const double gap = i ? spec.eigenvalues(i) - spec.eigenvalues(i - 1) : 0.0;
            os << i << "," << detail::format_double(spec.eigenvalues(i)) << ","
               << detail::format_double(gap) << "\n";
        }
    }
    std::cout << "wrote " << csv.string() << " (" << spec.eigenvalues.size() << " levels)\n";
    std::cout << "E1 - E0 = " << detail::format_double(spec.eigenvalues(1) - spec.eigenvalues(0))
              << " K\n";
}

void run_potential(const std::string& config_path, const std::string& out_dir, int samples) {
    const RunConfig cfg = load_config(config_path);
    if (samples < 2) throw ConfigError("--samples must be at least 2");
    fs::create_directories(out_dir);
    const fs::path csv = fs::path(out_dir) / "potential.csv";
    std::ofstream os = open_out(csv);
    os << "# params=" << cfg.digest() << "\n";
    os << "theta,potential_kelvin\n";
    const double pi = std::numbers::pi;
    for (int i = 0; i < samples; ++i) {
        const double theta = -pi + 2.0 * pi * i / (samples - 1);
        os << detail::format_double(theta) << ","
           << detail::format_double(potential(theta, cfg.params)) << "\n";
    }
    std::cout << "wrote " << csv.string() << " (" << samples << " samples)\n";
}

std::string snapshot_name(const char* prefix, int index) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%s_%03d.csv", prefix, index);
    return buf;
}

void run_evolve(const std::string& config_path, const std::string& out_dir,
                const std::vector<int>& snapshot_list, bool snapshots_given,
                const std::string& emit) {
    const RunConfig cfg = load_config(config_path);

    std::vector<int> snaps;
    if (snapshots_given) {
        snaps = snapshot_list;
        for (int idx : snaps)
            if (idx < 0 || idx > cfg.evo.steps)
                throw ConfigError("--snapshots index " + std::to_string(idx) +
                                  " outside [0, steps]");
        std::sort(snaps.begin(), snaps.end());
        snaps.erase(std::unique(snaps.begin(), snaps.end()), snaps.end());
    } else {
        for (int idx = 0; idx <= cfg.evo.steps; idx += cfg.snapshot_every) snaps.push_back(idx);
    }

    const OperatorMatrix h = build_hamiltonian(cfg.params);
    const SpectrumResult spec = diagonalize(h);
    const KernelCache& cache = kernel_cache(cfg.params.dim());
    const StateVector psi0 = make_state(cfg, spec);
    const PhaseGrid w0 = wigner_from_state(psi0);

    std::vector<PhaseGrid> series;
    if (cfg.evo.steps > 0) {
        const Superoperator sup = build_liouvillian(h, cache);
        series = propagate_series(w0, sup, cfg.evo);
    } else {
        series.push_back(w0);
    }

    std::vector<double> times;
    std::vector<PhaseGrid> smoothed;
    for (std::size_t i = 0; i < series.size(); ++i) {
        times.push_back(double(i) * cfg.evo.dt);
        smoothed.push_back(husimi_from_wigner(series[i], cache));
    }

    fs::create_directories(out_dir);
    const std::string dig = cfg.digest();
    const fs::path dir(out_dir);

    for (int idx : snaps) {
        if (emit == "wigner" || emit == "both")
            write_grid_file((dir / snapshot_name("wigner", idx)).string(), series[idx],
                            times[idx], dig);
        if (emit == "husimi" || emit == "both")
            write_grid_file((dir / snapshot_name("husimi", idx)).string(), smoothed[idx],
                            times[idx], dig);
    }
    std::cout << "wrote " << snaps.size() << " snapshot(s) to " << dir.string() << "\n";

    // A zero-step run is just the initial snapshot; there is no series to
    // summarize.
    if (cfg.evo.steps == 0) return;

    TimeSeries corr;
    for (std::size_t i = 0; i < series.size(); ++i) {
        corr.times.push_back(times[i]);
        corr.values.push_back(correlation(series[0], series[i]));
    }
    {
        std::ofstream os = open_out(dir / "correlation.csv");
        os << "# params=" << dig << "\n";
        os << "t,correlation\n";
        for (std::size_t i = 0; i < corr.size(); ++i)
            os << detail::format_double(corr.times[i]) << ","
               << detail::format_double(corr.values[i]) << "\n";
    }

    const EntropyTrace trace = entropy_trace(smoothed, times);
    {
        std::ofstream os = open_out(dir / "entropy.csv");
        os << "# params=" << dig << "\n";
        os << "t,s_husimi,s_momentum,s_angle,mutual\n";
        for (const EntropyRecord& r : trace.records)
            os << detail::format_double(r.time) << "," << detail::format_double(r.s_husimi)
               << "," << detail::format_double(r.s_momentum) << ","
               << detail::format_double(r.s_angle) << "," << detail::format_double(r.mutual)
               << "\n";
    }

    // The summary compares the recurrence frequency of the overlap series
    // against the exact level splitting from the diagonalization.
    const double ref_gap = spec.eigenvalues(1) - spec.eigenvalues(0);
    ordered_json summary;
    try {
        const double tau = extract_period(corr, SeriesKind::correlation);
        const double gap = gap_from_period(tau);
        summary["period_internal"] = tau;
        summary["gap_kelvin"] = gap;
        summary["gap_reference_kelvin"] = ref_gap;
        summary["deviation_percent"] = 100.0 * std::abs(gap - ref_gap) / ref_gap;
    } catch (const std::exception& e) {
        summary["period_internal"] = nullptr;
        summary["gap_kelvin"] = nullptr;
        summary["gap_reference_kelvin"] = ref_gap;
        summary["deviation_percent"] = nullptr;
        summary["note"] = e.what();
    }
    summary["params"] = dig;
    {
        std::ofstream os = open_out(dir / "summary.json");
        os << summary.dump(2) << "\n";
    }
    std::cout << "wrote " << (dir / "summary.json").string() << "\n";
}

void run_heatmap(const std::string& in_path, const std::string& out_path) {
    const GridFile gf = read_grid_file(in_path);
    const fs::path parent = fs::path(out_path).parent_path();
    if (!parent.empty()) fs::create_directories(parent);
    write_pgm_file(out_path, gf.grid, gf.digest);
    std::cout << "wrote " << out_path << "\n";
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Discrete phase-space toolkit for a spin-10 double-well magnet"};
    app.require_subcommand(1);

    std::string config_path, out_dir, in_path, out_path;
    std::string emit = "both";
    std::vector<int> snapshot_list;
    int samples = 181;

    CLI::App* spectrum = app.add_subcommand("spectrum", "Diagonalize the model and write the level table");
    spectrum->add_option("--config", config_path, "JSON parameter file")->required();
    spectrum->add_option("--out", out_dir, "output directory")->required();

    CLI::App* evolve = app.add_subcommand("evolve", "Propagate a state and write snapshots, series, and a summary");
    evolve->add_option("--config", config_path, "JSON parameter file")->required();
    evolve->add_option("--out", out_dir, "output directory")->required();
    CLI::Option* snap_opt =
        evolve->add_option("--snapshots", snapshot_list, "comma-separated step indices to snapshot")
            ->delimiter(',');
    evolve->add_option("--emit", emit, "which grids to write: wigner, husimi, or both")
        ->check(CLI::IsMember({"wigner", "husimi", "both"}));

    CLI::App* potential_cmd = app.add_subcommand("potential", "Tabulate the semiclassical double-well potential");
    potential_cmd->add_option("--config", config_path, "JSON parameter file")->required();
    potential_cmd->add_option("--out", out_dir, "output directory")->required();
    potential_cmd->add_option("--samples", samples, "number of uniform angle samples in [-pi, pi]");

    CLI::App* heatmap = app.add_subcommand("heatmap", "Render a grid file as an 8-bit PGM image");
    heatmap->add_option("--in", in_path, "grid CSV produced by evolve")->required();
    heatmap->add_option("--out", out_path, "PGM file to write")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        if (spectrum->parsed()) {
            run_spectrum(config_path, out_dir);
        } else if (evolve->parsed()) {
            run_evolve(config_path, out_dir, snapshot_list, snap_opt->count() > 0, emit);
        } else if (potential_cmd->parsed()) {
            run_potential(config_path, out_dir, samples);
        } else if (heatmap->parsed()) {
            run_heatmap(in_path, out_path);
        }
        return 0;
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    }
}
