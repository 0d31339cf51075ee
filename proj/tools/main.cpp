#include <CLI11.hpp>

#include <algorithm>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <optional>
#include <sstream>
#include <iostream>
#include <map>

#include "config.hpp"
#include "output.hpp"
#include "rhlab/error.hpp"
#include "run.hpp"

using rhlab::cli::json;

namespace {

// "a.b.c=value": value is parsed as JSON when possible, else kept as a string.
void apply_override(json& params, const std::string& assignment) {
    const auto eq = assignment.find('=');
    if (eq == std::string::npos || eq == 0) throw rhlab::DomainError("--set expects key=value, got \"" + assignment + "\"");
    const std::string key = assignment.substr(0, eq);
    const std::string text = assignment.substr(eq + 1);
    json value = json::parse(text, nullptr, false);
    if (value.is_discarded()) value = text;
    json* node = &params;
    std::size_t start = 0;
    for (std::size_t dot = key.find('.'); dot != std::string::npos; dot = key.find('.', start)) {
        node = &(*node)[key.substr(start, dot - start)];
        if (!node->is_object()) *node = json::object();
        start = dot + 1;
    }
    (*node)[key.substr(start)] = value;
}

struct Common {
    std::string params_file;
    std::vector<std::string> overrides;
};

void add_common(CLI::App* cmd, Common& c) {
    cmd->add_option("-p,--params", c.params_file, "JSON file with the command parameters")->check(CLI::ExistingFile);
    cmd->add_option("-s,--set", c.overrides, "Override one parameter, e.g. --set basis.cutoff=8");
}

// A JSON document given inline, as a file path, or (for models) as a preset name.
json document_arg(const std::string& text, bool preset_fallback) {
    if (!text.empty() && (text.front() == '{' || text.front() == '[')) {
        json j = json::parse(text, nullptr, false);
        if (j.is_discarded()) throw rhlab::DomainError("inline JSON does not parse: " + text);
        return j;
    }
    std::error_code ec;
    if (std::filesystem::is_regular_file(text, ec)) return rhlab::cli::read_json_file(text);
    if (preset_fallback) return json{{"preset", text}};
    throw rhlab::DomainError("no such file: " + text);
}

// Every number in a CSV or whitespace-separated file; headers and '#' lines are skipped.
std::vector<double> numbers_in(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw rhlab::DomainError("cannot open " + path);
    std::vector<double> out;
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty() || line[0] == '#') continue;
        std::replace(line.begin(), line.end(), ',', ' ');
        std::istringstream ls(line);
        std::string tok;
        while (ls >> tok) {
            char* end = nullptr;
            const double v = std::strtod(tok.c_str(), &end);
            if (end != tok.c_str() && *end == '\0') out.push_back(v);
        }
    }
    return out;
}

json load_params(const Common& c) {
    json p = c.params_file.empty() ? json::object() : rhlab::cli::read_json_file(c.params_file);
    if (!p.is_object()) throw rhlab::DomainError("parameter file must hold a JSON object");
    for (const auto& o : c.overrides) apply_override(p, o);
    return p;
}

int execute(const rhlab::cli::RunConfig& config) {
    const rhlab::cli::RunBundle bundle = rhlab::cli::run(config);
    if (!config.out_dir.empty()) {
        rhlab::cli::write_bundle(bundle, config.out_dir);
        for (const auto& line : bundle.log) std::cerr << line << "\n";
        std::cerr << "wrote " << bundle.files.size() + 2 << " files to " << config.out_dir << "\n";
        return 0;
    }
    // Without an output directory the primary table goes to stdout.
    const auto primary = std::find_if(bundle.files.begin(), bundle.files.end(),
                                      [](const auto& f) { return f.first.ends_with(".csv"); });
    const auto& shown = primary != bundle.files.end() ? *primary : bundle.files.front();
    std::cout << shown.second;
    for (const auto& line : bundle.log) std::cerr << line << "\n";
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Quantum Rabi-Hubbard chain simulator"};
    app.require_subcommand(1);
    app.fallthrough();
    app.set_version_flag("--version", rhlab::cli::artifact_version());

    std::uint64_t seed = 0;
    std::string out_dir;
    app.add_option("--seed", seed, "Random seed (Lanczos start vector, shot sampling)");
    app.add_option("-o,--out", out_dir, "Directory for the artifact bundle; stdout when omitted");

    // Flags shared by several subcommands write into one parameter document.
    json flags = json::object();
    std::string model_arg;
    auto model_flag = [&](CLI::App* c) {
        c->add_option("-m,--model", model_arg, "Model: JSON file, inline JSON or preset name (e.g. dynamics-N4)");
    };
    auto number_flag = [&](CLI::App* c, const std::string& name, const std::string& key, const std::string& help) {
        c->add_option_function<double>(name, [&flags, key](double v) { flags[key] = v; }, help);
    };
    auto text_flag = [&](CLI::App* c, const std::string& name, const std::string& key, const std::string& help) {
        c->add_option_function<std::string>(name, [&flags, key](const std::string& v) { flags[key] = v; }, help);
    };
    auto int_flag = [&](CLI::App* c, const std::string& name, const std::string& key, const std::string& help) {
        c->add_option_function<long>(name, [&flags, key](long v) { flags[key] = v; }, help);
    };
    auto basis_flags = [&](CLI::App* c) {
        c->add_option_function<int>("--cutoff", [&flags](int v) { flags["basis"]["cutoff"] = v; }, "Phonon cutoff per mode");
        c->add_option_function<std::string>(
            "--sector", [&flags](const std::string& v) { flags["basis"]["sector"] = v; }, "even, odd, full or auto");
        c->add_option_function<std::string>(
            "--representation", [&flags](const std::string& v) { flags["basis"]["representation"] = v; },
            "local or collective");
    };

    std::map<std::string, Common> common;
    std::map<std::string, CLI::App*> cmd;
    auto sub = [&](const std::string& name, const std::string& help) {
        cmd[name] = app.add_subcommand(name, help);
        add_common(cmd[name], common[name]);
        return cmd[name];
    };

    std::string chain_arg;
    CLI::App* chain = sub("chain", "Local frequencies, hoppings and normal modes of an ion chain");
    chain->add_option("--chain", chain_arg, "Chain: JSON file or inline JSON");

    std::string spectrum_file, init_file;
    std::optional<double> trap_freq;
    bool symmetric = false, asymmetric = false;
    CLI::App* cal = sub("calibrate", "Fit inter-ion spacings to a measured mode spectrum");
    cal->add_option("--spectrum", spectrum_file, "Measured mode frequencies (MHz), one per row")->check(CLI::ExistingFile);
    cal->add_option("--trap-freq", trap_freq, "Trap frequency (MHz); defaults to the top measured mode");
    cal->add_flag("--symmetric", symmetric, "Fit mirror-symmetric spacings");
    cal->add_flag("--asymmetric", asymmetric, "Fit every spacing independently");
    cal->add_option("--init", init_file, "Initial spacings (um), one per row")->check(CLI::ExistingFile);

    CLI::App* mf = sub("meanfield", "Mean-field order parameter versus coupling");
    model_flag(mf);
    text_flag(mf, "--g-scan", "g_scan", "start:stop:step in kHz");

    CLI::App* ground = sub("ground", "Ground state by Lanczos in a truncated Fock basis");
    model_flag(ground);
    number_flag(ground, "-g,--g", "g", "Coupling (kHz)");
    text_flag(ground, "--g-scan", "g_scan", "start:stop:step in kHz");
    text_flag(ground, "--g-scan-over-gc", "g_scan_over_gc", "start:stop:step in units of the mean-field g_c");
    basis_flags(ground);

    CLI::App* dyn = sub("dynamics", "Quench from a product state at fixed coupling");
    model_flag(dyn);
    number_flag(dyn, "-g,--g", "g", "Coupling (kHz)");
    number_flag(dyn, "--t-max", "t_max_us", "Duration (us)");
    number_flag(dyn, "--dt", "dt_us", "Sampling interval (us)");
    text_flag(dyn, "--initial", "initial", "up or down");
    basis_flags(dyn);

    CLI::App* quench = sub("quench", "Time-dependent coupling ramp");
    model_flag(quench);
    number_flag(quench, "--gmax", "g_max", "Final coupling (kHz)");
    number_flag(quench, "--tau", "tau_ms", "Ramp time constant (ms)");
    number_flag(quench, "--duration", "duration_ms", "Forward ramp duration (ms)");
    quench->add_flag_function("--reverse", [&flags](std::int64_t) { flags["reverse"] = true; }, "Append the time-reversed ramp");
    quench->add_flag_function("--adiabaticity", [&flags](std::int64_t) { flags["adiabaticity"] = true; },
                              "Track fidelity to the instantaneous ground state");
    basis_flags(quench);

    CLI::App* hp = sub("hp", "Linearized (Holstein-Primakoff) dynamics and stability");
    model_flag(hp);
    number_flag(hp, "-g,--g", "g", "Coupling (kHz)");
    number_flag(hp, "--t-max", "t_max_us", "Duration (us)");
    number_flag(hp, "--dt", "dt_us", "Sampling interval (us)");
    text_flag(hp, "--stability-scan", "stability_scan", "g0:g1:n in kHz");

    CLI::App* est = sub("estimate", "Hilbert-space size and suggested phonon cutoffs");
    model_flag(est);
    number_flag(est, "-g,--g", "g", "Coupling (kHz)");
    int_flag(est, "-n,--n-ions", "n_ions", "Number of ions");
    int_flag(est, "--cutoff", "cutoff", "Uniform phonon cutoff");

    std::string trajectory;
    std::vector<int> pair;
    double time_us = -1.0;
    CLI::App* measure = sub("measure", "Phase-scanned correlation with detection errors");
    measure->add_option("--trajectory", trajectory, "trajectory.csv from a dynamics run")->check(CLI::ExistingFile);
    measure->add_option("--pair", pair, "Ion pair, e.g. --pair 1,2")->expected(2)->delimiter(',');
    measure->add_option("--time", time_us, "Sample time in us (default: last sample)");
    int_flag(measure, "--phases", "phases", "Number of analysis phases in [0, pi)");
    int_flag(measure, "--shots", "shots", "Shots per phase; 0 uses the exact distribution");
    number_flag(measure, "--eps-c", "eps_c", "Nearest-neighbor crosstalk");
    number_flag(measure, "--eps-0", "eps_0", "Single-ion detection error");

    std::string figure;
    CLI::App* repro = app.add_subcommand("reproduce", "Desk-scale analogue of a published figure");
    repro->add_option("figure", figure, "Figure id")->required();

    std::string config_file;
    CLI::App* rerun = app.add_subcommand("run", "Re-run a saved config.json");
    rerun->add_option("-c,--config", config_file, "Saved run configuration")->required()->check(CLI::ExistingFile);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? 0 : static_cast<int>(rhlab::ExitCode::config_error);
    }

    try {
        rhlab::cli::RunConfig config;
        config.seed = seed;
        config.out_dir = out_dir;
        if (rerun->parsed()) {
            const rhlab::cli::RunConfig saved = rhlab::cli::RunConfig::from_json(rhlab::cli::read_json_file(config_file));
            config.command = saved.command;
            config.params = saved.params;
            if (app.count("--seed") == 0) config.seed = saved.seed;
            if (out_dir.empty()) config.out_dir = saved.out_dir;
            return execute(config);
        }
        if (repro->parsed()) {
            config.command = "reproduce";
            config.params = json{{"figure", figure}};
            return execute(config);
        }
        for (const auto& [name, c] : cmd)
            if (c->parsed()) config.command = name;
        json& p = config.params;
        p = load_params(common.at(config.command));
        p.merge_patch(flags);
        if (!model_arg.empty()) p["model"] = document_arg(model_arg, true);
        if (!chain_arg.empty()) p["chain"] = document_arg(chain_arg, false);
        if (config.command == "calibrate") {
            json& s = p["spectrum"];
            if (!spectrum_file.empty()) s["measured_modes"] = numbers_in(spectrum_file);
            if (trap_freq) s["trap_freq"] = *trap_freq;
            if (symmetric && asymmetric) throw rhlab::DomainError("--symmetric and --asymmetric exclude each other");
            if (symmetric || asymmetric) s["symmetric"] = symmetric;
            if (!init_file.empty()) s["initial_um"] = numbers_in(init_file);
        }
        if (config.command == "measure") {
            if (!pair.empty()) p["pair"] = pair;
            if (!trajectory.empty()) {
                const auto ij = p.value("pair", std::vector<int>{0, 1});
                if (ij.size() != 2) throw rhlab::DomainError("\"pair\" must list two ions");
                p["trajectory_file"] = trajectory;
                p["moments"] = rhlab::cli::moments_from_trajectory(trajectory, ij[0], ij[1], time_us);
            }
        }
        return execute(config);
    } catch (const rhlab::Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return static_cast<int>(e.code());
    } catch (const json::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return static_cast<int>(rhlab::ExitCode::config_error);
    } catch (const std::bad_alloc&) {
        std::cerr << "error: out of memory\n";
        return static_cast<int>(rhlab::ExitCode::resource_guard);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}
