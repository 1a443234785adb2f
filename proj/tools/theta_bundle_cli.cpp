// theta-bundle: batch driver exposing the verification suites with
// machine-readable output.
//
//   theta-bundle {theta|bundle|sections|embed|symplectic} verify [flags]
//
// Exit codes: 0 all checks passed, 1 at least one check failed, 2 usage or
// configuration error.  Reports are byte-identical for identical config,
// seed and thread count; wall time is emitted only with --timings.

#include <algorithm>
#include <chrono>
#include <complex>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "thetabundle/bundle_io.hpp"
#include "thetabundle/checks.hpp"

namespace {

using nlohmann::ordered_json;
using namespace thetabundle;

constexpr const char* kVersion = "theta-bundle 0.1.0";

struct OutputOptions {
    std::string out_path; // empty -> stdout
    std::string format = "json";
    bool timings = false;
};

// "i", "0.5i", "1+2i", "0.3-0.8i", "2"
cplx parse_complex(const std::string& text) {
    std::string s = text;
    s.erase(std::remove(s.begin(), s.end(), ' '), s.end());
    if (s.empty()) throw std::invalid_argument("empty complex literal");
    if (s.back() != 'i') return cplx(std::stod(s), 0.0);
    s.pop_back(); // "re+imi" or "imi"
    if (s.empty() || s == "+") return cplx(0.0, 1.0);
    if (s == "-") return cplx(0.0, -1.0);
    std::size_t split = std::string::npos;
    for (std::size_t i = s.size(); i-- > 1;) {
        if ((s[i] == '+' || s[i] == '-') && s[i - 1] != 'e' && s[i - 1] != 'E') {
            split = i;
            break;
        }
    }
    if (split == std::string::npos) return cplx(0.0, std::stod(s));
    std::string im = s.substr(split);
    if (im == "+" || im == "-") im += "1";
    return cplx(std::stod(s.substr(0, split)), std::stod(im));
}

std::string format_complex(cplx v) {
    std::ostringstream os;
    os << v.real() << (v.imag() < 0 ? "" : "+") << v.imag() << "i";
    return os.str();
}

void apply_config_file(const std::string& path, RunConfig& cfg, OutputOptions& out) {
    std::ifstream in(path);
    if (!in) throw std::invalid_argument("cannot open config file: " + path);
    nlohmann::json j;
    in >> j;
    if (j.contains("bundle")) cfg.bundle_spec = j["bundle"].get<std::string>();
    if (j.contains("k")) cfg.k = j["k"].get<int>();
    if (j.contains("tau")) cfg.tau = parse_complex(j["tau"].get<std::string>());
    if (j.contains("fd_step")) cfg.fd_step = j["fd_step"].get<double>();
    if (j.contains("closedness_step")) cfg.closedness_step = j["closedness_step"].get<double>();
    if (j.contains("grid")) cfg.grid = j["grid"].get<int>();
    if (j.contains("scan_grid")) cfg.scan_grid = j["scan_grid"].get<int>();
    if (j.contains("scan_interior")) cfg.scan_interior = j["scan_interior"].get<bool>();
    if (j.contains("rank_points")) cfg.rank_points = j["rank_points"].get<int>();
    if (j.contains("resolution")) cfg.resolution = j["resolution"].get<int>();
    if (j.contains("seed")) cfg.seed = j["seed"].get<std::uint64_t>();
    if (j.contains("target_abs_error"))
        cfg.policy.target_abs_error = j["target_abs_error"].get<double>();
    if (j.contains("max_terms")) cfg.policy.max_terms = j["max_terms"].get<int>();
    if (j.contains("tol"))
        for (const auto& [key, val] : j["tol"].items()) cfg.tol[key] = val.get<double>();
    if (j.contains("out")) out.out_path = j["out"].get<std::string>();
    if (j.contains("format")) out.format = j["format"].get<std::string>();
}

ordered_json config_json(const RunConfig& cfg) {
    ordered_json j;
    j["bundle"] = cfg.bundle_spec;
    j["k"] = cfg.k;
    j["tau"] = format_complex(cfg.tau);
    j["target_abs_error"] = cfg.policy.target_abs_error;
    j["max_terms"] = cfg.policy.max_terms;
    j["tamper_series_sign"] = cfg.policy.tamper_series_sign;
    j["fd_step"] = cfg.fd_step;
    j["closedness_step"] = cfg.closedness_step;
    j["grid"] = cfg.grid;
    j["scan_grid"] = cfg.scan_grid;
    j["scan_interior"] = cfg.scan_interior;
    j["rank_points"] = cfg.rank_points;
    j["resolution"] = cfg.resolution;
    j["seed"] = cfg.seed;
    ordered_json tols;
    for (const auto& [name, value] : default_tolerances()) {
        const auto it = cfg.tol.find(name);
        tols[name] = it != cfg.tol.end() ? it->second : value;
    }
    j["tol"] = tols;
    return j;
}

ordered_json report_json(const std::string& command, const RunConfig& cfg,
                         const SuiteReport& suite, double wall_ms, bool timings) {
    ordered_json j;
    j["command"] = command;
    j["version"] = kVersion;
    j["config"] = config_json(cfg);
    ordered_json checks = ordered_json::array();
    for (const auto& c : suite.checks) {
        ordered_json cj;
        cj["name"] = c.name;
        cj["passed"] = c.passed;
        cj["value"] = c.value;
        cj["tolerance"] = c.tolerance;
        cj["details"] = c.details;
        checks.push_back(cj);
    }
    j["checks"] = checks;
    j["verdict"] = suite.all_passed() ? "pass" : "fail";
    if (timings) j["wall_time_ms"] = wall_ms;
    return j;
}

void flatten_csv(const ordered_json& j, const std::string& prefix, std::ostream& os) {
    if (j.is_object()) {
        for (const auto& [key, val] : j.items())
            flatten_csv(val, prefix.empty() ? key : prefix + "." + key, os);
    } else if (j.is_array()) {
        std::size_t i = 0;
        for (const auto& val : j) flatten_csv(val, prefix + "." + std::to_string(i++), os);
    } else {
        std::string value = j.is_string() ? j.get<std::string>() : j.dump();
        if (value.find(',') != std::string::npos || value.find('"') != std::string::npos) {
            std::string quoted = "\"";
            for (char ch : value) {
                if (ch == '"') quoted += '"';
                quoted += ch;
            }
            quoted += '"';
            value = quoted;
        }
        os << prefix << "," << value << "\n";
    }
}

void emit(const ordered_json& report, const OutputOptions& out) {
    std::ostringstream body;
    if (out.format == "csv") {
        body << "key,value\n";
        flatten_csv(report, "", body);
    } else {
        body << report.dump(2) << "\n";
    }
    if (out.out_path.empty()) {
        std::cout << body.str();
    } else {
        std::ofstream f(out.out_path, std::ios::binary);
        if (!f) throw std::invalid_argument("cannot open output file: " + out.out_path);
        f << body.str();
    }
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"theta functions on T^2-bundles over T^2: verification driver"};
    app.require_subcommand(1);

    RunConfig cfg;
    OutputOptions out;
    std::string tau_text, bundle_a, bundle_b, config_path;
    bool tamper = false;

    // --config is applied before parsing so explicitly passed flags win
    for (int i = 1; i + 1 < argc; ++i)
        if (std::string(argv[i]) == "--config") config_path = argv[i + 1];
    if (!config_path.empty()) {
        try {
            apply_config_file(config_path, cfg, out);
        } catch (const std::exception& e) {
            std::cerr << "config error: " << e.what() << "\n";
            return 2;
        }
    }

    auto add_common = [&](CLI::App* sub) {
        std::string sink;
        sub->add_option("--config", sink, "JSON config file (flags win on conflict)");
        sub->add_option("--bundle", cfg.bundle_spec,
                        "bundle spec: tag[:k], inline JSON, or a JSON file path");
        sub->add_option("--A", bundle_a, "monodromy matrix A as [[a,b],[c,d]]");
        sub->add_option("--B", bundle_b, "monodromy matrix B as [[a,b],[c,d]]");
        sub->add_option("--k", cfg.k, "tensor power / section degree");
        sub->add_option("--tau", tau_text, "period for the theta suite, e.g. 0.3+0.8i");
        sub->add_option("--fd-step", cfg.fd_step, "central-difference step");
        sub->add_option("--closedness-step", cfg.closedness_step, "outer step for d(form)");
        sub->add_option("--grid", cfg.grid, "per-dimension grid for grid suites");
        sub->add_option("--scan-grid", cfg.scan_grid, "injectivity scan grid");
        sub->add_flag("--scan-interior", cfg.scan_interior, "offset scan grid to (j+1/2)/n");
        sub->add_option("--rank-points", cfg.rank_points, "points for the rank grid");
        sub->add_option("--resolution", cfg.resolution, "period quadrature resolution");
        sub->add_option("--seed", cfg.seed, "random seed");
        sub->add_option("--target-abs-error", cfg.policy.target_abs_error,
                        "series truncation target");
        sub->add_option("--max-terms", cfg.policy.max_terms, "series term budget");
        sub->add_flag("--tamper-series-sign", tamper,
                      "negative control: corrupt the series and expect failures");
        sub->add_option("--out", out.out_path, "output path (default stdout)");
        sub->add_option("--format", out.format, "json|csv")
            ->check(CLI::IsMember({"json", "csv"}));
        sub->add_flag("--timings", out.timings, "include wall time in the report");
        for (const auto& [name, unused] : default_tolerances()) {
            (void)unused;
            sub->add_option_function<double>(
                "--tol." + name, [&cfg, n = name](double v) { cfg.tol[n] = v; },
                "tolerance override");
        }
    };

    const std::vector<std::pair<std::string, SuiteReport (*)(const RunConfig&)>> suites = {
        {"theta", run_theta_suite},
        {"bundle", run_bundle_suite},
        {"sections", run_section_suite},
        {"embed", run_embed_suite},
        {"symplectic", run_symplectic_suite},
    };
    std::map<std::string, CLI::App*> verify_cmds;
    for (const auto& [name, fn] : suites) {
        (void)fn;
        CLI::App* sub = app.add_subcommand(name, name + " suite");
        sub->require_subcommand(1);
        add_common(sub->add_subcommand("verify", "run the " + name + " checks"));
        verify_cmds[name] = sub;
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e); // prints the message / help
        return code == 0 ? 0 : 2;
    }

    cfg.policy.tamper_series_sign = tamper;
    try {
        if (!tau_text.empty()) cfg.tau = parse_complex(tau_text);
        if (cfg.tau.imag() < cfg.tau_im_floor)
            throw std::invalid_argument(
                "Im(tau) = " + std::to_string(cfg.tau.imag()) + " is below the floor " +
                std::to_string(cfg.tau_im_floor) + " (the series term count blows up there)");
        if (!bundle_a.empty()) {
            const std::string bjson = bundle_b.empty() ? "[[1,0],[0,1]]" : bundle_b;
            cfg.bundle_spec = "{\"A\": " + bundle_a + ", \"B\": " + bjson + "}";
        }
        bundle_from_spec(cfg.bundle_spec); // validate against the table now
        if (cfg.k < 1 || cfg.grid < 1 || cfg.scan_grid < 1 || cfg.resolution < 2 ||
            cfg.rank_points < 1 || cfg.fd_step <= 0 || cfg.policy.target_abs_error <= 0 ||
            cfg.policy.max_terms < 1)
            throw std::invalid_argument("config values out of range");
    } catch (const std::exception& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    }

    for (const auto& [name, fn] : suites) {
        if (!verify_cmds[name]->parsed()) continue;
        try {
            const auto t0 = std::chrono::steady_clock::now();
            const SuiteReport suite = fn(cfg);
            const auto t1 = std::chrono::steady_clock::now();
            const double wall_ms = std::chrono::duration<double, std::milli>(t1 - t0).count();
            emit(report_json(name + " verify", cfg, suite, wall_ms, out.timings), out);
            for (const auto& c : suite.checks)
                if (!c.passed)
                    std::cerr << "[FAIL] " << c.name << ": value " << c.value
                              << " vs tolerance " << c.tolerance << "\n";
            return suite.all_passed() ? 0 : 1;
        } catch (const std::exception& e) {
            std::cerr << "error while running the " << name << " suite: " << e.what() << "\n";
            return 2;
        }
    }
    return 2;
}
