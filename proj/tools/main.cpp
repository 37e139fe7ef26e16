#include <cstdlib>
#include <iostream>
#include <set>
#include <string>

#include <spdlog/sinks/stdout_color_sinks.h>
#include <spdlog/spdlog.h>

#include "CLI11.hpp"
#include "commands.hpp"
#include "errors.hpp"

namespace {

void setup_logging() {
    auto logger = spdlog::stderr_color_mt("trapspec");
    spdlog::set_default_logger(logger);
    spdlog::set_pattern("trapspec: %l: %v");
    spdlog::set_level(spdlog::level::warn);
    if (const char* env = std::getenv("TRAPSPEC_LOG")) {
        auto lvl = spdlog::level::from_str(env);
        // from_str maps unknown names to off; only accept real level names
        if (lvl != spdlog::level::off || std::string(env) == "off") spdlog::set_level(lvl);
    }
}

}  // namespace

int main(int argc, char** argv) {
    setup_logging();
    using tsc::Exit;

    CLI::App app{"trapspec: trapped-atom photoassociation spectra"};
    app.name("trapspec");
    app.require_subcommand(1);
    app.fallthrough();

    tsc::Options opt;
    std::string out, format = "csv";
    app.add_option("--config", opt.config, "JSON run configuration");
    app.add_option("--out", out, "output directory (default: stdout; sweep: current directory)");
    app.add_option("--jobs", opt.jobs, "worker threads")->check(CLI::Range(1, 1024));
    app.add_option("--format", format, "csv or json")->check(CLI::IsMember({"csv", "json"}));

    std::string curve = "initial";
    auto* solve = app.add_subcommand("solve", "trapped vibrational states");
    solve->add_option("--curve", curve, "initial or final")->check(CLI::IsMember({"initial", "final"}));
    auto* spectrum = app.add_subcommand("spectrum", "photoassociation spectra per trap frequency");
    auto* scatlen = app.add_subcommand("scatlen", "scattering length by the box method (optionally mass-tuned)");
    scatlen->add_option("--curve", curve, "initial or final")->check(CLI::IsMember({"initial", "final"}));
    std::vector<double> xi;
    int count = 0;
    auto* pseudo = app.add_subcommand("pseudo", "contact-interaction roots, series and f_c");
    pseudo->add_option("--xi", xi, "a / a_ho values");
    pseudo->add_option("--count", count, "roots per xi")->check(CLI::Range(1, 100000));
    std::string spec_file, ref_file, kind = "f";
    auto* compare = app.add_subcommand("compare", "f^v or g^v from two spectrum CSV files");
    compare->add_option("spectrum", spec_file, "spectrum CSV")->required();
    compare->add_option("reference", ref_file, "reference spectrum CSV")->required();
    compare->add_option("--kind", kind, "f or g")->check(CLI::IsMember({"f", "g"}));
    auto* sweep = app.add_subcommand("sweep", "g_c over a trap-frequency x mass-factor grid (resumable)");

    const std::set<std::string> commands{"solve", "spectrum", "scatlen", "pseudo", "compare", "sweep"};
    const std::set<std::string> valued{"--config", "--out", "--jobs", "--format"};
    bool known = false;
    for (int i = 1; i < argc; ++i) {
        std::string a = argv[i];
        if (a == "-h" || a == "--help") known = true;
        if (valued.count(a)) {
            ++i;
            continue;
        }
        if (a.rfind("-", 0) == 0) continue;
        known = known || commands.count(a);
        break;
    }
    if (!known) {
        std::cerr << (argc > 1 ? "trapspec: unknown command\n" : "") << app.help();
        return static_cast<int>(Exit::usage);
    }
    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        std::cerr << "trapspec: " << e.what() << "\n" << app.help();
        return static_cast<int>(Exit::usage);
    }
    if (!out.empty()) opt.out = out;
    opt.format = format == "json" ? tsc::Format::json : tsc::Format::csv;

    try {
        if (*solve) return tsc::cmd_solve(opt, curve);
        if (*spectrum) return tsc::cmd_spectrum(opt);
        if (*scatlen) return tsc::cmd_scatlen(opt, curve);
        if (*pseudo) return tsc::cmd_pseudo(opt, xi, count);
        if (*compare) return tsc::cmd_compare(opt, spec_file, ref_file, kind);
        if (*sweep) return tsc::cmd_sweep(opt);
    } catch (const tsc::CliError& e) {
        spdlog::error("{}", e.what());
        return static_cast<int>(e.code);
    } catch (const std::exception& e) {
        spdlog::error("{}", e.what());
        return static_cast<int>(Exit::numeric);
    }
    std::cerr << app.help();
    return static_cast<int>(Exit::usage);
}
