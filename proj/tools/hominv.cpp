#include "hominv/commands.hpp"
#include "hominv/error.hpp"

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <sstream>

namespace {

struct Args {
    std::string map_path;
    std::string json_path;
    std::uint64_t seed = 1;
    std::size_t samples = 0;
    double tol = 1e-10;
    bool force = false;
    bool trace = false;
    std::vector<std::string> targets;
    int starts = 0;
    std::size_t count = 100;
};

void add_common(CLI::App* cmd, Args& a) {
    cmd->add_option("map", a.map_path, "map definition file")->required();
    cmd->add_option("--json", a.json_path, "write the JSON report to a file, or '-' for standard output");
    cmd->add_option("--seed", a.seed, "sampling seed");
    cmd->add_option("--samples", a.samples, "sphere sample count (default 10000*n)");
    cmd->add_option("--tol", a.tol, "target residual for inversion");
    cmd->add_flag("--force", a.force, "run even when the hypotheses are not met");
    cmd->add_flag("--trace", a.trace, "include continuation waypoints");
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Invert positively homogeneous maps of R^n"};
    app.require_subcommand(1);
    Args a;

    auto* check = app.add_subcommand("check", "check the invertibility hypotheses on the unit sphere");
    add_common(check, a);
    auto* invert = app.add_subcommand("invert", "compute f^-1 at one or more targets");
    add_common(invert, a);
    invert->add_option("--target", a.targets, "comma-separated target, e.g. 0,8,0 (repeatable)")->required();
    auto* degree = app.add_subcommand("degree", "count preimages and the mapping degree at a target");
    add_common(degree, a);
    degree->add_option("--target", a.targets, "comma-separated target")->required();
    degree->add_option("--starts", a.starts, "multistart budget (default 64*n)");
    auto* roundtrip = app.add_subcommand("roundtrip", "invert seeded random targets and report max residual");
    add_common(roundtrip, a);
    roundtrip->add_option("--count", a.count, "number of random targets");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : hominv::kExitUsage;
    }

    std::ifstream in(a.map_path);
    if (!in) {
        std::cerr << "error: cannot read " << a.map_path << "\n";
        return hominv::kExitUsage;
    }
    std::ostringstream text;
    text << in.rdbuf();

    hominv::CommandOptions opts;
    opts.seed = a.seed;
    if (a.samples > 0) opts.samples = a.samples;
    opts.cfg.tol = a.tol;
    opts.cfg.force = a.force;
    opts.cfg.trace = a.trace;
    opts.count = a.count;
    if (a.starts > 0) opts.starts = a.starts;

    hominv::CommandOutcome out;
    try {
        hominv::validate(opts.cfg);
        for (const auto& t : a.targets) opts.targets.push_back(hominv::parse_target(t));
    } catch (const hominv::Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return hominv::kExitUsage;
    }

    if (check->parsed()) out = hominv::run_check(text.str(), opts);
    else if (invert->parsed()) out = hominv::run_invert(text.str(), opts);
    else if (degree->parsed()) out = hominv::run_degree(text.str(), opts);
    else out = hominv::run_roundtrip(text.str(), opts);

    std::ostream& human = a.json_path == "-" ? std::cerr : std::cout;
    if (out.report.contains("error") && out.report["error"].contains("line")) human << a.map_path << ": ";
    human << out.summary;
    if (a.json_path == "-") {
        std::cout << out.report.dump(2) << "\n";
    } else if (!a.json_path.empty()) {
        std::ofstream js(a.json_path);
        if (!js) {
            std::cerr << "error: cannot write " << a.json_path << "\n";
            return hominv::kExitUsage;
        }
        js << out.report.dump(2) << "\n";
    }
    return out.exit_code;
}
