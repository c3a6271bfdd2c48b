#include "hominv/commands.hpp"

#include "hominv/degree.hpp"
#include "hominv/parser.hpp"
#include "hominv/report_json.hpp"

#include <charconv>
#include <chrono>
#include <cmath>
#include <random>
#include <sstream>

namespace hominv {

using nlohmann::json;

namespace {

class Stopwatch {
public:
    double lap_ms() {
        const auto now = std::chrono::steady_clock::now();
        const double ms = std::chrono::duration<double, std::milli>(now - last_).count();
        last_ = now;
        return ms;
    }

private:
    std::chrono::steady_clock::time_point last_ = std::chrono::steady_clock::now();
};

json error_json(const Error& e) {
    json j{{"kind", to_string(e.kind())}, {"message", e.what()}};
    if (const auto* pe = dynamic_cast<const ParseError*>(&e)) {
        j["line"] = pe->line();
        j["column"] = pe->column();
    }
    if (const auto* cf = dynamic_cast<const ContinuationFailure*>(&e)) j["last_waypoint"] = cf->last_waypoint();
    return j;
}

int exit_code_for(const Error& e) {
    switch (e.kind()) {
    case ErrorKind::Parse:
    case ErrorKind::InvalidInput:
    case ErrorKind::InvalidParameter: return kExitUsage;
    case ErrorKind::Precondition:
    case ErrorKind::NoBracket: return kExitRefused;
    default: return kExitNumerical;
    }
}

std::string fmt(double v) {
    std::ostringstream os;
    os.precision(6);
    os << v;
    return os.str();
}

std::string fmt(const Vector& v) {
    std::string s = "(";
    for (Eigen::Index i = 0; i < v.size(); ++i) s += (i ? ", " : "") + fmt(v[i]);
    return s + ")";
}

/// Shared parse + check phase for all commands.
struct Session {
    CommandOutcome out;
    Stopwatch clock;
    std::optional<MapSpec> map;
    HypothesisReport hypothesis;

    explicit Session(const char* command) {
        out.report = json{{"tool_version", kToolVersion},
                          {"command", command},
                          {"map_echo", nullptr},
                          {"hypothesis", nullptr},
                          {"inversions", json::array()},
                          {"degree", nullptr},
                          {"warnings", json::array()},
                          {"status", "ok"},
                          {"timing", json::object()}};
    }

    void fail(const Error& e) {
        out.exit_code = exit_code_for(e);
        out.report["status"] = "error";
        out.report["error"] = error_json(e);
        out.summary += std::string("error: ") + e.what() + "\n";
    }

    void refuse(const std::string& why) {
        out.exit_code = kExitRefused;
        out.report["status"] = "refused";
        out.report["error"] = json{{"kind", "precondition"}, {"message", why}};
        out.summary += "refused: " + why + "\n";
    }

    void warn(const std::string& w) {
        out.report["warnings"].push_back(w);
        out.summary += "warning: " + w + "\n";
    }

    bool load(std::string_view text, const CommandOptions& opts) {
        try {
            map = parse_map(text);
        } catch (const Error& e) {
            fail(e);
            return false;
        }
        out.report["map_echo"] = format_map(*map);
        out.report["timing"]["parse_ms"] = clock.lap_ms();

        hypothesis = check_hypotheses(*map, opts.samples, opts.seed);
        out.report["hypothesis"] = hypothesis;
        out.report["timing"]["check_ms"] = clock.lap_ms();

        const auto& h = hypothesis;
        out.summary += "map: n=" + std::to_string(h.n) + ", kappa=" + fmt(h.kappa) + "\n";
        out.summary += "sphere extrema: c0=" + fmt(h.c0_empirical) + ", C=" + fmt(h.C_empirical) +
                       ", min|det Df|=" + fmt(h.min_abs_det_j) + " (" + std::to_string(h.sample_count) +
                       " samples)\n";
        out.summary += "homogeneity residual: " + fmt(h.homogeneity_residual) + "\n";
        out.summary += std::string("verdict: ") + to_string(h.overall) + "\n";
        for (const auto& r : h.reasons) out.summary += "  - " + r + "\n";
        if (h.overall == Verdict::MetButLowDimension) warn("hypotheses-met-but-n<3");
        return true;
    }

    /// Commands that need an admissible map stop here unless forced.
    bool admit(const CommandOptions& opts) {
        if (hypothesis.overall == Verdict::Pass) return true;
        if (!opts.cfg.force) {
            refuse(std::string("hypotheses verdict is ") + to_string(hypothesis.overall) + "; rerun with --force");
            return false;
        }
        warn(std::string("forced: hypotheses verdict is ") + to_string(hypothesis.overall) +
             "; results carry no global-inverse guarantee");
        return true;
    }

    bool require_targets(const CommandOptions& opts) {
        if (!opts.targets.empty()) return true;
        fail(Error(ErrorKind::InvalidInput, "at least one --target is required"));
        return false;
    }
};

} // namespace

Vector parse_target(std::string_view text) {
    std::vector<double> values;
    std::size_t pos = 0;
    while (true) {
        const std::size_t comma = text.find(',', pos);
        std::string_view field = text.substr(pos, comma == std::string_view::npos ? std::string_view::npos : comma - pos);
        while (!field.empty() && field.front() == ' ') field.remove_prefix(1);
        while (!field.empty() && field.back() == ' ') field.remove_suffix(1);
        if (!field.empty() && field.front() == '+') field.remove_prefix(1);
        double v = 0.0;
        const auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(), v);
        if (field.empty() || ec != std::errc() || ptr != field.data() + field.size() || !std::isfinite(v)) {
            throw Error(ErrorKind::InvalidInput, "cannot parse target component '" + std::string(field) + "'");
        }
        values.push_back(v);
        if (comma == std::string_view::npos) break;
        pos = comma + 1;
    }
    return Eigen::Map<const Vector>(values.data(), static_cast<Eigen::Index>(values.size()));
}

CommandOutcome run_check(std::string_view map_text, const CommandOptions& opts) {
    Session s("check");
    if (!s.load(map_text, opts)) return std::move(s.out);
    if (s.hypothesis.overall == Verdict::Fail) {
        s.out.exit_code = kExitRefused;
        s.out.report["status"] = "hypotheses-failed";
    }
    return std::move(s.out);
}

CommandOutcome run_invert(std::string_view map_text, const CommandOptions& opts) {
    Session s("invert");
    if (!s.load(map_text, opts) || !s.require_targets(opts) || !s.admit(opts)) return std::move(s.out);
    try {
        const Inverter inv(*s.map, s.hypothesis, opts.cfg);
        for (const auto& eta : opts.targets) {
            const auto r = inv.invert(eta);
            s.out.report["inversions"].push_back(r);
            s.out.summary += "f^-1" + fmt(eta) + " = " + fmt(r.xi) + "  residual " + fmt(r.residual) + "\n";
        }
    } catch (const Error& e) {
        s.fail(e);
    }
    s.out.report["timing"]["invert_ms"] = s.clock.lap_ms();
    return std::move(s.out);
}

CommandOutcome run_degree(std::string_view map_text, const CommandOptions& opts) {
    Session s("degree");
    if (!s.load(map_text, opts) || !s.require_targets(opts) || !s.admit(opts)) return std::move(s.out);
    try {
        const int starts = opts.starts.value_or(default_starts(s.map->n()));
        const auto d = mapping_degree(*s.map, opts.targets.front(), starts, opts.cfg, s.hypothesis);
        s.out.report["degree"] = d;
        s.out.summary += "degree at " + fmt(d.value) + ": " + std::to_string(d.degree) + " (" +
                         std::to_string(d.preimages.size()) + " preimage(s))\n";
        for (const auto& p : d.preimages) {
            s.out.summary += "  " + fmt(p.xi) + "  sign " + std::to_string(p.sign) + "\n";
        }
        if (d.possible_missed_roots) s.warn("possible missed roots: start budgets disagree");
    } catch (const Error& e) {
        s.fail(e);
    }
    s.out.report["timing"]["degree_ms"] = s.clock.lap_ms();
    return std::move(s.out);
}

CommandOutcome run_roundtrip(std::string_view map_text, const CommandOptions& opts) {
    Session s("roundtrip");
    if (!s.load(map_text, opts) || !s.admit(opts)) return std::move(s.out);
    try {
        std::vector<Vector> etas = opts.targets;
        const auto dirs = sphere_points(s.map->n(), std::max<std::size_t>(opts.count, 1), opts.seed ^ 0xc2b2ae35u);
        std::mt19937_64 rng(opts.seed);
        std::uniform_real_distribution<double> exponent(-3.0, 3.0);
        for (std::size_t k = 0; k < opts.count; ++k) etas.push_back(std::pow(10.0, exponent(rng)) * dirs[k % dirs.size()]);

        const Inverter inv(*s.map, s.hypothesis, opts.cfg);
        double worst = 0.0;
        for (const auto& eta : etas) {
            const double a = eta.norm();
            if (a == 0.0) continue;
            const auto r = inv.invert(eta);
            worst = std::max(worst, (eval_map(*s.map, r.xi) - eta).norm() / a);
        }
        s.out.report["roundtrip"] = json{{"targets", etas.size()}, {"max_relative_residual", worst}};
        s.out.summary += "roundtrip over " + std::to_string(etas.size()) + " targets: max |f(f^-1(eta)) - eta|/|eta| = " +
                         fmt(worst) + "\n";
    } catch (const Error& e) {
        s.fail(e);
    }
    s.out.report["timing"]["roundtrip_ms"] = s.clock.lap_ms();
    return std::move(s.out);
}

json without_timing(json report) {
    report.erase("timing");
    return report;
}

} // namespace hominv
