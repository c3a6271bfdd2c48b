#include "hominv/report_json.hpp"

namespace hominv {

using nlohmann::json;

json vector_json(const Vector& v) {
    json a = json::array();
    for (Eigen::Index i = 0; i < v.size(); ++i) a.push_back(v[i]);
    return a;
}

void to_json(json& j, const Bracket& b) { j = json{{"r_lo", b.r_lo}, {"r_hi", b.r_hi}}; }

void to_json(json& j, const HypothesisReport& r) {
    j = json{
        {"n", r.n},
        {"kappa", r.kappa},
        {"c0_empirical", r.c0_empirical},
        {"c_empirical", r.C_empirical},
        {"c0_sampled", r.c0_sampled},
        {"c_sampled", r.C_sampled},
        {"c0_lower", r.c0_lower ? json(*r.c0_lower) : json(nullptr)},
        {"c0_lower_label", "heuristically certified (covering radius is estimated)"},
        {"lipschitz_bound", r.lipschitz_bound ? json(*r.lipschitz_bound) : json(nullptr)},
        {"covering_radius_estimate", r.covering_radius_estimate},
        {"min_abs_det_j", r.min_abs_det_j},
        {"homogeneity_residual", r.homogeneity_residual},
        {"n_verdict", r.n_verdict ? "pass" : "fail"},
        {"overall", to_string(r.overall)},
        {"reasons", r.reasons},
        {"sample_count", r.sample_count},
        {"sample_count_is_default", r.default_sample_count},
        {"seed", r.seed},
    };
}

void to_json(json& j, const Waypoint& w) {
    j = json{{"t", w.t}, {"gamma", vector_json(w.gamma)}, {"xi", vector_json(w.xi)}};
}

void to_json(json& j, const InversionResult& r) {
    j = json{
        {"xi", vector_json(r.xi)},
        {"residual", r.residual},
        {"steps", r.steps},
        {"newton_iters_total", r.newton_iters_total},
        {"bracket", r.bracket},
        {"seed_attempts_used", r.seed_attempts_used},
        {"forced", r.forced},
    };
    if (!r.path_waypoints.empty()) j["path_waypoints"] = r.path_waypoints;
}

void to_json(json& j, const Preimage& p) {
    j = json{{"xi", vector_json(p.xi)}, {"sign", p.sign}, {"det", p.det}, {"residual", p.residual}};
}

void to_json(json& j, const DegreeReport& d) {
    j = json{
        {"value", vector_json(d.value)},
        {"preimages", d.preimages},
        {"preimage_count", d.preimages.size()},
        {"degree", d.degree},
        {"injective_evidence", d.injective_evidence},
        {"regular_value", d.regular_value},
        {"possible_missed_roots", d.possible_missed_roots},
        {"starts", d.starts},
        {"recheck_starts", d.recheck_starts},
        {"note", d.note},
    };
}

void to_json(json& j, const InjectivityVerdict& v) {
    json targets = json::array();
    for (const auto& t : v.targets) targets.push_back(vector_json(t));
    j = json{{"consistent_with_injective", v.consistent_with_injective}, {"targets", targets}, {"counts", v.counts}};
}

} // namespace hominv
