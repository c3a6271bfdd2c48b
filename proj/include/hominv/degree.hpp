#pragma once

#include "hominv/hypotheses.hpp"
#include "hominv/inverter.hpp"
#include "hominv/map.hpp"

#include <cstdint>
#include <vector>

namespace hominv {

struct Preimage {
    Vector xi;
    int sign = 0;        ///< sign of det Df(xi)
    double det = 0.0;
    double residual = 0.0;
};

/// Default multistart budget 64 * n.
int default_starts(std::size_t n);

/// All distinct roots of f(xi) = eta reached by damped Newton from `starts`
/// Halton-distributed points in the annulus r_lo <= |xi| <= r_hi (a start
/// whose Newton iteration stalls is lifted along the origin-avoiding path
/// instead). Roots closer than 1e-6 * r_hi are merged; the output is sorted
/// lexicographically. n = 2 is allowed. Throws Error(Precondition) for failed
/// reports unless cfg.force, Error(NoBracket) when c0 is not positive.
std::vector<Preimage> count_preimages(const MapSpec& m, const Vector& eta, int starts, const ContinuationConfig& cfg,
                                      const HypothesisReport& report);

struct DegreeReport {
    Vector value;
    std::vector<Preimage> preimages;
    int degree = 0;
    bool injective_evidence = false;
    bool regular_value = true;
    bool possible_missed_roots = false;
    int starts = 0;
    int recheck_starts = 0;
    std::string note;
};

/// Signed preimage count at eta. The root search is repeated with 4x the
/// starts; disagreement sets possible_missed_roots and the larger root set
/// is kept.
DegreeReport mapping_degree(const MapSpec& m, const Vector& eta, int starts, const ContinuationConfig& cfg,
                            const HypothesisReport& report);

struct InjectivityVerdict {
    bool consistent_with_injective = true;
    std::vector<Vector> targets;
    std::vector<std::size_t> counts;
};

/// count_preimages at `trials` seeded random targets with |eta| in [0.1, 10].
InjectivityVerdict injectivity_probe(const MapSpec& m, int trials, int starts, const ContinuationConfig& cfg,
                                     const HypothesisReport& report, std::uint64_t seed = 1);

} // namespace hominv
