#pragma once

#include <gmpxx.h>
#include <optional>
#include <string>
#include <vector>

#include "dioph/cantor.hpp"
#include "dioph/interval.hpp"

namespace dioph {

struct BoxSample {
    mpq_class r;     // mesh size
    mpz_class count; // occupied torus boxes, exact
};

// Occupied boxes of the mesh-r torus grid touching the deepest-level ball
// union. Closed boxes: tangency counts on both sides. r must lie inside the
// tree's scale window [r_J, r_0].
mpz_class box_count_at(const CantorTree& tree, const mpq_class& r);
std::vector<BoxSample> box_count(const CantorTree& tree, const std::vector<mpq_class>& r_grid);

// Dyadic mesh grid 2^-e, exponents spread evenly across the scale window,
// duplicates removed; descending in r.
std::vector<mpq_class> default_r_grid(const CantorTree& tree, size_t points);

struct DimensionReport {
    std::vector<BoxSample> samples;
    Interval slope;                   // least-squares slope of log N against log(1/r)
    mpq_class confidence;             // max |residual| at interval midpoints
    std::vector<mpq_class> residuals; // per sample, midpoints
    std::string window;               // decimal rendering of [r_J, r_0]
    std::optional<Interval> c_emp;    // attached by callers that also sampled the measure
};

// Interval least squares over (log(1/r), log N). Needs >= 4 samples.
DimensionReport dim_estimate(const CantorTree& tree, const std::vector<BoxSample>& samples);

// Self-similar fixture: 2 children per step at ratio 1/4 in n = 1, so the
// count slope is exactly log 2 / log 4 = 1/2. Radii and centers are dyadic
// and exact. Only meant for feeding the estimators.
CantorTree make_dust(unsigned J);

struct MassBound {
    Interval c_emp;
    mpq_class lower;  // the s carried by the sampled measure
    mpq_class upper;  // ambient ceiling min(n, 1/v)
    std::string statement;
};

// Bookkeeping for the sampled mass-distribution argument: finite c_emp at
// parameter s supports dimension >= s at the sampled scales, capped above by
// min(n, 1/v). Evidence record, not a proof object.
MassBound mass_lower_bound(const Interval& c_emp, const mpq_class& s, const mpq_class& v,
                           unsigned n);

} // namespace dioph
