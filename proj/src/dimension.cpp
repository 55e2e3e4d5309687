#include "dioph/dimension.hpp"

#include <algorithm>
#include <set>

#include "dioph/errors.hpp"

namespace dioph {

namespace {

// Closed-box index range [i_min, i_max] of boxes [i*r, (i+1)*r] meeting the
// closed segment [a, b].
void axis_range(const mpq_class& a, const mpq_class& b, const mpq_class& r, mpz_class& i_min,
                mpz_class& i_max) {
    mpq_class qa = a / r;
    qa.canonicalize();
    i_min = floor_q(qa);
    if (qa.get_den() == 1) i_min -= 1; // tangent on the left face
    mpq_class qb = b / r;
    i_max = floor_q(qb);
}

} // namespace

mpz_class box_count_at(const CantorTree& tree, const mpq_class& r) {
    if (tree.levels.empty()) throw DomainError("empty tree");
    const size_t J = tree.levels.size() - 1;
    if (r > tree.levels[0].radius.hi || r < tree.levels[J].radius.lo)
        throw ScaleWindow("mesh outside the tree's scale window");
    const size_t n = tree.n();
    const mpz_class M = ceil_q(mpq_class(1) / r); // boxes per axis on the torus
    if (mpz_sizeinbase(M.get_mpz_t(), 2) > 62) throw ScaleExceeded("mesh too fine to index");
    const mpq_class R = tree.levels[J].radius.hi + pow2q(-66);

    std::set<std::vector<long>> boxes;
    std::vector<std::vector<long>> per_axis(n);
    for (const Ball& b : tree.levels[J].balls) {
        size_t total = 1;
        for (size_t i = 0; i < n; ++i) {
            mpz_class lo, hi;
            axis_range(b.center[i] - R, b.center[i] + R, r, lo, hi);
            per_axis[i].clear();
            if (hi - lo + 1 >= M) {
                if (!M.fits_slong_p() || mpz_get_si(M.get_mpz_t()) > 1000000)
                    throw ScaleExceeded("ball covers too many boxes on one axis");
                for (long k = 0; k < mpz_get_si(M.get_mpz_t()); ++k) per_axis[i].push_back(k);
            } else {
                for (mpz_class k = lo; k <= hi; ++k) {
                    mpz_class red = k % M;
                    if (red < 0) red += M;
                    per_axis[i].push_back(mpz_get_si(red.get_mpz_t()));
                }
            }
            total *= per_axis[i].size();
            if (total > 100000000) throw ScaleExceeded("box enumeration too large");
        }
        std::vector<size_t> idx(n, 0);
        for (;;) {
            std::vector<long> tup(n);
            for (size_t i = 0; i < n; ++i) tup[i] = per_axis[i][idx[i]];
            boxes.insert(std::move(tup));
            size_t d = 0;
            while (d < n && ++idx[d] == per_axis[d].size()) idx[d++] = 0;
            if (d == n) break;
        }
    }
    return mpz_class(static_cast<unsigned long>(boxes.size()));
}

std::vector<BoxSample> box_count(const CantorTree& tree, const std::vector<mpq_class>& r_grid) {
    std::vector<BoxSample> out;
    out.reserve(r_grid.size());
    for (const mpq_class& r : r_grid) out.push_back({r, box_count_at(tree, r)});
    return out;
}

std::vector<mpq_class> default_r_grid(const CantorTree& tree, size_t points) {
    if (points < 2) throw DomainError("grid needs at least 2 points");
    if (tree.levels.empty()) throw DomainError("empty tree");
    const size_t J = tree.levels.size() - 1;
    long L0 = 0;
    while (pow2q(-L0) > tree.levels[0].radius.lo) {
        if (++L0 > 1000000) throw ScaleExceeded("root radius too small for a dyadic grid");
    }
    long LJ = L0;
    while (pow2q(-LJ - 1) >= tree.levels[J].radius.hi) {
        if (++LJ > 1000000) throw ScaleExceeded("deepest radius too small for a dyadic grid");
    }
    std::vector<mpq_class> grid;
    for (size_t i = 0; i < points; ++i) {
        long e = L0 + static_cast<long>((static_cast<long long>(i) * (LJ - L0)) /
                                        static_cast<long long>(points - 1));
        mpq_class r = pow2q(-e);
        if (grid.empty() || r != grid.back()) grid.push_back(r);
    }
    return grid;
}

DimensionReport dim_estimate(const CantorTree& tree, const std::vector<BoxSample>& samples) {
    if (samples.size() < 4)
        throw InsufficientData("dimension fit needs at least 4 scale points, got " +
                               std::to_string(samples.size()));
    const size_t K = samples.size();
    std::vector<Interval> xs, ys;
    xs.reserve(K);
    ys.reserve(K);
    for (const BoxSample& s : samples) {
        if (s.r <= 0 || s.count < 1) throw DomainError("invalid scale sample");
        xs.push_back(ilog(Interval(mpq_class(1) / s.r), 96));
        ys.push_back(ilog(Interval(mpq_class(s.count)), 96));
    }
    Interval Sx(mpq_class(0)), Sy(mpq_class(0)), Sxy(mpq_class(0)), Sxx(mpq_class(0));
    for (size_t i = 0; i < K; ++i) {
        Sx = Sx + xs[i];
        Sy = Sy + ys[i];
        Sxy = Sxy + xs[i] * ys[i];
        Sxx = Sxx + xs[i] * xs[i];
    }
    const Interval Kq(mpq_class(static_cast<unsigned long>(K)));
    Interval D = Kq * Sxx - Sx * Sx;
    if (D.contains_zero()) throw InsufficientData("scale points too close for a stable fit");
    DimensionReport rep;
    rep.samples = samples;
    rep.slope = (Kq * Sxy - Sx * Sy) / D;
    Interval intercept = (Sy - rep.slope * Sx) / Kq;
    mpq_class sm = rep.slope.mid(), im = intercept.mid();
    rep.confidence = 0;
    for (size_t i = 0; i < K; ++i) {
        mpq_class res = ys[i].mid() - (sm * xs[i].mid() + im);
        rep.residuals.push_back(res);
        mpq_class a = abs(res);
        if (a > rep.confidence) rep.confidence = a;
    }
    const size_t J = tree.levels.size() - 1;
    rep.window = "[" + dec_lower(tree.levels[J].radius.lo) + ", " +
                 dec_upper(tree.levels[0].radius.hi) + "]";
    return rep;
}

CantorTree make_dust(unsigned J) {
    if (J < 1) throw DomainError("dust needs at least one subdivision level");
    CantorTree t;
    t.config.v = 1;
    t.config.s = mpq_class(1, 2);
    t.config.J = J;
    t.config.mode = TreeMode::Relaxed;
    t.target = TargetVector::parse("1/2");
    for (unsigned j = 0; j <= J; ++j) {
        LevelRecord lv;
        lv.j = j;
        lv.k = j;
        lv.q = mpz_class(1) << (2 * j + 1);
        lv.N = (j == 0) ? 1 : 2;
        mpq_class r = pow2q(-static_cast<long>(2 * j + 1));
        lv.radius = Interval(r);
        if (j == 0) {
            Ball b;
            b.center = {mpq_class(1, 2)};
            b.q_witness = 1;
            b.parent = -1;
            lv.balls.push_back(std::move(b));
        } else {
            const auto& prev = t.levels[j - 1].balls;
            // slightly under 3r so ball boundaries never align with dyadic
            // box edges (alignment double-counts tangent boxes)
            mpq_class d = 3 * r * mpq_class(1023, 1024);
            for (size_t pi = 0; pi < prev.size(); ++pi)
                for (int sgn2 = -1; sgn2 <= 1; sgn2 += 2) {
                    Ball b;
                    mpq_class c = prev[pi].center[0] + sgn2 * d;
                    c -= floor_q(c);
                    b.center = {c};
                    b.q_witness = 1;
                    b.parent = static_cast<long>(pi);
                    lv.balls.push_back(std::move(b));
                }
        }
        t.levels.push_back(std::move(lv));
    }
    t.anomalies.push_back("synthetic self-similar fixture; witnesses are placeholders");
    return t;
}

MassBound mass_lower_bound(const Interval& c_emp, const mpq_class& s, const mpq_class& v,
                           unsigned n) {
    if (s <= 0) throw DomainError("s must be positive");
    if (v <= 0) throw DomainError("v must be positive");
    MassBound mb;
    mb.c_emp = c_emp;
    mb.lower = s;
    mpq_class inv = mpq_class(1) / v;
    mb.upper = std::min(mpq_class(static_cast<long>(n)), inv);
    mb.statement = "sampled mass ratios stay below " + dec_upper(c_emp.hi) +
                   "; by the mass distribution principle the sampled scales support dimension >= " +
                   rat_str(s) + ", with ambient ceiling min(n, 1/v) = " + rat_str(mb.upper);
    return mb;
}

} // namespace dioph
