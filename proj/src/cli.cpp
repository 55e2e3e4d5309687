#include "dioph/cli.hpp"

#include <chrono>
#include <filesystem>
#include <optional>
#include <ostream>

#include <CLI11.hpp>

#include "dioph/bestapprox.hpp"
#include "dioph/cantor.hpp"
#include "dioph/dimension.hpp"
#include "dioph/errors.hpp"
#include "dioph/exponents.hpp"
#include "dioph/json_io.hpp"
#include "dioph/lattice.hpp"
#include "dioph/numeric.hpp"
#include "dioph/rng.hpp"
#include "dioph/sha256.hpp"

namespace dioph::cli {

namespace {

using json_io::ordered_json;

mpz_class parse_z(const std::string& s, const char* what) {
    try {
        if (s.empty()) throw std::invalid_argument("empty");
        return mpz_class(s);
    } catch (const std::invalid_argument&) {
        throw UsageError(std::string("invalid integer for ") + what + ": '" + s + "'");
    }
}

std::vector<mpz_class> parse_z_list(const std::string& s, const char* what) {
    std::vector<mpz_class> out;
    size_t pos = 0;
    while (pos <= s.size()) {
        size_t comma = s.find(',', pos);
        if (comma == std::string::npos) comma = s.size();
        out.push_back(parse_z(s.substr(pos, comma - pos), what));
        pos = comma + 1;
    }
    return out;
}

// Fixed-point rendering with 18 fractional digits, truncated toward minus
// infinity. Keeps CSV log columns float-free and bit-stable.
std::string fixed18(const mpq_class& x) {
    mpz_class scale;
    mpz_ui_pow_ui(scale.get_mpz_t(), 10, 18);
    mpz_class f = floor_q(x * mpq_class(scale));
    bool neg = f < 0;
    mpz_class a = abs(f);
    std::string digits = a.get_str();
    if (digits.size() <= 18) digits.insert(0, 19 - digits.size(), '0');
    digits.insert(digits.size() - 18, ".");
    return neg ? "-" + digits : digits;
}

struct Ctx {
    std::ostream* out;
    std::ostream* err;
    std::vector<std::string> argv;
    std::chrono::steady_clock::time_point t0;

    long long wall_ms() const {
        return std::chrono::duration_cast<std::chrono::milliseconds>(
                   std::chrono::steady_clock::now() - t0)
            .count();
    }
};

void write_run_record(const Ctx& c, const std::string& command, const ordered_json& config,
                      std::optional<std::uint64_t> seed,
                      const std::vector<std::string>& outputs,
                      const std::vector<std::string>& anomalies, const std::string& run_path) {
    ordered_json j;
    j["artifact_version"] = json_io::kArtifactVersion;
    j["command"] = command;
    j["argv"] = c.argv;
    j["config"] = config;
    if (seed) j["seed"] = *seed;
    j["wall_ms"] = c.wall_ms();
    ordered_json outs = ordered_json::array();
    for (const std::string& p : outputs)
        outs.push_back(ordered_json{{"path", p}, {"sha256", sha256_file(p)}});
    j["outputs"] = std::move(outs);
    j["anomalies"] = anomalies;
    json_io::write_file(run_path, json_io::dump(j));
}

// Single-artifact commands: stdout when no --out, else file + run record.
void emit(const Ctx& c, const std::string& command, const ordered_json& config,
          std::optional<std::uint64_t> seed, const ordered_json& content,
          const std::string& out_path, const std::vector<std::string>& anomalies) {
    std::string bytes = json_io::dump(content);
    if (out_path.empty()) {
        *c.out << bytes;
        return;
    }
    json_io::write_file(out_path, bytes);
    write_run_record(c, command, config, seed, {out_path}, anomalies, out_path + ".run.json");
}

std::string dims_csv_text(const std::vector<BoxSample>& samples) {
    std::string csv = "r,N,logN,log_inv_r\n";
    for (const BoxSample& s : samples) {
        Interval logN = ilog(Interval(mpq_class(s.count)), 96);
        Interval logr = ilog(Interval(mpq_class(1) / s.r), 96);
        csv += dec_lower(s.r) + "," + s.count.get_str() + "," + fixed18(logN.mid()) + "," +
               fixed18(logr.mid()) + "\n";
    }
    return csv;
}

std::string est_csv_text(const ExponentEstimate& e) {
    std::string csv = "scale,ratio_lo,ratio_hi\n";
    for (const ExponentSample& s : e.samples)
        csv += s.scale.get_str() + "," + dec_lower(s.ratio.lo) + "," + dec_upper(s.ratio.hi) + "\n";
    return csv;
}

std::vector<TargetVector> seeded_betas(size_t n, size_t count, std::uint64_t seed) {
    Rng rng(seed);
    std::vector<TargetVector> betas;
    for (size_t i = 0; i < count; ++i) {
        std::string csv;
        for (size_t cidx = 0; cidx < n; ++cidx) {
            if (cidx) csv += ",";
            csv += rat_str(rng.dyadic(20));
        }
        betas.push_back(TargetVector::parse(csv));
    }
    return betas;
}

ordered_json verify_all_json(const CantorTree& tree, size_t samples, std::uint64_t seed,
                             Interval* c_emp_out) {
    MembershipReport mem = verify_membership(tree);
    StructureReport str = verify_structure(tree);
    MassMeasure M{&tree};
    Lemma2Report l2 = verify_lemma2(tree, M, samples, seed);
    MassBound mb = mass_lower_bound(l2.c_emp, tree.config.s, tree.config.v,
                                    static_cast<unsigned>(tree.n()));
    if (c_emp_out) *c_emp_out = l2.c_emp;
    ordered_json j;
    j["artifact_version"] = json_io::kArtifactVersion;
    j["membership"] = json_io::membership_to_json(mem);
    j["structure"] = json_io::structure_to_json(str);
    j["lemma2"] = json_io::lemma2_to_json(l2);
    j["mass_bound"] = json_io::massbound_to_json(mb);
    j["tree_anomalies"] = tree.anomalies;
    return j;
}

} // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    Ctx ctx{&out, &err, args, std::chrono::steady_clock::now()};

    CLI::App app{"certified Diophantine approximation toolkit"};
    app.name("dioph");
    app.require_subcommand(1);
    bool error_json = false;
    app.add_flag("--error-json", error_json, "report failures as JSON on stdout");

    // bestapprox
    struct {
        std::string alpha, qmax, outp;
        bool audit = false;
    } ba;
    {
        CLI::App* sc = app.add_subcommand("bestapprox", "certified best-approximation scan");
        sc->add_option("--alpha", ba.alpha, "target components, comma separated")->required();
        sc->add_option("--qmax", ba.qmax, "scan bound")->required();
        sc->add_option("--out", ba.outp, "output JSON path (stdout when absent)");
        sc->add_flag("--audit", ba.audit, "re-verify the defining property exhaustively");
        sc->callback([&]() {
            TargetVector A = TargetVector::parse(ba.alpha);
            mpz_class qm = parse_z(ba.qmax, "--qmax");
            BestApproxSequence seq = best_approx_sequence(A, qm);
            ordered_json j = json_io::seq_to_json(seq);
            if (ba.audit) {
                AuditReport ar = audit_defining_property(seq, qm);
                j["audit"] = ordered_json{{"records_checked", ar.records_checked},
                                          {"comparisons", ar.comparisons},
                                          {"violations", ar.violations}};
            }
            ordered_json cfg{{"alpha", ba.alpha}, {"qmax", ba.qmax}, {"audit", ba.audit}};
            emit(ctx, "bestapprox", cfg, std::nullopt, j, ba.outp, {});
        });
    }

    // lattice
    struct {
        std::string seqp, center, radius, mode = "exact", ccal = "1", outp;
        size_t k = 0;
        bool minima = false, count = false;
    } la;
    {
        CLI::App* sc = app.add_subcommand("lattice", "torus lattice analysis at one record");
        sc->add_option("--seq", la.seqp, "sequence artifact")->required();
        sc->add_option("--k", la.k, "record index")->required();
        sc->add_flag("--minima", la.minima, "include successive minima (always on)");
        sc->add_flag("--count", la.count, "count orbit points in a ball");
        sc->add_option("--center", la.center, "ball center, rationals comma separated");
        sc->add_option("--radius", la.radius, "ball radius, rational");
        sc->add_option("--mode", la.mode, "exact|fast")->check(CLI::IsMember({"exact", "fast"}));
        sc->add_option("--ccal", la.ccal, "calibration constant for the count bound");
        sc->add_option("--out", la.outp, "output JSON path (stdout when absent)");
        sc->callback([&]() {
            BestApproxSequence seq = json_io::seq_from_json(json_io::load_json(la.seqp));
            if (la.k >= seq.records.size())
                throw IndexOutOfRange("record index " + std::to_string(la.k) +
                                      " out of range (have " +
                                      std::to_string(seq.records.size()) + ")");
            TorusLattice L = build_lattice(seq.records[la.k]);
            ordered_json j = json_io::lattice_to_json(L);
            if (la.count) {
                if (la.center.empty() || la.radius.empty())
                    throw UsageError("--count needs --center and --radius");
                BallQuery B;
                for (const std::string& part : [&] {
                         std::vector<std::string> parts;
                         size_t pos = 0;
                         while (pos <= la.center.size()) {
                             size_t comma = la.center.find(',', pos);
                             if (comma == std::string::npos) comma = la.center.size();
                             parts.push_back(la.center.substr(pos, comma - pos));
                             pos = comma + 1;
                         }
                         return parts;
                     }()) {
                    mpq_class x = parse_rat(part);
                    x -= floor_q(x);
                    B.center.push_back(x);
                }
                B.radius = parse_rat(la.radius);
                CountResult cr = count_gamma_in_ball(
                    seq, la.k, B, la.mode == "fast" ? CountMode::LatticeFast : CountMode::Exact);
                ordered_json wit = ordered_json::array();
                for (const mpz_class& w : cr.witnesses) wit.push_back(w.get_str());
                j["count"] = ordered_json{{"lower", cr.lower.get_str()},
                                          {"upper", cr.upper.get_str()},
                                          {"witnesses", std::move(wit)},
                                          {"mode", la.mode}};
                Lemma1Bound lb = lemma1_bound(L, B.radius, parse_rat(la.ccal));
                j["lemma1"] = ordered_json{{"form_a", rat_str(lb.form_a)},
                                           {"form_b", rat_str(lb.form_b)},
                                           {"regime", lb.regime}};
            }
            ordered_json cfg{{"seq", la.seqp}, {"k", la.k},     {"count", la.count},
                             {"center", la.center}, {"radius", la.radius}, {"mode", la.mode}};
            emit(ctx, "lattice", cfg, std::nullopt, j, la.outp, {});
        });
    }

    // exponents
    struct {
        std::string alpha, beta, qmax, Qmax, outp, csvp;
        size_t count = 20;
        std::uint64_t seed = 7;
    } ex;
    {
        CLI::App* sc = app.add_subcommand("exponents", "approximation exponent estimators");
        sc->require_subcommand(1);
        auto add_common = [&](CLI::App* leaf) {
            leaf->add_option("--out", ex.outp, "output JSON path (stdout when absent)");
            leaf->add_option("--csv", ex.csvp, "CSV mirror of the sample table");
        };
        auto finish = [&](const char* name, const ExponentEstimate& est, ordered_json cfg) {
            ordered_json j = json_io::estimate_to_json(est);
            j["artifact_version"] = json_io::kArtifactVersion;
            if (!ex.csvp.empty()) json_io::write_file(ex.csvp, est_csv_text(est));
            if (ex.outp.empty()) {
                *ctx.out << json_io::dump(j);
            } else {
                json_io::write_file(ex.outp, json_io::dump(j));
                std::vector<std::string> outs{ex.outp};
                if (!ex.csvp.empty()) outs.push_back(ex.csvp);
                write_run_record(ctx, name, cfg, std::nullopt, outs, est.anomalies,
                                 ex.outp + ".run.json");
            }
        };
        CLI::App* col = sc->add_subcommand("uniform-column", "liminf proxy over records");
        col->add_option("--alpha", ex.alpha)->required();
        col->add_option("--qmax", ex.qmax)->required();
        add_common(col);
        col->callback([&, finish]() {
            TargetVector A = TargetVector::parse(ex.alpha);
            BestApproxSequence seq = best_approx_sequence(A, parse_z(ex.qmax, "--qmax"));
            finish("exponents uniform-column", omega_hat_column(seq),
                   ordered_json{{"alpha", ex.alpha}, {"qmax", ex.qmax}});
        });
        CLI::App* row = sc->add_subcommand("uniform-row", "dual linear form proxy");
        row->add_option("--alpha", ex.alpha)->required();
        row->add_option("--Qmax", ex.Qmax)->required();
        add_common(row);
        row->callback([&, finish]() {
            DualForm F{TargetVector::parse(ex.alpha)};
            finish("exponents uniform-row", omega_hat_row(F, default_grid(parse_z(ex.Qmax, "--Qmax"))),
                   ordered_json{{"alpha", ex.alpha}, {"Qmax", ex.Qmax}});
        });
        CLI::App* inh = sc->add_subcommand("inhom", "inhomogeneous record scan");
        inh->add_option("--alpha", ex.alpha)->required();
        inh->add_option("--beta", ex.beta)->required();
        inh->add_option("--qmax", ex.qmax)->required();
        add_common(inh);
        inh->callback([&, finish]() {
            TargetVector A = TargetVector::parse(ex.alpha);
            TargetVector b = TargetVector::parse(ex.beta);
            finish("exponents inhom", omega_inhom(A, b, parse_z(ex.qmax, "--qmax")),
                   ordered_json{{"alpha", ex.alpha}, {"beta", ex.beta}, {"qmax", ex.qmax}});
        });
        CLI::App* tr = sc->add_subcommand("transfer", "seeded inhomogeneous spot-check");
        tr->add_option("--alpha", ex.alpha)->required();
        tr->add_option("--qmax", ex.qmax)->required();
        tr->add_option("--Qmax", ex.Qmax)->required();
        tr->add_option("--count", ex.count, "number of sampled beta");
        tr->add_option("--seed", ex.seed, "sampling seed");
        add_common(tr);
        tr->callback([&]() {
            TargetVector A = TargetVector::parse(ex.alpha);
            TransferReport rep = check_transfer(A, seeded_betas(A.n(), ex.count, ex.seed),
                                                parse_z(ex.qmax, "--qmax"),
                                                parse_z(ex.Qmax, "--Qmax"));
            ordered_json j = json_io::transfer_to_json(rep);
            j["artifact_version"] = json_io::kArtifactVersion;
            j["seed"] = ex.seed;
            std::string csv = "beta,est_lo,est_hi,pass\n";
            for (const TransferCase& c : rep.cases)
                csv += "\"" + c.beta_text + "\"," + dec_lower(c.estimate.estimate.lo) + "," +
                       dec_upper(c.estimate.estimate.hi) + "," + (c.pass ? "1" : "0") + "\n";
            if (!ex.csvp.empty()) json_io::write_file(ex.csvp, csv);
            ordered_json cfg{{"alpha", ex.alpha}, {"qmax", ex.qmax},   {"Qmax", ex.Qmax},
                             {"count", ex.count}, {"seed", ex.seed}};
            if (ex.outp.empty()) {
                *ctx.out << json_io::dump(j);
            } else {
                json_io::write_file(ex.outp, json_io::dump(j));
                std::vector<std::string> outs{ex.outp};
                if (!ex.csvp.empty()) outs.push_back(ex.csvp);
                write_run_record(ctx, "exponents transfer", cfg, ex.seed, outs, rep.anomalies,
                                 ex.outp + ".run.json");
            }
        });
    }

    // cantor
    struct {
        std::string alpha, qmax, v, s, mode = "relaxed", klist, safety = "1", outp, treep;
        unsigned levels = 2;
        size_t samples = 1000;
        std::uint64_t seed = 7;
    } ca;
    {
        CLI::App* sc = app.add_subcommand("cantor", "nested ball construction and certificates");
        sc->require_subcommand(1);
        CLI::App* bld = sc->add_subcommand("build", "build the tree");
        bld->add_option("--alpha", ca.alpha)->required();
        bld->add_option("--qmax", ca.qmax, "scan bound for the record sequence")->required();
        bld->add_option("--v", ca.v, "target exponent, rational")->required();
        bld->add_option("--s", ca.s, "mass parameter, rational")->required();
        bld->add_option("--levels", ca.levels, "number of levels J")->required();
        bld->add_option("--mode", ca.mode)->check(CLI::IsMember({"strict", "relaxed"}));
        bld->add_option("--k-list", ca.klist, "explicit level scales q, comma separated");
        bld->add_option("--safety", ca.safety, "growth-condition safety factor");
        bld->add_option("--out", ca.outp, "tree artifact path")->required();
        bld->callback([&]() {
            TargetVector A = TargetVector::parse(ca.alpha);
            BestApproxSequence seq = best_approx_sequence(A, parse_z(ca.qmax, "--qmax"));
            CantorConfig cfg;
            cfg.v = parse_rat(ca.v);
            cfg.s = parse_rat(ca.s);
            cfg.J = ca.levels;
            cfg.mode = ca.mode == "strict" ? TreeMode::Strict : TreeMode::Relaxed;
            cfg.safety = parse_rat(ca.safety);
            if (!ca.klist.empty()) cfg.q_list = parse_z_list(ca.klist, "--k-list");
            CantorTree tree = build_tree(seq, cfg);
            ordered_json cj{{"alpha", ca.alpha}, {"qmax", ca.qmax},     {"v", ca.v},
                            {"s", ca.s},         {"levels", ca.levels}, {"mode", ca.mode},
                            {"k_list", ca.klist}, {"safety", ca.safety}};
            emit(ctx, "cantor build", cj, std::nullopt, json_io::tree_to_json(tree), ca.outp,
                 tree.anomalies);
        });
        CLI::App* ver = sc->add_subcommand("verify", "certificate checks on a built tree");
        ver->require_subcommand(1);
        auto add_tree = [&](CLI::App* leaf) {
            leaf->add_option("--tree", ca.treep, "tree artifact")->required();
            leaf->add_option("--out", ca.outp, "output JSON path (stdout when absent)");
        };
        CLI::App* mem = ver->add_subcommand("membership", "witness chains");
        add_tree(mem);
        mem->callback([&]() {
            CantorTree tree = json_io::tree_from_json(json_io::load_json(ca.treep));
            MembershipReport r = verify_membership(tree);
            ordered_json j = json_io::membership_to_json(r);
            j["artifact_version"] = json_io::kArtifactVersion;
            emit(ctx, "cantor verify membership", ordered_json{{"tree", ca.treep}}, std::nullopt,
                 j, ca.outp, r.anomalies);
        });
        CLI::App* str = ver->add_subcommand("structure", "disjointness, nesting, mass");
        add_tree(str);
        str->callback([&]() {
            CantorTree tree = json_io::tree_from_json(json_io::load_json(ca.treep));
            ordered_json j = json_io::structure_to_json(verify_structure(tree));
            j["artifact_version"] = json_io::kArtifactVersion;
            emit(ctx, "cantor verify structure", ordered_json{{"tree", ca.treep}}, std::nullopt,
                 j, ca.outp, {});
        });
        CLI::App* l2 = ver->add_subcommand("lemma2", "seeded mass-ratio sampling");
        add_tree(l2);
        l2->add_option("--samples", ca.samples, "sample count");
        l2->add_option("--seed", ca.seed, "sampling seed");
        l2->callback([&]() {
            CantorTree tree = json_io::tree_from_json(json_io::load_json(ca.treep));
            MassMeasure M{&tree};
            Lemma2Report r = verify_lemma2(tree, M, ca.samples, ca.seed);
            ordered_json j = json_io::lemma2_to_json(r);
            j["artifact_version"] = json_io::kArtifactVersion;
            j["mass_bound"] = json_io::massbound_to_json(mass_lower_bound(
                r.c_emp, tree.config.s, tree.config.v, static_cast<unsigned>(tree.n())));
            emit(ctx, "cantor verify lemma2",
                 ordered_json{{"tree", ca.treep}, {"samples", ca.samples}, {"seed", ca.seed}},
                 ca.seed, j, ca.outp, {});
        });
    }

    // dimension
    struct {
        std::string treep, outp, summaryp;
        size_t grid_points = 12;
    } di;
    {
        CLI::App* sc = app.add_subcommand("dimension", "box-counting estimate over the window");
        sc->add_option("--tree", di.treep, "tree artifact")->required();
        sc->add_option("--grid-points", di.grid_points, "dyadic grid size");
        sc->add_option("--out", di.outp, "CSV path (stdout when absent)");
        sc->add_option("--summary", di.summaryp, "summary JSON path");
        sc->callback([&]() {
            CantorTree tree = json_io::tree_from_json(json_io::load_json(di.treep));
            std::vector<BoxSample> samples = box_count(tree, default_r_grid(tree, di.grid_points));
            DimensionReport rep = dim_estimate(tree, samples);
            std::string csv = dims_csv_text(samples);
            ordered_json cfg{{"tree", di.treep}, {"grid_points", di.grid_points}};
            if (di.outp.empty()) {
                *ctx.out << csv;
                if (!di.summaryp.empty())
                    json_io::write_file(di.summaryp, json_io::dump(json_io::dimension_to_json(
                                                         rep, tree.config.s, tree.config.v)));
                return;
            }
            json_io::write_file(di.outp, csv);
            std::vector<std::string> outs{di.outp};
            if (!di.summaryp.empty()) {
                json_io::write_file(di.summaryp, json_io::dump(json_io::dimension_to_json(
                                                     rep, tree.config.s, tree.config.v)));
                outs.push_back(di.summaryp);
            }
            write_run_record(ctx, "dimension", cfg, std::nullopt, outs, {}, di.outp + ".run.json");
        });
    }

    // verify (all certificates at once)
    struct {
        std::string treep, outp;
        size_t samples = 1000;
        std::uint64_t seed = 7;
    } ve;
    {
        CLI::App* sc = app.add_subcommand("verify", "run all tree certificates");
        sc->add_option("--tree", ve.treep, "tree artifact")->required();
        sc->add_option("--samples", ve.samples, "lemma-2 sample count");
        sc->add_option("--seed", ve.seed, "sampling seed");
        sc->add_option("--out", ve.outp, "output JSON path (stdout when absent)");
        sc->callback([&]() {
            CantorTree tree = json_io::tree_from_json(json_io::load_json(ve.treep));
            ordered_json j = verify_all_json(tree, ve.samples, ve.seed, nullptr);
            emit(ctx, "verify",
                 ordered_json{{"tree", ve.treep}, {"samples", ve.samples}, {"seed", ve.seed}},
                 ve.seed, j, ve.outp, tree.anomalies);
        });
    }

    // pipeline
    struct {
        std::string alpha, qmax, v, s, mode = "relaxed", klist, safety = "1", outdir;
        unsigned levels = 2;
        size_t samples = 1000, grid_points = 12;
        std::uint64_t seed = 7;
    } pi;
    {
        CLI::App* sc = app.add_subcommand("pipeline", "sequence -> tree -> verify -> dimension");
        sc->add_option("--alpha", pi.alpha)->required();
        sc->add_option("--qmax", pi.qmax)->required();
        sc->add_option("--v", pi.v)->required();
        sc->add_option("--s", pi.s)->required();
        sc->add_option("--levels", pi.levels)->required();
        sc->add_option("--mode", pi.mode)->check(CLI::IsMember({"strict", "relaxed"}));
        sc->add_option("--k-list", pi.klist, "explicit level scales");
        sc->add_option("--safety", pi.safety, "growth-condition safety factor");
        sc->add_option("--seed", pi.seed, "sampling seed");
        sc->add_option("--samples", pi.samples, "lemma-2 sample count");
        sc->add_option("--grid-points", pi.grid_points, "dimension grid size");
        sc->add_option("--outdir", pi.outdir, "artifact directory")->required();
        sc->callback([&]() {
            namespace fs = std::filesystem;
            std::error_code ec;
            fs::create_directories(pi.outdir, ec);
            if (ec) throw IOError("cannot create '" + pi.outdir + "': " + ec.message());
            auto at = [&](const char* name) { return (fs::path(pi.outdir) / name).string(); };

            TargetVector A = TargetVector::parse(pi.alpha);
            BestApproxSequence seq = best_approx_sequence(A, parse_z(pi.qmax, "--qmax"));
            json_io::write_file(at("seq.json"), json_io::dump(json_io::seq_to_json(seq)));

            CantorConfig cfg;
            cfg.v = parse_rat(pi.v);
            cfg.s = parse_rat(pi.s);
            cfg.J = pi.levels;
            cfg.mode = pi.mode == "strict" ? TreeMode::Strict : TreeMode::Relaxed;
            cfg.safety = parse_rat(pi.safety);
            if (!pi.klist.empty()) cfg.q_list = parse_z_list(pi.klist, "--k-list");
            CantorTree tree = build_tree(seq, cfg);
            json_io::write_file(at("tree.json"), json_io::dump(json_io::tree_to_json(tree)));

            Interval c_emp;
            ordered_json vj = verify_all_json(tree, pi.samples, pi.seed, &c_emp);
            json_io::write_file(at("verify.json"), json_io::dump(vj));

            std::vector<BoxSample> samples = box_count(tree, default_r_grid(tree, pi.grid_points));
            DimensionReport rep = dim_estimate(tree, samples);
            rep.c_emp = c_emp;
            json_io::write_file(at("dims.csv"), dims_csv_text(samples));
            json_io::write_file(at("dims.json"), json_io::dump(json_io::dimension_to_json(
                                                     rep, tree.config.s, tree.config.v)));

            ordered_json cj{{"alpha", pi.alpha},   {"qmax", pi.qmax},
                            {"v", pi.v},           {"s", pi.s},
                            {"levels", pi.levels}, {"mode", pi.mode},
                            {"k_list", pi.klist},  {"safety", pi.safety},
                            {"samples", pi.samples}, {"grid_points", pi.grid_points}};
            write_run_record(ctx, "pipeline", cj, pi.seed,
                             {at("seq.json"), at("tree.json"), at("verify.json"), at("dims.csv"),
                              at("dims.json")},
                             tree.anomalies, at("run.json"));
        });
    }

    try {
        std::vector<std::string> rev(args.rbegin(), args.rend());
        app.parse(rev);
        return 0;
    } catch (const CLI::CallForHelp& e) {
        app.exit(e, out, err);
        return 0;
    } catch (const CLI::CallForAllHelp& e) {
        app.exit(e, out, err);
        return 0;
    } catch (const CLI::ParseError& e) {
        app.exit(e, out, err);
        return 2;
    } catch (const UsageError& e) {
        err << "error [" << e.code() << "]: " << e.what() << "\n";
        return 2;
    } catch (const Error& e) {
        if (error_json)
            out << json_io::dump(ordered_json{{"error", e.code()}, {"message", e.what()}});
        else
            err << "error [" << e.code() << "]: " << e.what() << "\n";
        return 1;
    }
}

} // namespace dioph::cli
