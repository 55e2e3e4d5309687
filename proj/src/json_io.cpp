#include "dioph/json_io.hpp"

#include <fstream>
#include <sstream>

#include "dioph/errors.hpp"

namespace dioph::json_io {

namespace {

std::string zstr(const mpz_class& z) { return z.get_str(); }

mpz_class to_z(const ordered_json& j) {
    if (!j.is_string()) throw IOError("expected an integer string");
    try {
        return mpz_class(j.get<std::string>());
    } catch (const std::invalid_argument&) {
        throw IOError("malformed integer '" + j.get<std::string>() + "'");
    }
}

mpq_class to_q(const ordered_json& j) {
    if (!j.is_string()) throw IOError("expected a rational string");
    return parse_rat(j.get<std::string>());
}

std::string mode_str(TreeMode m) { return m == TreeMode::Strict ? "strict" : "relaxed"; }

TreeMode mode_from(const std::string& s) {
    if (s == "strict") return TreeMode::Strict;
    if (s == "relaxed") return TreeMode::Relaxed;
    throw IOError("unknown mode '" + s + "'");
}

std::string kind_str(ExponentKind k) {
    switch (k) {
        case ExponentKind::UniformColumn: return "uniform-column";
        case ExponentKind::UniformRow: return "uniform-row";
        default: return "inhomogeneous";
    }
}

ordered_json alpha_json(const TargetVector& A) {
    ordered_json a = ordered_json::array();
    for (const RealConstant& c : A.comp) a.push_back(c.text);
    return a;
}

TargetVector alpha_from(const ordered_json& j) {
    if (!j.is_array() || j.empty()) throw IOError("alpha must be a nonempty array");
    std::string csv;
    for (size_t i = 0; i < j.size(); ++i) {
        if (i) csv += ",";
        csv += j[i].get<std::string>();
    }
    return TargetVector::parse(csv);
}

} // namespace

ordered_json ival(const Interval& x) {
    return ordered_json{{"lo", rat_str(x.lo)}, {"hi", rat_str(x.hi)}};
}

Interval ival_from(const ordered_json& j) { return Interval(to_q(j.at("lo")), to_q(j.at("hi"))); }

ordered_json ival_dec(const Interval& x) {
    return ordered_json{{"lo", dec_lower(x.lo)}, {"hi", dec_upper(x.hi)}};
}

ordered_json seq_to_json(const BestApproxSequence& seq) {
    ordered_json j;
    j["artifact_version"] = kArtifactVersion;
    j["alpha"] = alpha_json(seq.target);
    j["qmax"] = zstr(seq.q_max);
    ordered_json recs = ordered_json::array();
    for (size_t k = 0; k < seq.records.size(); ++k) {
        const BestApproxRecord& r = seq.records[k];
        ordered_json rj;
        rj["k"] = k;
        rj["q"] = zstr(r.q);
        ordered_json P = ordered_json::array();
        for (const mpz_class& p : r.P) P.push_back(zstr(p));
        rj["P"] = P;
        rj["rho_lo"] = dec_lower(r.rho_next.lo);
        rj["rho_hi"] = dec_upper(r.rho_next.hi);
        recs.push_back(std::move(rj));
    }
    j["records"] = std::move(recs);
    j["dirichlet_lo"] = dec_lower(seq.dirichlet_c.lo);
    j["dirichlet_hi"] = dec_upper(seq.dirichlet_c.hi);
    return j;
}

BestApproxSequence seq_from_json(const ordered_json& j) {
    try {
        BestApproxSequence seq;
        seq.target = alpha_from(j.at("alpha"));
        seq.q_max = to_z(j.at("qmax"));
        for (const auto& rj : j.at("records")) {
            BestApproxRecord r;
            r.k = rj.at("k").get<long>();
            r.q = to_z(rj.at("q"));
            for (const auto& pj : rj.at("P")) r.P.push_back(to_z(pj));
            Interval lo = parse_decimal(rj.at("rho_lo").get<std::string>());
            Interval hi = parse_decimal(rj.at("rho_hi").get<std::string>());
            r.rho_next = Interval(lo.lo < 0 ? mpq_class(0) : lo.lo, hi.hi);
            if (!seq.records.empty()) r.rho_k = seq.records.back().rho_next;
            seq.records.push_back(std::move(r));
        }
        Interval dlo = parse_decimal(j.at("dirichlet_lo").get<std::string>());
        Interval dhi = parse_decimal(j.at("dirichlet_hi").get<std::string>());
        seq.dirichlet_c = Interval(dlo.lo < 0 ? mpq_class(0) : dlo.lo, dhi.hi);
        return seq;
    } catch (const nlohmann::json::exception& e) {
        throw IOError(std::string("malformed sequence artifact: ") + e.what());
    }
}

ordered_json tree_to_json(const CantorTree& tree) {
    ordered_json j;
    j["artifact_version"] = kArtifactVersion;
    j["alpha"] = alpha_json(tree.target);
    ordered_json cfg;
    cfg["v"] = rat_str(tree.config.v);
    cfg["s"] = rat_str(tree.config.s);
    cfg["levels"] = tree.config.J;
    cfg["mode"] = mode_str(tree.config.mode);
    cfg["safety"] = rat_str(tree.config.safety);
    ordered_json ql = ordered_json::array();
    for (const mpz_class& q : tree.config.q_list) ql.push_back(zstr(q));
    cfg["q_list"] = std::move(ql);
    j["config"] = std::move(cfg);

    ordered_json levels = ordered_json::array();
    for (const LevelRecord& lv : tree.levels) {
        ordered_json lj;
        lj["j"] = lv.j;
        lj["k"] = lv.k;
        lj["q"] = zstr(lv.q);
        lj["N"] = zstr(lv.N);
        lj["radius"] = ival(lv.radius);
        lj["radius_dec"] = ival_dec(lv.radius);
        ordered_json balls = ordered_json::array();
        for (const Ball& b : lv.balls) {
            ordered_json bj;
            ordered_json c = ordered_json::array();
            for (const mpq_class& x : b.center) c.push_back(rat_str(x));
            bj["center"] = std::move(c);
            bj["q"] = zstr(b.q_witness);
            bj["parent"] = b.parent;
            balls.push_back(std::move(bj));
        }
        lj["balls"] = std::move(balls);
        levels.push_back(std::move(lj));
    }
    j["levels"] = std::move(levels);

    ordered_json audit;
    ordered_json alv = ordered_json::array();
    for (const SubseqLevel& sl : tree.audit.levels) {
        ordered_json sj;
        sj["j"] = sl.j;
        sj["k"] = sl.k;
        sj["q"] = zstr(sl.q);
        sj["N"] = zstr(sl.N);
        if (sl.cond4_margin) sj["cond4_margin"] = ival(*sl.cond4_margin);
        sj["g1_required_q"] = zstr(sl.g1_required_q);
        sj["g1_ok"] = sl.g1_ok;
        sj["g2_ok"] = sl.g2_ok;
        sj["g2_lambda_n"] = rat_str(sl.g2_lambda_n);
        alv.push_back(std::move(sj));
    }
    audit["levels"] = std::move(alv);
    audit["notes"] = tree.audit.notes;
    j["audit"] = std::move(audit);
    j["anomalies"] = tree.anomalies;
    return j;
}

CantorTree tree_from_json(const ordered_json& j) {
    try {
        CantorTree tree;
        tree.target = alpha_from(j.at("alpha"));
        const auto& cfg = j.at("config");
        tree.config.v = to_q(cfg.at("v"));
        tree.config.s = to_q(cfg.at("s"));
        tree.config.J = cfg.at("levels").get<unsigned>();
        tree.config.mode = mode_from(cfg.at("mode").get<std::string>());
        tree.config.safety = to_q(cfg.at("safety"));
        for (const auto& qj : cfg.at("q_list")) tree.config.q_list.push_back(to_z(qj));
        for (const auto& lj : j.at("levels")) {
            LevelRecord lv;
            lv.j = lj.at("j").get<unsigned>();
            lv.k = lj.at("k").get<size_t>();
            lv.q = to_z(lj.at("q"));
            lv.N = to_z(lj.at("N"));
            lv.radius = ival_from(lj.at("radius"));
            for (const auto& bj : lj.at("balls")) {
                Ball b;
                for (const auto& cj : bj.at("center")) b.center.push_back(to_q(cj));
                b.q_witness = to_z(bj.at("q"));
                b.parent = bj.at("parent").get<long>();
                lv.balls.push_back(std::move(b));
            }
            tree.levels.push_back(std::move(lv));
        }
        const auto& audit = j.at("audit");
        for (const auto& sj : audit.at("levels")) {
            SubseqLevel sl;
            sl.j = sj.at("j").get<unsigned>();
            sl.k = sj.at("k").get<size_t>();
            sl.q = to_z(sj.at("q"));
            sl.N = to_z(sj.at("N"));
            if (sj.contains("cond4_margin")) sl.cond4_margin = ival_from(sj.at("cond4_margin"));
            sl.g1_required_q = to_z(sj.at("g1_required_q"));
            sl.g1_ok = sj.at("g1_ok").get<bool>();
            sl.g2_ok = sj.at("g2_ok").get<bool>();
            sl.g2_lambda_n = to_q(sj.at("g2_lambda_n"));
            tree.audit.levels.push_back(std::move(sl));
        }
        tree.audit.notes = audit.at("notes").get<std::vector<std::string>>();
        tree.anomalies = j.at("anomalies").get<std::vector<std::string>>();
        if (tree.levels.empty()) throw IOError("tree has no levels");
        return tree;
    } catch (const nlohmann::json::exception& e) {
        throw IOError(std::string("malformed tree artifact: ") + e.what());
    }
}

ordered_json estimate_to_json(const ExponentEstimate& e) {
    ordered_json j;
    j["kind"] = kind_str(e.kind);
    j["estimate"] = ival(e.estimate);
    j["estimate_dec"] = ival_dec(e.estimate);
    j["infinite"] = e.infinite;
    j["window"] = e.window;
    ordered_json samples = ordered_json::array();
    for (const ExponentSample& s : e.samples) {
        ordered_json sj;
        sj["scale"] = zstr(s.scale);
        sj["ratio"] = ival(s.ratio);
        sj["ratio_dec"] = ival_dec(s.ratio);
        samples.push_back(std::move(sj));
    }
    j["samples"] = std::move(samples);
    j["anomalies"] = e.anomalies;
    return j;
}

ordered_json transfer_to_json(const TransferReport& r) {
    ordered_json j;
    j["row_estimate"] = estimate_to_json(r.row_estimate);
    j["bound"] = ival(r.bound);
    j["bound_dec"] = ival_dec(r.bound);
    j["tol"] = rat_str(r.tol);
    ordered_json cases = ordered_json::array();
    for (const TransferCase& c : r.cases) {
        ordered_json cj;
        cj["beta"] = c.beta_text;
        cj["estimate"] = estimate_to_json(c.estimate);
        cj["pass"] = c.pass;
        cases.push_back(std::move(cj));
    }
    j["cases"] = std::move(cases);
    j["median"] = ival(r.median);
    j["median_dec"] = ival_dec(r.median);
    j["low_confidence"] = r.low_confidence;
    j["anomalies"] = r.anomalies;
    return j;
}

ordered_json lattice_to_json(const TorusLattice& L) {
    ordered_json j;
    j["q"] = zstr(L.q_k);
    ordered_json P = ordered_json::array();
    for (const mpz_class& p : L.P_k) P.push_back(zstr(p));
    j["P"] = std::move(P);
    auto mat = [](const QMat& m) {
        ordered_json rows = ordered_json::array();
        for (const QVec& row : m) {
            ordered_json rj = ordered_json::array();
            for (const mpq_class& x : row) rj.push_back(rat_str(x));
            rows.push_back(std::move(rj));
        }
        return rows;
    };
    j["basis"] = mat(L.basis);
    ordered_json minima = ordered_json::array();
    for (const MinimaEntry& m : L.minima) {
        ordered_json mj;
        mj["lambda"] = rat_str(m.lambda);
        mj["lambda_dec"] = dec_upper(m.lambda);
        ordered_json w = ordered_json::array();
        for (const mpq_class& x : m.witness) w.push_back(rat_str(x));
        mj["witness"] = std::move(w);
        minima.push_back(std::move(mj));
    }
    j["minima"] = std::move(minima);
    j["reduced_basis"] = mat(L.reduced_basis);
    ordered_json ratios = ordered_json::array();
    for (const mpq_class& x : L.reduced_ratios) ratios.push_back(rat_str(x));
    j["reduced_ratios"] = std::move(ratios);
    j["c_red"] = rat_str(L.c_red);
    j["quasi_c"] = rat_str(L.quasi_c);
    return j;
}

ordered_json membership_to_json(const MembershipReport& r) {
    ordered_json j;
    j["balls_checked"] = r.balls_checked;
    ordered_json wm = ordered_json::array();
    for (const Interval& m : r.worst_margin) wm.push_back(ival_dec(m));
    j["worst_margin"] = std::move(wm);
    j["anomalies"] = r.anomalies;
    return j;
}

ordered_json structure_to_json(const StructureReport& r) {
    ordered_json j;
    j["balls"] = r.balls;
    j["disjoint_pairs"] = r.disjoint_pairs;
    j["nestings"] = r.nestings;
    j["undecided"] = r.undecided;
    j["messages"] = r.messages;
    return j;
}

ordered_json lemma2_to_json(const Lemma2Report& r) {
    ordered_json j;
    j["samples"] = r.samples;
    j["seed"] = r.seed;
    j["c_emp"] = ival(r.c_emp);
    j["c_emp_dec"] = ival_dec(r.c_emp);
    ordered_json pr;
    for (const auto& [regime, worst] : r.per_regime) pr[std::to_string(regime)] = ival_dec(worst);
    j["per_regime"] = std::move(pr);
    j["zero_hits"] = r.zero_hits;
    return j;
}

ordered_json massbound_to_json(const MassBound& b) {
    ordered_json j;
    j["c_emp"] = ival_dec(b.c_emp);
    j["lower"] = rat_str(b.lower);
    j["upper"] = rat_str(b.upper);
    j["statement"] = b.statement;
    return j;
}

ordered_json dimension_to_json(const DimensionReport& rep, const mpq_class& s,
                               const mpq_class& v) {
    ordered_json j;
    j["artifact_version"] = kArtifactVersion;
    j["window"] = rep.window;
    j["slope"] = ival(rep.slope);
    j["slope_dec"] = ival_dec(rep.slope);
    j["confidence_dec"] = dec_upper(rep.confidence);
    ordered_json res = ordered_json::array();
    for (const mpq_class& r : rep.residuals) res.push_back(dec_upper(r));
    j["residuals"] = std::move(res);
    ordered_json samples = ordered_json::array();
    for (const BoxSample& bsm : rep.samples) {
        ordered_json sj;
        sj["r"] = rat_str(bsm.r);
        sj["r_dec"] = dec_upper(bsm.r);
        sj["N"] = zstr(bsm.count);
        samples.push_back(std::move(sj));
    }
    j["samples"] = std::move(samples);
    j["target_s"] = rat_str(s);
    mpq_class inv = mpq_class(1) / v;
    j["target_inv_v"] = rat_str(inv);
    if (rep.c_emp) j["c_emp"] = ival_dec(*rep.c_emp);
    return j;
}

std::string dump(const ordered_json& j) { return j.dump(2) + "\n"; }

void write_file(const std::string& path, const std::string& bytes) {
    std::ofstream f(path, std::ios::binary);
    if (!f) throw IOError("cannot open '" + path + "' for writing");
    f.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
    if (!f) throw IOError("short write to '" + path + "'");
}

std::string read_file(const std::string& path) {
    std::ifstream f(path, std::ios::binary);
    if (!f) throw IOError("cannot open '" + path + "'");
    std::ostringstream ss;
    ss << f.rdbuf();
    return ss.str();
}

ordered_json load_json(const std::string& path) {
    try {
        return ordered_json::parse(read_file(path));
    } catch (const nlohmann::json::exception& e) {
        throw IOError("invalid JSON in '" + path + "': " + e.what());
    }
}

} // namespace dioph::json_io
