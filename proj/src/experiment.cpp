#include "latred/experiment.hpp"

#include <chrono>
#include <fstream>

#include "latred/oracle.hpp"

namespace latred {

using nlohmann::json;

json config_to_json(const ExperimentConfig& cfg) {
    json j;
    j["reduction"] = cfg.reduction;
    j["oracle"] = cfg.oracle;
    j["oracle_gamma"] = cfg.oracle_gamma;
    j["strict_promises"] = cfg.strict_promises;
    j["p"] = cfg.p;
    j["q"] = cfg.q;
    j["gamma_cvp"] = cfg.gamma_cvp;
    j["seed"] = cfg.seed;
    j["params"] = {{"eps", rat_to_string(cfg.params.eps)},
                   {"delta", rat_to_string(cfg.params.delta)},
                   {"tau", rat_to_string(cfg.params.tau)},
                   {"max_trials", cfg.params.max_trials},
                   {"mode", cfg.params.mode == GuessMode::desk ? "desk" : "theory"},
                   {"stop_at_bound", cfg.params.stop_at_bound},
                   {"f", cfg.params.f},
                   {"dss_M", cfg.params.dss_M}};
    if (cfg.params.q_override) j["params"]["q_override"] = int_to_string(*cfg.params.q_override);
    j["ensemble"] = {{"kind", cfg.ensemble.kind},
                     {"rank", cfg.ensemble.rank},
                     {"dimension", cfg.ensemble.dimension},
                     {"entry_bound", cfg.ensemble.entry_bound},
                     {"param", cfg.ensemble.param},
                     {"count", cfg.ensemble.count},
                     {"target_kind", cfg.ensemble.target_kind}};
    return j;
}

ExperimentConfig config_from_json(const json& j) {
    try {
        ExperimentConfig cfg;
        cfg.reduction = j.at("reduction").get<std::string>();
        cfg.oracle = j.value("oracle", "exact");
        cfg.oracle_gamma = j.value("oracle_gamma", 1.0);
        cfg.strict_promises = j.value("strict_promises", false);
        cfg.p = j.value("p", "2");
        cfg.q = j.value("q", "2");
        cfg.gamma_cvp = j.value("gamma_cvp", 4.0);
        cfg.seed = j.value("seed", 1ull);
        if (j.contains("params")) {
            const json& p = j.at("params");
            if (p.contains("eps")) cfg.params.eps = rat_from_string(p.at("eps").get<std::string>());
            if (p.contains("delta"))
                cfg.params.delta = rat_from_string(p.at("delta").get<std::string>());
            if (p.contains("tau")) cfg.params.tau = rat_from_string(p.at("tau").get<std::string>());
            cfg.params.max_trials = p.value("max_trials", cfg.params.max_trials);
            cfg.params.mode = p.value("mode", "desk") == std::string("theory") ? GuessMode::theory
                                                                               : GuessMode::desk;
            cfg.params.stop_at_bound = p.value("stop_at_bound", true);
            cfg.params.audit_promises = j.value("strict_promises", false);
            cfg.params.f = p.value("f", cfg.params.f);
            cfg.params.dss_M = p.value("dss_M", cfg.params.dss_M);
            if (p.contains("q_override"))
                cfg.params.q_override = Int(p.at("q_override").get<std::string>());
        }
        if (j.contains("ensemble")) {
            const json& e = j.at("ensemble");
            cfg.ensemble.kind = e.value("kind", "uniform");
            cfg.ensemble.rank = e.value("rank", 3);
            cfg.ensemble.dimension = e.value("dimension", cfg.ensemble.rank);
            cfg.ensemble.entry_bound = e.value("entry_bound", 5ll);
            cfg.ensemble.param = e.value("param", 5ll);
            cfg.ensemble.count = e.value("count", 100);
            cfg.ensemble.target_kind = e.value("target_kind", "generic");
        }
        return cfg;
    } catch (const json::exception& e) {
        throw InputError(std::string("bad experiment config: ") + e.what());
    }
}

ExperimentConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw InputError("cannot open " + path);
    json j = json::parse(in, nullptr, /*allow_exceptions=*/false);
    if (j.is_discarded()) throw InputError("config is not valid JSON");
    return config_from_json(j);
}

namespace {

struct InstanceData {
    Basis basis;
    std::optional<RatVec> target;
};

std::string target_kind_for(const std::string& reduction, const std::string& configured) {
    if (configured != "generic") return configured;
    if (reduction == "bdd-to-usvp") return "bdd";
    return configured;
}

json run_one(const ExperimentConfig& cfg, const InstanceData& data, int idx) {
    PNorm p = PNorm::parse(cfg.p);
    PNorm q = PNorm::parse(cfg.q);
    ReductionParams params = cfg.params;
    params.audit_promises = cfg.strict_promises;
    RngStream rng(cfg.seed, static_cast<std::uint64_t>(idx), 0x7261);
    ReductionTrace trace;
    json rec;
    rec["instance_id"] = idx;
    rec["reduction"] = cfg.reduction;
    rec["eps"] = to_double(params.eps);

    auto t0 = std::chrono::steady_clock::now();
    try {
        LatticeVector out = LatticeVector::make(data.basis, IntVec(data.basis.rank(), 0));
        OracleStats stats;
        if (cfg.reduction == "svp-switch") {
            if (cfg.oracle == "adversarial") {
                AdversarialSvpOracle oracle(cfg.oracle_gamma, RngStream(cfg.seed, idx, 0xad),
                                            params.limits);
                out = reduce_svp_q_to_svp_p(data.basis, p, q, params, oracle, rng, &trace);
                stats = oracle.stats();
            } else {
                ExactSvpOracle oracle(params.limits);
                out = reduce_svp_q_to_svp_p(data.basis, p, q, params, oracle, rng, &trace);
                stats = oracle.stats();
            }
        } else if (cfg.reduction == "cvp-to-bdd") {
            CvpInstance inst(data.basis, *data.target, p);
            ExactBddOracle oracle(1.0 + to_double(params.tau), cfg.oracle_gamma,
                                  cfg.strict_promises, params.limits);
            out = reduce_cvp_to_bdd(inst, params, oracle, rng, &trace);
            stats = oracle.stats();
        } else if (cfg.reduction == "bdd-to-usvp") {
            CvpInstance inst(data.basis, *data.target, q);
            UsvpOracle oracle(1.0 + to_double(params.delta), cfg.strict_promises, params.limits);
            out = reduce_bdd_q_to_usvp_p(inst, p, params, oracle, rng, &trace);
            stats = oracle.stats();
        } else if (cfg.reduction == "cvp-to-usvp") {
            CvpInstance inst(data.basis, *data.target, q);
            UsvpOracle oracle(1.0 + to_double(params.delta), cfg.strict_promises, params.limits);
            out = reduce_cvp_q_to_usvp_p(inst, p, params, oracle, rng, &trace);
            stats = oracle.stats();
        } else if (cfg.reduction == "cvp-switch") {
            CvpInstance inst(data.basis, *data.target, p);
            if (cfg.oracle == "adversarial") {
                AdversarialCvpOracle oracle(cfg.oracle_gamma, RngStream(cfg.seed, idx, 0xad),
                                            params.limits);
                out = reduce_cvp_p_to_cvp_q(inst, q, params, oracle, rng, &trace);
                stats = oracle.stats();
            } else {
                ExactCvpOracle oracle(params.limits);
                out = reduce_cvp_p_to_cvp_q(inst, q, params, oracle, rng, &trace);
                stats = oracle.stats();
            }
        } else if (cfg.reduction == "cvp-to-dss") {
            CvpInstance inst(data.basis, *data.target, p);
            DssExactSampler sampler(1e-12, params.limits);
            out = reduce_cvp_to_dss(inst, cfg.gamma_cvp, sampler, params, rng, &trace);
        } else if (cfg.reduction == "cvp-to-svp") {
            CvpInstance inst(data.basis, *data.target, p);
            ExactSvpOracle oracle(params.limits);
            out = reduce_cvp_to_svp_supergaussian(inst, cfg.gamma_cvp, oracle, params, rng,
                                                  &trace);
            stats = oracle.stats();
        } else {
            throw InputError("unknown reduction '" + cfg.reduction + "'");
        }

        // The audited output always belongs to the original lattice.
        IntVec check = data.basis.apply(out.coeffs);
        if (check != out.embedding || data.basis.denominator() != out.embed_den)
            throw Error("output failed membership recheck");

        rec["gamma_bound"] = trace.bound;
        rec["achieved"] = trace.achieved;
        rec["referee"] = trace.referee;
        rec["pass"] = trace.achieved <= trace.bound * (1 + 1e-9);
        rec["trials"] = trace.trials_used;
        rec["oracle_calls"] = stats.calls;
        rec["max_rank_queried"] = stats.max_rank_queried;
        rec["max_dimension_queried"] = stats.max_dimension_queried;
        rec["sublattice_only"] = stats.sublattice_only;
        json outj = json::array();
        for (const Int& c : out.coeffs) outj.push_back(int_to_string(c));
        rec["output_coeffs"] = outj;
    } catch (const Error& e) {
        rec["error"] = e.what();
        rec["pass"] = false;
    }
    auto t1 = std::chrono::steady_clock::now();
    rec["wall_ms"] =
        std::chrono::duration_cast<std::chrono::microseconds>(t1 - t0).count() / 1000.0;
    return rec;
}

json finish_report(const ExperimentConfig& cfg, json records) {
    int passed = 0, errors = 0;
    for (const auto& r : records) {
        if (r.value("pass", false)) ++passed;
        if (r.contains("error")) ++errors;
    }
    json report;
    report["config"] = config_to_json(cfg);
    report["timestamp"] = std::chrono::duration_cast<std::chrono::seconds>(
                              std::chrono::system_clock::now().time_since_epoch())
                              .count();
    report["records"] = std::move(records);
    int count = static_cast<int>(report["records"].size());
    report["aggregate"] = {
        {"count", count},
        {"passed", passed},
        {"errors", errors},
        {"pass_rate", count == 0 ? 1.0 : static_cast<double>(passed) / count}};
    return report;
}

}  // namespace

json run_experiment(const ExperimentConfig& cfg) {
    json records = json::array();
    PNorm target_norm = PNorm::parse(cfg.reduction == "bdd-to-usvp" || cfg.reduction == "cvp-to-usvp"
                                         ? cfg.q
                                         : cfg.p);
    bool needs_target = cfg.reduction != "svp-switch";
    std::string tkind = target_kind_for(cfg.reduction, cfg.ensemble.target_kind);
    for (int idx = 0; idx < cfg.ensemble.count; ++idx) {
        RngStream gen_rng(cfg.seed, static_cast<std::uint64_t>(idx), 0x67656e);
        json rec;
        try {
            Basis B = gen_lattice(cfg.ensemble.kind, cfg.ensemble.rank, cfg.ensemble.dimension,
                                  cfg.ensemble.entry_bound, cfg.ensemble.param, gen_rng.u64());
            InstanceData data{B, std::nullopt};
            if (needs_target) data.target = gen_target(B, target_norm, tkind, gen_rng);
            rec = run_one(cfg, data, idx);
        } catch (const Error& e) {
            rec["instance_id"] = idx;
            rec["reduction"] = cfg.reduction;
            rec["error"] = e.what();
            rec["pass"] = false;
        }
        records.push_back(std::move(rec));
    }
    return finish_report(cfg, std::move(records));
}

json run_single(const ExperimentConfig& cfg, const InstanceFile& inst) {
    InstanceData data{inst.basis, inst.target};
    if (cfg.reduction != "svp-switch" && !data.target)
        throw InputError("this reduction needs an instance with a target");
    json records = json::array();
    records.push_back(run_one(cfg, data, 0));
    return finish_report(cfg, std::move(records));
}

std::string report_to_csv(const json& report) {
    std::string out = "instance_id,reduction,eps,gamma_bound,achieved,referee,pass\n";
    for (const auto& r : report.at("records")) {
        out += std::to_string(r.value("instance_id", -1)) + ",";
        out += r.value("reduction", std::string()) + ",";
        out += std::to_string(r.value("eps", 0.0)) + ",";
        out += std::to_string(r.value("gamma_bound", 0.0)) + ",";
        out += std::to_string(r.value("achieved", 0.0)) + ",";
        out += std::to_string(r.value("referee", 0.0)) + ",";
        out += r.value("pass", false) ? "1\n" : "0\n";
    }
    return out;
}

json strip_volatile(json report) {
    report.erase("timestamp");
    if (report.contains("records"))
        for (auto& r : report["records"]) r.erase("wall_ms");
    return report;
}

}  // namespace latred
