#pragma once

#include <string>

#include "json.hpp"
#include "latred/instance_io.hpp"
#include "latred/reductions.hpp"

namespace latred {

struct EnsembleSpec {
    std::string kind = "uniform";  // uniform | qary | diagonal-gap
    int rank = 3;
    int dimension = 3;
    long long entry_bound = 5;
    long long param = 5;           // q for qary, gap for diagonal-gap
    int count = 100;
    std::string target_kind = "generic";  // generic | bdd | none
};

/// Fully determines a run: identical config and seed give identical reports
/// (timing fields aside).
struct ExperimentConfig {
    std::string reduction;           // svp-switch | cvp-to-bdd | bdd-to-usvp |
                                     // cvp-to-usvp | cvp-switch | cvp-to-dss | cvp-to-svp
    std::string oracle = "exact";    // exact | adversarial
    double oracle_gamma = 1.0;
    bool strict_promises = false;
    std::string p = "2";
    std::string q = "2";
    double gamma_cvp = 4.0;          // supergaussian reductions
    ReductionParams params;
    EnsembleSpec ensemble;
    std::uint64_t seed = 1;
};

nlohmann::json config_to_json(const ExperimentConfig& cfg);
ExperimentConfig config_from_json(const nlohmann::json& j);
ExperimentConfig load_config(const std::string& path);

/// Runs the configured reduction over the ensemble against exact referees.
/// Per-instance errors are recorded, never fatal. The report carries one
/// record per instance plus an aggregate pass rate.
nlohmann::json run_experiment(const ExperimentConfig& cfg);

/// Same run on one explicit instance (target required for CVP families).
nlohmann::json run_single(const ExperimentConfig& cfg, const InstanceFile& inst);

std::string report_to_csv(const nlohmann::json& report);

/// Drops timing fields (timestamp, wall_ms); what remains is reproducible
/// byte for byte from config + seed.
nlohmann::json strip_volatile(nlohmann::json report);

}  // namespace latred
