#pragma once

#include <optional>
#include <string>

#include "json.hpp"
#include "latred/basis.hpp"
#include "latred/rng.hpp"

namespace latred {

/// On-disk instance: basis columns and all rationals as "num/den" strings,
/// so parse(serialize(x)) round-trips bit exactly.
struct InstanceFile {
    std::string version = "1";
    Basis basis;
    std::optional<RatVec> target;
    PNorm norm = PNorm::finite(2);
    std::uint64_t seed = 0;
    std::string generator = "manual";
};

nlohmann::json instance_to_json(const InstanceFile& inst);
InstanceFile instance_from_json(const nlohmann::json& j);
std::string serialize_instance(const InstanceFile& inst);
InstanceFile parse_instance(const std::string& text);
InstanceFile load_instance(const std::string& path);

/// Instance generators: uniform (i.i.d. entries, resampled to full rank),
/// qary ([[I_k, A],[0, q I]]), diagonal-gap (diag(1, gap, ..., gap)).
Basis gen_lattice(const std::string& kind, int n, int m, long long bound, long long param,
                  std::uint64_t seed);

/// Rational target for CVP-style experiments: a lattice point plus a rational
/// offset; "bdd" scales the offset inside the unique-decoding radius.
RatVec gen_target(const Basis& B, const PNorm& p, const std::string& kind, RngStream& rng);

}  // namespace latred
