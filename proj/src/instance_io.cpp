#include "latred/instance_io.hpp"

#include <fstream>

#include "latred/oracle.hpp"

namespace latred {

using nlohmann::json;

json instance_to_json(const InstanceFile& inst) {
    json j;
    j["version"] = inst.version;
    json cols = json::array();
    for (int c = 0; c < inst.basis.rank(); ++c) {
        json col = json::array();
        for (int i = 0; i < inst.basis.dimension(); ++i)
            col.push_back(int_to_string(inst.basis.column(c)[i]));
        cols.push_back(col);
    }
    j["basis"] = {{"columns", cols}, {"denominator", int_to_string(inst.basis.denominator())}};
    if (inst.target) {
        json t = json::array();
        for (const Rat& x : *inst.target) t.push_back(rat_to_string(x));
        j["target"] = t;
    }
    j["norm"] = inst.norm.to_string();
    j["metadata"] = {{"seed", inst.seed}, {"generator", inst.generator}};
    return j;
}

InstanceFile instance_from_json(const json& j) {
    try {
        std::vector<IntVec> cols;
        for (const auto& col : j.at("basis").at("columns")) {
            IntVec c;
            for (const auto& e : col) c.push_back(Int(e.get<std::string>()));
            cols.push_back(std::move(c));
        }
        Basis basis(std::move(cols), Int(j.at("basis").at("denominator").get<std::string>()));
        InstanceFile inst{j.value("version", "1"), std::move(basis), std::nullopt,
                          PNorm::parse(j.at("norm").get<std::string>()), 0, "manual"};
        if (j.contains("target")) {
            RatVec t;
            for (const auto& e : j.at("target")) t.push_back(rat_from_string(e.get<std::string>()));
            if (static_cast<int>(t.size()) != inst.basis.dimension())
                throw InputError("target length mismatch");
            inst.target = std::move(t);
        }
        if (j.contains("metadata")) {
            inst.seed = j.at("metadata").value("seed", 0ull);
            inst.generator = j.at("metadata").value("generator", "manual");
        }
        return inst;
    } catch (const json::exception& e) {
        throw InputError(std::string("bad instance file: ") + e.what());
    }
}

std::string serialize_instance(const InstanceFile& inst) { return instance_to_json(inst).dump(2); }

InstanceFile parse_instance(const std::string& text) {
    json j = json::parse(text, nullptr, /*allow_exceptions=*/false);
    if (j.is_discarded()) throw InputError("instance file is not valid JSON");
    return instance_from_json(j);
}

InstanceFile load_instance(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw InputError("cannot open " + path);
    std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    return parse_instance(text);
}

namespace {

// Enumeration-feasibility estimate: the coefficient box for a ball of radius
// min-column-norm has about prod_i (2 r ||row_i(B^-1)|| + 1) cells. Uniform
// instances that blow past the cap are resampled; they are legal lattices but
// not enumerable at desk scale.
double box_estimate(const Basis& B) {
    LeftInverse P = left_inverse(B);
    double r0 = 1e300;
    for (int j = 0; j < B.rank(); ++j) {
        double s = 0;
        for (int i = 0; i < B.dimension(); ++i) {
            double e = to_double(Rat(B.column(j)[i], B.denominator()));
            s += e * e;
        }
        r0 = std::min(r0, std::sqrt(s));
    }
    double cells = 1;
    for (int i = 0; i < B.rank(); ++i) {
        double s = 0;
        for (int k = 0; k < B.dimension(); ++k) {
            double e = to_double(P.rows[i][k]);
            s += e * e;
        }
        cells *= 2.0 * r0 * std::sqrt(s) * std::sqrt(double(B.dimension())) + 1.0;
        if (cells > 1e18) return cells;
    }
    return cells;
}

}  // namespace

Basis gen_lattice(const std::string& kind, int n, int m, long long bound, long long param,
                  std::uint64_t seed) {
    if (n < 1 || m < n || m > 8) throw InputError("gen_lattice needs 1 <= n <= m <= 8");
    RngStream rng(seed, 0x6c61);
    if (kind == "uniform") {
        for (int attempt = 0; attempt < 200; ++attempt) {
            std::vector<IntVec> cols(n, IntVec(m));
            for (int j = 0; j < n; ++j)
                for (int i = 0; i < m; ++i) cols[j][i] = Int(rng.range(-bound, bound));
            if (integer_rank(cols) != n) continue;
            Basis B(std::move(cols));
            if (box_estimate(B) > 4e6) continue;
            return B;
        }
        throw DegenerateAfterRetries("uniform generator stayed rank deficient or ill conditioned");
    }
    if (kind == "qary") {
        if (n != m) throw InputError("qary lattices are square");
        long long q = param < 2 ? 7 : param;
        int k = n / 2;
        std::vector<IntVec> cols(n, IntVec(n, 0));
        for (int j = 0; j < k; ++j) cols[j][j] = 1;
        for (int j = k; j < n; ++j) {
            for (int i = 0; i < k; ++i) cols[j][i] = Int(rng.below(static_cast<std::uint64_t>(q)));
            cols[j][j] = q;
        }
        return Basis(std::move(cols));
    }
    if (kind == "diagonal-gap") {
        if (n != m) throw InputError("diagonal-gap lattices are square");
        long long gap = param < 1 ? 5 : param;
        std::vector<IntVec> cols(n, IntVec(n, 0));
        cols[0][0] = 1;
        for (int j = 1; j < n; ++j) cols[j][j] = gap;
        return Basis(std::move(cols));
    }
    throw InputError("unknown lattice kind '" + kind + "'");
}

RatVec gen_target(const Basis& B, const PNorm& p, const std::string& kind, RngStream& rng) {
    int m = B.dimension(), n = B.rank();
    IntVec point(n);
    for (int i = 0; i < n; ++i) point[i] = Int(rng.range(-2, 2));
    RatVec t = B.apply_rat(point);
    RatVec offset(m);
    long long d = 8 + static_cast<long long>(rng.below(9));
    for (int i = 0; i < m; ++i) offset[i] = Rat(rng.range(-d, d), 2 * d);
    if (kind == "bdd") {
        // keep the offset strictly inside the unique-decoding radius
        auto [sv, l1] = exact_svp(B, p);
        NormKey off = norm_key(p, offset);
        if (!off.is_zero()) {
            long double ratio = 0.4L * l1.approx / off.approx;
            if (ratio < 1.0L) {
                Rat f(static_cast<long long>(floorl(ratio * 1024.0L)), 1024);
                if (f <= 0) f = Rat(1, 1024);
                offset = rat_vec_scaled(offset, f);
            }
        }
    } else if (kind == "none") {
        return t;
    }
    for (int i = 0; i < m; ++i) t[i] += offset[i];
    return t;
}

}  // namespace latred
