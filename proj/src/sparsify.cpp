#include "latred/sparsify.hpp"

#include <cmath>

namespace latred {

bool is_prime(const Int& q) {
    if (q < 2) return false;
    if (q % 2 == 0) return q == 2;
    for (Int d = 3; d * d <= q; d += 2)
        if (q % d == 0) return false;
    return true;
}

Int find_prime(const Int& lo, const Int& hi) {
    if (lo < 2 || lo > hi) throw InputError("find_prime needs 2 <= lo <= hi");
    for (Int q = lo; q <= hi; ++q)
        if (is_prime(q)) return q;
    throw NoPrimeInRange("no prime in [" + lo.str() + ", " + hi.str() + "]");
}

Sparsifier sample_sparsifier(int n, const Int& Q, RngStream& rng, bool with_coset) {
    if (!is_prime(Q)) throw InputError("sparsifier modulus must be prime");
    Sparsifier s;
    s.Q = Q;
    s.z.resize(n);
    std::uint64_t qu = static_cast<std::uint64_t>(Q);
    for (int i = 0; i < n; ++i) s.z[i] = Int(rng.below(qu));
    if (with_coset) {
        IntVec c(n);
        for (int i = 0; i < n; ++i) c[i] = Int(rng.below(qu));
        s.coset = std::move(c);
    }
    return s;
}

namespace {

Int mod_pos(const Int& a, const Int& q) {
    Int r = a % q;
    if (r < 0) r += q;
    return r;
}

// x with a*x = 1 mod q, q prime, a != 0 mod q.
Int mod_inverse(const Int& a, const Int& q) {
    Int old_r = mod_pos(a, q), r = q;
    Int old_s = 1, s = 0;
    while (r != 0) {
        Int quo = old_r / r;
        Int t = old_r - quo * r;
        old_r = r;
        r = t;
        t = old_s - quo * s;
        old_s = s;
        s = t;
    }
    if (old_r != 1) throw Error("mod_inverse: not invertible");
    return mod_pos(old_s, q);
}

int pivot_index(const Sparsifier& s) {
    for (size_t j = 0; j < s.z.size(); ++j)
        if (mod_pos(s.z[j], s.Q) != 0) return static_cast<int>(j);
    return -1;
}

}  // namespace

std::vector<IntVec> sublattice_transform(int n, const Sparsifier& s) {
    std::vector<IntVec> T;
    int j = pivot_index(s);
    if (j < 0) {
        // z = 0: condition is vacuous, identity transform
        T.assign(n, IntVec(n, 0));
        for (int i = 0; i < n; ++i) T[i][i] = 1;
        return T;
    }
    Int zj_inv = mod_inverse(s.z[j], s.Q);
    for (int i = 0; i < n; ++i) {
        IntVec col(n, 0);
        if (i == j) {
            col[j] = s.Q;
        } else {
            col[i] = 1;
            col[j] = -mod_pos(s.z[i] * zj_inv, s.Q);
        }
        T.push_back(std::move(col));
    }
    return T;
}

Basis sublattice_basis(const Basis& B, const Sparsifier& s) {
    if (s.coset) throw InputError("sublattice_basis takes a sparsifier without a coset");
    std::vector<IntVec> T = sublattice_transform(B.rank(), s);
    std::vector<IntVec> cols;
    for (const IntVec& t : T) cols.push_back(B.apply(t));
    return Basis(std::move(cols), B.denominator());
}

LatticeVector coset_point(const Basis& B, const Sparsifier& s) {
    if (!s.coset) throw InputError("coset_point needs a coset");
    const IntVec& c = *s.coset;
    Int zc = 0;
    for (size_t i = 0; i < s.z.size(); ++i) zc += s.z[i] * c[i];
    zc = mod_pos(zc, s.Q);
    int j = pivot_index(s);
    if (j < 0) {
        if (zc != 0) throw NoSolution("z = 0 mod Q but <z, c> != 0 mod Q");
        return LatticeVector::make(B, IntVec(B.rank(), 0));
    }
    Int k = mod_pos(zc * mod_inverse(s.z[j], s.Q), s.Q);
    IntVec coeffs(B.rank(), 0);
    coeffs[j] = k;
    return LatticeVector::make(B, std::move(coeffs));
}

std::optional<LatticeVector> uniform_primitive_sample(const Basis& B, const PNorm& p,
                                                      const NormKey& r, long long N, long long f,
                                                      UsvpOracle& oracle, RngStream& rng,
                                                      const std::optional<Int>& q_override) {
    if (N < 1 || f < 10) throw InputError("uniform_primitive_sample needs N >= 1, f >= 10");
    Int Q;
    if (q_override) {
        Q = *q_override;
        if (!is_prime(Q)) throw InputError("Q override must be prime");
    } else {
        double fn = static_cast<double>(f) * static_cast<double>(N);
        double w = fn * std::log(fn);
        Q = find_prime(Int(static_cast<long long>(std::ceil(100.0 * w))),
                       Int(static_cast<long long>(std::floor(200.0 * w))));
    }
    Sparsifier s = sample_sparsifier(B.rank(), Q, rng);
    Basis sub = sublattice_basis(B, s);
    OracleAnswer ans;
    try {
        ans = oracle.solve(sub, p);
    } catch (const PromiseViolated&) {
        return std::nullopt;
    }
    if (!key_le(ans.vector.norm(p), r)) return std::nullopt;
    auto coeffs = member_coeffs(B, ans.vector);
    if (!coeffs) throw Error("oracle answer escaped the parent lattice");
    LatticeVector v = LatticeVector::make(B, *coeffs);
    return rng.coin() ? v.negated() : v;
}

double isolation_event_frequency(const Int& Q, const std::vector<long long>& x,
                                 const std::vector<std::vector<long long>>& vs, long long draws,
                                 RngStream& rng) {
    long long q = static_cast<long long>(Q);
    size_t n = x.size();
    long long hits = 0;
    std::vector<long long> z(n);
    for (long long d = 0; d < draws; ++d) {
        for (size_t i = 0; i < n; ++i) z[i] = static_cast<long long>(rng.below(q));
        long long zx = 0;
        for (size_t i = 0; i < n; ++i) zx = (zx + z[i] * (x[i] % q)) % q;
        if (zx % q != 0) continue;
        bool ok = true;
        for (const auto& v : vs) {
            long long zv = 0;
            for (size_t i = 0; i < n; ++i) zv = (zv + z[i] * (v[i] % q)) % q;
            if (zv % q == 0) {
                ok = false;
                break;
            }
        }
        if (ok) ++hits;
    }
    return static_cast<double>(hits) / static_cast<double>(draws);
}

double coset_event_frequency(const Int& Q, const std::vector<std::vector<long long>>& vs,
                             const std::vector<std::vector<long long>>& ys, long long draws,
                             RngStream& rng) {
    long long q = static_cast<long long>(Q);
    size_t n = ys.at(0).size();
    long long hits = 0;
    std::vector<long long> z(n), c(n);
    for (long long d = 0; d < draws; ++d) {
        for (size_t i = 0; i < n; ++i) z[i] = static_cast<long long>(rng.below(q));
        for (size_t i = 0; i < n; ++i) c[i] = static_cast<long long>(rng.below(q));
        auto dot_shift = [&](const std::vector<long long>& y) {
            long long s = 0;
            for (size_t i = 0; i < n; ++i) s = (s + z[i] * ((y[i] + c[i]) % q)) % q;
            return s % q;
        };
        if (dot_shift(ys[0]) != 0) continue;
        bool ok = true;
        for (const auto& v : vs) {
            long long zv = 0;
            for (size_t i = 0; i < n; ++i) zv = (zv + z[i] * (v[i] % q)) % q;
            if (zv % q == 0) {
                ok = false;
                break;
            }
        }
        for (size_t k = 1; ok && k < ys.size(); ++k)
            if (dot_shift(ys[k]) == 0) ok = false;
        if (ok) ++hits;
    }
    return static_cast<double>(hits) / static_cast<double>(draws);
}

}  // namespace latred
