#pragma once

#include <optional>
#include <vector>

#include "latred/basis.hpp"
#include "latred/oracle.hpp"
#include "latred/rng.hpp"

namespace latred {

/// Random sublattice/coset data mod a prime Q: the engine behind the
/// uniform-primitive sampler and all sparsification-based reductions.
struct Sparsifier {
    Int Q;                                 // prime (trial-division certified)
    IntVec z;                              // length n, entries in [0, Q)
    std::optional<IntVec> coset;           // c in Z_Q^n
};

bool is_prime(const Int& q);

/// Smallest prime in [lo, hi].
Int find_prime(const Int& lo, const Int& hi);

Sparsifier sample_sparsifier(int n, const Int& Q, RngStream& rng, bool with_coset = false);

/// Coefficient-space transform T (columns) with L(B*T) = {y : <z, B^-1 y> = 0 mod Q}
/// and |det T| = Q when z != 0 mod Q.
std::vector<IntVec> sublattice_transform(int n, const Sparsifier& s);

/// Basis of {y in L(B) : <z, B^-1 y> = 0 mod Q}.
Basis sublattice_basis(const Basis& B, const Sparsifier& s);

/// Some y in L with <z, B^-1 y> = <z, c> (mod Q).
LatticeVector coset_point(const Basis& B, const Sparsifier& s);

/// One trial of the sparsification sampler: pick Q in the
/// [100 f N log(fN), 200 f N log(fN)] window (or the override), sparsify,
/// query the uSVP oracle, accept answers of norm <= r with a uniform sign.
/// Empty result is the legitimate Fail outcome, retried by callers.
std::optional<LatticeVector> uniform_primitive_sample(const Basis& B, const PNorm& p,
                                                      const NormKey& r, long long N, long long f,
                                                      UsvpOracle& oracle, RngStream& rng,
                                                      const std::optional<Int>& q_override = {});

/// Empirical frequency over `draws` uniform z of
///   {<z,x> = 0 mod Q and <z,v_i> != 0 mod Q for all i}.
double isolation_event_frequency(const Int& Q, const std::vector<long long>& x,
                                 const std::vector<std::vector<long long>>& vs, long long draws,
                                 RngStream& rng);

/// Coset variant over uniform independent z, c of
///   {<z,y_1+c> = 0 and <z,v_i> != 0 for all i and <z,y_i+c> != 0 for i > 1}.
double coset_event_frequency(const Int& Q, const std::vector<std::vector<long long>>& vs,
                             const std::vector<std::vector<long long>>& ys, long long draws,
                             RngStream& rng);

}  // namespace latred
