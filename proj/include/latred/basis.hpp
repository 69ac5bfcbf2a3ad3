#pragma once

#include <optional>
#include <utility>
#include <vector>

#include "latred/errors.hpp"
#include "latred/pnorm.hpp"
#include "latred/rational.hpp"

namespace latred {

/// Norm key of a rational vector given as integer numerators over a common
/// positive denominator.
NormKey norm_key_scaled(const PNorm& p, const IntVec& numerators, const Int& denominator);
NormKey norm_key(const PNorm& p, const RatVec& v);

/// lp_norm as a plain double (comparisons should use NormKey instead).
double lp_norm(const RatVec& v, const PNorm& p);

/// Exact lattice basis: m x n integer matrix over a shared positive
/// denominator, columns linearly independent (checked at construction).
class Basis {
public:
    // columns[j] has length m; real basis vector j is columns[j]/denominator.
    Basis(std::vector<IntVec> columns, Int denominator = 1);

    int rank() const { return static_cast<int>(cols_.size()); }
    int dimension() const { return m_; }
    const Int& denominator() const { return den_; }
    const IntVec& column(int j) const { return cols_[j]; }
    const std::vector<IntVec>& columns() const { return cols_; }

    // Real entry (row i, column j).
    Rat entry(int i, int j) const { return Rat(cols_[j][i], den_); }

    // Exact numerators of B*x (over denominator()).
    IntVec apply(const IntVec& coeffs) const;
    RatVec apply_rat(const IntVec& coeffs) const;

    // Basis scaled by a positive rational factor (same coefficient space).
    Basis scaled(const Rat& factor) const;

    bool operator==(const Basis& o) const {
        return m_ == o.m_ && den_ == o.den_ && cols_ == o.cols_;
    }

private:
    std::vector<IntVec> cols_;
    Int den_;
    int m_ = 0;
};

/// Exact left inverse (B^T B)^{-1} B^T, n rows of length m.
struct LeftInverse {
    std::vector<RatVec> rows;
};
LeftInverse left_inverse(const Basis& B);

/// Lattice vector: coefficient vector plus its exact embedding.
struct LatticeVector {
    IntVec coeffs;       // length n
    IntVec embedding;    // numerators, length m
    Int embed_den = 1;   // embedding = embedding/embed_den

    static LatticeVector make(const Basis& B, IntVec coeffs) {
        LatticeVector v;
        v.embedding = B.apply(coeffs);
        v.embed_den = B.denominator();
        v.coeffs = std::move(coeffs);
        return v;
    }

    bool is_zero() const {
        for (const Int& c : coeffs)
            if (c != 0) return false;
        return true;
    }

    LatticeVector negated() const {
        LatticeVector v = *this;
        for (Int& c : v.coeffs) c = -c;
        for (Int& e : v.embedding) e = -e;
        return v;
    }

    RatVec embedding_rat() const {
        RatVec r(embedding.size());
        for (size_t i = 0; i < embedding.size(); ++i) r[i] = Rat(embedding[i], embed_den);
        return r;
    }

    NormKey norm(const PNorm& p) const { return norm_key_scaled(p, embedding, embed_den); }
    NormKey distance(const PNorm& p, const RatVec& target) const;

    bool operator==(const LatticeVector& o) const { return coeffs == o.coeffs; }
};

/// CVP instance: basis, rational target of length m, norm tag.
struct CvpInstance {
    Basis basis;
    RatVec target;
    PNorm norm;

    CvpInstance(Basis b, RatVec t, PNorm p) : basis(std::move(b)), target(std::move(t)), norm(p) {
        if (static_cast<int>(target.size()) != basis.dimension())
            throw InputError("target length must equal ambient dimension");
    }
};

/// Closed ball {x : ||x - center||_p <= radius}.
struct BallSpec {
    RatVec center;    // length m (zero vector allowed)
    NormKey radius;   // nonnegative
    PNorm norm;

    static BallSpec around_zero(int m, const PNorm& p, const NormKey& r) {
        return BallSpec{RatVec(m, Rat(0)), r, p};
    }
};

/// (w, k) with v = k*w, w primitive, k = gcd of coefficients.
std::pair<LatticeVector, Int> primitive_part(const Basis& B, const LatticeVector& v);

/// Exact rank of a set of integer columns.
int integer_rank(const std::vector<IntVec>& columns);

/// Column-style Hermite reduction: returns independent integer columns
/// generating the same Z-module as the input columns (zero columns dropped).
std::vector<IntVec> hnf_columns(std::vector<IntVec> columns);

/// Basis of the projection of L(B) orthogonal to lattice vector x.
Basis project_orthogonal(const Basis& B, const LatticeVector& x);

/// Coefficients of `point` in L(B) if it is a lattice point.
std::optional<IntVec> member_coeffs(const Basis& B, const RatVec& point);
std::optional<IntVec> member_coeffs(const Basis& B, const LatticeVector& v);

/// True if every column of `sub` lies in L(parent).
bool is_sublattice(const Basis& sub, const Basis& parent);

RatVec rat_vec_sub(const RatVec& a, const RatVec& b);
RatVec rat_vec_scaled(const RatVec& a, const Rat& f);

}  // namespace latred
