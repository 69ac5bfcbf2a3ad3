#include "latred/basis.hpp"

#include <algorithm>
#include <cmath>

namespace latred {

NormKey norm_key_scaled(const PNorm& p, const IntVec& numerators, const Int& denominator) {
    NormKey k;
    if (p.is_infinity()) {
        Int mx = 0;
        for (const Int& x : numerators) mx = std::max(mx, abs_int(x));
        k.exact = true;
        k.pow = Rat(mx, denominator);
        k.approx = to_ld(k.pow);
        return k;
    }
    if (p.exact()) {
        unsigned e = p.ipow();
        Int s = 0;
        for (const Int& x : numerators) s += pow_int(abs_int(x), e);
        k.exact = true;
        k.pow = Rat(s, pow_int(denominator, e));
        k.approx = powl(to_ld(k.pow), 1.0L / static_cast<long double>(e));
        return k;
    }
    long double pe = static_cast<long double>(p.p());
    long double d = to_ld(denominator);
    long double s = 0;
    for (const Int& x : numerators) s += powl(fabsl(to_ld(x) / d), pe);
    k.exact = false;
    k.pow = 0;
    k.approx = powl(s, 1.0L / pe);
    return k;
}

NormKey norm_key(const PNorm& p, const RatVec& v) {
    Int d = 1;
    for (const Rat& x : v) d = d / gcd_int(d, den(x)) * den(x);
    IntVec nums(v.size());
    for (size_t i = 0; i < v.size(); ++i) nums[i] = num(v[i]) * (d / den(v[i]));
    return norm_key_scaled(p, nums, d);
}

double lp_norm(const RatVec& v, const PNorm& p) {
    if (v.empty()) throw InputError("lp_norm of empty vector");
    return norm_key(p, v).value();
}

Basis::Basis(std::vector<IntVec> columns, Int denominator) : cols_(std::move(columns)), den_(std::move(denominator)) {
    if (cols_.empty()) throw InputError("basis needs at least one column");
    if (den_ <= 0) throw InputError("denominator must be positive");
    m_ = static_cast<int>(cols_[0].size());
    for (const IntVec& c : cols_)
        if (static_cast<int>(c.size()) != m_) throw InputError("ragged basis matrix");
    if (rank() > m_) throw InputError("rank exceeds ambient dimension");
    if (integer_rank(cols_) != rank()) throw SingularBasis();
}

IntVec Basis::apply(const IntVec& coeffs) const {
    if (static_cast<int>(coeffs.size()) != rank()) throw InputError("coefficient length mismatch");
    IntVec out(m_, 0);
    for (int j = 0; j < rank(); ++j) {
        if (coeffs[j] == 0) continue;
        for (int i = 0; i < m_; ++i) out[i] += cols_[j][i] * coeffs[j];
    }
    return out;
}

RatVec Basis::apply_rat(const IntVec& coeffs) const {
    IntVec nums = apply(coeffs);
    RatVec out(m_);
    for (int i = 0; i < m_; ++i) out[i] = Rat(nums[i], den_);
    return out;
}

Basis Basis::scaled(const Rat& factor) const {
    if (factor <= 0) throw InputError("scale factor must be positive");
    std::vector<IntVec> cols = cols_;
    for (IntVec& c : cols)
        for (Int& x : c) x *= num(factor);
    return Basis(std::move(cols), den_ * den(factor));
}

int integer_rank(const std::vector<IntVec>& columns) {
    if (columns.empty()) return 0;
    size_t m = columns[0].size();
    std::vector<RatVec> rows(m, RatVec(columns.size()));
    for (size_t j = 0; j < columns.size(); ++j)
        for (size_t i = 0; i < m; ++i) rows[i][j] = Rat(columns[j][i]);
    size_t rank = 0;
    for (size_t col = 0; col < columns.size() && rank < m; ++col) {
        size_t pivot = rank;
        while (pivot < m && rows[pivot][col] == 0) ++pivot;
        if (pivot == m) continue;
        std::swap(rows[pivot], rows[rank]);
        for (size_t i = 0; i < m; ++i) {
            if (i == rank || rows[i][col] == 0) continue;
            Rat f = rows[i][col] / rows[rank][col];
            for (size_t j = col; j < columns.size(); ++j) rows[i][j] -= f * rows[rank][j];
        }
        ++rank;
    }
    return static_cast<int>(rank);
}

LeftInverse left_inverse(const Basis& B) {
    int n = B.rank(), m = B.dimension();
    // Gram matrix G = B^T B (rational), then solve G X = B^T by Gauss-Jordan.
    std::vector<RatVec> aug(n, RatVec(n + m));
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) {
            Int s = 0;
            for (int k = 0; k < m; ++k) s += B.column(i)[k] * B.column(j)[k];
            aug[i][j] = Rat(s);  // scaled Gram; denominators cancel in the solve
        }
        for (int k = 0; k < m; ++k) aug[i][n + k] = Rat(B.column(i)[k] * B.denominator());
    }
    for (int col = 0; col < n; ++col) {
        int pivot = -1;
        for (int r = col; r < n; ++r)
            if (aug[r][col] != 0) {
                pivot = r;
                break;
            }
        if (pivot < 0) throw SingularBasis();
        std::swap(aug[pivot], aug[col]);
        Rat pv = aug[col][col];
        for (int j = col; j < n + m; ++j) aug[col][j] /= pv;
        for (int r = 0; r < n; ++r) {
            if (r == col || aug[r][col] == 0) continue;
            Rat f = aug[r][col];
            for (int j = col; j < n + m; ++j) aug[r][j] -= f * aug[col][j];
        }
    }
    LeftInverse P;
    P.rows.assign(n, RatVec(m));
    for (int i = 0; i < n; ++i)
        for (int k = 0; k < m; ++k) P.rows[i][k] = aug[i][n + k];
    return P;
}

NormKey LatticeVector::distance(const PNorm& p, const RatVec& target) const {
    Int d = embed_den;
    for (const Rat& x : target) d = d / gcd_int(d, den(x)) * den(x);
    IntVec nums(embedding.size());
    for (size_t i = 0; i < embedding.size(); ++i)
        nums[i] = embedding[i] * (d / embed_den) - num(target[i]) * (d / den(target[i]));
    return norm_key_scaled(p, nums, d);
}

std::pair<LatticeVector, Int> primitive_part(const Basis& B, const LatticeVector& v) {
    if (v.is_zero()) throw ZeroVector();
    Int g = gcd_vec(v.coeffs);
    IntVec w(v.coeffs.size());
    for (size_t i = 0; i < w.size(); ++i) w[i] = v.coeffs[i] / g;
    return {LatticeVector::make(B, std::move(w)), g};
}

std::vector<IntVec> hnf_columns(std::vector<IntVec> columns) {
    if (columns.empty()) return columns;
    size_t m = columns[0].size();
    size_t col = 0;
    for (size_t row = 0; row < m && col < columns.size(); ++row) {
        // Euclid across columns col..end to leave a single nonzero entry in this row.
        while (true) {
            size_t best = columns.size();
            for (size_t j = col; j < columns.size(); ++j) {
                if (columns[j][row] == 0) continue;
                if (best == columns.size() ||
                    abs_int(columns[j][row]) < abs_int(columns[best][row]))
                    best = j;
            }
            if (best == columns.size()) break;  // row is all zero
            std::swap(columns[col], columns[best]);
            bool reduced = true;
            for (size_t j = col + 1; j < columns.size(); ++j) {
                if (columns[j][row] == 0) continue;
                Int q = floor_div(columns[j][row], columns[col][row]);
                if (q != 0)
                    for (size_t i = 0; i < m; ++i) columns[j][i] -= q * columns[col][i];
                if (columns[j][row] != 0) reduced = false;
            }
            if (reduced) {
                if (columns[col][row] < 0)
                    for (size_t i = 0; i < m; ++i) columns[col][i] = -columns[col][i];
                ++col;
                break;
            }
        }
    }
    columns.resize(col);
    return columns;
}

Basis project_orthogonal(const Basis& B, const LatticeVector& x) {
    if (x.is_zero()) throw ZeroVector();
    if (B.rank() < 2) throw RankOne();
    int m = B.dimension(), n = B.rank();
    // pi(b_j) = b_j - (<b_j, x>/<x, x>) x, exact rationals.
    Int xx = 0;
    for (int i = 0; i < m; ++i) xx += x.embedding[i] * x.embedding[i];
    std::vector<RatVec> proj(n, RatVec(m));
    for (int j = 0; j < n; ++j) {
        Int bx = 0;
        for (int i = 0; i < m; ++i) bx += B.column(j)[i] * x.embedding[i];
        for (int i = 0; i < m; ++i)
            proj[j][i] = Rat(B.column(j)[i], B.denominator()) -
                         Rat(bx * x.embedding[i], xx) / B.denominator() * 1;
    }
    // Common denominator, then Hermite-reduce the integer generators.
    Int D = 1;
    for (const RatVec& c : proj)
        for (const Rat& e : c) D = D / gcd_int(D, den(e)) * den(e);
    std::vector<IntVec> gens(n, IntVec(m));
    for (int j = 0; j < n; ++j)
        for (int i = 0; i < m; ++i) gens[j][i] = num(proj[j][i]) * (D / den(proj[j][i]));
    std::vector<IntVec> cols = hnf_columns(std::move(gens));
    if (static_cast<int>(cols.size()) != n - 1)
        throw Error("projection produced unexpected rank");
    return Basis(std::move(cols), D);
}

std::optional<IntVec> member_coeffs(const Basis& B, const RatVec& point) {
    LeftInverse P = left_inverse(B);
    int n = B.rank(), m = B.dimension();
    IntVec coeffs(n);
    for (int i = 0; i < n; ++i) {
        Rat c = 0;
        for (int k = 0; k < m; ++k) c += P.rows[i][k] * point[k];
        if (den(c) != 1) return std::nullopt;
        coeffs[i] = num(c);
    }
    // Guard against off-span points: B*coeffs must reproduce the point.
    IntVec nums = B.apply(coeffs);
    for (int k = 0; k < m; ++k)
        if (Rat(nums[k], B.denominator()) != point[k]) return std::nullopt;
    return coeffs;
}

std::optional<IntVec> member_coeffs(const Basis& B, const LatticeVector& v) {
    return member_coeffs(B, v.embedding_rat());
}

bool is_sublattice(const Basis& sub, const Basis& parent) {
    if (sub.dimension() != parent.dimension()) return false;
    for (int j = 0; j < sub.rank(); ++j) {
        RatVec col(sub.dimension());
        for (int i = 0; i < sub.dimension(); ++i) col[i] = Rat(sub.column(j)[i], sub.denominator());
        if (!member_coeffs(parent, col)) return false;
    }
    return true;
}

RatVec rat_vec_sub(const RatVec& a, const RatVec& b) {
    RatVec out(a.size());
    for (size_t i = 0; i < a.size(); ++i) out[i] = a[i] - b[i];
    return out;
}

RatVec rat_vec_scaled(const RatVec& a, const Rat& f) {
    RatVec out(a.size());
    for (size_t i = 0; i < a.size(); ++i) out[i] = a[i] * f;
    return out;
}

}  // namespace latred
