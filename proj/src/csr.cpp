#include "saddle/csr.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "saddle/error.hpp"

namespace saddle {

CsrMatrix::CsrMatrix(index_t nrows, index_t ncols, std::vector<index_t> row_ptr,
                     std::vector<index_t> col_idx, std::vector<double> values)
    : nrows_(nrows), ncols_(ncols), row_ptr_(std::move(row_ptr)),
      col_idx_(std::move(col_idx)), values_(std::move(values)) {
    if (nrows_ < 0 || ncols_ < 0)
        throw UsageError("CsrMatrix: negative dimension");
    if (row_ptr_.size() != static_cast<size_t>(nrows_) + 1)
        throw UsageError("CsrMatrix: row_ptr length must be nrows+1");
    if (row_ptr_.front() != 0 ||
        row_ptr_.back() != static_cast<index_t>(values_.size()) ||
        col_idx_.size() != values_.size())
        throw UsageError("CsrMatrix: inconsistent row_ptr/col_idx/values");
    compress_and_validate();
}

void CsrMatrix::compress_and_validate() {
    std::vector<index_t> rp(nrows_ + 1, 0);
    std::vector<index_t> ci;
    std::vector<double> va;
    ci.reserve(col_idx_.size());
    va.reserve(values_.size());
    std::vector<std::pair<index_t, double>> row;
    for (index_t i = 0; i < nrows_; ++i) {
        if (row_ptr_[i] > row_ptr_[i + 1])
            throw UsageError("CsrMatrix: row_ptr not nondecreasing");
        row.clear();
        for (index_t k = row_ptr_[i]; k < row_ptr_[i + 1]; ++k) {
            if (col_idx_[k] < 0 || col_idx_[k] >= ncols_)
                throw UsageError("CsrMatrix: column index out of range");
            row.emplace_back(col_idx_[k], values_[k]);
        }
        std::sort(row.begin(), row.end(),
                  [](const auto& a, const auto& b) { return a.first < b.first; });
        for (size_t k = 0; k < row.size();) {
            index_t col = row[k].first;
            double sum = 0.0;
            while (k < row.size() && row[k].first == col) sum += row[k++].second;
            if (sum != 0.0) {
                ci.push_back(col);
                va.push_back(sum);
            }
        }
        rp[i + 1] = static_cast<index_t>(ci.size());
    }
    row_ptr_ = std::move(rp);
    col_idx_ = std::move(ci);
    values_ = std::move(va);
}

CsrMatrix CsrMatrix::from_triplets(index_t nrows, index_t ncols,
                                   std::span<const index_t> rows,
                                   std::span<const index_t> cols,
                                   std::span<const double> vals) {
    if (rows.size() != cols.size() || rows.size() != vals.size())
        throw UsageError("from_triplets: length mismatch");
    std::vector<index_t> counts(nrows + 1, 0);
    for (index_t r : rows) {
        if (r < 0 || r >= nrows) throw UsageError("from_triplets: row out of range");
        ++counts[r + 1];
    }
    std::partial_sum(counts.begin(), counts.end(), counts.begin());
    std::vector<index_t> rp = counts;
    std::vector<index_t> ci(rows.size());
    std::vector<double> va(rows.size());
    std::vector<index_t> fill(rp.begin(), rp.end() - 1);
    for (size_t k = 0; k < rows.size(); ++k) {
        index_t pos = fill[rows[k]]++;
        ci[pos] = cols[k];
        va[pos] = vals[k];
    }
    return CsrMatrix(nrows, ncols, std::move(rp), std::move(ci), std::move(va));
}

CsrMatrix CsrMatrix::identity(index_t n) {
    std::vector<index_t> rp(n + 1), ci(n);
    std::vector<double> va(n, 1.0);
    std::iota(rp.begin(), rp.end(), 0);
    std::iota(ci.begin(), ci.end(), 0);
    return CsrMatrix(n, n, std::move(rp), std::move(ci), std::move(va));
}

CsrMatrix CsrMatrix::diagonal(std::span<const double> d) {
    index_t n = static_cast<index_t>(d.size());
    std::vector<index_t> rp(n + 1), ci(n);
    std::vector<double> va(d.begin(), d.end());
    std::iota(rp.begin(), rp.end(), 0);
    std::iota(ci.begin(), ci.end(), 0);
    return CsrMatrix(n, n, std::move(rp), std::move(ci), std::move(va));
}

double CsrMatrix::coeff(index_t i, index_t j) const {
    if (i < 0 || i >= nrows_ || j < 0 || j >= ncols_)
        throw UsageError("coeff: index out of range");
    auto first = col_idx_.begin() + row_ptr_[i];
    auto last = col_idx_.begin() + row_ptr_[i + 1];
    auto it = std::lower_bound(first, last, j);
    if (it != last && *it == j) return values_[it - col_idx_.begin()];
    return 0.0;
}

std::vector<double> CsrMatrix::diagonal_vector() const {
    index_t n = std::min(nrows_, ncols_);
    std::vector<double> d(n, 0.0);
    for (index_t i = 0; i < n; ++i) d[i] = coeff(i, i);
    return d;
}

CsrMatrix CsrMatrix::transposed() const {
    std::vector<index_t> rp(ncols_ + 1, 0);
    for (index_t c : col_idx_) ++rp[c + 1];
    std::partial_sum(rp.begin(), rp.end(), rp.begin());
    std::vector<index_t> ci(nnz());
    std::vector<double> va(nnz());
    std::vector<index_t> fill(rp.begin(), rp.end() - 1);
    for (index_t i = 0; i < nrows_; ++i)
        for (index_t k = row_ptr_[i]; k < row_ptr_[i + 1]; ++k) {
            index_t pos = fill[col_idx_[k]]++;
            ci[pos] = i;
            va[pos] = values_[k];
        }
    return CsrMatrix(ncols_, nrows_, std::move(rp), std::move(ci), std::move(va));
}

CsrMatrix CsrMatrix::scaled(double s) const {
    CsrMatrix out = *this;
    for (double& v : out.values_) v *= s;
    if (s == 0.0) out.compress_and_validate();
    return out;
}

CsrMatrix CsrMatrix::row_scaled(std::span<const double> d) const {
    if (static_cast<index_t>(d.size()) != nrows_)
        throw UsageError("row_scaled: scale vector length mismatch");
    CsrMatrix out = *this;
    for (index_t i = 0; i < nrows_; ++i)
        for (index_t k = row_ptr_[i]; k < row_ptr_[i + 1]; ++k)
            out.values_[k] *= d[i];
    out.compress_and_validate();
    return out;
}

bool CsrMatrix::is_symmetric(double rel_tol) const {
    if (nrows_ != ncols_) return false;
    double scale = max_abs();
    if (scale == 0.0) return true;
    CsrMatrix t = transposed();
    if (t.nnz() != nnz()) return false;
    for (index_t i = 0; i < nrows_; ++i) {
        if (row_ptr_[i] != t.row_ptr_[i]) return false;
        for (index_t k = row_ptr_[i]; k < row_ptr_[i + 1]; ++k) {
            if (col_idx_[k] != t.col_idx_[k]) return false;
            if (std::abs(values_[k] - t.values_[k]) > rel_tol * scale) return false;
        }
    }
    return true;
}

double CsrMatrix::frobenius_norm() const {
    double s = 0.0;
    for (double v : values_) s += v * v;
    return std::sqrt(s);
}

double CsrMatrix::max_abs() const {
    double s = 0.0;
    for (double v : values_) s = std::max(s, std::abs(v));
    return s;
}

std::vector<double> spmv(const CsrMatrix& m, std::span<const double> v) {
    if (static_cast<index_t>(v.size()) != m.ncols())
        throw UsageError("spmv: vector length mismatch");
    std::vector<double> y(m.nrows(), 0.0);
    const auto& rp = m.row_ptr();
    const auto& ci = m.col_idx();
    const auto& va = m.values();
    for (index_t i = 0; i < m.nrows(); ++i) {
        double acc = 0.0;
        for (index_t k = rp[i]; k < rp[i + 1]; ++k) acc += va[k] * v[ci[k]];
        y[i] = acc;
    }
    return y;
}

std::vector<double> spmv_transpose(const CsrMatrix& m, std::span<const double> v) {
    if (static_cast<index_t>(v.size()) != m.nrows())
        throw UsageError("spmv_transpose: vector length mismatch");
    std::vector<double> y(m.ncols(), 0.0);
    const auto& rp = m.row_ptr();
    const auto& ci = m.col_idx();
    const auto& va = m.values();
    for (index_t i = 0; i < m.nrows(); ++i) {
        double vi = v[i];
        if (vi == 0.0) continue;
        for (index_t k = rp[i]; k < rp[i + 1]; ++k) y[ci[k]] += va[k] * vi;
    }
    return y;
}

CsrMatrix kron(const CsrMatrix& a, const CsrMatrix& b) {
    index_t nr = a.nrows() * b.nrows();
    index_t nc = a.ncols() * b.ncols();
    if (a.nnz() != 0 && b.nnz() != 0 &&
        a.nnz() > std::numeric_limits<index_t>::max() / b.nnz())
        throw CapacityError("kron: nnz overflows index type");
    index_t nnz = a.nnz() * b.nnz();
    std::vector<index_t> rp(nr + 1, 0);
    std::vector<index_t> ci;
    std::vector<double> va;
    ci.reserve(nnz);
    va.reserve(nnz);
    const auto& arp = a.row_ptr();
    const auto& aci = a.col_idx();
    const auto& ava = a.values();
    const auto& brp = b.row_ptr();
    const auto& bci = b.col_idx();
    const auto& bva = b.values();
    for (index_t ia = 0; ia < a.nrows(); ++ia)
        for (index_t ib = 0; ib < b.nrows(); ++ib) {
            for (index_t ka = arp[ia]; ka < arp[ia + 1]; ++ka)
                for (index_t kb = brp[ib]; kb < brp[ib + 1]; ++kb) {
                    ci.push_back(aci[ka] * b.ncols() + bci[kb]);
                    va.push_back(ava[ka] * bva[kb]);
                }
            rp[ia * b.nrows() + ib + 1] = static_cast<index_t>(ci.size());
        }
    return CsrMatrix(nr, nc, std::move(rp), std::move(ci), std::move(va));
}

CsrMatrix tridiag(double lower, double diag, double upper, index_t size,
                  double scale) {
    if (size < 1) throw UsageError("tridiag: size must be >= 1");
    std::vector<index_t> rows, cols;
    std::vector<double> vals;
    for (index_t i = 0; i < size; ++i) {
        if (i > 0 && lower != 0.0) {
            rows.push_back(i);
            cols.push_back(i - 1);
            vals.push_back(scale * lower);
        }
        if (diag != 0.0) {
            rows.push_back(i);
            cols.push_back(i);
            vals.push_back(scale * diag);
        }
        if (i + 1 < size && upper != 0.0) {
            rows.push_back(i);
            cols.push_back(i + 1);
            vals.push_back(scale * upper);
        }
    }
    return CsrMatrix::from_triplets(size, size, rows, cols, vals);
}

CsrMatrix matmul(const CsrMatrix& a, const CsrMatrix& b) {
    if (a.ncols() != b.nrows()) throw UsageError("matmul: shape mismatch");
    index_t nr = a.nrows(), nc = b.ncols();
    std::vector<index_t> rp(nr + 1, 0);
    std::vector<index_t> ci;
    std::vector<double> va;
    std::vector<double> acc(nc, 0.0);
    std::vector<index_t> marker(nc, -1);
    std::vector<index_t> touched;
    const auto& arp = a.row_ptr();
    const auto& aci = a.col_idx();
    const auto& ava = a.values();
    const auto& brp = b.row_ptr();
    const auto& bci = b.col_idx();
    const auto& bva = b.values();
    for (index_t i = 0; i < nr; ++i) {
        touched.clear();
        for (index_t ka = arp[i]; ka < arp[i + 1]; ++ka) {
            index_t j = aci[ka];
            double av = ava[ka];
            for (index_t kb = brp[j]; kb < brp[j + 1]; ++kb) {
                index_t c = bci[kb];
                if (marker[c] != i) {
                    marker[c] = i;
                    acc[c] = 0.0;
                    touched.push_back(c);
                }
                acc[c] += av * bva[kb];
            }
        }
        std::sort(touched.begin(), touched.end());
        for (index_t c : touched) {
            if (acc[c] != 0.0) {
                ci.push_back(c);
                va.push_back(acc[c]);
            }
        }
        rp[i + 1] = static_cast<index_t>(ci.size());
    }
    return CsrMatrix(nr, nc, std::move(rp), std::move(ci), std::move(va));
}

CsrMatrix add(const CsrMatrix& a, const CsrMatrix& b) {
    if (a.nrows() != b.nrows() || a.ncols() != b.ncols())
        throw UsageError("add: shape mismatch");
    std::vector<index_t> rows, cols;
    std::vector<double> vals;
    rows.reserve(a.nnz() + b.nnz());
    cols.reserve(a.nnz() + b.nnz());
    vals.reserve(a.nnz() + b.nnz());
    for (const CsrMatrix* m : {&a, &b})
        for (index_t i = 0; i < m->nrows(); ++i)
            for (index_t k = m->row_ptr()[i]; k < m->row_ptr()[i + 1]; ++k) {
                rows.push_back(i);
                cols.push_back(m->col_idx()[k]);
                vals.push_back(m->values()[k]);
            }
    return CsrMatrix::from_triplets(a.nrows(), a.ncols(), rows, cols, vals);
}

CsrMatrix shifted_gram(const CsrMatrix& m, double alpha, double beta) {
    CsrMatrix g = matmul(m, m.transposed()).scaled(beta);
    return add(g, CsrMatrix::identity(m.nrows()).scaled(alpha));
}

CsrMatrix hcat(const std::vector<const CsrMatrix*>& blocks) {
    if (blocks.empty()) throw UsageError("hcat: no blocks");
    index_t nr = blocks.front()->nrows();
    index_t nc = 0;
    for (const CsrMatrix* b : blocks) {
        if (b->nrows() != nr) throw UsageError("hcat: row count mismatch");
        nc += b->ncols();
    }
    std::vector<index_t> rows, cols;
    std::vector<double> vals;
    index_t off = 0;
    for (const CsrMatrix* b : blocks) {
        for (index_t i = 0; i < b->nrows(); ++i)
            for (index_t k = b->row_ptr()[i]; k < b->row_ptr()[i + 1]; ++k) {
                rows.push_back(i);
                cols.push_back(off + b->col_idx()[k]);
                vals.push_back(b->values()[k]);
            }
        off += b->ncols();
    }
    return CsrMatrix::from_triplets(nr, nc, rows, cols, vals);
}

CsrMatrix vcat(const std::vector<const CsrMatrix*>& blocks) {
    if (blocks.empty()) throw UsageError("vcat: no blocks");
    index_t nc = blocks.front()->ncols();
    index_t nr = 0;
    for (const CsrMatrix* b : blocks) {
        if (b->ncols() != nc) throw UsageError("vcat: column count mismatch");
        nr += b->nrows();
    }
    std::vector<index_t> rows, cols;
    std::vector<double> vals;
    index_t off = 0;
    for (const CsrMatrix* b : blocks) {
        for (index_t i = 0; i < b->nrows(); ++i)
            for (index_t k = b->row_ptr()[i]; k < b->row_ptr()[i + 1]; ++k) {
                rows.push_back(off + i);
                cols.push_back(b->col_idx()[k]);
                vals.push_back(b->values()[k]);
            }
        off += b->nrows();
    }
    return CsrMatrix::from_triplets(nr, nc, rows, cols, vals);
}

} // namespace saddle
