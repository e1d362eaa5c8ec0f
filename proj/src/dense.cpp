#include "ranklab/dense.hpp"

#include <sstream>

#include "ranklab/errors.hpp"

namespace ranklab {

namespace {

void check_same_field(const DenseMat& x, const DenseMat& y) {
    if (!x.field->same(*y.field))
        throw DomainMismatch("dense matrices over different fields: " +
                             x.field->description() + " vs " + y.field->description());
}

}  // namespace

DenseMat dense_zero(FieldPtr F, std::size_t rows, std::size_t cols) {
    DenseMat m;
    m.field = std::move(F);
    m.rows = rows;
    m.cols = cols;
    m.a.assign(rows * cols, m.field->zero());
    return m;
}

DenseMat dense_identity(FieldPtr F, std::size_t n) {
    DenseMat m = dense_zero(std::move(F), n, n);
    for (std::size_t i = 0; i < n; ++i) m.at(i, i) = m.field->one();
    return m;
}

DenseMat dense_add(const DenseMat& x, const DenseMat& y) {
    check_same_field(x, y);
    if (x.rows != y.rows || x.cols != y.cols)
        throw DomainMismatch("dense add: shape mismatch");
    DenseMat r = dense_zero(x.field, x.rows, x.cols);
    for (std::size_t i = 0; i < r.a.size(); ++i) r.a[i] = x.field->add(x.a[i], y.a[i]);
    return r;
}

DenseMat dense_mul(const DenseMat& x, const DenseMat& y) {
    check_same_field(x, y);
    if (x.cols != y.rows) throw DomainMismatch("dense mul: inner dimensions differ");
    const Field& F = *x.field;
    DenseMat r = dense_zero(x.field, x.rows, y.cols);
    for (std::size_t i = 0; i < x.rows; ++i)
        for (std::size_t k = 0; k < x.cols; ++k) {
            const FieldValue& xv = x.at(i, k);
            if (F.is_zero(xv)) continue;
            for (std::size_t j = 0; j < y.cols; ++j) {
                const FieldValue& yv = y.at(k, j);
                if (F.is_zero(yv)) continue;
                r.at(i, j) = F.add(r.at(i, j), F.mul(xv, yv));
            }
        }
    return r;
}

bool dense_equal(const DenseMat& x, const DenseMat& y) {
    if (!x.field->same(*y.field) || x.rows != y.rows || x.cols != y.cols) return false;
    for (std::size_t i = 0; i < x.a.size(); ++i)
        if (!x.field->equals(x.a[i], y.a[i])) return false;
    return true;
}

bool dense_is_identity(const DenseMat& x) {
    if (x.rows != x.cols) return false;
    for (std::size_t i = 0; i < x.rows; ++i)
        for (std::size_t j = 0; j < x.cols; ++j) {
            if (i == j ? !x.field->is_one(x.at(i, j)) : !x.field->is_zero(x.at(i, j)))
                return false;
        }
    return true;
}

std::optional<DenseMat> dense_inverse(const DenseMat& x) {
    if (x.rows != x.cols) throw DomainMismatch("dense inverse: matrix not square");
    const Field& F = *x.field;
    std::size_t n = x.rows;
    DenseMat a = x;
    DenseMat inv = dense_identity(x.field, n);
    for (std::size_t col = 0; col < n; ++col) {
        std::size_t piv = col;
        while (piv < n && F.is_zero(a.at(piv, col))) ++piv;
        if (piv == n) return std::nullopt;
        if (piv != col)
            for (std::size_t j = 0; j < n; ++j) {
                std::swap(a.at(piv, j), a.at(col, j));
                std::swap(inv.at(piv, j), inv.at(col, j));
            }
        FieldValue d = F.inv(a.at(col, col));
        for (std::size_t j = 0; j < n; ++j) {
            a.at(col, j) = F.mul(a.at(col, j), d);
            inv.at(col, j) = F.mul(inv.at(col, j), d);
        }
        for (std::size_t i = 0; i < n; ++i) {
            if (i == col || F.is_zero(a.at(i, col))) continue;
            FieldValue f = a.at(i, col);
            for (std::size_t j = 0; j < n; ++j) {
                a.at(i, j) = F.sub(a.at(i, j), F.mul(f, a.at(col, j)));
                inv.at(i, j) = F.sub(inv.at(i, j), F.mul(f, inv.at(col, j)));
            }
        }
    }
    return inv;
}

std::size_t dense_rank(DenseMat x) {
    const Field& F = *x.field;
    std::size_t rank = 0;
    std::size_t row = 0;
    for (std::size_t col = 0; col < x.cols && row < x.rows; ++col) {
        std::size_t piv = row;
        while (piv < x.rows && F.is_zero(x.at(piv, col))) ++piv;
        if (piv == x.rows) continue;
        if (piv != row)
            for (std::size_t j = col; j < x.cols; ++j) std::swap(x.at(piv, j), x.at(row, j));
        FieldValue d = F.inv(x.at(row, col));
        for (std::size_t i = row + 1; i < x.rows; ++i) {
            if (F.is_zero(x.at(i, col))) continue;
            FieldValue f = F.mul(x.at(i, col), d);
            x.at(i, col) = F.zero();
            for (std::size_t j = col + 1; j < x.cols; ++j)
                x.at(i, j) = F.sub(x.at(i, j), F.mul(f, x.at(row, j)));
        }
        ++row;
        ++rank;
    }
    return rank;
}

DenseMat dense_map(const DenseMat& x, FieldPtr target,
                   const std::function<FieldValue(const FieldValue&)>& f) {
    DenseMat r = dense_zero(std::move(target), x.rows, x.cols);
    for (std::size_t i = 0; i < x.a.size(); ++i) r.a[i] = f(x.a[i]);
    return r;
}

std::string dense_str(const DenseMat& x) {
    std::ostringstream os;
    os << "[";
    for (std::size_t i = 0; i < x.rows; ++i) {
        if (i) os << "; ";
        for (std::size_t j = 0; j < x.cols; ++j) {
            if (j) os << ", ";
            os << x.field->str(x.at(i, j));
        }
    }
    os << "]";
    return os.str();
}

}  // namespace ranklab
