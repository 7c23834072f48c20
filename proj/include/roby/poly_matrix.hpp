#ifndef ROBY_POLY_MATRIX_HPP
#define ROBY_POLY_MATRIX_HPP

#include <cstddef>
#include <initializer_list>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "error.hpp"
#include "polynomial.hpp"

namespace roby
{

/// Dense row-major matrix of polynomials. Products skip zero entries, which is
/// where all the sparsity of Roby-module actions lives.
class PolyMatrix
{
public:
    PolyMatrix() = default;
    PolyMatrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), data_(rows * cols) {}
    PolyMatrix(std::initializer_list<std::initializer_list<Poly>> rows)
    {
        rows_ = rows.size();
        cols_ = rows_ ? rows.begin()->size() : 0;
        for (const auto &r : rows) {
            if (r.size() != cols_) {
                throw input_error("ragged matrix literal");
            }
            data_.insert(data_.end(), r.begin(), r.end());
        }
    }

    static PolyMatrix identity(std::size_t n)
    {
        PolyMatrix m(n, n);
        for (std::size_t i = 0; i < n; ++i) {
            m(i, i) = Poly(1);
        }
        return m;
    }
    static PolyMatrix scalar(std::size_t n, const Poly &lambda)
    {
        PolyMatrix m(n, n);
        for (std::size_t i = 0; i < n; ++i) {
            m(i, i) = lambda;
        }
        return m;
    }
    static PolyMatrix diagonal(const std::vector<Poly> &d)
    {
        PolyMatrix m(d.size(), d.size());
        for (std::size_t i = 0; i < d.size(); ++i) {
            m(i, i) = d[i];
        }
        return m;
    }

    std::size_t rows() const noexcept
    {
        return rows_;
    }
    std::size_t cols() const noexcept
    {
        return cols_;
    }
    bool is_square() const noexcept
    {
        return rows_ == cols_;
    }

    Poly &operator()(std::size_t r, std::size_t c)
    {
        return data_[r * cols_ + c];
    }
    const Poly &operator()(std::size_t r, std::size_t c) const
    {
        return data_[r * cols_ + c];
    }

    bool is_zero() const
    {
        for (const auto &p : data_) {
            if (!p.is_zero()) {
                return false;
            }
        }
        return true;
    }

    std::size_t nonzeros() const
    {
        std::size_t n = 0;
        for (const auto &p : data_) {
            n += !p.is_zero();
        }
        return n;
    }

    PolyMatrix &operator+=(const PolyMatrix &o)
    {
        check_same_shape(o);
        for (std::size_t i = 0; i < data_.size(); ++i) {
            if (!o.data_[i].is_zero()) {
                data_[i] += o.data_[i];
            }
        }
        return *this;
    }
    PolyMatrix &operator-=(const PolyMatrix &o)
    {
        check_same_shape(o);
        for (std::size_t i = 0; i < data_.size(); ++i) {
            if (!o.data_[i].is_zero()) {
                data_[i] -= o.data_[i];
            }
        }
        return *this;
    }
    friend PolyMatrix operator+(PolyMatrix a, const PolyMatrix &b)
    {
        return a += b;
    }
    friend PolyMatrix operator-(PolyMatrix a, const PolyMatrix &b)
    {
        return a -= b;
    }
    PolyMatrix operator-() const
    {
        PolyMatrix r(*this);
        for (auto &p : r.data_) {
            p = -p;
        }
        return r;
    }

    friend PolyMatrix operator*(const PolyMatrix &a, const PolyMatrix &b)
    {
        if (a.cols_ != b.rows_) {
            throw input_error("matrix product with mismatched inner dimensions " + std::to_string(a.cols_) + " and "
                              + std::to_string(b.rows_));
        }
        PolyMatrix r(a.rows_, b.cols_);
        for (std::size_t i = 0; i < a.rows_; ++i) {
            for (std::size_t k = 0; k < a.cols_; ++k) {
                const Poly &aik = a(i, k);
                if (aik.is_zero()) {
                    continue;
                }
                for (std::size_t j = 0; j < b.cols_; ++j) {
                    const Poly &bkj = b(k, j);
                    if (!bkj.is_zero()) {
                        r(i, j) += aik * bkj;
                    }
                }
            }
        }
        return r;
    }

    friend PolyMatrix operator*(const Poly &s, const PolyMatrix &m)
    {
        PolyMatrix r(m.rows_, m.cols_);
        if (s.is_zero()) {
            return r;
        }
        for (std::size_t i = 0; i < m.data_.size(); ++i) {
            if (!m.data_[i].is_zero()) {
                r.data_[i] = s * m.data_[i];
            }
        }
        return r;
    }

    // Exact k-th power by repeated squaring; k = 0 gives the identity.
    PolyMatrix pow(unsigned k) const
    {
        if (!is_square()) {
            throw input_error("matrix power of a non-square " + std::to_string(rows_) + "x" + std::to_string(cols_)
                              + " matrix");
        }
        PolyMatrix result = identity(rows_), base(*this);
        bool first = true;
        while (k > 0) {
            if (k & 1u) {
                result = first ? base : result * base;
                first = false;
            }
            k >>= 1u;
            if (k > 0) {
                base = base * base;
            }
        }
        return result;
    }

    PolyMatrix substitute(const std::map<var_id, Poly> &bindings) const
    {
        PolyMatrix r(*this);
        for (auto &p : r.data_) {
            if (!p.is_zero()) {
                p = p.substitute(bindings);
            }
        }
        return r;
    }

    // Sub-matrix on the given row and column index lists.
    PolyMatrix block(const std::vector<std::size_t> &rows, const std::vector<std::size_t> &cols) const
    {
        PolyMatrix r(rows.size(), cols.size());
        for (std::size_t i = 0; i < rows.size(); ++i) {
            for (std::size_t j = 0; j < cols.size(); ++j) {
                r(i, j) = (*this)(rows[i], cols[j]);
            }
        }
        return r;
    }

    std::set<var_id> variables() const
    {
        std::set<var_id> vs;
        for (const auto &p : data_) {
            auto v = p.variables();
            vs.insert(v.begin(), v.end());
        }
        return vs;
    }

    friend bool operator==(const PolyMatrix &a, const PolyMatrix &b)
    {
        return a.rows_ == b.rows_ && a.cols_ == b.cols_ && a.data_ == b.data_;
    }

    std::string to_string() const
    {
        std::string s = "[";
        for (std::size_t i = 0; i < rows_; ++i) {
            s += i ? ", [" : "[";
            for (std::size_t j = 0; j < cols_; ++j) {
                s += (j ? ", " : "") + (*this)(i, j).to_string();
            }
            s += "]";
        }
        return s + "]";
    }

private:
    void check_same_shape(const PolyMatrix &o) const
    {
        if (rows_ != o.rows_ || cols_ != o.cols_) {
            throw input_error("matrix shapes differ");
        }
    }

    std::size_t rows_ = 0, cols_ = 0;
    std::vector<Poly> data_;
};

// Kronecker product, row index of a major.
inline PolyMatrix kron(const PolyMatrix &a, const PolyMatrix &b)
{
    PolyMatrix r(a.rows() * b.rows(), a.cols() * b.cols());
    for (std::size_t i = 0; i < a.rows(); ++i) {
        for (std::size_t j = 0; j < a.cols(); ++j) {
            const Poly &aij = a(i, j);
            if (aij.is_zero()) {
                continue;
            }
            for (std::size_t k = 0; k < b.rows(); ++k) {
                for (std::size_t l = 0; l < b.cols(); ++l) {
                    if (!b(k, l).is_zero()) {
                        r(i * b.rows() + k, j * b.cols() + l) = aij * b(k, l);
                    }
                }
            }
        }
    }
    return r;
}

/// The scalar lambda when m = lambda * I exactly, otherwise nothing.
inline std::optional<Poly> is_scalar_multiple_of_identity(const PolyMatrix &m)
{
    if (!m.is_square()) {
        throw input_error("scalar-identity test on a non-square matrix");
    }
    if (m.rows() == 0) {
        return Poly();
    }
    const Poly lambda = m(0, 0);
    for (std::size_t i = 0; i < m.rows(); ++i) {
        for (std::size_t j = 0; j < m.cols(); ++j) {
            if (i == j ? !(m(i, j) == lambda) : !m(i, j).is_zero()) {
                return std::nullopt;
            }
        }
    }
    return lambda;
}

/// First entry (row-major) where two equally shaped matrices differ.
inline std::optional<std::pair<std::size_t, std::size_t>> first_difference(const PolyMatrix &a, const PolyMatrix &b)
{
    for (std::size_t i = 0; i < a.rows(); ++i) {
        for (std::size_t j = 0; j < a.cols(); ++j) {
            if (!(a(i, j) == b(i, j))) {
                return std::make_pair(i, j);
            }
        }
    }
    return std::nullopt;
}

// Sum_i coeffs[i] * mats[i].
inline PolyMatrix linear_combination(const std::vector<Poly> &coeffs, const std::vector<PolyMatrix> &mats)
{
    if (coeffs.size() != mats.size() || mats.empty()) {
        throw input_error("linear combination needs one coefficient per matrix");
    }
    PolyMatrix r(mats[0].rows(), mats[0].cols());
    for (std::size_t i = 0; i < mats.size(); ++i) {
        r += coeffs[i] * mats[i];
    }
    return r;
}

} // namespace roby

#endif // ROBY_POLY_MATRIX_HPP
