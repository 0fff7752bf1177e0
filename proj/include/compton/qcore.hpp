//---------------------------------*-C++-*-----------------------------------//
// SPDX-License-Identifier: Apache-2.0
//---------------------------------------------------------------------------//
//! \file compton/qcore.hpp
//! Small dense complex linear algebra for 2-, 4- and 8-dimensional
//! polarization spaces.
//---------------------------------------------------------------------------//
#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <cstddef>
#include <initializer_list>
#include <numeric>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace compton
{
using cplx = std::complex<double>;

inline constexpr double pi = 3.14159265358979323846;

//---------------------------------------------------------------------------//
// ERRORS
//---------------------------------------------------------------------------//
enum class ErrorCode
{
    not_hermitian,
    bad_dim,
    bad_lambda,
    dim_mismatch,
    bad_weight,
    size_mismatch,
    unsupported,
    bad_count,
    bad_config,
    insufficient_statistics,
    bad_spec,
    invalid_state,
};

inline char const* to_cstring(ErrorCode code)
{
    switch (code)
    {
        case ErrorCode::not_hermitian: return "NotHermitian";
        case ErrorCode::bad_dim: return "BadDim";
        case ErrorCode::bad_lambda: return "BadLambda";
        case ErrorCode::dim_mismatch: return "DimMismatch";
        case ErrorCode::bad_weight: return "BadWeight";
        case ErrorCode::size_mismatch: return "SizeMismatch";
        case ErrorCode::unsupported: return "Unsupported";
        case ErrorCode::bad_count: return "BadCount";
        case ErrorCode::bad_config: return "BadConfig";
        case ErrorCode::insufficient_statistics:
            return "InsufficientStatistics";
        case ErrorCode::bad_spec: return "BadSpec";
        case ErrorCode::invalid_state: return "InvalidState";
    }
    return "Unknown";
}

//! Library exception; the code identifies the contract that was violated.
class Error : public std::runtime_error
{
  public:
    Error(ErrorCode code, std::string const& what)
        : std::runtime_error(std::string(to_cstring(code)) + ": " + what)
        , code_(code)
    {
    }

    ErrorCode code() const noexcept { return code_; }

  private:
    ErrorCode code_;
};

//---------------------------------------------------------------------------//
// TOLERANCES
//---------------------------------------------------------------------------//
namespace tol
{
inline constexpr double hermitian = 1e-12;
inline constexpr double trace = 1e-12;
inline constexpr double psd_floor = -1e-10;
inline constexpr double unit_norm = 1e-12;
inline constexpr double unitary = 1e-10;
//! Looser Hermiticity check for eigensolver input
inline constexpr double eig_input = 1e-10;
}  // namespace tol

//---------------------------------------------------------------------------//
/*!
 * Dense row-major complex matrix.
 */
class ComplexMatrix
{
  public:
    ComplexMatrix() = default;

    ComplexMatrix(std::size_t rows, std::size_t cols)
        : rows_(rows), cols_(cols), data_(rows * cols, cplx{0, 0})
    {
    }

    ComplexMatrix(std::size_t rows, std::size_t cols, std::vector<cplx> data)
        : rows_(rows), cols_(cols), data_(std::move(data))
    {
        if (data_.size() != rows_ * cols_)
        {
            throw Error(ErrorCode::bad_dim, "entry count != rows*cols");
        }
    }

    //! Construct from nested rows
    ComplexMatrix(std::initializer_list<std::initializer_list<cplx>> rows)
        : rows_(rows.size()), cols_(rows.size() ? rows.begin()->size() : 0)
    {
        data_.reserve(rows_ * cols_);
        for (auto const& r : rows)
        {
            if (r.size() != cols_)
            {
                throw Error(ErrorCode::bad_dim, "ragged initializer");
            }
            data_.insert(data_.end(), r.begin(), r.end());
        }
    }

    static ComplexMatrix identity(std::size_t n)
    {
        ComplexMatrix m(n, n);
        for (std::size_t i = 0; i < n; ++i)
            m(i, i) = 1.0;
        return m;
    }

    static ComplexMatrix diagonal(std::span<double const> d)
    {
        ComplexMatrix m(d.size(), d.size());
        for (std::size_t i = 0; i < d.size(); ++i)
            m(i, i) = d[i];
        return m;
    }

    //! Outer product |a><b|
    static ComplexMatrix outer(std::span<cplx const> a, std::span<cplx const> b)
    {
        ComplexMatrix m(a.size(), b.size());
        for (std::size_t i = 0; i < a.size(); ++i)
            for (std::size_t j = 0; j < b.size(); ++j)
                m(i, j) = a[i] * std::conj(b[j]);
        return m;
    }

    std::size_t rows() const noexcept { return rows_; }
    std::size_t cols() const noexcept { return cols_; }
    bool is_square() const noexcept { return rows_ == cols_; }
    std::span<cplx const> data() const noexcept { return data_; }

    cplx& operator()(std::size_t i, std::size_t j)
    {
        return data_[i * cols_ + j];
    }
    cplx const& operator()(std::size_t i, std::size_t j) const
    {
        return data_[i * cols_ + j];
    }

    ComplexMatrix adjoint() const
    {
        ComplexMatrix r(cols_, rows_);
        for (std::size_t i = 0; i < rows_; ++i)
            for (std::size_t j = 0; j < cols_; ++j)
                r(j, i) = std::conj((*this)(i, j));
        return r;
    }

    ComplexMatrix transpose() const
    {
        ComplexMatrix r(cols_, rows_);
        for (std::size_t i = 0; i < rows_; ++i)
            for (std::size_t j = 0; j < cols_; ++j)
                r(j, i) = (*this)(i, j);
        return r;
    }

    ComplexMatrix conj() const
    {
        ComplexMatrix r = *this;
        for (auto& z : r.data_)
            z = std::conj(z);
        return r;
    }

    cplx trace() const
    {
        cplx t{0, 0};
        for (std::size_t i = 0; i < std::min(rows_, cols_); ++i)
            t += (*this)(i, i);
        return t;
    }

    ComplexMatrix& operator+=(ComplexMatrix const& o)
    {
        check_same_shape(o);
        for (std::size_t i = 0; i < data_.size(); ++i)
            data_[i] += o.data_[i];
        return *this;
    }
    ComplexMatrix& operator-=(ComplexMatrix const& o)
    {
        check_same_shape(o);
        for (std::size_t i = 0; i < data_.size(); ++i)
            data_[i] -= o.data_[i];
        return *this;
    }
    ComplexMatrix& operator*=(cplx s)
    {
        for (auto& z : data_)
            z *= s;
        return *this;
    }

    friend ComplexMatrix operator+(ComplexMatrix a, ComplexMatrix const& b)
    {
        return a += b;
    }
    friend ComplexMatrix operator-(ComplexMatrix a, ComplexMatrix const& b)
    {
        return a -= b;
    }
    friend ComplexMatrix operator*(ComplexMatrix a, cplx s) { return a *= s; }
    friend ComplexMatrix operator*(cplx s, ComplexMatrix a) { return a *= s; }

    friend ComplexMatrix operator*(ComplexMatrix const& a, ComplexMatrix const& b)
    {
        if (a.cols_ != b.rows_)
        {
            throw Error(ErrorCode::dim_mismatch, "matrix product shapes");
        }
        ComplexMatrix r(a.rows_, b.cols_);
        for (std::size_t i = 0; i < a.rows_; ++i)
            for (std::size_t k = 0; k < a.cols_; ++k)
            {
                cplx const aik = a(i, k);
                if (aik == cplx{0, 0})
                    continue;
                for (std::size_t j = 0; j < b.cols_; ++j)
                    r(i, j) += aik * b(k, j);
            }
        return r;
    }

    //! Matrix-vector product
    std::vector<cplx> apply(std::span<cplx const> v) const
    {
        if (v.size() != cols_)
        {
            throw Error(ErrorCode::dim_mismatch, "matrix-vector shapes");
        }
        std::vector<cplx> r(rows_, cplx{0, 0});
        for (std::size_t i = 0; i < rows_; ++i)
            for (std::size_t j = 0; j < cols_; ++j)
                r[i] += (*this)(i, j) * v[j];
        return r;
    }

    friend bool operator==(ComplexMatrix const&, ComplexMatrix const&)
        = default;

  private:
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<cplx> data_;

    void check_same_shape(ComplexMatrix const& o) const
    {
        if (rows_ != o.rows_ || cols_ != o.cols_)
        {
            throw Error(ErrorCode::dim_mismatch, "matrix shapes differ");
        }
    }
};

//! Largest entrywise |a - b|
inline double max_abs_diff(ComplexMatrix const& a, ComplexMatrix const& b)
{
    if (a.rows() != b.rows() || a.cols() != b.cols())
    {
        throw Error(ErrorCode::dim_mismatch, "matrix shapes differ");
    }
    double d = 0;
    for (std::size_t i = 0; i < a.data().size(); ++i)
        d = std::max(d, std::abs(a.data()[i] - b.data()[i]));
    return d;
}

//! Largest entrywise |M - M^dagger|
inline double hermiticity_defect(ComplexMatrix const& m)
{
    if (!m.is_square())
        return INFINITY;
    return max_abs_diff(m, m.adjoint());
}

//! Kronecker product; dimensions multiply.
inline ComplexMatrix tensor(ComplexMatrix const& a, ComplexMatrix const& b)
{
    ComplexMatrix r(a.rows() * b.rows(), a.cols() * b.cols());
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t j = 0; j < a.cols(); ++j)
            for (std::size_t k = 0; k < b.rows(); ++k)
                for (std::size_t l = 0; l < b.cols(); ++l)
                    r(i * b.rows() + k, j * b.cols() + l) = a(i, j) * b(k, l);
    return r;
}

inline std::vector<cplx>
tensor(std::span<cplx const> a, std::span<cplx const> b)
{
    std::vector<cplx> r;
    r.reserve(a.size() * b.size());
    for (auto x : a)
        for (auto y : b)
            r.push_back(x * y);
    return r;
}

inline cplx inner(std::span<cplx const> a, std::span<cplx const> b)
{
    cplx s{0, 0};
    for (std::size_t i = 0; i < a.size(); ++i)
        s += std::conj(a[i]) * b[i];
    return s;
}

//---------------------------------------------------------------------------//
// PAULI MATRICES
//---------------------------------------------------------------------------//
namespace pauli
{
inline ComplexMatrix x() { return {{0, 1}, {1, 0}}; }
inline ComplexMatrix y() { return {{0, cplx{0, -1}}, {cplx{0, 1}, 0}}; }
inline ComplexMatrix z() { return {{1, 0}, {0, -1}}; }
}  // namespace pauli

//---------------------------------------------------------------------------//
// EIGENSOLVER
//---------------------------------------------------------------------------//
struct HermitianEigen
{
    std::vector<double> values;  //!< Descending
    ComplexMatrix vectors;  //!< Column i is the eigenvector of values[i]
};

/*!
 * Cyclic Jacobi diagonalization of a Hermitian matrix.
 *
 * Each rotation first removes the phase of the pivot element and then applies
 * the real symmetric Jacobi rotation.
 */
inline HermitianEigen eigh(ComplexMatrix const& m)
{
    if (hermiticity_defect(m) > tol::eig_input)
    {
        throw Error(ErrorCode::not_hermitian, "eigh input");
    }
    std::size_t const n = m.rows();
    ComplexMatrix a = m;
    // Symmetrize away the tolerated defect
    for (std::size_t i = 0; i < n; ++i)
    {
        a(i, i) = a(i, i).real();
        for (std::size_t j = i + 1; j < n; ++j)
        {
            cplx avg = 0.5 * (a(i, j) + std::conj(a(j, i)));
            a(i, j) = avg;
            a(j, i) = std::conj(avg);
        }
    }
    ComplexMatrix v = ComplexMatrix::identity(n);

    auto off_norm = [&] {
        double s = 0;
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j)
                if (i != j)
                    s += std::norm(a(i, j));
        return s;
    };
    double scale = 0;
    for (auto z : a.data())
        scale += std::norm(z);

    for (int sweep = 0; sweep < 100; ++sweep)
    {
        if (off_norm() <= 1e-32 * std::max(scale, 1e-300))
            break;
        for (std::size_t p = 0; p + 1 < n; ++p)
        {
            for (std::size_t q = p + 1; q < n; ++q)
            {
                double const b = std::abs(a(p, q));
                if (b < 1e-300)
                    continue;
                cplx const phase = a(p, q) / b;  // e^{i phi}
                double const app = a(p, p).real();
                double const aqq = a(q, q).real();
                double const tau = (aqq - app) / (2 * b);
                double const t = (tau >= 0 ? 1.0 : -1.0)
                                 / (std::abs(tau) + std::sqrt(1 + tau * tau));
                double const c = 1 / std::sqrt(1 + t * t);
                double const s = t * c;
                // J = diag(1, e^{-i phi}) * [[c, s], [-s, c]]
                cplx const jpp = c;
                cplx const jpq = s;
                cplx const jqp = -s * std::conj(phase);
                cplx const jqq = c * std::conj(phase);
                // A <- A J
                for (std::size_t k = 0; k < n; ++k)
                {
                    cplx const akp = a(k, p);
                    cplx const akq = a(k, q);
                    a(k, p) = akp * jpp + akq * jqp;
                    a(k, q) = akp * jpq + akq * jqq;
                    cplx const vkp = v(k, p);
                    cplx const vkq = v(k, q);
                    v(k, p) = vkp * jpp + vkq * jqp;
                    v(k, q) = vkp * jpq + vkq * jqq;
                }
                // A <- J^dagger A
                for (std::size_t k = 0; k < n; ++k)
                {
                    cplx const apk = a(p, k);
                    cplx const aqk = a(q, k);
                    a(p, k) = std::conj(jpp) * apk + std::conj(jqp) * aqk;
                    a(q, k) = std::conj(jpq) * apk + std::conj(jqq) * aqk;
                }
                a(p, q) = 0;
                a(q, p) = 0;
            }
        }
    }

    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(), [&](auto i, auto j) {
        return a(i, i).real() > a(j, j).real();
    });
    HermitianEigen result;
    result.vectors = ComplexMatrix(n, n);
    for (std::size_t c = 0; c < n; ++c)
    {
        result.values.push_back(a(order[c], order[c]).real());
        for (std::size_t r = 0; r < n; ++r)
            result.vectors(r, c) = v(r, order[c]);
    }
    return result;
}

//! Real spectrum of a Hermitian matrix, descending.
inline std::vector<double> eigvals_hermitian(ComplexMatrix const& m)
{
    return eigh(m).values;
}

//---------------------------------------------------------------------------//
// QUANTUM STATE TYPES
//---------------------------------------------------------------------------//
/*!
 * Unit-norm state vector.
 */
class PureState
{
  public:
    //! Validates unit norm
    explicit PureState(std::vector<cplx> amplitudes)
        : amps_(std::move(amplitudes))
    {
        double nrm = 0;
        for (auto z : amps_)
            nrm += std::norm(z);
        if (amps_.empty() || std::abs(nrm - 1) > tol::unit_norm)
        {
            throw Error(ErrorCode::invalid_state, "state is not unit norm");
        }
    }

    //! Normalize arbitrary nonzero amplitudes
    static PureState normalized(std::vector<cplx> amplitudes)
    {
        double nrm = 0;
        for (auto z : amplitudes)
            nrm += std::norm(z);
        if (!(nrm > 0))
        {
            throw Error(ErrorCode::invalid_state, "zero vector");
        }
        for (auto& z : amplitudes)
            z /= std::sqrt(nrm);
        return PureState(std::move(amplitudes));
    }

    std::size_t dim() const noexcept { return amps_.size(); }
    std::span<cplx const> amplitudes() const noexcept { return amps_; }
    cplx operator[](std::size_t i) const { return amps_[i]; }

    ComplexMatrix projector() const
    {
        return ComplexMatrix::outer(amps_, amps_);
    }

  private:
    std::vector<cplx> amps_;
};

inline cplx inner(PureState const& a, PureState const& b)
{
    return inner(a.amplitudes(), b.amplitudes());
}

inline PureState tensor(PureState const& a, PureState const& b)
{
    return PureState::normalized(tensor(a.amplitudes(), b.amplitudes()));
}

/*!
 * Trace-one positive Hermitian operator on a 2^n space, n <= 3.
 */
class DensityMatrix
{
  public:
    explicit DensityMatrix(ComplexMatrix m) : m_(std::move(m))
    {
        std::size_t const d = m_.rows();
        if (!m_.is_square() || !(d == 2 || d == 4 || d == 8))
        {
            throw Error(ErrorCode::bad_dim, "density matrix dimension");
        }
        if (hermiticity_defect(m_) > tol::hermitian)
        {
            throw Error(ErrorCode::not_hermitian, "density matrix");
        }
        if (std::abs(m_.trace() - 1.0) > tol::trace)
        {
            throw Error(ErrorCode::invalid_state, "trace != 1");
        }
        auto ev = eigvals_hermitian(m_);
        if (ev.back() < tol::psd_floor)
        {
            throw Error(ErrorCode::invalid_state, "negative eigenvalue");
        }
    }

    explicit DensityMatrix(PureState const& psi)
        : DensityMatrix(psi.projector())
    {
    }

    static DensityMatrix maximally_mixed(std::size_t dim)
    {
        return DensityMatrix(ComplexMatrix::identity(dim)
                             * cplx{1.0 / static_cast<double>(dim)});
    }

    std::size_t dim() const noexcept { return m_.rows(); }
    ComplexMatrix const& matrix() const noexcept { return m_; }
    cplx operator()(std::size_t i, std::size_t j) const { return m_(i, j); }

    //! Tr(rho A)
    cplx expectation(ComplexMatrix const& a) const
    {
        cplx s{0, 0};
        for (std::size_t i = 0; i < dim(); ++i)
            for (std::size_t j = 0; j < dim(); ++j)
                s += m_(i, j) * a(j, i);
        return s;
    }

  private:
    ComplexMatrix m_;
};

//! Convex combination of density matrices with nonnegative weights summing
//! to one.
inline DensityMatrix
mixture(std::span<std::pair<double, DensityMatrix> const> terms)
{
    if (terms.empty())
    {
        throw Error(ErrorCode::bad_weight, "empty mixture");
    }
    std::size_t const d = terms.front().second.dim();
    ComplexMatrix m(d, d);
    double wsum = 0;
    for (auto const& [w, rho] : terms)
    {
        if (w < 0 || rho.dim() != d)
        {
            throw Error(ErrorCode::bad_weight, "mixture weight or dim");
        }
        m += rho.matrix() * cplx{w};
        wsum += w;
    }
    if (std::abs(wsum - 1) > 1e-12)
    {
        throw Error(ErrorCode::bad_weight, "mixture weights must sum to 1");
    }
    return DensityMatrix(std::move(m));
}

/*!
 * Unitary operator, U^dagger U = 1 within 1e-10 entrywise.
 */
class Unitary
{
  public:
    explicit Unitary(ComplexMatrix m) : m_(std::move(m))
    {
        if (!m_.is_square())
        {
            throw Error(ErrorCode::bad_dim, "unitary must be square");
        }
        if (max_abs_diff(m_.adjoint() * m_,
                         ComplexMatrix::identity(m_.rows()))
            > tol::unitary)
        {
            throw Error(ErrorCode::invalid_state, "matrix is not unitary");
        }
    }

    static Unitary identity(std::size_t n)
    {
        return Unitary(ComplexMatrix::identity(n));
    }

    std::size_t dim() const noexcept { return m_.rows(); }
    ComplexMatrix const& matrix() const noexcept { return m_; }

    Unitary adjoint() const { return Unitary(m_.adjoint()); }
    Unitary conj() const { return Unitary(m_.conj()); }

    friend Unitary operator*(Unitary const& a, Unitary const& b)
    {
        return Unitary(a.m_ * b.m_);
    }

  private:
    ComplexMatrix m_;
};

inline Unitary tensor(Unitary const& a, Unitary const& b)
{
    return Unitary(tensor(a.matrix(), b.matrix()));
}

//! U rho U^dagger
inline DensityMatrix conjugate(DensityMatrix const& rho, Unitary const& u)
{
    ComplexMatrix m = u.matrix() * rho.matrix() * u.matrix().adjoint();
    // Remove rounding-level Hermiticity defect
    ComplexMatrix h = (m + m.adjoint()) * cplx{0.5};
    return DensityMatrix(std::move(h));
}

//! General SU(2) element from three Euler angles, Rz(a) Ry(b) Rz(c).
inline Unitary su2(double a, double b, double c)
{
    cplx const e1 = std::polar(1.0, -0.5 * (a + c));
    cplx const e2 = std::polar(1.0, -0.5 * (a - c));
    double const cb = std::cos(0.5 * b);
    double const sb = std::sin(0.5 * b);
    return Unitary(ComplexMatrix{{e1 * cb, -e2 * sb},
                                 {std::conj(e2) * sb, std::conj(e1) * cb}});
}

//---------------------------------------------------------------------------//
// TWO-QUBIT HELPERS
//---------------------------------------------------------------------------//
//! Transpose on one tensor factor of a two-qubit operator.
inline ComplexMatrix
partial_transpose(ComplexMatrix const& m, std::size_t subsystem)
{
    if (m.rows() != 4 || m.cols() != 4)
    {
        throw Error(ErrorCode::bad_dim, "partial transpose needs dim 4");
    }
    if (subsystem > 1)
    {
        throw Error(ErrorCode::bad_dim, "subsystem index must be 0 or 1");
    }
    ComplexMatrix r(4, 4);
    for (std::size_t i1 = 0; i1 < 2; ++i1)
        for (std::size_t i2 = 0; i2 < 2; ++i2)
            for (std::size_t j1 = 0; j1 < 2; ++j1)
                for (std::size_t j2 = 0; j2 < 2; ++j2)
                {
                    std::size_t row = 2 * i1 + i2;
                    std::size_t col = 2 * j1 + j2;
                    std::size_t src_row
                        = subsystem == 0 ? 2 * j1 + i2 : 2 * i1 + j2;
                    std::size_t src_col
                        = subsystem == 0 ? 2 * i1 + j2 : 2 * j1 + i2;
                    r(row, col) = m(src_row, src_col);
                }
    return r;
}

inline ComplexMatrix
partial_transpose(DensityMatrix const& rho, std::size_t subsystem)
{
    return partial_transpose(rho.matrix(), subsystem);
}

//! Exchange operator on two qubits
inline ComplexMatrix swap_operator()
{
    ComplexMatrix s(4, 4);
    s(0, 0) = s(3, 3) = 1;
    s(1, 2) = s(2, 1) = 1;
    return s;
}

//! rho_ab -> rho_ba
inline DensityMatrix swap_parties(DensityMatrix const& rho)
{
    if (rho.dim() != 4)
    {
        throw Error(ErrorCode::bad_dim, "swap needs dim 4");
    }
    auto const s = swap_operator();
    return DensityMatrix(s * rho.matrix() * s);
}

//! Correlation tensor T_ij = Tr(rho sigma_i x sigma_j), i,j in {x,y,z}.
inline std::array<std::array<double, 3>, 3>
correlation_tensor(DensityMatrix const& rho)
{
    if (rho.dim() != 4)
    {
        throw Error(ErrorCode::bad_dim, "correlation tensor needs dim 4");
    }
    ComplexMatrix const p[3] = {pauli::x(), pauli::y(), pauli::z()};
    std::array<std::array<double, 3>, 3> t{};
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j)
            t[i][j] = rho.expectation(tensor(p[i], p[j])).real();
    return t;
}

}  // namespace compton
