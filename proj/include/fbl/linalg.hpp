#pragma once

#include <complex>
#include <utility>
#include <vector>

#include "fbl/errors.hpp"

namespace fbl {

using cdouble = std::complex<double>;

// Dense row-major complex matrix, sized for the small systems handled here
// (tens of rows). Not a general linear-algebra library.
class CMatrix {
public:
    CMatrix() = default;
    CMatrix(int rows, int cols) : rows_(rows), cols_(cols), data_(static_cast<size_t>(rows) * cols) {}

    static CMatrix identity(int n);

    int rows() const { return rows_; }
    int cols() const { return cols_; }

    cdouble& operator()(int i, int j) { return data_[static_cast<size_t>(i) * cols_ + j]; }
    const cdouble& operator()(int i, int j) const { return data_[static_cast<size_t>(i) * cols_ + j]; }

    const std::vector<cdouble>& data() const { return data_; }
    std::vector<cdouble>& data() { return data_; }

private:
    int rows_ = 0;
    int cols_ = 0;
    std::vector<cdouble> data_;
};

CMatrix multiply(const CMatrix& a, const CMatrix& b);

// a * a^H (Hermitian, returned in full storage).
CMatrix gram(const CMatrix& a);

// In-place lower Cholesky factor of a Hermitian positive definite matrix.
// Throws DecompositionError on a nonpositive pivot.
class DecompositionError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct Cholesky {
    explicit Cholesky(const CMatrix& m); // m Hermitian positive definite
    double log_det() const;              // log det of the factored matrix
    CMatrix solve(const CMatrix& rhs) const;
    const CMatrix& factor() const { return l_; }

private:
    CMatrix l_;
};

// log det M together with the solution of M Z = B, via one factorization.
std::pair<double, CMatrix> hermitian_logdet_solve(const CMatrix& m, const CMatrix& b);

} // namespace fbl
