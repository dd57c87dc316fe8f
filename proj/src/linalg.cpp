#include "fbl/linalg.hpp"

#include <cmath>

namespace fbl {

CMatrix CMatrix::identity(int n) {
    CMatrix m(n, n);
    for (int i = 0; i < n; ++i) m(i, i) = 1.0;
    return m;
}

CMatrix multiply(const CMatrix& a, const CMatrix& b) {
    if (a.cols() != b.rows()) throw std::invalid_argument("multiply: shape mismatch");
    CMatrix out(a.rows(), b.cols());
    for (int i = 0; i < a.rows(); ++i) {
        for (int k = 0; k < a.cols(); ++k) {
            const cdouble aik = a(i, k);
            if (aik == cdouble{}) continue;
            for (int j = 0; j < b.cols(); ++j) {
                out(i, j) += aik * b(k, j);
            }
        }
    }
    return out;
}

CMatrix gram(const CMatrix& a) {
    CMatrix out(a.rows(), a.rows());
    for (int i = 0; i < a.rows(); ++i) {
        for (int j = 0; j <= i; ++j) {
            cdouble s{};
            for (int k = 0; k < a.cols(); ++k) {
                s += a(i, k) * std::conj(a(j, k));
            }
            out(i, j) = s;
            out(j, i) = std::conj(s);
        }
    }
    return out;
}

Cholesky::Cholesky(const CMatrix& m) : l_(m) {
    if (m.rows() != m.cols()) throw std::invalid_argument("cholesky: matrix must be square");
    const int n = l_.rows();
    for (int j = 0; j < n; ++j) {
        double diag = l_(j, j).real();
        for (int k = 0; k < j; ++k) diag -= std::norm(l_(j, k));
        if (!(diag > 0.0) || !std::isfinite(diag)) {
            throw DecompositionError("cholesky pivot " + std::to_string(j) + " is not positive");
        }
        const double ljj = std::sqrt(diag);
        l_(j, j) = ljj;
        for (int i = j + 1; i < n; ++i) {
            cdouble s = l_(i, j);
            for (int k = 0; k < j; ++k) s -= l_(i, k) * std::conj(l_(j, k));
            l_(i, j) = s / ljj;
        }
        for (int k = j + 1; k < n; ++k) l_(j, k) = 0.0;
    }
}

double Cholesky::log_det() const {
    double s = 0.0;
    for (int i = 0; i < l_.rows(); ++i) s += std::log(l_(i, i).real());
    return 2.0 * s;
}

CMatrix Cholesky::solve(const CMatrix& rhs) const {
    if (rhs.rows() != l_.rows()) throw std::invalid_argument("solve: shape mismatch");
    const int n = l_.rows();
    CMatrix z = rhs;
    // L y = rhs, then L^H z = y; column blocks handled together.
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < z.cols(); ++j) {
            cdouble s = z(i, j);
            for (int k = 0; k < i; ++k) s -= l_(i, k) * z(k, j);
            z(i, j) = s / l_(i, i).real();
        }
    }
    for (int i = n - 1; i >= 0; --i) {
        for (int j = 0; j < z.cols(); ++j) {
            cdouble s = z(i, j);
            for (int k = i + 1; k < n; ++k) s -= std::conj(l_(k, i)) * z(k, j);
            z(i, j) = s / l_(i, i).real();
        }
    }
    return z;
}

std::pair<double, CMatrix> hermitian_logdet_solve(const CMatrix& m, const CMatrix& b) {
    const Cholesky chol(m);
    return {chol.log_det(), chol.solve(b)};
}

} // namespace fbl
