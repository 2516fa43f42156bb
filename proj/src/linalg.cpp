#include "dtaoi/linalg.hpp"

#include <Eigen/Eigenvalues>

namespace dtaoi {

double spectral_radius(const Matrix& a)
{
    if (a.size() == 0)
        return 0.0;
    if (a.rows() == 1)
        return std::abs(a(0, 0));
    Eigen::EigenSolver<Matrix> es(a, /*computeEigenvectors=*/false);
    return es.eigenvalues().cwiseAbs().maxCoeff();
}

Matrix matrix_power(const Matrix& a, std::uint64_t n)
{
    Matrix result = Matrix::Identity(a.rows(), a.cols());
    Matrix base = a;
    while (n > 0) {
        if (n & 1U)
            result = result * base;
        n >>= 1U;
        if (n > 0)
            base = base * base;
    }
    return result;
}

Vector power_times(const Matrix& a, std::uint64_t n, const Vector& v)
{
    // A handful of mat-vecs beat log2(n) mat-mats for tiny n.
    if (n <= 8) {
        Vector out = v;
        for (std::uint64_t i = 0; i < n; ++i)
            out = a * out;
        return out;
    }
    return matrix_power(a, n) * v;
}

double max_abs(const Matrix& a)
{
    return a.size() == 0 ? 0.0 : a.cwiseAbs().maxCoeff();
}

} // namespace dtaoi
