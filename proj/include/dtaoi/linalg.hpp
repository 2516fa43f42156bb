#pragma once

#include <cstdint>

#include <Eigen/Dense>

namespace dtaoi {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;
using RowVector = Eigen::RowVectorXd;

// Largest eigenvalue modulus.
double spectral_radius(const Matrix& a);

// a^n by binary exponentiation.
Matrix matrix_power(const Matrix& a, std::uint64_t n);

// a^n * v without forming a^n when n is small; binary exponentiation otherwise.
Vector power_times(const Matrix& a, std::uint64_t n, const Vector& v);

double max_abs(const Matrix& a);

} // namespace dtaoi
