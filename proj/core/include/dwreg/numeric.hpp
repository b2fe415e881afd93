#pragma once

#include "dwreg/common.hpp"

namespace dwreg {

// Working tolerance for positive definiteness: a symmetric matrix is accepted
// when its smallest eigenvalue exceeds -pd_jitter(M); the same quantity is the
// diagonal jitter added before a retried factorization.
double pd_jitter(const Matrix& m);

// Lower Cholesky factor of a (numerically) positive semi-definite matrix.
// Retries once with diagonal jitter, throws numerical_error otherwise.
// `what` names the matrix in the error message.
Matrix chol_psd(const Matrix& m, const char* what);

// Symmetric inverse through the jittered Cholesky factorization.
Matrix invert_psd(const Matrix& m, const char* what);

// log det(M) for M = L L' given the lower factor L.
double logdet_from_chol(const Matrix& L);

// Sum of |f_i - f_{i-1}| over a sampled curve.
double total_variation(const Vector& f);

// Linear-interpolation quantile of an unsorted sample copy, p in [0, 1].
double quantile(std::vector<double> sample, double p);

}  // namespace dwreg
