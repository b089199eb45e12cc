#pragma once

// Fourier symbols of matrices over Z^d. For f in M_{m,n}(C(Z^d)) the symbol
// is f^(t) = sum_g f_g exp(2 pi i <g, t>), t in [0,1)^d. Evaluated on the
// midpoint grid ((k + 1/2) / G)^d, which never contains t = 0.

#include <cstddef>
#include <span>

#include <Eigen/Dense>

#include "soficrank/group_ring.hpp"

namespace soficrank {

Eigen::MatrixXcd fourier_symbol(const GroupRingMatrix& f, std::span<const double> t);

/// Average over the grid of #{singular values of f^(t) <= eta}, counting
/// n - m zeros when m < n. Lies in [0, n].
double fourier_counting_oracle(const GroupRingMatrix& f, double eta, std::size_t grid);

/// Average over the grid of the kernel dimension of f^(t): n minus the number
/// of singular values above `threshold`.
double fourier_kernel_measure(const GroupRingMatrix& f, std::size_t grid,
                              double threshold = 1e-8);

}  // namespace soficrank
