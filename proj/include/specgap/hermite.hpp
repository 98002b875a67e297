// Orthonormal probabilists' Hermite polynomials evaluated on a grid, together
// with first and second derivatives from independent recurrences so ladder
// identities can be cross-checked rather than assumed.
#pragma once

#include <Eigen/Dense>
#include <vector>

namespace specgap {

// Row n (0..N) holds the degree-n polynomial on the input grid.
struct HermiteTable {
    Eigen::MatrixXd value;
    Eigen::MatrixXd d1;
    Eigen::MatrixXd d2;
};

// Three-term recurrences in the standardized variable y:
//   H_{n+1} = (y H_n - sqrt(n) H_{n-1}) / sqrt(n+1)
//   H'_{n+1} = (H_n + y H'_n - sqrt(n) H'_{n-1}) / sqrt(n+1)
//   H''_{n+1} = (2 H'_n + y H''_n - sqrt(n) H''_{n-1}) / sqrt(n+1)
HermiteTable hermite_table(int N, const std::vector<double>& y);

} // namespace specgap
