// Tensor index set of the Galerkin basis: Hermite degrees n = 0..N times
// Fourier modes k = -K..K, flattened with k running fastest so that the U0 = 0
// block structure appears as contiguous strides.
#pragma once

#include <stdexcept>
#include <utility>

namespace specgap {

struct BasisSpec {
    int N;
    int K;

    BasisSpec(int N_, int K_) : N(N_), K(K_) {
        if (N < 1) throw std::invalid_argument("BasisSpec: N must be >= 1");
        if (K < 1) throw std::invalid_argument("BasisSpec: K must be >= 1");
    }

    int modes() const noexcept { return 2 * K + 1; }
    int dim() const noexcept { return (N + 1) * modes(); }

    int index(int n, int k) const {
        if (n < 0 || n > N || k < -K || k > K)
            throw std::invalid_argument("BasisSpec: (n, k) outside the index set");
        return n * modes() + (k + K);
    }

    std::pair<int, int> unindex(int idx) const {
        if (idx < 0 || idx >= dim())
            throw std::invalid_argument("BasisSpec: flat index out of range");
        return {idx / modes(), idx % modes() - K};
    }
};

} // namespace specgap
