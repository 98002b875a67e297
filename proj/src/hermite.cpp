#include "specgap/hermite.hpp"

#include <cmath>
#include <stdexcept>

namespace specgap {

HermiteTable hermite_table(int N, const std::vector<double>& y) {
    if (N < 0) throw std::invalid_argument("hermite_table: N must be >= 0");
    if (y.empty()) throw std::invalid_argument("hermite_table: empty grid");
    const Eigen::Index cols = static_cast<Eigen::Index>(y.size());

    HermiteTable t;
    t.value.setZero(N + 1, cols);
    t.d1.setZero(N + 1, cols);
    t.d2.setZero(N + 1, cols);

    for (Eigen::Index j = 0; j < cols; ++j) {
        const double yj = y[static_cast<std::size_t>(j)];
        t.value(0, j) = 1.0;
        if (N >= 1) {
            t.value(1, j) = yj;
            t.d1(1, j) = 1.0;
        }
        for (int n = 1; n < N; ++n) {
            const double rn = std::sqrt(static_cast<double>(n));
            const double rn1 = 1.0 / std::sqrt(static_cast<double>(n + 1));
            t.value(n + 1, j) = (yj * t.value(n, j) - rn * t.value(n - 1, j)) * rn1;
            t.d1(n + 1, j) =
                (t.value(n, j) + yj * t.d1(n, j) - rn * t.d1(n - 1, j)) * rn1;
            t.d2(n + 1, j) =
                (2.0 * t.d1(n, j) + yj * t.d2(n, j) - rn * t.d2(n - 1, j)) * rn1;
        }
    }
    return t;
}

} // namespace specgap
