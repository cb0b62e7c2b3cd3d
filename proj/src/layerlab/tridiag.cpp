#include "layerlab/tridiag.hpp"

#include <stdexcept>

namespace layerlab {

void TridiagSolver::solve(const std::vector<double>& a, const std::vector<double>& b,
                          const std::vector<double>& c, const std::vector<double>& d,
                          std::vector<double>& x) {
    const std::size_t n = b.size();
    if (a.size() != n || c.size() != n || d.size() != n)
        throw std::invalid_argument("tridiagonal bands must share one size");
    if (cp_.size() != n) {
        cp_.resize(n);
        dp_.resize(n);
    }
    x.resize(n);

    cp_[0] = c[0] / b[0];
    dp_[0] = d[0] / b[0];
    for (std::size_t i = 1; i < n; ++i) {
        const double m = b[i] - a[i] * cp_[i - 1];
        cp_[i] = c[i] / m;
        dp_[i] = (d[i] - a[i] * dp_[i - 1]) / m;
    }
    x[n - 1] = dp_[n - 1];
    for (std::size_t i = n - 1; i-- > 0;) x[i] = dp_[i] - cp_[i] * x[i + 1];
}

}  // namespace layerlab
