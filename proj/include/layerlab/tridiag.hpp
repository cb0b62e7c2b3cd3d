#pragma once

#include <vector>

namespace layerlab {

/// Tridiagonal system solved by the direct three-term recurrence (Thomas
/// elimination). Workspace is reusable across solves of the same size.
class TridiagSolver {
public:
    explicit TridiagSolver(std::size_t n) : cp_(n), dp_(n) {}

    /// Solve with sub-diagonal a (a[0] unused), diagonal b, super-diagonal c
    /// (c[n-1] unused), right-hand side d; writes the solution into x.
    void solve(const std::vector<double>& a, const std::vector<double>& b,
               const std::vector<double>& c, const std::vector<double>& d,
               std::vector<double>& x);

private:
    std::vector<double> cp_, dp_;
};

}  // namespace layerlab
