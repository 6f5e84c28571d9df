#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <stdexcept>
#include <string>

namespace lowrank {

// Dense matrices are stored row-major so that the on-disk CSV layout and
// numpy's default ordering match the in-memory one.
using Matrix = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
using Vector = Eigen::VectorXd;
using Index = Eigen::Index;

/// Invalid arguments, malformed files, infeasible requests.
class InputError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// A non-finite objective value was produced while iterating.
class DivergenceError : public std::runtime_error {
public:
    DivergenceError(const std::string& what, int iteration)
        : std::runtime_error(what + " (iteration " + std::to_string(iteration) + ")"),
          iteration_(iteration) {}

    int iteration() const { return iteration_; }

private:
    int iteration_;
};

/// Throws InputError if any entry of a is NaN or infinite.
inline void require_finite(const Matrix& a, const char* what) {
    if (!a.allFinite())
        throw InputError(std::string(what) + ": matrix contains non-finite values");
}

} // namespace lowrank
