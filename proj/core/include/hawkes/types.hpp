#pragma once

#include <Eigen/Dense>

#include <complex>
#include <stdexcept>
#include <string>
#include <vector>

namespace hawkes {

using Mat = Eigen::MatrixXd;
using CMat = Eigen::MatrixXcd;
using Vec = Eigen::VectorXd;
using Complex = std::complex<double>;

/// Bad or inconsistent caller input (maps to CLI exit code 2).
class ValidationError : public std::runtime_error {
public:
    explicit ValidationError(const std::string& what) : std::runtime_error(what) {}
};

/// A numerical procedure failed to meet its tolerance or produced a
/// degenerate result (maps to CLI exit code 3).
class NumericalError : public std::runtime_error {
public:
    explicit NumericalError(const std::string& what) : std::runtime_error(what) {}
};

/// Non-fatal observations accumulated by operations that tolerate
/// imperfect input (unsorted files, empty components, ...).
using WarningList = std::vector<std::string>;

} // namespace hawkes
