// Common dense types and error taxonomy.
#pragma once

#include <Eigen/Dense>

#include <stdexcept>
#include <string>

namespace vvgrid {

using Vec = Eigen::VectorXd;
using Mat = Eigen::MatrixXd;

// Per-bus voltage magnitudes, per-unit, slack excluded (length N).
struct VoltageProfile {
    Vec v;
};

struct NonConvergence : std::runtime_error {
    explicit NonConvergence(const std::string& what) : std::runtime_error(what) {}
};

struct VoltageCollapse : std::runtime_error {
    explicit VoltageCollapse(const std::string& what) : std::runtime_error(what) {}
};

struct SingularSystem : std::runtime_error {
    explicit SingularSystem(const std::string& what) : std::runtime_error(what) {}
};

struct DivergenceDetected : std::runtime_error {
    explicit DivergenceDetected(const std::string& what) : std::runtime_error(what) {}
};

struct MalformedRow : std::runtime_error {
    MalformedRow(const std::string& what, long line) : std::runtime_error(what), line_number(line) {}
    long line_number;
};

struct WidthMismatch : std::runtime_error {
    WidthMismatch(const std::string& what, long line) : std::runtime_error(what), line_number(line) {}
    long line_number;
};

struct TooLarge : std::runtime_error {
    explicit TooLarge(const std::string& what) : std::runtime_error(what) {}
};

struct CycleSuspected : std::runtime_error {
    explicit CycleSuspected(const std::string& what) : std::runtime_error(what) {}
};

struct NumericalBreakdown : std::runtime_error {
    explicit NumericalBreakdown(const std::string& what) : std::runtime_error(what) {}
};

struct UntrainedSurrogate : std::runtime_error {
    explicit UntrainedSurrogate(const std::string& what) : std::runtime_error(what) {}
};

struct IoError : std::runtime_error {
    explicit IoError(const std::string& what) : std::runtime_error(what) {}
};

struct ConfigError : std::runtime_error {
    explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace vvgrid
