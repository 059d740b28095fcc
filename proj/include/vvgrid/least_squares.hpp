// Data-driven affine baseline fit by normal equations.
#pragma once

#include "vvgrid/dataset.hpp"
#include "vvgrid/types.hpp"

#include <string>

namespace vvgrid {

struct LsModel {
    Mat coeffs;    // N x 2N
    Vec intercept; // N
};

// Minimizes mean squared voltage error on the given rows. Falls back to a
// ridge term (lambda = 1e-10) if the plain normal equations are singular;
// throws SingularSystem if that also fails.
LsModel fit_least_squares(const PfDataset& dataset);

VoltageProfile predict_ls(const LsModel& ls, const Vec& net_p, const Vec& net_q);

void save_ls(const LsModel& ls, const std::string& path);
LsModel load_ls(const std::string& path);

}  // namespace vvgrid
