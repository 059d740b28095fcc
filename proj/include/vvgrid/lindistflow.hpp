// Model-based linear power flow: v = v0*1 - R p - X q (consumption-positive).
//
// R[i][j] is the sum of line resistances on the common slack path of buses
// i and j; X analogous. See docs/lindistflow.md for the derivation of why the
// voltage-magnitude form uses r rather than 2r.
#pragma once

#include "vvgrid/feeder.hpp"
#include "vvgrid/types.hpp"

#include <string>

namespace vvgrid {

struct LinDistFlowModel {
    Mat R;
    Mat X;
    double v0 = 1.0;
};

LinDistFlowModel build_lindistflow(const FeederModel& model);

VoltageProfile predict_lindistflow(const LinDistFlowModel& ldf, const Vec& net_p, const Vec& net_q);

void save_lindistflow(const LinDistFlowModel& ldf, const std::string& path);
LinDistFlowModel load_lindistflow(const std::string& path);

}  // namespace vvgrid
