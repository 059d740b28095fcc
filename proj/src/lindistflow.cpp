#include "vvgrid/lindistflow.hpp"

#include "vvgrid/io.hpp"

#include <fstream>
#include <sstream>

namespace vvgrid {

LinDistFlowModel build_lindistflow(const FeederModel& model) {
    const int n = model.n_buses;
    FeederIndex ix = build_index(model);

    // subtree membership per line: r of line (a->b) contributes to R[i][j]
    // exactly when both i and j lie in the subtree under b
    std::vector<std::vector<int>> subtree(model.lines.size());
    // walk buses children-first, merging child subtrees upward
    std::vector<std::vector<int>> below(n + 1);
    for (auto it = ix.order.rbegin(); it != ix.order.rend(); ++it) {
        int b = *it;
        below[b].push_back(b);
        for (int c : ix.children[b])
            below[b].insert(below[b].end(), below[c].begin(), below[c].end());
    }
    LinDistFlowModel ldf;
    ldf.v0 = model.slack_voltage;
    ldf.R = Mat::Zero(n, n);
    ldf.X = Mat::Zero(n, n);
    for (int b = 1; b <= n; ++b) {
        const auto& ln = model.lines[ix.line_of_bus[b]];
        const auto& members = below[b];
        for (int i : members)
            for (int j : members) {
                ldf.R(i - 1, j - 1) += ln.r;
                ldf.X(i - 1, j - 1) += ln.x;
            }
    }
    return ldf;
}

VoltageProfile predict_lindistflow(const LinDistFlowModel& ldf, const Vec& net_p, const Vec& net_q) {
    VoltageProfile vp;
    vp.v = Vec::Constant(ldf.R.rows(), ldf.v0) - ldf.R * net_p - ldf.X * net_q;
    return vp;
}

void save_lindistflow(const LinDistFlowModel& ldf, const std::string& path) {
    std::ostringstream os;
    os << "# lindistflow model\n";
    write_matrix_block(os, "R", ldf.R);
    write_matrix_block(os, "X", ldf.X);
    write_matrix_block(os, "v0", Mat::Constant(1, 1, ldf.v0));
    write_text_file(path, os.str());
}

LinDistFlowModel load_lindistflow(const std::string& path) {
    MatrixFile mf = read_matrix_file(path);
    LinDistFlowModel ldf;
    ldf.R = mf.get("R");
    ldf.X = mf.get("X");
    ldf.v0 = mf.get_scalar("v0");
    return ldf;
}

}  // namespace vvgrid
