#include "vvgrid/least_squares.hpp"

#include "vvgrid/io.hpp"

#include <sstream>

namespace vvgrid {

LsModel fit_least_squares(const PfDataset& dataset) {
    const Eigen::Index n = dataset.rows();
    const Eigen::Index d = dataset.inputs.cols();
    Mat a(n, d + 1);
    a.leftCols(d) = dataset.inputs;
    a.col(d).setOnes();

    Mat gram = a.transpose() * a;
    Mat rhs = a.transpose() * dataset.outputs;

    auto solve_ok = [&](const Mat& g, Mat& theta) {
        Eigen::LDLT<Mat> ldlt(g);
        if (ldlt.info() != Eigen::Success) return false;
        theta = ldlt.solve(rhs);
        return theta.allFinite() && (g * theta - rhs).cwiseAbs().maxCoeff() <
                                        1e-6 * (1.0 + rhs.cwiseAbs().maxCoeff());
    };

    Mat theta;
    if (!solve_ok(gram, theta)) {
        Mat ridge = gram + 1e-10 * Mat::Identity(d + 1, d + 1);
        if (!solve_ok(ridge, theta))
            throw SingularSystem("least-squares normal equations singular even with ridge");
    }
    LsModel ls;
    ls.coeffs = theta.topRows(d).transpose();
    ls.intercept = theta.row(d).transpose();
    return ls;
}

VoltageProfile predict_ls(const LsModel& ls, const Vec& net_p, const Vec& net_q) {
    Vec x(net_p.size() + net_q.size());
    x << net_p, net_q;
    VoltageProfile vp;
    vp.v = ls.coeffs * x + ls.intercept;
    return vp;
}

void save_ls(const LsModel& ls, const std::string& path) {
    std::ostringstream os;
    os << "# least-squares model\n";
    write_matrix_block(os, "coeffs", ls.coeffs);
    write_vector_block(os, "intercept", ls.intercept);
    write_text_file(path, os.str());
}

LsModel load_ls(const std::string& path) {
    MatrixFile mf = read_matrix_file(path);
    LsModel ls;
    ls.coeffs = mf.get("coeffs");
    ls.intercept = mf.get_vector("intercept");
    return ls;
}

}  // namespace vvgrid
