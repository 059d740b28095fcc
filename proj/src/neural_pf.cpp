#include "vvgrid/neural_pf.hpp"

#include "vvgrid/io.hpp"
#include "vvgrid/rng.hpp"

#include <cmath>
#include <numeric>
#include <sstream>

namespace vvgrid {

NeuralPfModel init_pf_model(Eigen::Index n_buses, Eigen::Index hidden_width, std::uint64_t seed) {
    NeuralPfModel m;
    const Eigen::Index d = 2 * n_buses;
    Rng rng = Rng::stream(seed, 0x696e6974ULL);
    const double lim1 = std::sqrt(6.0 / static_cast<double>(d + hidden_width));
    const double lim2 = std::sqrt(6.0 / static_cast<double>(hidden_width + n_buses));
    m.w1.resize(hidden_width, d);
    for (Eigen::Index i = 0; i < hidden_width; ++i)
        for (Eigen::Index j = 0; j < d; ++j) m.w1(i, j) = rng.uniform(-lim1, lim1);
    m.b = Vec::Zero(hidden_width);
    m.w2.resize(n_buses, hidden_width);
    for (Eigen::Index i = 0; i < n_buses; ++i)
        for (Eigen::Index j = 0; j < hidden_width; ++j) m.w2(i, j) = rng.uniform(-lim2, lim2);
    m.in_scaler = MinMaxScaler::identity(d);
    m.out_scaler = MinMaxScaler::identity(n_buses);
    return m;
}

Mat nn_forward_scaled(const NeuralPfModel& model, const Mat& x_scaled) {
    Mat z = (x_scaled * model.w1.transpose()).rowwise() + model.b.transpose();
    Mat h = z.cwiseMax(0.0);
    return h * model.w2.transpose();
}

VoltageProfile nn_forward(const NeuralPfModel& model, const Vec& net_p, const Vec& net_q) {
    Vec x(net_p.size() + net_q.size());
    x << net_p, net_q;
    Vec xs = model.in_scaler.scale(x);
    Vec h = (model.w1 * xs + model.b).cwiseMax(0.0);
    VoltageProfile vp;
    vp.v = model.out_scaler.descale(model.w2 * h);
    return vp;
}

namespace {

Mat scale_rows(const MinMaxScaler& s, const Mat& raw) {
    Mat out(raw.rows(), raw.cols());
    Vec gain = s.scale_gain();
    for (Eigen::Index j = 0; j < raw.cols(); ++j)
        out.col(j) = (raw.col(j).array() - s.min[j]) * gain[j];
    return out;
}

}  // namespace

double pf_batch_loss(const NeuralPfModel& model, const Mat& inputs, const Mat& outputs) {
    Mat xs = scale_rows(model.in_scaler, inputs);
    Mat ys = scale_rows(model.out_scaler, outputs);
    Mat pred = nn_forward_scaled(model, xs);
    return (pred - ys).squaredNorm() / static_cast<double>(pred.size());
}

PfGradients nn_backward(const NeuralPfModel& model, const Mat& inputs, const Mat& outputs) {
    if (inputs.rows() == 0) throw std::invalid_argument("nn_backward: empty batch");
    Mat xs = scale_rows(model.in_scaler, inputs);
    Mat ys = scale_rows(model.out_scaler, outputs);

    Mat z = (xs * model.w1.transpose()).rowwise() + model.b.transpose();
    Mat active = (z.array() > 0.0).cast<double>();  // subgradient 0 at z == 0
    Mat h = z.cwiseProduct(active);
    Mat pred = h * model.w2.transpose();

    Mat dpred = 2.0 * (pred - ys) / static_cast<double>(pred.size());
    PfGradients g;
    g.dw2 = dpred.transpose() * h;
    Mat dh = dpred * model.w2;
    Mat dz = dh.cwiseProduct(active);
    g.dw1 = dz.transpose() * xs;
    g.db = dz.colwise().sum().transpose();
    return g;
}

PfTrainResult train_pf(const PfDataset& train, const PfTrainConfig& config) {
    if (config.learning_rate <= 0) throw std::invalid_argument("train_pf: learning_rate <= 0");
    if (config.batch_size < 1) throw std::invalid_argument("train_pf: batch_size < 1");

    PfTrainResult result;
    result.model = init_pf_model(train.n_buses(), config.hidden_width, config.seed);
    result.model.in_scaler = MinMaxScaler::fit(train.inputs);
    result.model.out_scaler = MinMaxScaler::fit(train.outputs);
    NeuralPfModel& m = result.model;

    Mat xs = scale_rows(m.in_scaler, train.inputs);
    Mat ys = scale_rows(m.out_scaler, train.outputs);
    const Eigen::Index n = xs.rows();

    Mat mw1 = Mat::Zero(m.w1.rows(), m.w1.cols()), vw1 = mw1;
    Vec mb = Vec::Zero(m.b.size()), vb = mb;
    Mat mw2 = Mat::Zero(m.w2.rows(), m.w2.cols()), vw2 = mw2;
    const double b1 = config.adam_beta1, b2 = config.adam_beta2, eps = config.adam_epsilon;
    double b1t = 1.0, b2t = 1.0;

    auto adam_step = [&](Mat& w, const Mat& grad, Mat& mom, Mat& var) {
        mom = b1 * mom + (1.0 - b1) * grad;
        var = b2 * var + (1.0 - b2) * grad.cwiseProduct(grad);
        w.array() -= config.learning_rate * (mom.array() / (1.0 - b1t)) /
                     ((var.array() / (1.0 - b2t)).sqrt() + eps);
    };

    std::vector<int> perm(static_cast<std::size_t>(n));
    std::iota(perm.begin(), perm.end(), 0);
    Rng shuffle_rng = Rng::stream(config.seed, 0x73687566ULL);

    for (int epoch = 0; epoch < config.epochs; ++epoch) {
        shuffle_rng.shuffle(perm);
        double epoch_loss = 0.0;
        Eigen::Index n_batches = 0;
        for (Eigen::Index start = 0; start < n; start += config.batch_size) {
            const Eigen::Index bsz = std::min<Eigen::Index>(config.batch_size, n - start);
            Mat xb(bsz, xs.cols()), yb(bsz, ys.cols());
            for (Eigen::Index i = 0; i < bsz; ++i) {
                xb.row(i) = xs.row(perm[static_cast<std::size_t>(start + i)]);
                yb.row(i) = ys.row(perm[static_cast<std::size_t>(start + i)]);
            }
            Mat z = (xb * m.w1.transpose()).rowwise() + m.b.transpose();
            Mat active = (z.array() > 0.0).cast<double>();
            Mat h = z.cwiseProduct(active);
            Mat pred = h * m.w2.transpose();
            Mat diff = pred - yb;
            double loss = diff.squaredNorm() / static_cast<double>(pred.size());
            if (!std::isfinite(loss))
                throw DivergenceDetected("training loss non-finite at epoch " + std::to_string(epoch));
            epoch_loss += loss;
            ++n_batches;

            Mat dpred = 2.0 * diff / static_cast<double>(pred.size());
            Mat gw2 = dpred.transpose() * h;
            Mat dz = (dpred * m.w2).cwiseProduct(active);
            Mat gw1 = dz.transpose() * xb;
            Vec gb = dz.colwise().sum().transpose();

            b1t *= b1;
            b2t *= b2;
            adam_step(m.w1, gw1, mw1, vw1);
            adam_step(m.w2, gw2, mw2, vw2);
            mb = b1 * mb + (1.0 - b1) * gb;
            vb = b2 * vb + (1.0 - b2) * gb.cwiseProduct(gb);
            m.b.array() -= config.learning_rate * (mb.array() / (1.0 - b1t)) /
                           ((vb.array() / (1.0 - b2t)).sqrt() + eps);
        }
        result.epoch_loss.push_back(n_batches > 0 ? epoch_loss / static_cast<double>(n_batches) : 0.0);
    }
    return result;
}

double mse_eval(const Predictor& predict, const PfDataset& split) {
    if (split.rows() == 0) throw std::invalid_argument("mse_eval: empty split");
    const Eigen::Index n = split.n_buses();
    double acc = 0.0;
    for (Eigen::Index r = 0; r < split.rows(); ++r) {
        Vec p = split.inputs.row(r).head(n).transpose();
        Vec q = split.inputs.row(r).tail(n).transpose();
        Vec v = predict(p, q);
        acc += (v - split.outputs.row(r).transpose()).squaredNorm();
    }
    return acc / static_cast<double>(split.rows() * n);
}

double mse_eval(const NeuralPfModel& model, const PfDataset& split) {
    return mse_eval(
        [&](const Vec& p, const Vec& q) { return nn_forward(model, p, q).v; }, split);
}

Mat nn_q_jacobian(const NeuralPfModel& model, const Vec& net_p, const Vec& net_q) {
    const Eigen::Index n = model.n_buses();
    Vec x(2 * n);
    x << net_p, net_q;
    Vec xs = model.in_scaler.scale(x);
    Vec z = model.w1 * xs + model.b;
    Vec in_gain = model.in_scaler.scale_gain().tail(n);
    Vec out_gain = model.out_scaler.descale_gain();
    // d v / d q = diag(out_gain) W2 diag(z>0) W1_q diag(in_gain)
    Mat w1q = model.w1.rightCols(n);
    Mat masked = w1q;
    for (Eigen::Index k = 0; k < z.size(); ++k)
        if (!(z[k] > 0.0)) masked.row(k).setZero();
    Mat jac = model.w2 * masked;
    jac = out_gain.asDiagonal() * jac * in_gain.asDiagonal();
    return jac;
}

void save_pf_model(const NeuralPfModel& model, const std::string& path) {
    std::ostringstream os;
    os << "# relu power-flow surrogate\n";
    write_matrix_block(os, "w1", model.w1);
    write_vector_block(os, "b", model.b);
    write_matrix_block(os, "w2", model.w2);
    write_vector_block(os, "in_min", model.in_scaler.min);
    write_vector_block(os, "in_max", model.in_scaler.max);
    write_vector_block(os, "out_min", model.out_scaler.min);
    write_vector_block(os, "out_max", model.out_scaler.max);
    write_text_file(path, os.str());
}

NeuralPfModel load_pf_model(const std::string& path) {
    MatrixFile mf = read_matrix_file(path);
    NeuralPfModel m;
    m.w1 = mf.get("w1");
    m.b = mf.get_vector("b");
    m.w2 = mf.get("w2");
    m.in_scaler.min = mf.get_vector("in_min");
    m.in_scaler.max = mf.get_vector("in_max");
    m.out_scaler.min = mf.get_vector("out_min");
    m.out_scaler.max = mf.get_vector("out_max");
    return m;
}

}  // namespace vvgrid
