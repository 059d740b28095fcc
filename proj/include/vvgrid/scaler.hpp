// Per-feature min-max scaling. Degenerate features (max == min) scale to 0
// and invert to the stored minimum.
#pragma once

#include "vvgrid/types.hpp"

namespace vvgrid {

struct MinMaxScaler {
    Vec min;
    Vec max;

    static MinMaxScaler fit(const Mat& columns_are_features) {
        MinMaxScaler s;
        s.min = columns_are_features.colwise().minCoeff().transpose();
        s.max = columns_are_features.colwise().maxCoeff().transpose();
        return s;
    }

    static MinMaxScaler identity(Eigen::Index n) {
        MinMaxScaler s;
        s.min = Vec::Zero(n);
        s.max = Vec::Ones(n);
        return s;
    }

    double span(Eigen::Index i) const { return max[i] - min[i]; }

    Vec scale(const Vec& x) const {
        Vec y(x.size());
        for (Eigen::Index i = 0; i < x.size(); ++i) {
            double sp = span(i);
            y[i] = sp > 0.0 ? (x[i] - min[i]) / sp : 0.0;
        }
        return y;
    }

    Vec descale(const Vec& y) const {
        Vec x(y.size());
        for (Eigen::Index i = 0; i < y.size(); ++i) {
            double sp = span(i);
            x[i] = sp > 0.0 ? min[i] + y[i] * sp : min[i];
        }
        return x;
    }

    // Derivative factors of scale()/descale(); 0 for degenerate features.
    Vec scale_gain() const {
        Vec g(min.size());
        for (Eigen::Index i = 0; i < min.size(); ++i) {
            double sp = span(i);
            g[i] = sp > 0.0 ? 1.0 / sp : 0.0;
        }
        return g;
    }
    Vec descale_gain() const {
        Vec g(min.size());
        for (Eigen::Index i = 0; i < min.size(); ++i) {
            double sp = span(i);
            g[i] = sp > 0.0 ? sp : 0.0;
        }
        return g;
    }
};

}  // namespace vvgrid
