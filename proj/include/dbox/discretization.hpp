#pragma once

#include <Eigen/Core>

#include "dbox/errors.hpp"

namespace dbox {

/// Equally spaced trapezoidal quadrature on [0, L]: nodes x_1 = 0 < ... <
/// x_N = L, weights h/2 at the endpoints and h inside, h = L/(N-1).
struct Discretization {
    int n_nodes = 0;
    double spacing = 0.0;
    Eigen::VectorXd nodes;
    Eigen::VectorXd weights;

    static Discretization trapezoid(int n_nodes, double box_length) {
        if (n_nodes < 2) throw config_error("need at least 2 quadrature nodes");
        if (!(box_length > 0.0)) throw config_error("box_length must be positive");
        Discretization d;
        d.n_nodes = n_nodes;
        d.spacing = box_length / (n_nodes - 1);
        d.nodes.resize(n_nodes);
        d.weights.resize(n_nodes);
        for (int j = 0; j < n_nodes; ++j) {
            d.nodes[j] = box_length * (double(j) / (n_nodes - 1));
            d.weights[j] = d.spacing;
        }
        d.weights[0] *= 0.5;
        d.weights[n_nodes - 1] *= 0.5;
        return d;
    }
};

} // namespace dbox
