#pragma once

#include <cstdint>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

#include "orcpool/assignment.hpp"
#include "orcpool/flow.hpp"
#include "orcpool/graph.hpp"

namespace orcpool {

enum class FeatureSource {
    automatic, // node attributes when present, else a constant 1.0 column
    constant,  // a single constant 1.0 column
    identity,  // one-hot node index
};

std::string_view to_string(FeatureSource source);
FeatureSource parse_feature_source(std::string_view name);

struct TrainOptions {
    int k = 2;
    int epochs = 500;
    double learning_rate = 1e-3;
    std::uint64_t seed = 0;
    FeatureSource features = FeatureSource::automatic;
    int embedding_width = 8;
    int hidden_width = 16;
};

// theta/b0: propagation layer; w1/b1: hidden layer; w2/b2: softmax head.
struct ModelParameters {
    Eigen::MatrixXd theta;
    Eigen::RowVectorXd b0;
    Eigen::MatrixXd w1;
    Eigen::RowVectorXd b1;
    Eigen::MatrixXd w2;
    Eigen::RowVectorXd b2;

    Eigen::Index size() const;
    Eigen::VectorXd flatten() const;
    // Same shapes as `self`, values taken from `flat`.
    ModelParameters unflatten(const Eigen::VectorXd& flat) const;
    double norm() const;
};

// Glorot-uniform weights, zero biases.
ModelParameters init_parameters(int input_width, const TrainOptions& options, std::uint64_t seed);

// Fixed inputs of the objective.
struct TrainingProblem {
    Eigen::MatrixXd propagated; // A^ X
    Eigen::MatrixXd c_hat;      // normalized curvature-adjusted adjacency
    Eigen::VectorXd d_hat;      // row sums of c_hat
    int k = 2;
};

Eigen::MatrixXd node_features(const Graph& g, FeatureSource source);
TrainingProblem make_training_problem(const Graph& g, const CurvatureAdjustedAdjacency& c, const TrainOptions& options);

struct Objective {
    double total = 0.0;
    double cut = 0.0;           // min-cut term, in [-1, 0]
    double orthogonality = 0.0; // penalty term, in [0, 2]
    Eigen::MatrixXd s;
};

Eigen::MatrixXd forward(const ModelParameters& p, const TrainingProblem& problem);
Objective evaluate_objective(const ModelParameters& p, const TrainingProblem& problem);
// Objective and its gradient with respect to every parameter.
std::pair<Objective, ModelParameters> objective_gradient(const ModelParameters& p, const TrainingProblem& problem);

struct AdamState {
    Eigen::VectorXd m;
    Eigen::VectorXd v;
    int step = 0;
};

struct TrainState {
    ModelParameters parameters;
    AdamState optimizer;
    std::vector<double> loss_trace; // epochs + 1 entries, the last after the final update
};

struct TrainResult {
    Assignment assignment; // soft
    TrainState state;
};

// Adam on cut + orthogonality. Throws NumericError on a non-finite loss or a
// term outside its bounds.
TrainResult train_soft_assignment(const Graph& g, const CurvatureAdjustedAdjacency& c, const TrainOptions& options);

} // namespace orcpool
