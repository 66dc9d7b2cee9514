#include "orcpool/soft_assignment.hpp"

#include <cmath>

#include <fmt/format.h>

#include "orcpool/errors.hpp"
#include "orcpool/linalg.hpp"
#include "orcpool/rng.hpp"

namespace orcpool {

namespace {

constexpr double adam_beta1 = 0.9;
constexpr double adam_beta2 = 0.999;
constexpr double adam_epsilon = 1e-8;
constexpr double bound_slack = 1e-9;

Eigen::MatrixXd elu(const Eigen::MatrixXd& z) {
    return z.unaryExpr([](double x) { return x > 0.0 ? x : std::expm1(x); });
}

Eigen::MatrixXd elu_derivative(const Eigen::MatrixXd& z) {
    return z.unaryExpr([](double x) { return x > 0.0 ? 1.0 : std::exp(x); });
}

Eigen::MatrixXd row_softmax(const Eigen::MatrixXd& z) {
    Eigen::MatrixXd s(z.rows(), z.cols());
    for (Eigen::Index i = 0; i < z.rows(); ++i) {
        const double top = z.row(i).maxCoeff();
        s.row(i) = (z.row(i).array() - top).exp().matrix();
        s.row(i) /= s.row(i).sum();
    }
    return s;
}

Eigen::MatrixXd glorot(int rows, int cols, Rng& rng) {
    const double limit = std::sqrt(6.0 / (rows + cols));
    Eigen::MatrixXd m(rows, cols);
    for (int i = 0; i < rows; ++i) {
        for (int j = 0; j < cols; ++j) m(i, j) = rng.uniform(-limit, limit);
    }
    return m;
}

struct Activations {
    Eigen::MatrixXd z0, h0, z1, h1, s;
};

Activations run_forward(const ModelParameters& p, const TrainingProblem& problem) {
    Activations a;
    a.z0 = (problem.propagated * p.theta).rowwise() + p.b0;
    a.h0 = elu(a.z0);
    a.z1 = (a.h0 * p.w1).rowwise() + p.b1;
    a.h1 = elu(a.z1);
    a.s = row_softmax((a.h1 * p.w2).rowwise() + p.b2);
    return a;
}

struct Terms {
    double cut, orthogonality, num, den, sts_norm;
    Eigen::MatrixXd sts;
};

Terms objective_terms(const Eigen::MatrixXd& s, const TrainingProblem& problem) {
    Terms t;
    t.num = (s.transpose() * problem.c_hat * s).trace();
    t.den = (s.transpose() * problem.d_hat.asDiagonal() * s).trace();
    t.cut = -t.num / t.den;
    t.sts = s.transpose() * s;
    t.sts_norm = t.sts.norm();
    const Eigen::MatrixXd target =
        Eigen::MatrixXd::Identity(s.cols(), s.cols()) / std::sqrt(static_cast<double>(s.cols()));
    t.orthogonality = (t.sts / t.sts_norm - target).norm();
    return t;
}

} // namespace

std::string_view to_string(FeatureSource source) {
    switch (source) {
    case FeatureSource::automatic: return "auto";
    case FeatureSource::constant: return "constant";
    case FeatureSource::identity: return "identity";
    }
    return "auto";
}

FeatureSource parse_feature_source(std::string_view name) {
    if (name == "auto") return FeatureSource::automatic;
    if (name == "constant") return FeatureSource::constant;
    if (name == "identity") return FeatureSource::identity;
    throw ParameterError(fmt::format("unknown feature source '{}'", name));
}

Eigen::Index ModelParameters::size() const {
    return theta.size() + b0.size() + w1.size() + b1.size() + w2.size() + b2.size();
}

Eigen::VectorXd ModelParameters::flatten() const {
    Eigen::VectorXd flat(size());
    Eigen::Index at = 0;
    auto put = [&](const auto& m) {
        for (Eigen::Index j = 0; j < m.cols(); ++j) {
            for (Eigen::Index i = 0; i < m.rows(); ++i) flat[at++] = m(i, j);
        }
    };
    put(theta);
    put(b0);
    put(w1);
    put(b1);
    put(w2);
    put(b2);
    return flat;
}

ModelParameters ModelParameters::unflatten(const Eigen::VectorXd& flat) const {
    if (flat.size() != size()) {
        throw ParameterError(fmt::format("unflatten: expected {} values, got {}", size(), flat.size()));
    }
    ModelParameters out = *this;
    Eigen::Index at = 0;
    auto take = [&](auto& m) {
        for (Eigen::Index j = 0; j < m.cols(); ++j) {
            for (Eigen::Index i = 0; i < m.rows(); ++i) m(i, j) = flat[at++];
        }
    };
    take(out.theta);
    take(out.b0);
    take(out.w1);
    take(out.b1);
    take(out.w2);
    take(out.b2);
    return out;
}

double ModelParameters::norm() const { return flatten().norm(); }

ModelParameters init_parameters(int input_width, const TrainOptions& options, std::uint64_t seed) {
    if (input_width < 1 || options.k < 1 || options.embedding_width < 1 || options.hidden_width < 1) {
        throw ParameterError("init_parameters: all layer widths must be positive");
    }
    Rng rng(seed);
    ModelParameters p;
    p.theta = glorot(input_width, options.embedding_width, rng);
    p.b0 = Eigen::RowVectorXd::Zero(options.embedding_width);
    p.w1 = glorot(options.embedding_width, options.hidden_width, rng);
    p.b1 = Eigen::RowVectorXd::Zero(options.hidden_width);
    p.w2 = glorot(options.hidden_width, options.k, rng);
    p.b2 = Eigen::RowVectorXd::Zero(options.k);
    return p;
}

Eigen::MatrixXd node_features(const Graph& g, FeatureSource source) {
    const int n = g.node_count();
    switch (source) {
    case FeatureSource::automatic:
        if (g.attributes()) return *g.attributes();
        return Eigen::MatrixXd::Ones(n, 1);
    case FeatureSource::constant: return Eigen::MatrixXd::Ones(n, 1);
    case FeatureSource::identity: return Eigen::MatrixXd::Identity(n, n);
    }
    return Eigen::MatrixXd::Ones(n, 1);
}

TrainingProblem make_training_problem(const Graph& g, const CurvatureAdjustedAdjacency& c,
                                      const TrainOptions& options) {
    if (c.graph.node_count() != g.node_count()) {
        throw ParameterError("train: curvature-adjusted adjacency does not match the graph");
    }
    if (options.k < 1 || options.k > g.node_count()) {
        throw ParameterError(fmt::format("train: need 1 <= K <= N, got K={} N={}", options.k, g.node_count()));
    }
    TrainingProblem problem;
    problem.propagated = normalized_adjacency(dense_adjacency(g)) * node_features(g, options.features);
    problem.c_hat = normalized_adjacency(dense_adjacency(c.graph));
    problem.d_hat = problem.c_hat.rowwise().sum();
    problem.k = options.k;
    return problem;
}

Eigen::MatrixXd forward(const ModelParameters& p, const TrainingProblem& problem) {
    return run_forward(p, problem).s;
}

Objective evaluate_objective(const ModelParameters& p, const TrainingProblem& problem) {
    Objective out;
    out.s = forward(p, problem);
    const Terms t = objective_terms(out.s, problem);
    out.cut = t.cut;
    out.orthogonality = t.orthogonality;
    out.total = t.cut + t.orthogonality;
    return out;
}

std::pair<Objective, ModelParameters> objective_gradient(const ModelParameters& p, const TrainingProblem& problem) {
    const Activations a = run_forward(p, problem);
    const Eigen::MatrixXd& s = a.s;
    const Terms t = objective_terms(s, problem);

    // d cut / dS = -2 C^ S / den + 2 num D^ S / den^2
    Eigen::MatrixXd grad_s = (-2.0 / t.den) * (problem.c_hat * s) +
                             (2.0 * t.num / (t.den * t.den)) * (problem.d_hat.asDiagonal() * s);
    if (t.orthogonality > 0.0) {
        const auto k = s.cols();
        const Eigen::MatrixXd q =
            t.sts / t.sts_norm - Eigen::MatrixXd::Identity(k, k) / std::sqrt(static_cast<double>(k));
        const Eigen::MatrixXd g_q = q / t.orthogonality;
        const double n = t.sts_norm;
        const Eigen::MatrixXd g_m = g_q / n - (g_q.cwiseProduct(t.sts).sum() / (n * n * n)) * t.sts;
        grad_s += s * (g_m + g_m.transpose());
    }

    const Eigen::VectorXd inner = s.cwiseProduct(grad_s).rowwise().sum();
    const Eigen::MatrixXd d_z2 = s.cwiseProduct(grad_s.colwise() - inner);
    ModelParameters grad;
    grad.w2 = a.h1.transpose() * d_z2;
    grad.b2 = d_z2.colwise().sum();
    const Eigen::MatrixXd d_z1 = (d_z2 * p.w2.transpose()).cwiseProduct(elu_derivative(a.z1));
    grad.w1 = a.h0.transpose() * d_z1;
    grad.b1 = d_z1.colwise().sum();
    const Eigen::MatrixXd d_z0 = (d_z1 * p.w1.transpose()).cwiseProduct(elu_derivative(a.z0));
    grad.theta = problem.propagated.transpose() * d_z0;
    grad.b0 = d_z0.colwise().sum();

    Objective obj;
    obj.s = s;
    obj.cut = t.cut;
    obj.orthogonality = t.orthogonality;
    obj.total = t.cut + t.orthogonality;
    return {std::move(obj), std::move(grad)};
}

namespace {

void check_objective(const Objective& obj, int epoch, const ModelParameters& p) {
    if (!std::isfinite(obj.total)) {
        throw NumericError(fmt::format("train: non-finite loss at epoch {} (cut={}, orthogonality={}, |theta|={}, "
                                       "|w1|={}, |w2|={})",
                                       epoch, obj.cut, obj.orthogonality, p.theta.norm(), p.w1.norm(), p.w2.norm()));
    }
    if (obj.cut < -1.0 - bound_slack || obj.cut > bound_slack) {
        throw NumericError(fmt::format("train: cut term {} outside [-1, 0] at epoch {}", obj.cut, epoch));
    }
    if (obj.orthogonality < -bound_slack || obj.orthogonality > 2.0 + bound_slack) {
        throw NumericError(
            fmt::format("train: orthogonality term {} outside [0, 2] at epoch {}", obj.orthogonality, epoch));
    }
}

} // namespace

TrainResult train_soft_assignment(const Graph& g, const CurvatureAdjustedAdjacency& c, const TrainOptions& options) {
    if (options.epochs < 0) throw ParameterError("train: epochs must be nonnegative");
    if (!(options.learning_rate > 0.0)) throw ParameterError("train: learning rate must be positive");
    const TrainingProblem problem = make_training_problem(g, c, options);

    TrainState state;
    state.parameters = init_parameters(static_cast<int>(problem.propagated.cols()), options, options.seed);
    state.optimizer.m = Eigen::VectorXd::Zero(state.parameters.size());
    state.optimizer.v = Eigen::VectorXd::Zero(state.parameters.size());

    for (int epoch = 0; epoch < options.epochs; ++epoch) {
        auto [obj, grad] = objective_gradient(state.parameters, problem);
        check_objective(obj, epoch, state.parameters);
        state.loss_trace.push_back(obj.total);

        AdamState& adam = state.optimizer;
        const Eigen::VectorXd gflat = grad.flatten();
        ++adam.step;
        adam.m = adam_beta1 * adam.m + (1.0 - adam_beta1) * gflat;
        adam.v = adam_beta2 * adam.v + (1.0 - adam_beta2) * gflat.cwiseProduct(gflat);
        const double c1 = 1.0 - std::pow(adam_beta1, adam.step);
        const double c2 = 1.0 - std::pow(adam_beta2, adam.step);
        const Eigen::VectorXd update =
            (adam.m / c1).array() / ((adam.v / c2).array().sqrt() + adam_epsilon);
        state.parameters = state.parameters.unflatten(state.parameters.flatten() - options.learning_rate * update);
    }

    Objective final_obj = evaluate_objective(state.parameters, problem);
    check_objective(final_obj, options.epochs, state.parameters);
    state.loss_trace.push_back(final_obj.total);

    TrainResult out;
    out.assignment = Assignment::soft(std::move(final_obj.s));
    out.state = std::move(state);
    return out;
}

} // namespace orcpool
