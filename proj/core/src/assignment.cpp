#include "orcpool/assignment.hpp"

#include <cmath>

#include <fmt/format.h>

#include "orcpool/errors.hpp"
#include "orcpool/linalg.hpp"

namespace orcpool {

Assignment Assignment::hard(std::span<const int> labels, int clusters) {
    if (clusters < 1) throw ParameterError("assignment: need at least one cluster");
    Assignment a;
    a.hard_ = true;
    a.s_ = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(labels.size()), clusters);
    for (std::size_t i = 0; i < labels.size(); ++i) {
        if (labels[i] < 0 || labels[i] >= clusters) {
            throw ParameterError(fmt::format("assignment: node {} label {} outside [0, {})", i, labels[i], clusters));
        }
        a.s_(static_cast<Eigen::Index>(i), labels[i]) = 1.0;
    }
    return a;
}

Assignment Assignment::soft(Eigen::MatrixXd s) {
    for (Eigen::Index i = 0; i < s.rows(); ++i) {
        if ((s.row(i).array() < 0.0).any() || !s.row(i).allFinite()) {
            throw NumericError(fmt::format("assignment: row {} has negative or non-finite entries", i));
        }
        if (std::abs(s.row(i).sum() - 1.0) > 1e-9) {
            throw NumericError(fmt::format("assignment: row {} sums to {}", i, s.row(i).sum()));
        }
    }
    Assignment a;
    a.s_ = std::move(s);
    a.hard_ = (a.s_.array() == 0.0 || a.s_.array() == 1.0).all();
    return a;
}

Assignment Assignment::single(int nodes) {
    Assignment a;
    a.hard_ = true;
    a.s_ = Eigen::MatrixXd::Ones(nodes, 1);
    return a;
}

Partition Assignment::labels() const {
    std::vector<int> out(static_cast<std::size_t>(s_.rows()));
    for (Eigen::Index i = 0; i < s_.rows(); ++i) {
        Eigen::Index best = 0;
        for (Eigen::Index k = 1; k < s_.cols(); ++k) {
            if (s_(i, k) > s_(i, best)) best = k;
        }
        out[static_cast<std::size_t>(i)] = static_cast<int>(best);
    }
    return Partition(std::move(out));
}

HardenResult harden(const Assignment& s) {
    const Partition p = s.labels();
    HardenResult out;
    out.assignment = Assignment::hard(p.labels(), s.clusters());
    const Eigen::RowVectorXd sizes = out.assignment.matrix().colwise().sum();
    for (Eigen::Index k = 0; k < sizes.size(); ++k) {
        if (sizes[k] == 0.0) out.empty_clusters.push_back(static_cast<int>(k));
    }
    return out;
}

double mincut_loss(const Eigen::MatrixXd& s, const Eigen::MatrixXd& c) {
    if (c.rows() != c.cols() || s.rows() != c.rows()) {
        throw ParameterError(fmt::format("mincut_loss: shapes {}x{} and {}x{} are incompatible", s.rows(), s.cols(),
                                         c.rows(), c.cols()));
    }
    const Eigen::MatrixXd c_hat = normalized_adjacency(c);
    const Eigen::VectorXd d_hat = c_hat.rowwise().sum();
    const double num = (s.transpose() * c_hat * s).trace();
    const double den = (s.transpose() * d_hat.asDiagonal() * s).trace();
    if (!(den > 0.0)) throw NumericError("mincut_loss: zero denominator (empty assignment)");
    return -num / den;
}

double orthogonality_penalty(const Eigen::MatrixXd& s) {
    const Eigen::MatrixXd sts = s.transpose() * s;
    const double norm = sts.norm();
    const auto k = sts.rows();
    const Eigen::MatrixXd target = Eigen::MatrixXd::Identity(k, k) / std::sqrt(static_cast<double>(k));
    if (norm == 0.0) return target.norm();
    return (sts / norm - target).norm();
}

} // namespace orcpool
