#pragma once

#include <span>
#include <vector>

#include <Eigen/Dense>

#include "orcpool/graph.hpp"

namespace orcpool {

// N x K node-to-supernode matrix with rows summing to one: hard (one-hot
// rows) or soft (row-stochastic).
class Assignment {
public:
    Assignment() = default;

    static Assignment hard(std::span<const int> labels, int clusters);
    static Assignment soft(Eigen::MatrixXd s);
    // Every node in one supernode.
    static Assignment single(int nodes);

    const Eigen::MatrixXd& matrix() const { return s_; }
    int nodes() const { return static_cast<int>(s_.rows()); }
    int clusters() const { return static_cast<int>(s_.cols()); }
    bool is_hard() const { return hard_; }

    // Row argmax, ties to the lower cluster index.
    Partition labels() const;

private:
    Eigen::MatrixXd s_;
    bool hard_ = false;
};

struct HardenResult {
    Assignment assignment;
    std::vector<int> empty_clusters; // columns that received no node
};

HardenResult harden(const Assignment& s);

// -tr(S^T C^ S) / tr(S^T D^ S) with C^ = D^{-1/2} C D^{-1/2} and D^ the row
// sums of C^. Lies in [-1, 0] for nonnegative C. Throws NumericError when the
// denominator vanishes.
double mincut_loss(const Eigen::MatrixXd& s, const Eigen::MatrixXd& c);

// || S^T S / ||S^T S||_F - I_K / sqrt(K) ||_F, in [0, 2].
double orthogonality_penalty(const Eigen::MatrixXd& s);

} // namespace orcpool
