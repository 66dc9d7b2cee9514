#include "orcpool/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include <fmt/format.h>

#include "orcpool/errors.hpp"

namespace orcpool {

Eigen::MatrixXd dense_adjacency(const Graph& g) {
    Eigen::MatrixXd a = Eigen::MatrixXd::Zero(g.node_count(), g.node_count());
    for (const Edge& e : g.edges()) {
        a(e.u, e.v) = e.weight;
        a(e.v, e.u) = e.weight;
    }
    return a;
}

Eigen::MatrixXd normalized_adjacency(const Eigen::MatrixXd& m) {
    const Eigen::Index n = m.rows();
    Eigen::VectorXd inv_sqrt(n);
    for (Eigen::Index i = 0; i < n; ++i) {
        const double d = m.row(i).sum();
        inv_sqrt[i] = d > 0.0 ? 1.0 / std::sqrt(d) : 0.0;
    }
    // The product of the two scalings commutes, so a symmetric input stays
    // bitwise symmetric.
    Eigen::MatrixXd out(n, n);
    for (Eigen::Index j = 0; j < n; ++j) {
        for (Eigen::Index i = 0; i < n; ++i) out(i, j) = m(i, j) * (inv_sqrt[i] * inv_sqrt[j]);
    }
    for (Eigen::Index i = 0; i < n; ++i) {
        if (inv_sqrt[i] == 0.0) {
            out.row(i).setZero();
            out.col(i).setZero();
            out(i, i) = 1.0;
        }
    }
    return out;
}

SymmetricEigen symmetric_eigen(const Eigen::MatrixXd& input, int max_sweeps) {
    const Eigen::Index n = input.rows();
    if (input.cols() != n) throw ParameterError("symmetric_eigen: matrix is not square");
    Eigen::MatrixXd a = 0.5 * (input + input.transpose());
    Eigen::MatrixXd v = Eigen::MatrixXd::Identity(n, n);
    const double scale = std::max(a.norm(), std::numeric_limits<double>::min());

    auto off_diagonal = [&] {
        double s = 0.0;
        for (Eigen::Index i = 0; i < n; ++i) {
            for (Eigen::Index j = i + 1; j < n; ++j) s += a(i, j) * a(i, j);
        }
        return std::sqrt(2.0 * s);
    };

    int sweep = 0;
    for (; sweep < max_sweeps; ++sweep) {
        if (off_diagonal() <= 1e-15 * scale) break;
        for (Eigen::Index p = 0; p < n - 1; ++p) {
            for (Eigen::Index q = p + 1; q < n; ++q) {
                const double apq = a(p, q);
                if (std::abs(apq) <= 1e-300) continue;
                const double theta = (a(q, q) - a(p, p)) / (2.0 * apq);
                const double t = (theta >= 0.0 ? 1.0 : -1.0) / (std::abs(theta) + std::sqrt(theta * theta + 1.0));
                const double c = 1.0 / std::sqrt(t * t + 1.0);
                const double s = t * c;
                // A <- J^T A J with J the (p, q) rotation.
                for (Eigen::Index k = 0; k < n; ++k) {
                    const double akp = a(k, p);
                    const double akq = a(k, q);
                    a(k, p) = c * akp - s * akq;
                    a(k, q) = s * akp + c * akq;
                }
                for (Eigen::Index k = 0; k < n; ++k) {
                    const double apk = a(p, k);
                    const double aqk = a(q, k);
                    a(p, k) = c * apk - s * aqk;
                    a(q, k) = s * apk + c * aqk;
                }
                a(p, q) = 0.0;
                a(q, p) = 0.0;
                for (Eigen::Index k = 0; k < n; ++k) {
                    const double vkp = v(k, p);
                    const double vkq = v(k, q);
                    v(k, p) = c * vkp - s * vkq;
                    v(k, q) = s * vkp + c * vkq;
                }
            }
        }
    }
    if (sweep == max_sweeps && off_diagonal() > 1e-15 * scale) {
        throw NumericError(fmt::format("symmetric_eigen: no convergence after {} sweeps (off-diagonal norm {:.3e}, "
                                       "matrix norm {:.3e})",
                                       max_sweeps, off_diagonal(), scale));
    }

    std::vector<Eigen::Index> order(static_cast<std::size_t>(n));
    std::iota(order.begin(), order.end(), Eigen::Index{0});
    std::stable_sort(order.begin(), order.end(), [&](Eigen::Index x, Eigen::Index y) { return a(x, x) > a(y, y); });

    SymmetricEigen out;
    out.sweeps = sweep;
    out.values.resize(n);
    out.vectors.resize(n, n);
    for (Eigen::Index k = 0; k < n; ++k) {
        const Eigen::Index src = order[static_cast<std::size_t>(k)];
        out.values[k] = a(src, src);
        Eigen::VectorXd col = v.col(src);
        for (Eigen::Index i = 0; i < n; ++i) {
            if (std::abs(col[i]) > 1e-10) {
                if (col[i] < 0.0) col = -col;
                break;
            }
        }
        out.vectors.col(k) = col;
    }
    return out;
}

} // namespace orcpool
