#include "orcpool/transport.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include <fmt/format.h>

#include "orcpool/errors.hpp"

namespace orcpool {

namespace {

void check_marginals(std::span<const double> a, std::span<const double> b, const Eigen::MatrixXd& cost) {
    const auto n = a.size();
    if (b.size() != n || static_cast<std::size_t>(cost.rows()) != n || static_cast<std::size_t>(cost.cols()) != n) {
        throw NumericError(fmt::format("transport: shape mismatch ({} vs {} masses, {}x{} cost)", a.size(), b.size(),
                                       cost.rows(), cost.cols()));
    }
    double sa = 0.0;
    double sb = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        if (a[i] < 0.0 || b[i] < 0.0 || !std::isfinite(a[i]) || !std::isfinite(b[i])) {
            throw NumericError(fmt::format("transport: invalid mass at support index {}", i));
        }
        sa += a[i];
        sb += b[i];
    }
    if (std::abs(sa - sb) > marginal_tolerance) {
        throw NumericError(fmt::format("transport: infeasible marginals, totals {} and {}", sa, sb));
    }
}

// Successive shortest paths on a dense bipartite network. Node 0 is the
// source, 1..p surplus nodes, p+1..p+q deficit nodes, p+q+1 the sink.
class BipartiteMinCostFlow {
public:
    BipartiteMinCostFlow(std::vector<double> supply, std::vector<double> demand, Eigen::MatrixXd cost)
        : p_(supply.size()), q_(demand.size()), supply_(std::move(supply)), demand_(std::move(demand)),
          cost_(std::move(cost)), flow_(Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(p_), static_cast<Eigen::Index>(q_))) {}

    void solve() {
        const double total = std::accumulate(supply_.begin(), supply_.end(), 0.0);
        const double eps = 1e-15 * std::max(1.0, total);
        const double inf = std::numeric_limits<double>::infinity();
        // Relaxations must beat the current label by more than rounding noise,
        // otherwise near-zero residual cycles can be closed and the parent
        // pointers stop forming a path.
        const double slack = 1e-12 * std::max(1.0, cost_.cwiseAbs().maxCoeff());
        const std::size_t max_path = p_ + q_ + 1;
        std::vector<double> dist_s(p_);
        std::vector<double> dist_t(q_);
        std::vector<std::ptrdiff_t> parent_t(q_); // surplus node preceding t_j
        std::vector<std::ptrdiff_t> parent_s(p_); // deficit node preceding s_i, -1 for the source
        // Each augmentation exhausts a supply, a demand, or a reverse arc.
        const std::size_t max_rounds = 4 * (p_ + q_) * (p_ + q_) + 16;
        for (std::size_t round = 0; round < max_rounds; ++round) {
            // Bellman-Ford over the residual network with true costs; the
            // source reaches every surplus node with remaining supply at 0.
            std::fill(dist_s.begin(), dist_s.end(), inf);
            std::fill(dist_t.begin(), dist_t.end(), inf);
            for (std::size_t i = 0; i < p_; ++i) {
                if (supply_[i] > eps) {
                    dist_s[i] = 0.0;
                    parent_s[i] = -1;
                }
            }
            for (std::size_t pass = 0; pass <= p_ + q_; ++pass) {
                bool changed = false;
                for (std::size_t i = 0; i < p_; ++i) {
                    if (dist_s[i] == inf) continue;
                    for (std::size_t j = 0; j < q_; ++j) {
                        const double nd = dist_s[i] + cost_(idx(i), idx(j));
                        if (nd < dist_t[j] - slack) {
                            dist_t[j] = nd;
                            parent_t[j] = static_cast<std::ptrdiff_t>(i);
                            changed = true;
                        }
                    }
                }
                for (std::size_t j = 0; j < q_; ++j) {
                    if (dist_t[j] == inf) continue;
                    for (std::size_t i = 0; i < p_; ++i) {
                        if (flow_(idx(i), idx(j)) <= eps) continue;
                        const double nd = dist_t[j] - cost_(idx(i), idx(j));
                        if (nd < dist_s[i] - slack) {
                            dist_s[i] = nd;
                            parent_s[i] = static_cast<std::ptrdiff_t>(j);
                            changed = true;
                        }
                    }
                }
                if (!changed) break;
            }
            std::ptrdiff_t sink = -1;
            for (std::size_t j = 0; j < q_; ++j) {
                if (demand_[j] > eps && dist_t[j] < inf && (sink < 0 || dist_t[j] < dist_t[static_cast<std::size_t>(sink)])) {
                    sink = static_cast<std::ptrdiff_t>(j);
                }
            }
            if (sink < 0) return;

            double push = demand_[static_cast<std::size_t>(sink)];
            std::size_t steps = 0;
            for (std::size_t j = static_cast<std::size_t>(sink);;) {
                if (++steps > max_path) throw NumericError("transport: residual path does not reach the source");
                const auto i = static_cast<std::size_t>(parent_t[j]);
                const std::ptrdiff_t prev = parent_s[i];
                if (prev < 0) {
                    push = std::min(push, supply_[i]);
                    break;
                }
                push = std::min(push, flow_(idx(i), idx(static_cast<std::size_t>(prev))));
                j = static_cast<std::size_t>(prev);
            }
            demand_[static_cast<std::size_t>(sink)] -= push;
            for (std::size_t j = static_cast<std::size_t>(sink);;) {
                const auto i = static_cast<std::size_t>(parent_t[j]);
                flow_(idx(i), idx(j)) += push;
                const std::ptrdiff_t prev = parent_s[i];
                if (prev < 0) {
                    supply_[i] -= push;
                    break;
                }
                flow_(idx(i), idx(static_cast<std::size_t>(prev))) -= push;
                j = static_cast<std::size_t>(prev);
            }
        }
        throw NumericError("transport: min-cost flow did not terminate");
    }

    const Eigen::MatrixXd& flow() const { return flow_; }

private:
    static Eigen::Index idx(std::size_t i) { return static_cast<Eigen::Index>(i); }

    std::size_t p_;
    std::size_t q_;
    std::vector<double> supply_;
    std::vector<double> demand_;
    Eigen::MatrixXd cost_;
    Eigen::MatrixXd flow_;
};

double log_sum_exp(const Eigen::Ref<const Eigen::VectorXd>& x) {
    const double m = x.maxCoeff();
    if (!std::isfinite(m)) return m;
    return m + std::log((x.array() - m).exp().sum());
}

} // namespace

TransportPlan wasserstein1_exact(std::span<const double> source_mass, std::span<const double> target_mass,
                                 const Eigen::MatrixXd& cost) {
    check_marginals(source_mass, target_mass, cost);
    const std::size_t n = source_mass.size();
    TransportPlan plan;
    std::vector<std::size_t> surplus_idx;
    std::vector<std::size_t> deficit_idx;
    std::vector<double> supply;
    std::vector<double> demand;
    for (std::size_t i = 0; i < n; ++i) {
        const double common = std::min(source_mass[i], target_mass[i]);
        if (common > 0.0) {
            plan.flows.push_back({i, i, common});
            plan.cost += common * cost(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(i));
        }
        const double diff = source_mass[i] - target_mass[i];
        if (diff > 0.0) {
            surplus_idx.push_back(i);
            supply.push_back(diff);
        } else if (diff < 0.0) {
            deficit_idx.push_back(i);
            demand.push_back(-diff);
        }
    }
    if (surplus_idx.empty() || deficit_idx.empty()) return plan;

    Eigen::MatrixXd sub(static_cast<Eigen::Index>(surplus_idx.size()), static_cast<Eigen::Index>(deficit_idx.size()));
    for (std::size_t a = 0; a < surplus_idx.size(); ++a) {
        for (std::size_t b = 0; b < deficit_idx.size(); ++b) {
            const double c = cost(static_cast<Eigen::Index>(surplus_idx[a]), static_cast<Eigen::Index>(deficit_idx[b]));
            if (!std::isfinite(c)) {
                throw NumericError(fmt::format("transport: non-finite ground cost between support {} and {}",
                                               surplus_idx[a], deficit_idx[b]));
            }
            sub(static_cast<Eigen::Index>(a), static_cast<Eigen::Index>(b)) = c;
        }
    }
    BipartiteMinCostFlow mcf(supply, demand, sub);
    mcf.solve();
    const Eigen::MatrixXd& f = mcf.flow();
    for (std::size_t a = 0; a < surplus_idx.size(); ++a) {
        for (std::size_t b = 0; b < deficit_idx.size(); ++b) {
            const double m = f(static_cast<Eigen::Index>(a), static_cast<Eigen::Index>(b));
            if (m > 0.0) {
                plan.flows.push_back({surplus_idx[a], deficit_idx[b], m});
                plan.cost += m * sub(static_cast<Eigen::Index>(a), static_cast<Eigen::Index>(b));
            }
        }
    }
    return plan;
}

SinkhornResult wasserstein1_sinkhorn(std::span<const double> source_mass, std::span<const double> target_mass,
                                     const Eigen::MatrixXd& cost, const SinkhornOptions& options) {
    check_marginals(source_mass, target_mass, cost);
    if (!(options.epsilon > 0.0)) throw ParameterError("sinkhorn: epsilon must be positive");
    if (options.max_iter < 1) throw ParameterError("sinkhorn: max_iter must be at least 1");

    std::vector<std::size_t> rows;
    std::vector<std::size_t> cols;
    for (std::size_t i = 0; i < source_mass.size(); ++i) {
        if (source_mass[i] > 0.0) rows.push_back(i);
        if (target_mass[i] > 0.0) cols.push_back(i);
    }
    const auto p = static_cast<Eigen::Index>(rows.size());
    const auto q = static_cast<Eigen::Index>(cols.size());
    SinkhornResult result;
    if (p == 0 || q == 0) {
        result.converged = true;
        return result;
    }
    Eigen::MatrixXd c(p, q);
    Eigen::VectorXd log_a(p);
    Eigen::VectorXd log_b(q);
    Eigen::VectorXd a(p);
    for (Eigen::Index i = 0; i < p; ++i) {
        a[i] = source_mass[rows[static_cast<std::size_t>(i)]];
        log_a[i] = std::log(a[i]);
        for (Eigen::Index j = 0; j < q; ++j) {
            c(i, j) = cost(static_cast<Eigen::Index>(rows[static_cast<std::size_t>(i)]),
                           static_cast<Eigen::Index>(cols[static_cast<std::size_t>(j)]));
        }
    }
    for (Eigen::Index j = 0; j < q; ++j) log_b[j] = std::log(target_mass[cols[static_cast<std::size_t>(j)]]);

    const double eps = options.epsilon;
    Eigen::VectorXd f = Eigen::VectorXd::Zero(p);
    Eigen::VectorXd g = Eigen::VectorXd::Zero(q);
    Eigen::VectorXd scratch_q(q);
    Eigen::VectorXd scratch_p(p);
    auto plan_entry = [&](Eigen::Index i, Eigen::Index j) { return std::exp((f[i] + g[j] - c(i, j)) / eps); };

    for (int it = 1; it <= options.max_iter; ++it) {
        for (Eigen::Index i = 0; i < p; ++i) {
            for (Eigen::Index j = 0; j < q; ++j) scratch_q[j] = (g[j] - c(i, j)) / eps;
            f[i] = eps * (log_a[i] - log_sum_exp(scratch_q));
        }
        for (Eigen::Index j = 0; j < q; ++j) {
            for (Eigen::Index i = 0; i < p; ++i) scratch_p[i] = (f[i] - c(i, j)) / eps;
            g[j] = eps * (log_b[j] - log_sum_exp(scratch_p));
        }
        // Columns are exact after the g update; measure the row violation.
        double err = 0.0;
        for (Eigen::Index i = 0; i < p; ++i) {
            double row = 0.0;
            for (Eigen::Index j = 0; j < q; ++j) row += plan_entry(i, j);
            err += std::abs(row - a[i]);
        }
        result.iterations = it;
        result.marginal_error = err;
        if (err < options.tol) {
            result.converged = true;
            break;
        }
    }
    double total = 0.0;
    for (Eigen::Index i = 0; i < p; ++i) {
        for (Eigen::Index j = 0; j < q; ++j) total += plan_entry(i, j) * c(i, j);
    }
    result.cost = total;
    return result;
}

} // namespace orcpool
