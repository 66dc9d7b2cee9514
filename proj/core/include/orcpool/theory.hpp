#pragma once

#include <array>
#include <iosfwd>
#include <string_view>
#include <vector>

#include <Eigen/Dense>
#include <nlohmann/json.hpp>

#include "orcpool/flow.hpp"
#include "orcpool/generators.hpp"

namespace orcpool {

// Closed-form weight dynamics on the model graph G_{a,b}: weights of the
// three edge types (bridge, hub, internal) evolve as w^{t+1} = F(a, b) w^t.
Eigen::Matrix3d flow_matrix(int a, int b);

// w^t = F^t [1, 1, 1] for t = 0..T.
std::vector<Eigen::Vector3d> analytic_weight_evolution(int a, int b, int steps);

struct EigenstructureReport {
    int a = 0;
    int b = 0;
    Eigen::Vector3d values = Eigen::Vector3d::Zero(); // real parts, descending
    double max_imaginary = 0.0;
    bool real = false;
    bool lambda1_above_one = false;
    bool lambda2_is_inverse_a = false; // within 1e-10
    bool lambda3_negative = false;

    bool passed() const { return real && lambda1_above_one && lambda2_is_inverse_a && lambda3_negative; }
};

EigenstructureReport verify_eigenstructure(int a, int b);

struct TheoryModel {
    int a = 0;
    int b = 0;
    Eigen::Matrix3d f;
    EigenstructureReport eigen;
};

TheoryModel theory_model(int a, int b);

enum class SeriesSource { analytic, empirical };

std::string_view to_string(SeriesSource s);
SeriesSource parse_series_source(std::string_view name);

// Modularity of the natural partition under the unordered convention for
// t = 0..T. The analytic source evaluates the per-type trajectory with exact
// edge counts and degrees; the empirical source runs ricci_flow on
// generate_gab(a, b) with `flow`.
std::vector<double> gab_modularity_series(int a, int b, int steps, SeriesSource source,
                                          const FlowOptions& flow = {});

// Unordered modularity of G_{a,b} with per-type weights w.
double gab_modularity(int a, int b, const Eigen::Vector3d& w);

struct TypeWeights {
    Eigen::Vector3d mean = Eigen::Vector3d::Zero();
    Eigen::Vector3d spread = Eigen::Vector3d::Zero(); // max minus min within each type
};

TypeWeights per_type_weights(const GabGraph& gab, const std::vector<double>& weights);

// Numeric checks of the closed-form claims on G_{a,b}; one entry per claim
// with pass flag and evidence, plus "all_passed".
nlohmann::json verify_gab(int a, int b, int steps, const FlowOptions& flow = {});

void write_series_csv(const std::vector<double>& series, std::ostream& out);

} // namespace orcpool
