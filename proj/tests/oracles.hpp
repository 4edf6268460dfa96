// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "chigad/ad/tape.hpp"
#include "chigad/hin/hetero_graph.hpp"
#include "chigad/hin/meta_path.hpp"
#include "chigad/model/chigad.hpp"
#include "chigad/types.hpp"

// Independent reference computations shared by the unit suites and the
// acceptance binary.
namespace chigad::oracle {

/// Normalizer of the chi-square response via the regularized lower gamma.
double chi_normalizer(int i);

/// Closed form of the integral of f_i(w)^2 / w over (0, inf).
double admissibility(int i);

double simpson(const std::function<double(double)>& f, double a, double b, int n = 200000);

/// Brute force over every relation sequence, lexicographic order.
std::vector<hin::MetaPath> meta_paths(const hin::HeteroGraph& g, int anchor, int lo, int hi);

/// Endpoint pairs joined by at least one walk along the path (either
/// direction), no self-loops.
SparseMatrix walk_adjacency(const hin::HeteroGraph& g, const hin::MetaPath& p);

/// Fraction of (anomaly, benign) pairs ranked correctly, ties count half.
double all_pairs_auroc(const std::vector<double>& scores, const std::vector<int>& labels);

/// sum_k c_k P_k(w S) x with dense matrix powers: P_k(M) = M^k in the
/// monomial basis, T_k(M - I) by the three-term recurrence otherwise.
Matrix dense_poly_apply(const Matrix& c, const Matrix& s, const Matrix& x, double w, ad::PolyBasis basis);

/// Reverse-mode vs central-difference gradient of sum(W .* op(inputs)) for
/// a random W, with respect to inputs[which]. Returns the relative error.
using OpBuilder = std::function<ad::Var(ad::Tape&, std::vector<ad::Var>&)>;
double op_gradient_error(const std::vector<Matrix>& inputs, std::size_t which, const OpBuilder& build,
                         std::uint64_t seed, double step = 1e-5);

struct NamedError {
  std::string name;
  double error = 0.0;
};

/// One entry per differentiable operation (and input) on a random instance.
std::vector<NamedError> op_gradient_errors(std::uint64_t seed);

/// One entry per model parameter: error of the unweighted CE gradient.
std::vector<NamedError> model_gradient_errors(model::ChiGadModel& net, const std::vector<int>& labels);

/// Model and graph used for end-to-end gradient checks.
model::ModelConfig gradient_model_config(std::uint64_t seed);
hin::HeteroGraph gradient_graph(std::uint64_t seed);
/// Built from gradient_model_config with meta weights moved off 1.
model::ChiGadModel gradient_model(const hin::HeteroGraph& graph, std::uint64_t seed);

}  // namespace chigad::oracle
