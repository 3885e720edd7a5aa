#pragma once

#include <Eigen/Dense>

#include <cstddef>
#include <span>
#include <vector>

#include "enetfp/dictionary.hpp"
#include "enetfp/feature_id.hpp"

namespace enetfp {

/// n input/output pairs; inputs are rows of an n x d matrix, outputs rows of n x m.
struct Dataset {
    Eigen::MatrixXd inputs;
    Eigen::MatrixXd outputs;

    std::size_t size() const { return static_cast<std::size_t>(inputs.rows()); }
    std::size_t input_dim() const { return static_cast<std::size_t>(inputs.cols()); }
    std::size_t output_dim() const { return static_cast<std::size_t>(outputs.cols()); }

    /// Throws DataError when empty or when row counts disagree.
    void validate() const;
};

/// Empirical Gram matrix and moment vector over an ordered index set.
///   gram(a, b) = 1/n sum_i <phi_a(X_i), phi_b(X_i)>
///   moment(a)  = 1/n sum_i <phi_a(X_i), Y_i>
struct EmpiricalOperators {
    std::vector<FeatureId> index_set;
    Eigen::MatrixXd gram;
    Eigen::VectorXd moment;
    double trace = 0.0;   // gram.trace()
    double y_norm = 0.0;  // |Y|_n = sqrt(1/n sum_i |Y_i|^2)
    std::size_t sample_count = 0;

    std::size_t size() const { return index_set.size(); }

    /// Position of id in index_set, or -1.
    std::ptrdiff_t position(const FeatureId& id) const;

    /// Sub-operators over the given positions (in the given order). Entries
    /// are copied, so they are bit-identical to a direct assembly.
    EmpiricalOperators restrict_to(std::span<const std::size_t> positions) const;
    EmpiricalOperators restrict_to(std::span<const FeatureId> ids) const;
};

/// Sampled features: column c holds phi_c(X_i) stacked over samples and output
/// components (row i*m + r). Shared by assembly and truncation.
struct FeatureDesign {
    std::vector<FeatureId> index_set;
    Eigen::MatrixXd values;  // (n*m) x p
    std::size_t sample_count = 0;
    std::size_t output_dim = 1;

    /// |phi_c|_n for every column.
    Eigen::VectorXd empirical_norms() const;
};

FeatureDesign sample_features(const Dictionary& dict, const Dataset& data,
                              std::span<const FeatureId> index_set, std::size_t threads = 0);

/// Empirical operators over index_set. Each entry is a sequential sum in
/// sample order; parallelism is over entries only, so results do not depend
/// on the worker count.
EmpiricalOperators assemble_empirical(const Dictionary& dict, const Dataset& data,
                                      std::span<const FeatureId> index_set,
                                      std::size_t threads = 0);

EmpiricalOperators assemble_empirical(const FeatureDesign& design, const Dataset& data,
                                      std::size_t threads = 0);

/// f_beta(x) = sum_gamma beta_gamma phi_gamma(x).
Eigen::VectorXd predict(const Dictionary& dict, const Coefficients& beta,
                        std::span<const double> x);

/// K(x, t) = sum_gamma phi_gamma(x) phi_gamma(t)^T over the enumerated features.
Eigen::MatrixXd kernel_eval(const Dictionary& dict, std::span<const double> x,
                            std::span<const double> t);

/// Smallest eigenvalue of the Gram matrix, clamped at 0 (a valid lower
/// spectral bound for finite explicit dictionaries).
double smallest_eigenvalue(const EmpiricalOperators& ops);

/// Largest eigenvalue of the Gram matrix.
double largest_eigenvalue(const EmpiricalOperators& ops);

/// Dense vector over ops.index_set. Throws LookupError when the support of
/// beta is not contained in the index set.
Eigen::VectorXd to_dense(const Coefficients& beta, std::span<const FeatureId> index_set);

/// Sparse map of the nonzero entries.
Coefficients from_dense(const Eigen::VectorXd& values, std::span<const FeatureId> index_set);

double l2_norm(const Coefficients& beta);
double l2_distance(const Coefficients& a, const Coefficients& b);

}  // namespace enetfp
