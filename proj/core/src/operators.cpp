#include "enetfp/operators.hpp"

#include <cmath>
#include <string>

#include "enetfp/errors.hpp"
#include "enetfp/parallel.hpp"

namespace enetfp {

namespace {

std::span<const double> row_span(const Eigen::MatrixXd& m, Eigen::Index i, std::vector<double>& scratch) {
    scratch.resize(static_cast<std::size_t>(m.cols()));
    for (Eigen::Index c = 0; c < m.cols(); ++c) scratch[static_cast<std::size_t>(c)] = m(i, c);
    return {scratch.data(), scratch.size()};
}

}  // namespace

void Dataset::validate() const {
    if (inputs.rows() == 0) throw DataError("dataset: no samples");
    if (inputs.rows() != outputs.rows()) {
        throw DataError("dataset: " + std::to_string(inputs.rows()) + " inputs but " +
                        std::to_string(outputs.rows()) + " outputs");
    }
    if (outputs.cols() == 0) throw DataError("dataset: outputs have dimension 0");
    if (!inputs.allFinite() || !outputs.allFinite()) throw DataError("dataset: non-finite values");
}

std::ptrdiff_t EmpiricalOperators::position(const FeatureId& id) const {
    for (std::size_t i = 0; i < index_set.size(); ++i) {
        if (index_set[i] == id) return static_cast<std::ptrdiff_t>(i);
    }
    return -1;
}

EmpiricalOperators EmpiricalOperators::restrict_to(std::span<const std::size_t> positions) const {
    EmpiricalOperators out;
    const auto p = static_cast<Eigen::Index>(positions.size());
    out.index_set.reserve(positions.size());
    out.gram.resize(p, p);
    out.moment.resize(p);
    for (Eigen::Index a = 0; a < p; ++a) {
        const auto pa = static_cast<Eigen::Index>(positions[static_cast<std::size_t>(a)]);
        if (pa >= static_cast<Eigen::Index>(index_set.size())) throw LookupError("restrict_to: position out of range");
        out.index_set.push_back(index_set[static_cast<std::size_t>(pa)]);
        out.moment(a) = moment(pa);
        for (Eigen::Index b = 0; b < p; ++b) {
            out.gram(a, b) = gram(pa, static_cast<Eigen::Index>(positions[static_cast<std::size_t>(b)]));
        }
    }
    out.trace = out.gram.trace();
    out.y_norm = y_norm;
    out.sample_count = sample_count;
    return out;
}

EmpiricalOperators EmpiricalOperators::restrict_to(std::span<const FeatureId> ids) const {
    std::vector<std::size_t> positions;
    positions.reserve(ids.size());
    for (const auto& id : ids) {
        const auto pos = position(id);
        if (pos < 0) throw LookupError("restrict_to: feature " + to_string(id) + " not in the index set");
        positions.push_back(static_cast<std::size_t>(pos));
    }
    return restrict_to(positions);
}

Eigen::VectorXd FeatureDesign::empirical_norms() const {
    Eigen::VectorXd norms(values.cols());
    const double inv_n = 1.0 / static_cast<double>(sample_count);
    for (Eigen::Index c = 0; c < values.cols(); ++c) {
        double acc = 0.0;
        for (Eigen::Index r = 0; r < values.rows(); ++r) acc += values(r, c) * values(r, c);
        norms(c) = std::sqrt(acc * inv_n);
    }
    return norms;
}

FeatureDesign sample_features(const Dictionary& dict, const Dataset& data,
                              std::span<const FeatureId> index_set, std::size_t threads) {
    data.validate();
    if (data.output_dim() != dict.output_dim()) {
        throw DataError("outputs have dimension " + std::to_string(data.output_dim()) +
                        " but the dictionary produces dimension " + std::to_string(dict.output_dim()));
    }
    if (data.input_dim() != dict.input_dim()) {
        throw DataError("inputs have dimension " + std::to_string(data.input_dim()) +
                        " but the dictionary expects dimension " + std::to_string(dict.input_dim()));
    }
    for (const auto& id : index_set) {
        if (!dict.contains(id)) throw LookupError("feature " + to_string(id) + " is not in the dictionary");
    }

    const std::size_t n = data.size();
    const std::size_t m = data.output_dim();
    FeatureDesign design;
    design.index_set.assign(index_set.begin(), index_set.end());
    design.sample_count = n;
    design.output_dim = m;
    design.values.setZero(static_cast<Eigen::Index>(n * m), static_cast<Eigen::Index>(index_set.size()));

    parallel_for(
        n,
        [&](std::size_t i) {
            std::vector<double> scratch;
            const auto x = row_span(data.inputs, static_cast<Eigen::Index>(i), scratch);
            for (std::size_t c = 0; c < index_set.size(); ++c) {
                const Eigen::VectorXd v = dict.evaluate(index_set[c], x);
                for (std::size_t r = 0; r < m; ++r) {
                    design.values(static_cast<Eigen::Index>(i * m + r), static_cast<Eigen::Index>(c)) =
                        v(static_cast<Eigen::Index>(r));
                }
            }
        },
        threads);
    return design;
}

EmpiricalOperators assemble_empirical(const FeatureDesign& design, const Dataset& data, std::size_t threads) {
    data.validate();
    const auto rows = design.values.rows();
    if (rows != static_cast<Eigen::Index>(data.size() * data.output_dim())) {
        throw DataError("feature design does not match the dataset");
    }
    const auto p = design.values.cols();
    const double inv_n = 1.0 / static_cast<double>(design.sample_count);

    // Outputs stacked in the design's row order (sample-major).
    Eigen::VectorXd y(rows);
    const auto m = static_cast<Eigen::Index>(data.output_dim());
    for (Eigen::Index i = 0; i < static_cast<Eigen::Index>(data.size()); ++i) {
        for (Eigen::Index r = 0; r < m; ++r) y(i * m + r) = data.outputs(i, r);
    }

    EmpiricalOperators ops;
    ops.index_set = design.index_set;
    ops.sample_count = design.sample_count;
    ops.gram.resize(p, p);
    ops.moment.resize(p);

    // Column a fills gram(a, b) for b >= a; every entry is one ordered sum.
    parallel_for(
        static_cast<std::size_t>(p),
        [&](std::size_t col) {
            const auto a = static_cast<Eigen::Index>(col);
            for (Eigen::Index b = a; b < p; ++b) {
                double acc = 0.0;
                for (Eigen::Index r = 0; r < rows; ++r) acc += design.values(r, a) * design.values(r, b);
                ops.gram(a, b) = acc * inv_n;
            }
            double acc = 0.0;
            for (Eigen::Index r = 0; r < rows; ++r) acc += design.values(r, a) * y(r);
            ops.moment(a) = acc * inv_n;
        },
        threads);
    for (Eigen::Index a = 0; a < p; ++a) {
        for (Eigen::Index b = 0; b < a; ++b) ops.gram(a, b) = ops.gram(b, a);
    }

    double ysq = 0.0;
    for (Eigen::Index r = 0; r < rows; ++r) ysq += y(r) * y(r);
    ops.y_norm = std::sqrt(ysq * inv_n);
    ops.trace = ops.gram.trace();
    return ops;
}

EmpiricalOperators assemble_empirical(const Dictionary& dict, const Dataset& data,
                                      std::span<const FeatureId> index_set, std::size_t threads) {
    return assemble_empirical(sample_features(dict, data, index_set, threads), data, threads);
}

Eigen::VectorXd predict(const Dictionary& dict, const Coefficients& beta, std::span<const double> x) {
    Eigen::VectorXd out = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(dict.output_dim()));
    for (const auto& [id, value] : beta) out += value * dict.evaluate(id, x);
    return out;
}

Eigen::MatrixXd kernel_eval(const Dictionary& dict, std::span<const double> x, std::span<const double> t) {
    const auto m = static_cast<Eigen::Index>(dict.output_dim());
    Eigen::MatrixXd k = Eigen::MatrixXd::Zero(m, m);
    for (const auto& id : dict.enumerate()) k += dict.evaluate(id, x) * dict.evaluate(id, t).transpose();
    return k;
}

double smallest_eigenvalue(const EmpiricalOperators& ops) {
    if (ops.size() == 0) return 0.0;
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(ops.gram, Eigen::EigenvaluesOnly);
    return std::max(0.0, es.eigenvalues().minCoeff());
}

double largest_eigenvalue(const EmpiricalOperators& ops) {
    if (ops.size() == 0) return 0.0;
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(ops.gram, Eigen::EigenvaluesOnly);
    return es.eigenvalues().maxCoeff();
}

Eigen::VectorXd to_dense(const Coefficients& beta, std::span<const FeatureId> index_set) {
    Eigen::VectorXd out = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(index_set.size()));
    std::size_t matched = 0;
    for (std::size_t c = 0; c < index_set.size(); ++c) {
        if (auto it = beta.find(index_set[c]); it != beta.end()) {
            out(static_cast<Eigen::Index>(c)) = it->second;
            ++matched;
        }
    }
    if (matched != beta.size()) {
        for (const auto& [id, value] : beta) {
            bool found = false;
            for (const auto& candidate : index_set) found = found || candidate == id;
            if (!found) throw LookupError("coefficient " + to_string(id) + " lies outside the index set");
        }
    }
    return out;
}

Coefficients from_dense(const Eigen::VectorXd& values, std::span<const FeatureId> index_set) {
    if (static_cast<std::size_t>(values.size()) != index_set.size()) {
        throw DataError("from_dense: size mismatch");
    }
    Coefficients out;
    for (std::size_t c = 0; c < index_set.size(); ++c) {
        const double v = values(static_cast<Eigen::Index>(c));
        if (v != 0.0) out.emplace(index_set[c], v);
    }
    return out;
}

double l2_norm(const Coefficients& beta) {
    double acc = 0.0;
    for (const auto& [id, v] : beta) acc += v * v;
    return std::sqrt(acc);
}

double l2_distance(const Coefficients& a, const Coefficients& b) {
    double acc = 0.0;
    auto ia = a.begin();
    auto ib = b.begin();
    while (ia != a.end() || ib != b.end()) {
        if (ib == b.end() || (ia != a.end() && ia->first < ib->first)) {
            acc += ia->second * ia->second;
            ++ia;
        } else if (ia == a.end() || ib->first < ia->first) {
            acc += ib->second * ib->second;
            ++ib;
        } else {
            const double d = ia->second - ib->second;
            acc += d * d;
            ++ia;
            ++ib;
        }
    }
    return std::sqrt(acc);
}

}  // namespace enetfp
