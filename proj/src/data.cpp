#include "pwd/data.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <set>

namespace pwd {

namespace {

std::vector<int> default_index(Eigen::Index n) {
    std::vector<int> idx(static_cast<size_t>(n));
    std::iota(idx.begin(), idx.end(), 1);
    return idx;
}

}  // namespace

MCDataset::MCDataset(Eigen::VectorXd x, Eigen::VectorXd y)
    : x_(std::move(x)), y_(std::move(y)) {
    index_ = default_index(x_.size());
    validate();
}

MCDataset::MCDataset(std::vector<int> index, Eigen::VectorXd x, Eigen::VectorXd y)
    : index_(std::move(index)), x_(std::move(x)), y_(std::move(y)) {
    validate();
}

void MCDataset::validate() const {
    if (x_.size() != y_.size() || static_cast<size_t>(x_.size()) != index_.size())
        throw DataError("dataset: x, y and index must have equal length");
    if (x_.size() < 3) throw DataError("dataset: need at least 3 samples");
    for (Eigen::Index i = 0; i < x_.size(); ++i)
        if (!std::isfinite(x_[i]) || !std::isfinite(y_[i]))
            throw DataError("dataset: non-finite measurement at sample " +
                            std::to_string(index_[static_cast<size_t>(i)]));
    std::set<int> seen(index_.begin(), index_.end());
    if (seen.size() != index_.size()) throw DataError("dataset: sample ids must be unique");
}

MCDataset MCDataset::without_position(int pos) const {
    std::vector<int> keep;
    keep.reserve(static_cast<size_t>(n()) - 1);
    for (int i = 0; i < n(); ++i)
        if (i != pos) keep.push_back(i);
    return at_positions(keep);
}

MCDataset MCDataset::at_positions(const std::vector<int>& positions) const {
    const auto m = static_cast<Eigen::Index>(positions.size());
    std::vector<int> idx(positions.size());
    Eigen::VectorXd xs(m), ys(m);
    for (Eigen::Index i = 0; i < m; ++i) {
        const int p = positions[static_cast<size_t>(i)];
        idx[static_cast<size_t>(i)] = index_[static_cast<size_t>(p)];
        xs[i] = x_[p];
        ys[i] = y_[p];
    }
    return {std::move(idx), std::move(xs), std::move(ys)};
}

int MCDataset::position_of(int id) const {
    const auto it = std::find(index_.begin(), index_.end(), id);
    if (it == index_.end()) throw DataError("dataset: no sample with id " + std::to_string(id));
    return static_cast<int>(it - index_.begin());
}

double pearson(const Eigen::VectorXd& x, const Eigen::VectorXd& y) {
    const auto n = x.size();
    const Eigen::VectorXd xc = x.array() - x.mean();
    const Eigen::VectorXd yc = y.array() - y.mean();
    const double sxx = xc.squaredNorm(), syy = yc.squaredNorm();
    if (sxx <= 0.0 || syy <= 0.0)
        throw DomainError("correlation undefined for a constant vector");
    (void)n;
    return xc.dot(yc) / std::sqrt(sxx * syy);
}

namespace {

Eigen::VectorXd average_ranks(const Eigen::VectorXd& v) {
    const auto n = v.size();
    std::vector<Eigen::Index> ord(static_cast<size_t>(n));
    std::iota(ord.begin(), ord.end(), 0);
    std::sort(ord.begin(), ord.end(), [&](Eigen::Index a, Eigen::Index b) { return v[a] < v[b]; });
    Eigen::VectorXd rank(n);
    Eigen::Index i = 0;
    while (i < n) {
        Eigen::Index j = i;
        while (j + 1 < n && v[ord[static_cast<size_t>(j + 1)]] == v[ord[static_cast<size_t>(i)]])
            ++j;
        const double r = 0.5 * static_cast<double>(i + j) + 1.0;
        for (Eigen::Index k = i; k <= j; ++k) rank[ord[static_cast<size_t>(k)]] = r;
        i = j + 1;
    }
    return rank;
}

}  // namespace

double spearman(const Eigen::VectorXd& x, const Eigen::VectorXd& y) {
    return pearson(average_ranks(x), average_ranks(y));
}

}  // namespace pwd
