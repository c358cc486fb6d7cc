#pragma once

// Paired methods-comparison measurements: the predicate readings x, the test
// readings y, and stable 1-based sample ids that survive subsetting.

#include <Eigen/Dense>
#include <vector>

#include "pwd/errors.hpp"

namespace pwd {

struct PairedSample {
    int index;
    double x;
    double y;
};

class MCDataset {
public:
    // Samples are numbered 1..n.
    MCDataset(Eigen::VectorXd x, Eigen::VectorXd y);
    MCDataset(std::vector<int> index, Eigen::VectorXd x, Eigen::VectorXd y);

    int n() const { return static_cast<int>(x_.size()); }
    const Eigen::VectorXd& x() const { return x_; }
    const Eigen::VectorXd& y() const { return y_; }
    const std::vector<int>& index() const { return index_; }

    PairedSample sample(int pos) const { return {index_[pos], x_[pos], y_[pos]}; }

    // Dataset without the sample at position pos (0-based position, not id).
    MCDataset without_position(int pos) const;

    // Dataset restricted to the given 0-based positions, in the given order.
    MCDataset at_positions(const std::vector<int>& positions) const;

    // 0-based position of the sample with the given id; throws if absent.
    int position_of(int id) const;

private:
    void validate() const;

    std::vector<int> index_;
    Eigen::VectorXd x_;
    Eigen::VectorXd y_;
};

// Pearson correlation of the two measurement vectors.
double pearson(const Eigen::VectorXd& x, const Eigen::VectorXd& y);

// Spearman rank correlation, average ranks for ties.
double spearman(const Eigen::VectorXd& x, const Eigen::VectorXd& y);

}  // namespace pwd
