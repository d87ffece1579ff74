#include "ttcomp/source_model.hpp"

#include <stdexcept>
#include <string>

#include "ttcomp/math_util.hpp"

namespace ttcomp {

SourceModel::SourceModel(int q, std::vector<std::vector<double>> pmfs)
    : q_(q), pmfs_(std::move(pmfs)) {
    if (q_ < 2) throw std::invalid_argument("SourceModel: alphabet size must be at least 2");
    if (pmfs_.empty()) throw std::invalid_argument("SourceModel: need at least one sensor");
    for (std::size_t i = 0; i < pmfs_.size(); ++i) {
        if (static_cast<int>(pmfs_[i].size()) != q_)
            throw std::invalid_argument("SourceModel: pmf row " + std::to_string(i) +
                                        " has wrong length");
        check_pmf(pmfs_[i], 1e-12, "SourceModel: pmf row " + std::to_string(i));
    }
}

std::vector<double> SourceModel::indicator_probs(int value) const {
    if (value < 0 || value >= q_) throw std::invalid_argument("indicator_probs: value outside alphabet");
    std::vector<double> p(pmfs_.size());
    for (std::size_t i = 0; i < pmfs_.size(); ++i) p[i] = pmfs_[i][value];
    return p;
}

std::vector<int> SourceModel::sample(RngStream& rng) const {
    std::vector<int> s(pmfs_.size());
    for (std::size_t i = 0; i < pmfs_.size(); ++i)
        s[i] = rng.next_categorical(pmfs_[i]);
    return s;
}

SourceModel SourceModel::iid(int sensors, std::vector<double> pmf) {
    if (sensors < 1) throw std::invalid_argument("SourceModel::iid: need at least one sensor");
    std::vector<std::vector<double>> rows(sensors, pmf);
    return SourceModel(static_cast<int>(pmf.size()), std::move(rows));
}

SourceModel SourceModel::bernoulli(int sensors, double beta) {
    if (beta < 0.0 || beta > 1.0) throw std::invalid_argument("SourceModel::bernoulli: beta outside [0,1]");
    return iid(sensors, {1.0 - beta, beta});
}

SourceModel SourceModel::restricted(std::span<const int> sensors) const {
    if (sensors.empty()) throw std::invalid_argument("SourceModel::restricted: empty sensor set");
    std::vector<std::vector<double>> rows;
    rows.reserve(sensors.size());
    for (int i : sensors) rows.push_back(pmf(i));
    return SourceModel(q_, std::move(rows));
}

}  // namespace ttcomp
