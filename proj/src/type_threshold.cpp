#include "ttcomp/type_threshold.hpp"

#include <algorithm>
#include <sstream>
#include <stdexcept>

#include "ttcomp/math_util.hpp"

namespace ttcomp {

std::string label_to_string(const Label& label) {
    std::ostringstream out;
    if (const auto* v = std::get_if<std::int64_t>(&label)) {
        out << *v;
    } else if (const auto* set = std::get_if<std::vector<int>>(&label)) {
        out << '{';
        for (std::size_t i = 0; i < set->size(); ++i) {
            if (i) out << ',';
            out << (*set)[i];
        }
        out << '}';
    } else {
        const auto& sc = std::get<SumCount>(label);
        out << sc.sum << '/' << sc.count;
    }
    return out.str();
}

TypeThresholdFunction::TypeThresholdFunction(int q, std::vector<int> theta,
                                             std::vector<Label> table, std::size_t table_cap)
    : q_(q), theta_(std::move(theta)), table_(std::move(table)) {
    if (q_ < 2) throw std::invalid_argument("TypeThresholdFunction: alphabet size must be at least 2");
    if (static_cast<int>(theta_.size()) != q_)
        throw std::invalid_argument("TypeThresholdFunction: theta length must equal q");
    std::size_t size = 1;
    stride_.resize(theta_.size());
    for (std::size_t l = 0; l < theta_.size(); ++l) {
        if (theta_[l] < 0) throw std::invalid_argument("TypeThresholdFunction: negative threshold");
        stride_[l] = size;
        const std::size_t w = static_cast<std::size_t>(theta_[l]) + 1;
        if (size > table_cap / w)
            throw ResourceError("TypeThresholdFunction: clipped box exceeds table cap");
        size *= w;
    }
    if (table_.size() != size)
        throw std::invalid_argument("TypeThresholdFunction: table length does not match clipped box");
}

std::size_t TypeThresholdFunction::box_index(std::span<const int> clipped) const {
    if (static_cast<int>(clipped.size()) != q_)
        throw std::invalid_argument("box_index: wrong coordinate count");
    std::size_t idx = 0;
    for (int l = 0; l < q_; ++l) {
        if (clipped[l] < 0 || clipped[l] > theta_[l])
            throw std::invalid_argument("box_index: coordinate outside clipped box");
        idx += static_cast<std::size_t>(clipped[l]) * stride_[l];
    }
    return idx;
}

std::vector<int> TypeThresholdFunction::box_point(std::size_t index) const {
    if (index >= table_.size()) throw std::invalid_argument("box_point: index outside table");
    std::vector<int> c(q_);
    for (int l = 0; l < q_; ++l) {
        const std::size_t w = static_cast<std::size_t>(theta_[l]) + 1;
        c[l] = static_cast<int>(index % w);
        index /= w;
    }
    return c;
}

const Label& TypeThresholdFunction::reduce(std::span<const int> clipped) const {
    return table_[box_index(clipped)];
}

std::vector<int> TypeThresholdFunction::clip(const TypeVector& type) const {
    if (static_cast<int>(type.counts.size()) != q_)
        throw std::invalid_argument("clip: type vector length must equal q");
    std::vector<int> c(q_);
    for (int l = 0; l < q_; ++l) c[l] = std::min(theta_[l], type.counts[l]);
    return c;
}

TypeVector type_vector(std::span<const int> symbols, int q) {
    if (q < 2) throw std::invalid_argument("type_vector: alphabet size must be at least 2");
    TypeVector t;
    t.counts.assign(q, 0);
    for (int s : symbols) {
        if (s < 0 || s >= q) throw std::invalid_argument("type_vector: symbol outside alphabet");
        ++t.counts[s];
    }
    return t;
}

Label evaluate(const TypeThresholdFunction& f, std::span<const int> symbols) {
    if (symbols.empty()) throw std::invalid_argument("evaluate: empty realization");
    const TypeVector t = type_vector(symbols, f.q());
    const std::vector<int> clipped = f.clip(t);
    return f.reduce(clipped);
}

namespace {

Label standard_label(StandardKind kind, int q, int param, const std::vector<int>& c) {
    switch (kind) {
        case StandardKind::maximum: {
            for (int l = q - 1; l >= 1; --l)
                if (c[l] >= 1) return Label(std::int64_t(l));
            return Label(std::int64_t(0));
        }
        case StandardKind::distinct_count: {
            std::int64_t n = 0;
            for (int l = 0; l < q; ++l) n += c[l];
            return Label(n);
        }
        case StandardKind::avg_top: {
            // Take the param largest values; missing entries are zeros, which
            // add nothing to the sum (valid whenever M >= param).
            std::int64_t remaining = param;
            std::int64_t sum = 0;
            for (int l = q - 1; l >= 1 && remaining > 0; --l) {
                const std::int64_t take = std::min<std::int64_t>(c[l], remaining);
                sum += take * l;
                remaining -= take;
            }
            return Label(SumCount{sum, param});
        }
        case StandardKind::frequency_indicator:
            return Label(std::int64_t(c[param]));
        case StandardKind::heavy_hitters: {
            std::vector<int> hh;
            for (int l = 0; l < q; ++l)
                if (c[l] >= param) hh.push_back(l);
            return Label(std::move(hh));
        }
    }
    throw std::invalid_argument("standard_function: unknown kind");
}

}  // namespace

TypeThresholdFunction standard_function(StandardKind kind, int q, int param,
                                        std::size_t table_cap) {
    if (q < 2) throw std::invalid_argument("standard_function: alphabet size must be at least 2");
    std::vector<int> theta;
    switch (kind) {
        case StandardKind::maximum:
            theta.assign(q, 1);
            theta[0] = 0;
            break;
        case StandardKind::distinct_count:
            theta.assign(q, 1);
            break;
        case StandardKind::avg_top:
            if (param < 1) throw std::invalid_argument("standard_function: avg_top needs param >= 1");
            theta.assign(q, param);
            theta[0] = 0;
            break;
        case StandardKind::frequency_indicator:
            if (param < 0 || param >= q)
                throw std::invalid_argument("standard_function: frequency_indicator symbol outside alphabet");
            theta.assign(q, 0);
            theta[param] = 1;
            break;
        case StandardKind::heavy_hitters:
            if (param < 0) throw std::invalid_argument("standard_function: heavy_hitters needs param >= 0");
            theta.assign(q, param);
            break;
    }

    std::size_t size = 1;
    for (int l = 0; l < q; ++l) {
        const std::size_t w = static_cast<std::size_t>(theta[l]) + 1;
        if (size > table_cap / w)
            throw ResourceError("standard_function: clipped box exceeds table cap");
        size *= w;
    }

    // Build a scratch function only to reuse its mixed-radix decoding.
    std::vector<Label> table(size);
    std::vector<int> c(q, 0);
    for (std::size_t idx = 0; idx < size; ++idx) {
        table[idx] = standard_label(kind, q, param, c);
        for (int l = 0; l < q; ++l) {
            if (c[l] < theta[l]) {
                ++c[l];
                break;
            }
            c[l] = 0;
        }
    }
    return TypeThresholdFunction(q, std::move(theta), std::move(table), table_cap);
}

}  // namespace ttcomp
