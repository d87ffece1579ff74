#include "ttcomp/serialize.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <ostream>
#include <stdexcept>

namespace ttcomp {

std::string format_double(double x) {
    if (std::isnan(x)) return "nan";
    if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.12g", x);
    return buf;
}

nlohmann::json to_json(const SourceModel& src) {
    return nlohmann::json{{"q", src.q()}, {"pmfs", src.pmfs()}};
}

SourceModel source_model_from_json(const nlohmann::json& j) {
    if (!j.is_object()) throw std::invalid_argument("source model: expected an object");
    if (j.contains("bernoulli")) {
        // Shorthand: {"bernoulli": beta, "sensors": M}
        return SourceModel::bernoulli(j.at("sensors").get<int>(), j.at("bernoulli").get<double>());
    }
    if (j.contains("iid")) {
        // Shorthand: {"iid": pmf, "sensors": M}
        return SourceModel::iid(j.at("sensors").get<int>(),
                                j.at("iid").get<std::vector<double>>());
    }
    return SourceModel(j.at("q").get<int>(),
                       j.at("pmfs").get<std::vector<std::vector<double>>>());
}

nlohmann::json to_json(const Label& label) {
    if (const auto* n = std::get_if<std::int64_t>(&label)) return *n;
    if (const auto* v = std::get_if<std::vector<int>>(&label)) return *v;
    const auto& sc = std::get<SumCount>(label);
    return nlohmann::json{{"sum", sc.sum}, {"count", sc.count}};
}

Label label_from_json(const nlohmann::json& j) {
    if (j.is_number_integer()) return Label(j.get<std::int64_t>());
    if (j.is_array()) {
        auto v = j.get<std::vector<int>>();
        if (!std::is_sorted(v.begin(), v.end()))
            throw std::invalid_argument("label: subset must be sorted");
        return Label(std::move(v));
    }
    if (j.is_object() && j.contains("sum") && j.contains("count"))
        return Label(SumCount{j.at("sum").get<std::int64_t>(), j.at("count").get<std::int64_t>()});
    throw std::invalid_argument("label: expected integer, array, or {sum,count}");
}

namespace {

StandardKind standard_kind_from_string(const std::string& name) {
    if (name == "maximum") return StandardKind::maximum;
    if (name == "distinct_count") return StandardKind::distinct_count;
    if (name == "avg_top") return StandardKind::avg_top;
    if (name == "frequency_indicator") return StandardKind::frequency_indicator;
    if (name == "heavy_hitters") return StandardKind::heavy_hitters;
    throw std::invalid_argument("unknown standard function: " + name);
}

}  // namespace

nlohmann::json to_json(const TypeThresholdFunction& f) {
    nlohmann::json reducer = nlohmann::json::array();
    for (const Label& label : f.table()) reducer.push_back(to_json(label));
    return nlohmann::json{{"q", f.q()}, {"theta", f.theta()}, {"reducer", std::move(reducer)}};
}

TypeThresholdFunction function_from_json(const nlohmann::json& j) {
    if (!j.is_object()) throw std::invalid_argument("function: expected an object");
    if (j.contains("standard")) {
        int param = j.value("param", 0);
        return standard_function(standard_kind_from_string(j.at("standard").get<std::string>()),
                                 j.at("q").get<int>(), param);
    }
    auto theta = j.at("theta").get<std::vector<int>>();
    std::vector<Label> table;
    for (const auto& entry : j.at("reducer")) table.push_back(label_from_json(entry));
    return TypeThresholdFunction(j.at("q").get<int>(), std::move(theta), std::move(table));
}

nlohmann::json to_json(const Partition& p) {
    nlohmann::json groups = nlohmann::json::array();
    for (const auto& g : p.groups) {
        nlohmann::json group = nlohmann::json::array();
        for (int i : g) group.push_back(i + 1);
        groups.push_back(std::move(group));
    }
    return groups;
}

Partition partition_from_json(const nlohmann::json& j, int sensor_count) {
    if (!j.is_array()) throw std::invalid_argument("partition: expected an array of arrays");
    Partition p;
    for (const auto& group : j) {
        std::vector<int> g;
        for (const auto& idx : group) {
            int one_based = idx.get<int>();
            if (one_based < 1) throw std::invalid_argument("partition: indices are 1-based");
            g.push_back(one_based - 1);
        }
        p.groups.push_back(std::move(g));
    }
    p.validate(sensor_count);
    return p;
}

nlohmann::json to_json(const RateReport& report) {
    nlohmann::json j;
    j["scheme"] = report.scheme;
    j["kind"] = report.kind == RateKind::achievable ? "achievable" : "upper_bound";
    if (std::isfinite(report.rate)) {
        j["rate"] = report.rate;
    } else {
        j["rate"] = nullptr;
        j["unbounded"] = true;
    }
    nlohmann::json params = nlohmann::json::object();
    for (const auto& [name, value] : report.params) params[name] = value;
    j["params"] = std::move(params);
    j["notes"] = report.notes;
    return j;
}

nlohmann::json trace_summary_json(const ProtocolTrace& trace) {
    nlohmann::json j;
    j["draws"] = trace.symbols.size();
    j["mismatch_count"] = 0;  // a trace only exists if every fusion check passed
    j["rounds_used"] = trace.rounds_used;
    j["rounds_skipped"] = trace.rounds_skipped;
    j["shifts"] = trace.shifts;
    if (!trace.trajectories.empty()) {
        nlohmann::json entropies = nlohmann::json::object();
        for (std::size_t l = 0; l < trace.trajectories.size(); ++l) {
            if (trace.trajectories[l].empty()) continue;
            entropies[std::to_string(l)] =
                empirical_chain_entropy(trace, static_cast<int>(l));
        }
        j["empirical_entropy_bits"] = std::move(entropies);
    }
    return j;
}

void write_description_trace_csv(std::ostream& os, const DescriptionSample& sample) {
    os << "symbol_index,value,step,u_value\n";
    for (std::size_t l = 0; l < sample.u.size(); ++l) {
        for (std::size_t m = 0; m < sample.u[l].size(); ++m) {
            for (std::size_t t = 0; t < sample.u[l][m].size(); ++t) {
                os << t << ',' << l << ',' << (m + 1) << ',' << sample.u[l][m][t] << '\n';
            }
        }
    }
}

void write_round_trace_csv(std::ostream& os, const ProtocolTrace& trace) {
    os << "value,position,group,skipped,received_sum_count\n";
    for (const RoundRecord& r : trace.rounds) {
        os << r.value << ',' << r.position << ',' << r.group << ',' << (r.skipped ? 1 : 0) << ','
           << r.received << '\n';
    }
}

}  // namespace ttcomp
