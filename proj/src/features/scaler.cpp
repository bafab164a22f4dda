#include <cmath>

#include "ovid/error.hpp"
#include "ovid/features.hpp"

namespace ovid {

namespace {

class RunningMoments {
public:
    explicit RunningMoments(std::size_t dims) : m_sum(dims, 0.0), m_sq(dims, 0.0) {}

    void add(std::span<const double> row) {
        if (row.size() != m_sum.size()) {
            throw DataError("feature row has " + std::to_string(row.size()) + " dimensions, expected " +
                            std::to_string(m_sum.size()));
        }
        for (std::size_t i = 0; i < row.size(); ++i) {
            m_sum[i] += row[i];
        }
        m_rows.emplace_back(row.begin(), row.end());
    }

    StandardScaler finish(const std::vector<bool>& passthrough) {
        StandardScaler s;
        const std::size_t dims = m_sum.size();
        s.mean.assign(dims, 0.0);
        s.stddev.assign(dims, 1.0);
        s.passthrough = passthrough;
        if (m_rows.empty()) {
            return s;
        }
        const auto n = static_cast<double>(m_rows.size());
        for (std::size_t i = 0; i < dims; ++i) {
            s.mean[i] = m_sum[i] / n;
        }
        // Second pass over centered values.
        for (const auto& row : m_rows) {
            for (std::size_t i = 0; i < dims; ++i) {
                const double d = row[i] - s.mean[i];
                m_sq[i] += d * d;
            }
        }
        for (std::size_t i = 0; i < dims; ++i) {
            s.stddev[i] = std::max(std::sqrt(m_sq[i] / n), scaler_std_floor);
        }
        return s;
    }

private:
    std::vector<double> m_sum;
    std::vector<double> m_sq;
    std::vector<std::vector<double>> m_rows;
};

Json to_json(const StandardScaler& s) {
    return Json{{"mean", s.mean}, {"stddev", s.stddev}, {"passthrough", s.passthrough}};
}

StandardScaler standard_from_json(const Json& value) {
    StandardScaler s;
    s.mean = value.at("mean").get<std::vector<double>>();
    s.stddev = value.at("stddev").get<std::vector<double>>();
    s.passthrough = value.at("passthrough").get<std::vector<bool>>();
    if (s.mean.size() != s.stddev.size() || s.mean.size() != s.passthrough.size()) {
        throw DataError("scaler block has inconsistent dimensions");
    }
    return s;
}

} // namespace

void StandardScaler::apply(std::span<double> row) const {
    if (row.size() != mean.size()) {
        throw DataError("cannot scale a " + std::to_string(row.size()) + "-dimensional row with a " +
                        std::to_string(mean.size()) + "-dimensional scaler");
    }
    for (std::size_t i = 0; i < row.size(); ++i) {
        if (!passthrough[i]) {
            row[i] = (row[i] - mean[i]) / stddev[i];
        }
    }
}

Scaler fit_scaler(std::span<const FeatureRecord> train, const FeatureLayout& layout) {
    if (train.empty()) {
        throw EmptyTrainSet("cannot fit a scaler on an empty training set");
    }
    RunningMoments changeset(layout.changeset_dims.size());
    RunningMoments user(layout.user_dims.size());
    RunningMoments edit(layout.edit_dims.size());
    for (const FeatureRecord& r : train) {
        if (r.split && *r.split != Split::Train) {
            throw DataError("scaler fitting received changeset " + std::to_string(r.changeset_id) + " from the " +
                            std::string(to_string(*r.split)) + " split");
        }
        changeset.add(r.x_c);
        user.add(r.x_u);
        for (const auto& row : r.m_e) {
            edit.add(row);
        }
    }
    return Scaler{changeset.finish(layout.changeset_passthrough), user.finish(layout.user_passthrough),
                  edit.finish(layout.edit_passthrough)};
}

FeatureRecord apply_scaler(const Scaler& scaler, FeatureRecord record) {
    scaler.changeset.apply(record.x_c);
    scaler.user.apply(record.x_u);
    for (auto& row : record.m_e) {
        scaler.edit.apply(row);
    }
    return record;
}

Json to_json(const Scaler& scaler) {
    return Json{{"changeset", to_json(scaler.changeset)}, {"user", to_json(scaler.user)}, {"edit", to_json(scaler.edit)}};
}

Scaler scaler_from_json(const Json& value) {
    return Scaler{standard_from_json(value.at("changeset")), standard_from_json(value.at("user")),
                  standard_from_json(value.at("edit"))};
}

} // namespace ovid
