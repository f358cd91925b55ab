#pragma once

#include <algorithm>
#include <cmath>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "ttp/sr/expr.hpp"

namespace ttp::sr {

enum class Task { BinaryBCE, RegressionMAE };

struct SrDataset {
    Columns inputs;
    std::vector<double> targets;
    Task task = Task::RegressionMAE;
    std::vector<std::string> names; // optional, one per variable

    std::size_t rows() const { return targets.size(); }
    std::size_t vars() const { return inputs.vars(); }

    void validate() const
    {
        for (const auto& c : inputs.cols) {
            if (c.size() != targets.size()) {
                throw std::invalid_argument("input column length does not match target count");
            }
        }
        if (task == Task::BinaryBCE) {
            for (double y : targets) {
                if (y != 0.0 && y != 1.0) {
                    throw std::invalid_argument("BCE targets must be 0 or 1");
                }
            }
        }
    }

    // Builds from row-major inputs.
    static SrDataset from_rows(const std::vector<std::vector<double>>& rows, std::vector<double> targets, Task task)
    {
        SrDataset d;
        d.task = task;
        d.targets = std::move(targets);
        const std::size_t vars = rows.empty() ? 0 : rows.front().size();
        d.inputs.cols.assign(vars, std::vector<double>(rows.size()));
        for (std::size_t r = 0; r < rows.size(); ++r) {
            if (rows[r].size() != vars) {
                throw std::invalid_argument("ragged input rows");
            }
            for (std::size_t v = 0; v < vars; ++v) {
                d.inputs.cols[v][r] = rows[r][v];
            }
        }
        d.validate();
        return d;
    }
};

// Substituted for any non-finite per-case error or loss.
inline constexpr double kPenaltyLoss = 1e12;
inline constexpr double kProbClamp = 1e-12;

inline double sigmoid(double x) { return 1.0 / (1.0 + std::exp(-x)); }

inline double bce_case(double raw, double y)
{
    if (!std::isfinite(raw)) {
        return kPenaltyLoss;
    }
    const double p = std::clamp(sigmoid(raw), kProbClamp, 1.0 - kProbClamp);
    if (y == 1.0) return -std::log(p);
    if (y == 0.0) return -std::log(1.0 - p);
    return -y * std::log(p) - (1.0 - y) * std::log(1.0 - p);
}

inline double mae_case(double raw, double y)
{
    const double e = std::abs(y - raw);
    return std::isfinite(e) ? e : kPenaltyLoss;
}

// Writes per-case errors and returns their mean (sentinel when non-finite).
inline double case_errors(std::span<const double> raw, const SrDataset& data, std::span<double> errors)
{
    const auto n = data.rows();
    double sum = 0.0;
    if (data.task == Task::BinaryBCE) {
        for (std::size_t r = 0; r < n; ++r) {
            errors[r] = bce_case(raw[r], data.targets[r]);
            sum += errors[r];
        }
    } else {
        for (std::size_t r = 0; r < n; ++r) {
            errors[r] = mae_case(raw[r], data.targets[r]);
            sum += errors[r];
        }
    }
    const double mean = n > 0 ? sum / static_cast<double>(n) : 0.0;
    return std::isfinite(mean) ? std::min(mean, kPenaltyLoss) : kPenaltyLoss;
}

inline double fitness(const ExprTree& expr, const SrDataset& data)
{
    BatchEvaluator ev;
    std::vector<double> raw;
    ev.evaluate(expr, data.inputs, raw);
    std::vector<double> errs(data.rows());
    return case_errors(raw, data, errs);
}

// Mean binary cross entropy of sigmoid(raw output) against 0/1 labels.
inline double bce_fitness(const ExprTree& expr, const SrDataset& data)
{
    if (data.task != Task::BinaryBCE) {
        throw std::invalid_argument("bce_fitness needs a BinaryBCE dataset");
    }
    return fitness(expr, data);
}

inline double mae_fitness(const ExprTree& expr, const SrDataset& data)
{
    if (data.task != Task::RegressionMAE) {
        throw std::invalid_argument("mae_fitness needs a RegressionMAE dataset");
    }
    return fitness(expr, data);
}

} // namespace ttp::sr
