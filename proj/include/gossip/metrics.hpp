#pragma once

#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"

namespace gossip {

inline constexpr std::string_view kCsvVersionLine = "# gossip-age-sim v1";
inline constexpr std::string_view kSweepCsvHeader = "scenario,n,rate_class,replicate,metric,value";

struct SweepRow {
    std::string scenario;
    std::uint32_t n = 0;
    std::string rate_class;
    std::uint32_t replicate = 0;
    std::string metric;  // "network_avg_age", "spread_time", "n0_count"
    double value = 0.0;
};

struct SampleStats {
    std::size_t count = 0;
    double mean = 0.0;
    double sd = 0.0;
    double ci_low = 0.0;
    double ci_high = 0.0;
};

// Mean, sample standard deviation and a two-sided 95% confidence interval
// for the mean from the Student t quantile.
SampleStats summarize(std::span<const double> values);
double sample_variance(std::span<const double> values);
// Two-sided 95% critical value for the given number of samples.
double critical_value_95(std::size_t count);

struct GroupSummary {
    std::string scenario;
    std::string rate_class;
    std::uint32_t n = 0;
    std::string metric;
    SampleStats stats;
};

struct SweepTable {
    std::vector<SweepRow> rows;       // canonical order
    std::vector<GroupSummary> groups; // one per (scenario, rate_class, n)

    std::vector<std::string> rate_classes() const;
    // Groups of one curve, ascending in n.
    std::vector<GroupSummary> curve(std::string_view rate_class) const;
};

// Groups by (scenario, rate_class, n). Output does not depend on input order.
SweepTable aggregate(std::vector<SweepRow> rows);

void write_sweep_csv(std::ostream& out, const SweepTable& table);
// Validates the version line and header.
std::vector<SweepRow> read_sweep_csv(std::istream& in);

enum class ScalingModel { PowerLaw, Logarithmic };
std::string_view to_string(ScalingModel model);

struct ScalingPoint {
    double n = 0.0;
    double value = 0.0;
};

// PowerLaw: A = c n^a, fitted as log A = log c + a log n.
// Logarithmic: A = c log n + b.
// slope/intercept are the regression coefficients in the fitted space;
// r_squared and residuals are also in that space.
struct ScalingFit {
    ScalingModel model = ScalingModel::PowerLaw;
    double slope = 0.0;
    double intercept = 0.0;
    double r_squared = 0.0;
    std::vector<double> residuals;

    double exponent() const { return slope; }     // PowerLaw
    double coefficient() const;                    // c in either model
    double predict(double n) const;
};

ScalingFit fit_scaling(std::span<const ScalingPoint> points, ScalingModel model);
ScalingFit fit_scaling(const SweepTable& table, std::string_view rate_class, ScalingModel model);

struct ModelComparison {
    ScalingFit power_law;
    ScalingFit logarithmic;
    ScalingModel preferred = ScalingModel::Logarithmic;
    double n_min = 0.0;
    double n_max = 0.0;
    double observed_growth = 0.0;   // mean(n_max) / mean(n_min)
    double log_law_growth = 0.0;    // log(n_max) / log(n_min)
    double power_law_growth = 0.0;  // (n_max / n_min)^a
};

ModelComparison compare_models(std::span<const ScalingPoint> points);
ModelComparison compare_models(const SweepTable& table, std::string_view rate_class);

std::vector<ScalingPoint> curve_points(const SweepTable& table, std::string_view rate_class);

struct TwoSampleTest {
    double statistic = 0.0;
    double p_value = 0.0;
};

// Welch's unequal-variance t-test for equal means.
TwoSampleTest welch_t_test(std::span<const double> a, std::span<const double> b);
// Two-sample Kolmogorov-Smirnov test with the asymptotic p-value.
TwoSampleTest ks_two_sample(std::span<const double> a, std::span<const double> b);

void to_json(nlohmann::json& j, const SampleStats& s);
void to_json(nlohmann::json& j, const ScalingFit& f);
void to_json(nlohmann::json& j, const ModelComparison& c);
void to_json(nlohmann::json& j, const GroupSummary& g);

}  // namespace gossip
