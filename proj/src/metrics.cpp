#include "gossip/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <map>
#include <ostream>
#include <sstream>
#include <tuple>

#include <boost/math/distributions/students_t.hpp>

#include "gossip/errors.hpp"

namespace gossip {

double critical_value_95(std::size_t count) {
    if (count < 2) return 0.0;
    const boost::math::students_t dist(static_cast<double>(count - 1));
    return boost::math::quantile(dist, 0.975);
}

double sample_variance(std::span<const double> values) {
    if (values.size() < 2) return 0.0;
    double mean = 0.0;
    for (double v : values) mean += v;
    mean /= static_cast<double>(values.size());
    double ss = 0.0;
    for (double v : values) ss += (v - mean) * (v - mean);
    return ss / static_cast<double>(values.size() - 1);
}

SampleStats summarize(std::span<const double> values) {
    SampleStats s;
    s.count = values.size();
    if (s.count == 0) return s;
    for (double v : values) s.mean += v;
    s.mean /= static_cast<double>(s.count);
    s.sd = std::sqrt(sample_variance(values));
    const double half = critical_value_95(s.count) * s.sd / std::sqrt(static_cast<double>(s.count));
    s.ci_low = s.mean - half;
    s.ci_high = s.mean + half;
    return s;
}

namespace {

auto row_key(const SweepRow& r) { return std::tie(r.scenario, r.rate_class, r.n, r.replicate, r.metric, r.value); }

}  // namespace

SweepTable aggregate(std::vector<SweepRow> rows) {
    if (rows.empty()) throw AggregationError("cannot aggregate an empty result set");
    std::sort(rows.begin(), rows.end(), [](const SweepRow& a, const SweepRow& b) { return row_key(a) < row_key(b); });

    SweepTable table;
    std::size_t begin = 0;
    while (begin < rows.size()) {
        std::size_t end = begin;
        const SweepRow& head = rows[begin];
        std::vector<double> values;
        while (end < rows.size() && rows[end].scenario == head.scenario && rows[end].rate_class == head.rate_class &&
               rows[end].n == head.n) {
            if (rows[end].metric != head.metric) {
                throw AggregationError("group (" + head.scenario + ", " + head.rate_class + ", n=" +
                                       std::to_string(head.n) + ") mixes metrics '" + head.metric + "' and '" +
                                       rows[end].metric + "'");
            }
            values.push_back(rows[end].value);
            ++end;
        }
        table.groups.push_back({head.scenario, head.rate_class, head.n, head.metric, summarize(values)});
        begin = end;
    }
    table.rows = std::move(rows);
    return table;
}

std::vector<std::string> SweepTable::rate_classes() const {
    std::vector<std::string> out;
    for (const auto& g : groups) {
        if (std::find(out.begin(), out.end(), g.rate_class) == out.end()) out.push_back(g.rate_class);
    }
    return out;
}

std::vector<GroupSummary> SweepTable::curve(std::string_view rate_class) const {
    std::vector<GroupSummary> out;
    for (const auto& g : groups) {
        if (g.rate_class == rate_class) out.push_back(g);
    }
    std::sort(out.begin(), out.end(), [](const auto& a, const auto& b) { return a.n < b.n; });
    return out;
}

std::vector<ScalingPoint> curve_points(const SweepTable& table, std::string_view rate_class) {
    std::vector<ScalingPoint> points;
    for (const auto& g : table.curve(rate_class)) points.push_back({static_cast<double>(g.n), g.stats.mean});
    return points;
}

void write_sweep_csv(std::ostream& out, const SweepTable& table) {
    out << kCsvVersionLine << '\n' << kSweepCsvHeader << '\n';
    std::ostringstream line;
    line.precision(17);
    for (const auto& r : table.rows) {
        line.str("");
        line << r.scenario << ',' << r.n << ',' << r.rate_class << ',' << r.replicate << ',' << r.metric << ','
             << r.value << '\n';
        out << line.str();
    }
}

std::vector<SweepRow> read_sweep_csv(std::istream& in) {
    std::string line;
    if (!std::getline(in, line) || line != kCsvVersionLine) {
        throw ConfigError("sweep CSV must start with '" + std::string(kCsvVersionLine) + "'");
    }
    if (!std::getline(in, line) || line != kSweepCsvHeader) {
        throw ConfigError("sweep CSV header must be '" + std::string(kSweepCsvHeader) + "'");
    }
    std::vector<SweepRow> rows;
    std::size_t line_no = 2;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty()) continue;
        std::vector<std::string> cells;
        std::stringstream fields(line);
        std::string cell;
        while (std::getline(fields, cell, ',')) cells.push_back(cell);
        if (cells.size() != 6) throw ConfigError("sweep CSV line " + std::to_string(line_no) + ": expected 6 fields");
        try {
            rows.push_back({cells[0], static_cast<std::uint32_t>(std::stoul(cells[1])), cells[2],
                            static_cast<std::uint32_t>(std::stoul(cells[3])), cells[4], std::stod(cells[5])});
        } catch (const std::logic_error&) {
            throw ConfigError("sweep CSV line " + std::to_string(line_no) + ": malformed number");
        }
    }
    return rows;
}

std::string_view to_string(ScalingModel model) {
    return model == ScalingModel::PowerLaw ? "power_law" : "logarithmic";
}

double ScalingFit::coefficient() const { return model == ScalingModel::PowerLaw ? std::exp(intercept) : slope; }

double ScalingFit::predict(double n) const {
    if (model == ScalingModel::PowerLaw) return std::exp(intercept) * std::pow(n, slope);
    return slope * std::log(n) + intercept;
}

ScalingFit fit_scaling(std::span<const ScalingPoint> points, ScalingModel model) {
    std::vector<double> ns;
    for (const auto& p : points) {
        if (std::find(ns.begin(), ns.end(), p.n) == ns.end()) ns.push_back(p.n);
        if (!(p.n > 0)) throw FitError("scaling fits need positive n");
    }
    if (ns.size() < 3) throw FitError("scaling fits need at least 3 distinct n values");

    std::vector<double> x, y;
    for (const auto& p : points) {
        x.push_back(std::log(p.n));
        if (model == ScalingModel::PowerLaw) {
            if (!(p.value > 0)) throw FitError("power-law fit requires positive means");
            y.push_back(std::log(p.value));
        } else {
            y.push_back(p.value);
        }
    }
    const auto m = static_cast<double>(x.size());
    double mx = 0, my = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        mx += x[i];
        my += y[i];
    }
    mx /= m;
    my /= m;
    double sxx = 0, sxy = 0, syy = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        sxx += (x[i] - mx) * (x[i] - mx);
        sxy += (x[i] - mx) * (y[i] - my);
        syy += (y[i] - my) * (y[i] - my);
    }

    ScalingFit fit;
    fit.model = model;
    fit.slope = sxy / sxx;
    fit.intercept = my - fit.slope * mx;
    double sse = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        const double r = y[i] - (fit.intercept + fit.slope * x[i]);
        fit.residuals.push_back(r);
        sse += r * r;
    }
    if (syy <= 0.0) {
        fit.r_squared = sse <= 0.0 ? 1.0 : 0.0;
    } else {
        fit.r_squared = std::clamp(1.0 - sse / syy, 0.0, 1.0);
    }
    return fit;
}

ScalingFit fit_scaling(const SweepTable& table, std::string_view rate_class, ScalingModel model) {
    const auto points = curve_points(table, rate_class);
    return fit_scaling(points, model);
}

ModelComparison compare_models(std::span<const ScalingPoint> points) {
    ModelComparison c;
    c.power_law = fit_scaling(points, ScalingModel::PowerLaw);
    c.logarithmic = fit_scaling(points, ScalingModel::Logarithmic);
    c.preferred = c.power_law.r_squared > c.logarithmic.r_squared ? ScalingModel::PowerLaw : ScalingModel::Logarithmic;

    const auto [lo, hi] = std::minmax_element(points.begin(), points.end(),
                                              [](const auto& a, const auto& b) { return a.n < b.n; });
    auto mean_at = [&](double n) {
        double sum = 0;
        int count = 0;
        for (const auto& p : points) {
            if (p.n == n) {
                sum += p.value;
                ++count;
            }
        }
        return sum / count;
    };
    c.n_min = lo->n;
    c.n_max = hi->n;
    c.observed_growth = mean_at(c.n_max) / mean_at(c.n_min);
    c.log_law_growth = std::log(c.n_max) / std::log(c.n_min);
    c.power_law_growth = std::pow(c.n_max / c.n_min, c.power_law.exponent());
    return c;
}

ModelComparison compare_models(const SweepTable& table, std::string_view rate_class) {
    const auto points = curve_points(table, rate_class);
    return compare_models(points);
}

TwoSampleTest welch_t_test(std::span<const double> a, std::span<const double> b) {
    if (a.size() < 2 || b.size() < 2) throw FitError("Welch test needs at least two samples per group");
    const auto sa = summarize(a);
    const auto sb = summarize(b);
    const double va = sa.sd * sa.sd / static_cast<double>(a.size());
    const double vb = sb.sd * sb.sd / static_cast<double>(b.size());
    TwoSampleTest out;
    if (va + vb == 0.0) {
        out.statistic = 0.0;
        out.p_value = sa.mean == sb.mean ? 1.0 : 0.0;
        return out;
    }
    out.statistic = (sa.mean - sb.mean) / std::sqrt(va + vb);
    const double dof = (va + vb) * (va + vb) /
                       (va * va / static_cast<double>(a.size() - 1) + vb * vb / static_cast<double>(b.size() - 1));
    const boost::math::students_t dist(dof);
    out.p_value = 2.0 * boost::math::cdf(boost::math::complement(dist, std::abs(out.statistic)));
    return out;
}

TwoSampleTest ks_two_sample(std::span<const double> a, std::span<const double> b) {
    if (a.empty() || b.empty()) throw FitError("KS test needs non-empty samples");
    std::vector<double> x(a.begin(), a.end()), y(b.begin(), b.end());
    std::sort(x.begin(), x.end());
    std::sort(y.begin(), y.end());
    std::size_t i = 0, j = 0;
    double d = 0.0;
    const auto nx = static_cast<double>(x.size());
    const auto ny = static_cast<double>(y.size());
    while (i < x.size() && j < y.size()) {
        const double v = std::min(x[i], y[j]);
        while (i < x.size() && x[i] == v) ++i;
        while (j < y.size() && y[j] == v) ++j;
        d = std::max(d, std::abs(static_cast<double>(i) / nx - static_cast<double>(j) / ny));
    }
    const double ne = nx * ny / (nx + ny);
    const double lambda = (std::sqrt(ne) + 0.12 + 0.11 / std::sqrt(ne)) * d;
    // Kolmogorov distribution tail: 2 sum (-1)^{k-1} exp(-2 k^2 lambda^2)
    double p = 0.0;
    if (lambda < 1e-3) {
        p = 1.0;
    } else {
        double sign = 1.0;
        for (int k = 1; k <= 100; ++k) {
            const double term = sign * std::exp(-2.0 * k * k * lambda * lambda);
            p += term;
            if (std::abs(term) < 1e-12) break;
            sign = -sign;
        }
        p = std::clamp(2.0 * p, 0.0, 1.0);
    }
    return {d, p};
}

void to_json(nlohmann::json& j, const SampleStats& s) {
    j = {{"count", s.count}, {"mean", s.mean}, {"sd", s.sd}, {"ci_low", s.ci_low}, {"ci_high", s.ci_high}};
}

void to_json(nlohmann::json& j, const ScalingFit& f) {
    j = {{"model", to_string(f.model)}, {"slope", f.slope},         {"intercept", f.intercept},
         {"r_squared", f.r_squared},    {"residuals", f.residuals}, {"coefficient", f.coefficient()}};
    if (f.model == ScalingModel::PowerLaw) j["exponent"] = f.exponent();
}

void to_json(nlohmann::json& j, const ModelComparison& c) {
    j = {{"power_law", c.power_law},
         {"logarithmic", c.logarithmic},
         {"preferred", to_string(c.preferred)},
         {"n_min", c.n_min},
         {"n_max", c.n_max},
         {"observed_growth", c.observed_growth},
         {"log_law_growth", c.log_law_growth},
         {"power_law_growth", c.power_law_growth}};
}

void to_json(nlohmann::json& j, const GroupSummary& g) {
    j = {{"scenario", g.scenario}, {"rate_class", g.rate_class}, {"n", g.n}, {"metric", g.metric}, {"stats", g.stats}};
}

}  // namespace gossip
