#include "parnn/series.hpp"

#include "parnn/errors.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace parnn {

Frequency frequency_from_string(const std::string &name) {
    if (name == "daily") return Frequency::daily;
    if (name == "weekly") return Frequency::weekly;
    if (name == "monthly") return Frequency::monthly;
    if (name == "quarterly") return Frequency::quarterly;
    throw std::invalid_argument("unknown frequency '" + name +
                                "' (expected daily|weekly|monthly|quarterly)");
}

std::string to_string(Frequency f) {
    switch (f) {
    case Frequency::daily: return "daily";
    case Frequency::weekly: return "weekly";
    case Frequency::monthly: return "monthly";
    case Frequency::quarterly: return "quarterly";
    }
    return "unknown";
}

int default_seasonal_period(Frequency f) {
    switch (f) {
    case Frequency::daily: return 7;
    case Frequency::weekly: return 52;
    case Frequency::monthly: return 12;
    case Frequency::quarterly: return 4;
    }
    return 1;
}

Term term_from_string(const std::string &name) {
    if (name == "short") return Term::short_term;
    if (name == "medium") return Term::medium_term;
    if (name == "long") return Term::long_term;
    throw std::invalid_argument("unknown term '" + name + "' (expected short|medium|long)");
}

std::string to_string(Term t) {
    switch (t) {
    case Term::short_term: return "short";
    case Term::medium_term: return "medium";
    case Term::long_term: return "long";
    }
    return "unknown";
}

void TimeSeries::validate() const {
    if (values.empty()) {
        throw SizingError("time series must contain at least one observation");
    }
    if (seasonal_period < 1) {
        throw std::invalid_argument("seasonal_period must be >= 1");
    }
    for (double v : values) {
        if (!std::isfinite(v)) {
            throw std::invalid_argument("time series contains a non-finite value");
        }
    }
}

double boxcox_shift_for(const std::vector<double> &values) {
    if (values.empty()) {
        return 0.0;
    }
    const double lo = *std::min_element(values.begin(), values.end());
    return lo > 0.0 ? 0.0 : 1.0 - lo;
}

ChronoSplit chronological_split(const TimeSeries &series, int test_len) {
    if (test_len < 1) {
        throw std::invalid_argument("test_len must be positive");
    }
    const long n = static_cast<long>(series.size());
    const long required = 3L * test_len + 1;
    if (n < required) {
        throw SizingError("series of length " + std::to_string(n) +
                          " is too short for test_len " + std::to_string(test_len) +
                          "; need at least " + std::to_string(required) + " observations");
    }
    const long val_len = 2L * test_len;
    const long train_len = n - val_len - test_len;

    auto slice = [&](long begin, long len) {
        TimeSeries out;
        out.values.assign(series.values.begin() + begin, series.values.begin() + begin + len);
        out.frequency = series.frequency;
        out.seasonal_period = series.seasonal_period;
        out.origin_index = series.origin_index + begin;
        return out;
    };

    ChronoSplit split;
    split.train = slice(0, train_len);
    split.validation = slice(train_len, val_len);
    split.test = slice(train_len + val_len, test_len);
    return split;
}

int horizon_for(Frequency frequency, Term term, int series_len) {
    if (series_len < 1) {
        throw std::invalid_argument("series_len must be positive");
    }
    if (frequency == Frequency::daily) {
        double pct = 0.05;
        if (term == Term::medium_term) pct = 0.10;
        if (term == Term::long_term) pct = 0.20;
        return static_cast<int>(std::ceil(pct * static_cast<double>(series_len)));
    }
    static constexpr int weekly[3] = {13, 26, 52};
    static constexpr int monthly[3] = {6, 12, 24};
    static constexpr int quarterly[3] = {4, 8, 12};
    const int idx = static_cast<int>(term);
    switch (frequency) {
    case Frequency::weekly: return weekly[idx];
    case Frequency::monthly: return monthly[idx];
    case Frequency::quarterly: return quarterly[idx];
    default: break;
    }
    throw std::invalid_argument("unhandled frequency");
}

double boxcox_transform_value(double y, const BoxCoxParam &param) {
    const double shifted = y + param.shift;
    if (shifted <= 0.0) {
        throw std::domain_error("Box-Cox transform requires shifted value > 0, got " +
                                std::to_string(shifted));
    }
    if (param.lambda == 0.0) {
        return std::log(shifted);
    }
    return (std::pow(shifted, param.lambda) - 1.0) / param.lambda;
}

double boxcox_inverse_value(double z, const BoxCoxParam &param) {
    if (param.lambda == 0.0) {
        return std::exp(z) - param.shift;
    }
    const double base = param.lambda * z + 1.0;
    if (base <= 0.0) {
        throw std::domain_error("Box-Cox inverse domain violation: lambda*z + 1 = " +
                                std::to_string(base));
    }
    return std::pow(base, 1.0 / param.lambda) - param.shift;
}

double boxcox_inverse_lower_bound(const BoxCoxParam &param) {
    if (param.lambda == 0.0) {
        return -std::numeric_limits<double>::infinity();
    }
    return -1.0 / param.lambda;
}

TimeSeries boxcox_transform(const TimeSeries &series, const BoxCoxParam &param) {
    TimeSeries out = series;
    for (double &v : out.values) {
        v = boxcox_transform_value(v, param);
    }
    return out;
}

TimeSeries boxcox_inverse(const TimeSeries &series, const BoxCoxParam &param) {
    TimeSeries out = series;
    for (double &v : out.values) {
        v = boxcox_inverse_value(v, param);
    }
    return out;
}

LagEmbedding lag_embed(const TimeSeries &series, int p) {
    if (p < 1) {
        throw std::invalid_argument("lag order p must be positive");
    }
    const long n = static_cast<long>(series.size());
    if (n <= p) {
        throw SizingError("series of length " + std::to_string(n) +
                          " cannot be embedded with " + std::to_string(p) + " lags");
    }
    const long rows = n - p;
    LagEmbedding emb;
    emb.inputs.resize(rows, p);
    emb.targets.resize(rows);
    for (long t = p; t < n; ++t) {
        for (int i = 1; i <= p; ++i) {
            emb.inputs(t - p, i - 1) = series.values[static_cast<std::size_t>(t - i)];
        }
        emb.targets(t - p) = series.values[static_cast<std::size_t>(t)];
    }
    return emb;
}

} // namespace parnn
