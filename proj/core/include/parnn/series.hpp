#pragma once

#include <Eigen/Core>
#include <string>
#include <vector>

namespace parnn {

enum class Frequency { daily, weekly, monthly, quarterly };

Frequency frequency_from_string(const std::string &name);
std::string to_string(Frequency f);

/// Observations per cycle implied by the frequency label. All bundled
/// datasets are non-seasonal, so this is informational metadata only.
int default_seasonal_period(Frequency f);

/// An ordered, gap-free univariate series.
struct TimeSeries {
    std::vector<double> values;
    Frequency frequency = Frequency::daily;
    int seasonal_period = 1;
    long origin_index = 0;

    std::size_t size() const { return values.size(); }
    bool empty() const { return values.empty(); }
    double front() const { return values.front(); }
    double back() const { return values.back(); }

    /// Throws if the series is empty, has a non-finite entry, or
    /// seasonal_period < 1.
    void validate() const;
};

/// Ordered partition of a series: train | validation | test,
/// with |validation| = 2 * |test|.
struct ChronoSplit {
    TimeSeries train;
    TimeSeries validation;
    TimeSeries test;
};

enum class Term { short_term, medium_term, long_term };

Term term_from_string(const std::string &name);
std::string to_string(Term t);

struct BoxCoxParam {
    double lambda = 0.5;
    double shift = 0.0;
};

/// Shift that makes every value strictly positive: 0 when min > 0,
/// otherwise 1 - min.
double boxcox_shift_for(const std::vector<double> &values);

/// Splits off the last test_len points as test and the preceding
/// 2*test_len as validation. Requires length >= 3*test_len + 1 so the
/// training segment is nonempty.
ChronoSplit chronological_split(const TimeSeries &series, int test_len);

/// Forecast horizon for a frequency/term pair. Daily horizons are
/// percentage based (5/10/20% of the series length, rounded up so the
/// test segment is never empty); the other frequencies are fixed.
int horizon_for(Frequency frequency, Term term, int series_len);

/// y -> ((y+shift)^lambda - 1)/lambda, or ln(y+shift) when lambda == 0.
TimeSeries boxcox_transform(const TimeSeries &series, const BoxCoxParam &param);
double boxcox_transform_value(double y, const BoxCoxParam &param);

/// Exact inverse of boxcox_transform.
TimeSeries boxcox_inverse(const TimeSeries &series, const BoxCoxParam &param);
double boxcox_inverse_value(double z, const BoxCoxParam &param);

/// Largest transformed value with a valid inverse; used to clamp
/// simulated paths that wander outside the transform domain.
double boxcox_inverse_lower_bound(const BoxCoxParam &param);

struct LagEmbedding {
    Eigen::MatrixXd inputs;  // row t: (y_{t-1}, ..., y_{t-p})
    Eigen::VectorXd targets; // y_t
};

/// Rolling p-lag design matrix; produces length - p rows.
LagEmbedding lag_embed(const TimeSeries &series, int p);

} // namespace parnn
