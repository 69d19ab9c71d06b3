#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

namespace tfd {

/// Uniform discretization of [0, T]. Carrier for every time-convolution
/// quadrature in the library; all series and solver trajectories live on
/// one of these.
class TimeGrid {
public:
    TimeGrid(double horizon, int steps) : horizon_(horizon), steps_(steps) {
        if (!(horizon > 0.0))
            throw std::invalid_argument("TimeGrid: horizon must be positive");
        if (steps < 2)
            throw std::invalid_argument("TimeGrid: need at least 2 steps");
    }

    double horizon() const { return horizon_; }
    int steps() const { return steps_; }
    double dt() const { return horizon_ / steps_; }
    double node(int j) const { return horizon_ * static_cast<double>(j) / steps_; }
    int nodes() const { return steps_ + 1; }

    bool operator==(const TimeGrid& o) const {
        return horizon_ == o.horizon_ && steps_ == o.steps_;
    }

private:
    double horizon_;
    int steps_;
};

/// Fractional order restricted to (0,1); the endpoints are rejected because
/// both derivative definitions degenerate there.
class FracOrder {
public:
    explicit FracOrder(double alpha) : alpha_(alpha) {
        if (!(alpha > 0.0) || !(alpha < 1.0))
            throw std::invalid_argument("FracOrder: alpha must lie strictly in (0,1)");
    }
    double value() const { return alpha_; }

private:
    double alpha_;
};

/// A scalar or vector-valued sample path on a TimeGrid. Row j holds the
/// value at node t_j; columns index components.
///
/// Fractional derivatives are singular at t = 0, so series produced by the
/// derivative operators carry origin_defined() == false and a NaN sentinel
/// in row 0.  When such a series is integrated again, row 0 is treated as
/// the one-sided limit 0 (valid for the absolutely continuous inputs these
/// operators accept).
class TimeSeries {
public:
    TimeSeries(TimeGrid grid, Eigen::MatrixXd values, bool origin_defined = true)
        : grid_(grid), values_(std::move(values)), origin_defined_(origin_defined) {
        if (values_.rows() != grid_.nodes())
            throw std::invalid_argument("TimeSeries: row count must equal grid nodes");
        if (values_.cols() < 1)
            throw std::invalid_argument("TimeSeries: need at least one component");
        validate_finite();
    }

    static TimeSeries zero(TimeGrid grid, int components = 1) {
        return TimeSeries(grid, Eigen::MatrixXd::Zero(grid.nodes(), components));
    }

    template <typename F>
    static TimeSeries sample(TimeGrid grid, F&& f) {
        Eigen::MatrixXd v(grid.nodes(), 1);
        for (int j = 0; j < grid.nodes(); ++j) v(j, 0) = f(grid.node(j));
        return TimeSeries(grid, std::move(v));
    }

    const TimeGrid& grid() const { return grid_; }
    int components() const { return static_cast<int>(values_.cols()); }
    bool origin_defined() const { return origin_defined_; }

    const Eigen::MatrixXd& values() const { return values_; }
    Eigen::MatrixXd& values() { return values_; }
    double operator()(int j, int c = 0) const { return values_(j, c); }

    /// value of row 0 used inside quadratures; see class comment.
    double origin_value(int c) const { return origin_defined_ ? values_(0, c) : 0.0; }

    TimeSeries with_undefined_origin() const {
        TimeSeries out = *this;
        out.origin_defined_ = false;
        out.values_.row(0).setConstant(std::numeric_limits<double>::quiet_NaN());
        return out;
    }

private:
    void validate_finite() const {
        const int j0 = origin_defined_ ? 0 : 1;
        for (int j = j0; j < values_.rows(); ++j)
            for (int c = 0; c < values_.cols(); ++c)
                if (!std::isfinite(values_(j, c)))
                    throw std::invalid_argument("TimeSeries: non-finite value at node index " +
                                                std::to_string(j) + ", component " + std::to_string(c));
    }

    TimeGrid grid_;
    Eigen::MatrixXd values_;
    bool origin_defined_;
};

/// CSV round-trip for sample paths.  Header "t,v0[,v1,...]" is mandatory;
/// values are written with 15 significant digits.
void write_series_csv(const TimeSeries& s, const std::string& path);
TimeSeries read_series_csv(const std::string& path);

} // namespace tfd
