#include <algorithm>
#include <cmath>

#include "hopfavg/dde.hpp"
#include "hopfavg/report.hpp"

namespace hopfavg {

HistoryFunction HistoryFunction::constant(double c) {
    HistoryFunction h;
    h.kind_ = Kind::constant;
    h.scale_ = c;
    h.label_ = "const:" + format_number(c);
    return h;
}

HistoryFunction HistoryFunction::exponential(double c) {
    HistoryFunction h;
    h.kind_ = Kind::exponential;
    h.scale_ = c;
    h.label_ = "exp:" + format_number(c);
    return h;
}

HistoryFunction HistoryFunction::shifted_cosine(double c) {
    HistoryFunction h;
    h.kind_ = Kind::shifted_cosine;
    h.scale_ = c;
    h.label_ = "cos1:" + format_number(c);
    return h;
}

HistoryFunction HistoryFunction::shifted_sine(double c) {
    HistoryFunction h;
    h.kind_ = Kind::shifted_sine;
    h.scale_ = c;
    h.label_ = "sin1:" + format_number(c);
    return h;
}

HistoryFunction HistoryFunction::tabulated(std::vector<double> theta, std::vector<double> values) {
    if (theta.size() < 2 || theta.size() != values.size()) {
        throw InvalidArgument("tabulated history needs at least two (theta, x) samples");
    }
    for (std::size_t i = 1; i < theta.size(); ++i) {
        if (!(theta[i] > theta[i - 1])) throw InvalidArgument("tabulated history: theta must increase");
    }
    if (theta.back() < 0.0) throw InvalidArgument("tabulated history must reach theta = 0");
    HistoryFunction h;
    h.kind_ = Kind::tabulated;
    h.lower_ = theta.front();
    h.scale_ = 0.0;
    for (double v : values) h.scale_ = std::max(h.scale_, std::fabs(v));
    h.label_ = "table";
    h.theta_ = std::make_shared<const std::vector<double>>(std::move(theta));
    h.samples_ = std::make_shared<const std::vector<double>>(std::move(values));
    return h;
}

HistoryFunction HistoryFunction::custom(std::string label, std::function<double(double)> f,
                                        double lower_bound) {
    if (!f) throw InvalidArgument("custom history needs a callable");
    HistoryFunction h;
    h.kind_ = Kind::custom;
    h.lower_ = lower_bound;
    h.label_ = std::move(label);
    h.custom_ = std::move(f);
    h.scale_ = std::fabs(h.custom_(0.0));
    return h;
}

double HistoryFunction::operator()(double theta) const {
    if (theta > 0.0 || theta < lower_ || std::isnan(theta)) {
        throw DomainError("history evaluated outside its domain at theta = " + format_number(theta));
    }
    switch (kind_) {
        case Kind::constant:
            return scale_;
        case Kind::exponential:
            return scale_ * std::exp(theta);
        case Kind::shifted_cosine:
            return scale_ * (std::cos(theta) + 1.0);
        case Kind::shifted_sine:
            return scale_ * (std::sin(theta) + 1.0);
        case Kind::tabulated: {
            const auto& t = *theta_;
            const auto& x = *samples_;
            auto it = std::upper_bound(t.begin(), t.end(), theta);
            if (it == t.end()) return x.back();
            const std::size_t j = static_cast<std::size_t>(it - t.begin());
            if (j == 0) return x.front();
            const double w = (theta - t[j - 1]) / (t[j] - t[j - 1]);
            return x[j - 1] + w * (x[j] - x[j - 1]);
        }
        case Kind::custom:
            return custom_(theta);
    }
    return 0.0;
}

}  // namespace hopfavg
