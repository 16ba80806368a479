#include "themis/reward_theory.hpp"

#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>

namespace themis {

void EvaluatorOperatingPoint::validate() const {
    if (!(rho >= 0.0 && rho <= 1.0)) throw std::domain_error("rho must lie in [0, 1]");
    if (!(alpha >= 0.0 && alpha <= 1.0)) throw std::domain_error("alpha must lie in [0, 1]");
}

double sigmoid(double x) { return 1.0 / (1.0 + std::exp(-x)); }

PolicyPoint PolicyPoint::from_theta(double theta) { return {theta, sigmoid(theta)}; }

PolicyPoint PolicyPoint::from_p(double p) {
    if (!(p > 0.0 && p < 1.0)) throw std::domain_error("p must lie in (0, 1) for a logit");
    return {std::log(p / (1.0 - p)), p};
}

double pseudo_objective(double p, const EvaluatorOperatingPoint& op) {
    op.validate();
    if (!(p >= 0.0 && p <= 1.0)) throw std::domain_error("p must lie in [0, 1]");
    return op.alpha + (op.rho - op.alpha) * p;
}

double pseudo_gradient(double theta, const EvaluatorOperatingPoint& op) {
    op.validate();
    const double p = sigmoid(theta);
    return p * (1.0 - p) * (op.rho - op.alpha);
}

double precision(double p, const EvaluatorOperatingPoint& op) {
    op.validate();
    if (!(p >= 0.0 && p <= 1.0)) throw std::domain_error("p must lie in [0, 1]");
    const double denom = p * op.rho + (1.0 - p) * op.alpha;
    if (denom <= 0.0) throw std::domain_error("precision undefined: nothing is ever rewarded");
    return p * op.rho / denom;
}

TradeoffResult tradeoff_improves(const EvaluatorOperatingPoint& op, double delta,
                                 double big_delta) {
    op.validate();
    if (!(delta > 0.0) || !(big_delta > 0.0))
        throw std::domain_error("delta and big_delta must be positive");
    EvaluatorOperatingPoint moved{op.rho - delta, op.alpha - big_delta};
    moved.validate();   // resulting operating point must stay admissible
    return {op.rho * big_delta > op.alpha * delta, big_delta - delta};
}

std::vector<SweepRow> sweep(const std::vector<EvaluatorOperatingPoint>& op_grid,
                            const std::vector<double>& p_grid) {
    if (op_grid.empty() || p_grid.empty()) throw std::domain_error("sweep grids must be non-empty");
    std::vector<SweepRow> rows;
    rows.reserve(op_grid.size() * p_grid.size());
    for (const auto& op : op_grid) {
        op.validate();
        for (double p : p_grid) {
            SweepRow row;
            row.rho = op.rho;
            row.alpha = op.alpha;
            row.p = p;
            row.objective = pseudo_objective(p, op);
            row.gradient = p * (1.0 - p) * (op.rho - op.alpha);
            try {
                row.precision = precision(p, op);
            } catch (const std::domain_error&) {
                row.precision = std::numeric_limits<double>::quiet_NaN();
            }
            rows.push_back(row);
        }
    }
    return rows;
}

std::string sweep_to_csv(const std::vector<SweepRow>& rows) {
    std::ostringstream os;
    os << "rho,alpha,p,objective,gradient,precision\n";
    os.precision(12);
    for (const auto& r : rows) {
        os << r.rho << ',' << r.alpha << ',' << r.p << ',' << r.objective << ',' << r.gradient
           << ',' << r.precision << '\n';
    }
    return os.str();
}

json sweep_to_json(const std::vector<SweepRow>& rows) {
    json out = json::array();
    for (const auto& r : rows) {
        json row = {{"rho", r.rho},       {"alpha", r.alpha},       {"p", r.p},
                    {"objective", r.objective}, {"gradient", r.gradient}};
        if (std::isnan(r.precision)) {
            row["precision"] = nullptr;
        } else {
            row["precision"] = r.precision;
        }
        out.push_back(std::move(row));
    }
    return out;
}

std::vector<double> linspace(double lo, double hi, int n) {
    if (n < 1) throw std::domain_error("linspace needs n >= 1");
    std::vector<double> v;
    v.reserve(n);
    if (n == 1) {
        v.push_back(lo);
        return v;
    }
    for (int i = 0; i < n; ++i) v.push_back(lo + (hi - lo) * i / (n - 1));
    return v;
}

}  // namespace themis
