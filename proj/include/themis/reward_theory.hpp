#pragma once

#include <string>
#include <vector>

#include "themis/types.hpp"

namespace themis {

/// An imperfect binary evaluator: rho is its true-positive rate (recall),
/// alpha its false-positive rate.
struct EvaluatorOperatingPoint {
    double rho = 1.0;
    double alpha = 0.0;

    void validate() const;   // both rates must lie in [0, 1]
};

/// A policy's success probability, optionally derived from a logit.
struct PolicyPoint {
    double theta = 0.0;
    double p = 0.5;

    static PolicyPoint from_theta(double theta);
    static PolicyPoint from_p(double p);   // p in (0,1); theta = logit(p)
};

double sigmoid(double x);

/// Expected observed reward under the imperfect evaluator:
/// alpha + (rho - alpha) * p. Throws std::domain_error outside [0,1].
double pseudo_objective(double p, const EvaluatorOperatingPoint& op);

/// d/dtheta of pseudo_objective(sigmoid(theta)):
/// sigmoid(theta) * (1 - sigmoid(theta)) * (rho - alpha).
double pseudo_gradient(double theta, const EvaluatorOperatingPoint& op);

/// Bayes precision p*rho / (p*rho + (1-p)*alpha). Throws std::domain_error
/// when the denominator vanishes.
double precision(double p, const EvaluatorOperatingPoint& op);

/// Moving the operating point to (rho - delta, alpha - big_delta) improves
/// precision (at every p) iff rho*big_delta > alpha*delta, strictly. The
/// gradient margin (rho - alpha) changes by big_delta - delta.
struct TradeoffResult {
    bool improves = false;
    double margin_change = 0.0;
};
TradeoffResult tradeoff_improves(const EvaluatorOperatingPoint& op, double delta,
                                 double big_delta);

struct SweepRow {
    double rho = 0.0;
    double alpha = 0.0;
    double p = 0.0;
    double objective = 0.0;    // pseudo-objective at p
    double gradient = 0.0;     // p*(1-p)*(rho-alpha)
    double precision = 0.0;    // NaN where undefined
};

std::vector<SweepRow> sweep(const std::vector<EvaluatorOperatingPoint>& op_grid,
                            const std::vector<double>& p_grid);

std::string sweep_to_csv(const std::vector<SweepRow>& rows);
json sweep_to_json(const std::vector<SweepRow>& rows);

/// Evenly spaced grid helper: n values from lo to hi inclusive.
std::vector<double> linspace(double lo, double hi, int n);

}  // namespace themis
