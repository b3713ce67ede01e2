#pragma once

#include <cstddef>
#include <string>
#include <vector>

namespace cavkit {

struct ScoredLabel {
    double score;
    bool positive;
};

struct MetricReport {
    double auc = 0.0;
    double f1 = 0.0;
    double precision = 0.0;
    double recall = 0.0;
    double average_precision = 0.0;
    double threshold = 0.5;
    std::size_t support_pos = 0;
    std::size_t support_neg = 0;
    // Set when a zero-division was reported as 0.
    bool precision_zero_division = false;
    bool recall_zero_division = false;

    std::string to_json() const;
    // One CSV data row matching metric_csv_header(); `set` is the row key.
    std::vector<std::string> csv_row(const std::string& set) const;
    static std::vector<std::string> csv_header();
};

struct TTestResult {
    double t_statistic = 0.0;
    double p_value = 1.0;
    double dof = 0.0;
    bool significant = false;
    double alpha = 0.0;
};

// Probability that a random positive outranks a random negative, ties 1/2.
// Exact in double for desk-scale n (rank sums are integer/half-integer).
double roc_auc(const std::vector<ScoredLabel>& scored);

// Threshold-sweep AP: sum_k (R_k - R_{k-1}) * P_k over descending distinct
// scores.
double average_precision(const std::vector<ScoredLabel>& scored);

struct PrfResult {
    double f1 = 0.0;
    double precision = 0.0;
    double recall = 0.0;
    bool precision_zero_division = false;
    bool recall_zero_division = false;
};

PrfResult f1_precision_recall(const std::vector<std::pair<bool, bool>>& predicted_actual);

// Welch's unequal-variance two-sample t-test, two-sided p from the
// t-distribution CDF at Welch-Satterthwaite degrees of freedom.
TTestResult welch_t_test(const std::vector<double>& a, const std::vector<double>& b,
                         double alpha);

// Regularized incomplete beta I_x(a,b), continued-fraction evaluation;
// absolute accuracy well below 1e-10 over the t-test argument range.
double incomplete_beta(double a, double b, double x);

// Two-sided tail probability of Student's t with dof degrees of freedom.
double student_t_two_sided_p(double t, double dof);

// Full report for one evaluation: probabilities + actual labels at a
// decision threshold.
MetricReport evaluate(const std::vector<double>& probabilities,
                      const std::vector<bool>& actual, double threshold);

}  // namespace cavkit
