#include "metrics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "csv.hpp"
#include "error.hpp"

namespace cavkit {

double roc_auc(const std::vector<ScoredLabel>& scored) {
    std::size_t n_pos = 0, n_neg = 0;
    for (const auto& s : scored) (s.positive ? n_pos : n_neg)++;
    if (n_pos == 0 || n_neg == 0)
        throw DataError("roc_auc needs both classes present");

    std::vector<const ScoredLabel*> order;
    order.reserve(scored.size());
    for (const auto& s : scored) order.push_back(&s);
    std::stable_sort(order.begin(), order.end(),
                     [](const ScoredLabel* a, const ScoredLabel* b) { return a->score < b->score; });

    // Rank-sum with average ranks over tie groups; 1-based ranks.
    double pos_rank_sum = 0.0;
    std::size_t i = 0;
    while (i < order.size()) {
        std::size_t j = i;
        while (j < order.size() && order[j]->score == order[i]->score) ++j;
        const double avg_rank = 0.5 * (double(i + 1) + double(j));  // (first + last) / 2
        for (std::size_t k = i; k < j; ++k)
            if (order[k]->positive) pos_rank_sum += avg_rank;
        i = j;
    }
    const double u = pos_rank_sum - 0.5 * double(n_pos) * double(n_pos + 1);
    return u / (double(n_pos) * double(n_neg));
}

double average_precision(const std::vector<ScoredLabel>& scored) {
    std::size_t n_pos = 0;
    for (const auto& s : scored) n_pos += s.positive ? 1 : 0;
    if (n_pos == 0) throw DataError("average_precision needs at least one positive");

    std::vector<const ScoredLabel*> order;
    order.reserve(scored.size());
    for (const auto& s : scored) order.push_back(&s);
    std::stable_sort(order.begin(), order.end(),
                     [](const ScoredLabel* a, const ScoredLabel* b) { return a->score > b->score; });

    double ap = 0.0;
    double prev_recall = 0.0;
    std::size_t tp = 0, fp = 0;
    std::size_t i = 0;
    while (i < order.size()) {
        std::size_t j = i;
        while (j < order.size() && order[j]->score == order[i]->score) ++j;
        for (std::size_t k = i; k < j; ++k) (order[k]->positive ? tp : fp)++;
        const double recall = double(tp) / double(n_pos);
        const double precision = double(tp) / double(tp + fp);
        ap += (recall - prev_recall) * precision;
        prev_recall = recall;
        i = j;
    }
    return ap;
}

PrfResult f1_precision_recall(const std::vector<std::pair<bool, bool>>& predicted_actual) {
    if (predicted_actual.empty()) throw DataError("f1_precision_recall on empty input");
    std::size_t tp = 0, fp = 0, fn = 0;
    for (const auto& [pred, actual] : predicted_actual) {
        if (pred && actual) ++tp;
        else if (pred && !actual) ++fp;
        else if (!pred && actual) ++fn;
    }
    PrfResult r;
    if (tp + fp == 0) {
        r.precision = 0.0;
        r.precision_zero_division = true;
    } else {
        r.precision = double(tp) / double(tp + fp);
    }
    if (tp + fn == 0) {
        r.recall = 0.0;
        r.recall_zero_division = true;
    } else {
        r.recall = double(tp) / double(tp + fn);
    }
    r.f1 = (r.precision + r.recall > 0.0)
               ? 2.0 * r.precision * r.recall / (r.precision + r.recall)
               : 0.0;
    return r;
}

namespace {

// Continued fraction for the incomplete beta (modified Lentz).
double betacf(double a, double b, double x) {
    constexpr int kMaxIter = 300;
    constexpr double kEps = 1e-15;
    constexpr double kTiny = 1e-300;

    const double qab = a + b;
    const double qap = a + 1.0;
    const double qam = a - 1.0;
    double c = 1.0;
    double d = 1.0 - qab * x / qap;
    if (std::fabs(d) < kTiny) d = kTiny;
    d = 1.0 / d;
    double h = d;
    for (int m = 1; m <= kMaxIter; ++m) {
        const double m2 = 2.0 * m;
        double aa = m * (b - m) * x / ((qam + m2) * (a + m2));
        d = 1.0 + aa * d;
        if (std::fabs(d) < kTiny) d = kTiny;
        c = 1.0 + aa / c;
        if (std::fabs(c) < kTiny) c = kTiny;
        d = 1.0 / d;
        h *= d * c;
        aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2));
        d = 1.0 + aa * d;
        if (std::fabs(d) < kTiny) d = kTiny;
        c = 1.0 + aa / c;
        if (std::fabs(c) < kTiny) c = kTiny;
        d = 1.0 / d;
        const double del = d * c;
        h *= del;
        if (std::fabs(del - 1.0) < kEps) return h;
    }
    throw NumericError("incomplete beta continued fraction did not converge");
}

}  // namespace

double incomplete_beta(double a, double b, double x) {
    if (!(a > 0.0) || !(b > 0.0)) throw NumericError("incomplete_beta needs a, b > 0");
    if (x <= 0.0) return 0.0;
    if (x >= 1.0) return 1.0;
    const double ln_front = std::lgamma(a + b) - std::lgamma(a) - std::lgamma(b) +
                            a * std::log(x) + b * std::log1p(-x);
    const double front = std::exp(ln_front);
    if (x < (a + 1.0) / (a + b + 2.0)) return front * betacf(a, b, x) / a;
    return 1.0 - front * betacf(b, a, 1.0 - x) / b;
}

double student_t_two_sided_p(double t, double dof) {
    if (dof <= 0.0) throw NumericError("t distribution needs dof > 0");
    if (std::isinf(t)) return 0.0;
    // P(|T| >= t) = I_{dof/(dof+t^2)}(dof/2, 1/2)
    const double x = dof / (dof + t * t);
    return incomplete_beta(0.5 * dof, 0.5, x);
}

TTestResult welch_t_test(const std::vector<double>& a, const std::vector<double>& b,
                         double alpha) {
    if (a.size() < 2 || b.size() < 2)
        throw DataError("welch_t_test needs at least 2 observations per sample");
    auto mean_var = [](const std::vector<double>& v) {
        double mean = 0.0;
        for (double x : v) mean += x;
        mean /= double(v.size());
        double ss = 0.0;
        for (double x : v) ss += (x - mean) * (x - mean);
        return std::pair<double, double>(mean, ss / double(v.size() - 1));
    };
    const auto [ma, va] = mean_var(a);
    const auto [mb, vb] = mean_var(b);

    TTestResult r;
    r.alpha = alpha;
    const double sa = va / double(a.size());
    const double sb = vb / double(b.size());
    if (sa + sb == 0.0) {
        // Degenerate variance in both samples.
        if (ma == mb) {
            r.t_statistic = 0.0;
            r.p_value = 1.0;
            r.dof = double(a.size() + b.size() - 2);
        } else {
            r.t_statistic = (ma > mb) ? std::numeric_limits<double>::infinity()
                                      : -std::numeric_limits<double>::infinity();
            r.p_value = 0.0;
            r.dof = double(a.size() + b.size() - 2);
        }
    } else {
        r.t_statistic = (ma - mb) / std::sqrt(sa + sb);
        r.dof = (sa + sb) * (sa + sb) /
                (sa * sa / double(a.size() - 1) + sb * sb / double(b.size() - 1));
        r.p_value = student_t_two_sided_p(r.t_statistic, r.dof);
    }
    r.significant = r.p_value < alpha;
    return r;
}

MetricReport evaluate(const std::vector<double>& probabilities, const std::vector<bool>& actual,
                      double threshold) {
    if (probabilities.size() != actual.size())
        throw DataError("evaluate: probability/label length mismatch");
    if (probabilities.empty()) throw DataError("evaluate on empty input");

    MetricReport m;
    m.threshold = threshold;
    std::vector<ScoredLabel> scored;
    std::vector<std::pair<bool, bool>> pa;
    scored.reserve(actual.size());
    pa.reserve(actual.size());
    for (std::size_t i = 0; i < actual.size(); ++i) {
        scored.push_back({probabilities[i], actual[i]});
        pa.emplace_back(probabilities[i] >= threshold, actual[i]);
        (actual[i] ? m.support_pos : m.support_neg)++;
    }
    const PrfResult prf = f1_precision_recall(pa);
    m.f1 = prf.f1;
    m.precision = prf.precision;
    m.recall = prf.recall;
    m.precision_zero_division = prf.precision_zero_division;
    m.recall_zero_division = prf.recall_zero_division;
    m.auc = (m.support_pos > 0 && m.support_neg > 0) ? roc_auc(scored) : 0.0;
    m.average_precision = (m.support_pos > 0) ? average_precision(scored) : 0.0;
    return m;
}

std::string MetricReport::to_json() const {
    std::ostringstream os;
    os.precision(17);
    os << "{\"auc\":" << auc << ",\"f1\":" << f1 << ",\"precision\":" << precision
       << ",\"recall\":" << recall << ",\"average_precision\":" << average_precision
       << ",\"threshold\":" << threshold << ",\"support_pos\":" << support_pos
       << ",\"support_neg\":" << support_neg
       << ",\"precision_zero_division\":" << (precision_zero_division ? "true" : "false")
       << ",\"recall_zero_division\":" << (recall_zero_division ? "true" : "false") << "}";
    return os.str();
}

std::vector<std::string> MetricReport::csv_header() {
    return {"set",    "auc",           "f1",          "precision",
            "recall", "average_precision", "threshold", "support_pos",
            "support_neg"};
}

std::vector<std::string> MetricReport::csv_row(const std::string& set) const {
    return {set,
            csv_num(auc),
            csv_num(f1),
            csv_num(precision),
            csv_num(recall),
            csv_num(average_precision),
            csv_num(threshold),
            csv_int(static_cast<long long>(support_pos)),
            csv_int(static_cast<long long>(support_neg))};
}

}  // namespace cavkit
