#include "qsd/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <queue>
#include <vector>

namespace qsd {

namespace {

// Gauss 7 / Kronrod 15 nodes and weights on [-1, 1].
constexpr double kNodes[8] = {
    0.000000000000000000000000000000000e+00, 2.077849550078984676006894037732449e-01,
    4.058451513773971669066064120769615e-01, 5.860872354676911302941448382587296e-01,
    7.415311855993944398638647732807884e-01, 8.648644233597690727897127886409262e-01,
    9.491079123427585245261896840478513e-01, 9.914553711208126392068546975263285e-01};
constexpr double kWeightK[8] = {
    2.094821410847278280129991748917143e-01, 2.044329400752988924141619992346491e-01,
    1.903505780647854099132564024210137e-01, 1.690047266392679028265834265985503e-01,
    1.406532597155259187451895905102379e-01, 1.047900103222501838398763225415180e-01,
    6.309209262997855329070066318920429e-02, 2.293532201052922496373200805896959e-02};
constexpr double kWeightG[4] = {
    4.179591836734693877551020408163265e-01, 3.818300505051189449503697754889751e-01,
    2.797053914892766679014677714237796e-01, 1.294849661688696932706114326790820e-01};

struct Interval {
    double a, b, value, error;
    bool operator<(const Interval& o) const { return error < o.error; }
};

Interval gk15(const std::function<double(double)>& f, double a, double b) {
    const double mid = 0.5 * (a + b);
    const double half = 0.5 * (b - a);

    const double f0 = f(mid);
    double gauss = kWeightG[0] * f0;
    double kron = kWeightK[0] * f0;
    for (int i = 1; i < 8; ++i) {
        const double dx = half * kNodes[i];
        const double fi = f(mid + dx) + f(mid - dx);
        kron += kWeightK[i] * fi;
        if (i % 2 == 0) gauss += kWeightG[i / 2] * fi;
    }
    gauss *= half;
    kron *= half;

    // |K15 - G7| as the error estimate; conservative, so convergence is never
    // reported early at the cost of extra subdivisions.
    return {a, b, kron, std::abs(kron - gauss)};
}

QuadResult adapt(const std::function<double(double)>& f, double a, double b, double rel_tol,
                 double abs_tol, int max_intervals) {
    std::priority_queue<Interval> heap;
    Interval whole = gk15(f, a, b);
    double total = whole.value;
    double total_err = whole.error;
    heap.push(whole);
    int n = 1;

    auto tolerance = [&] { return std::max(rel_tol * std::abs(total), abs_tol); };

    while (total_err > tolerance() && n < max_intervals) {
        const Interval worst = heap.top();
        heap.pop();
        const double mid = 0.5 * (worst.a + worst.b);
        if (mid <= worst.a || mid >= worst.b) {  // interval exhausted by rounding
            heap.push({worst.a, worst.b, worst.value, 0.0});
            continue;
        }
        const Interval left = gk15(f, worst.a, mid);
        const Interval right = gk15(f, mid, worst.b);
        total += left.value + right.value - worst.value;
        total_err += left.error + right.error - worst.error;
        heap.push(left);
        heap.push(right);
        ++n;
    }

    QuadResult out;
    out.value = total;
    out.abs_error = total_err;
    out.converged = total_err <= tolerance();
    out.intervals = n;
    return out;
}

}  // namespace

QuadResult integrate_gk(const std::function<double(double)>& f, double a, double b,
                        double rel_tol, double abs_tol, int max_intervals) {
    return adapt(f, a, b, rel_tol, abs_tol, max_intervals);
}

QuadResult integrate_endpoint_singular(const std::function<double(double)>& f, double a,
                                       double b, double rel_tol, double abs_tol,
                                       int max_intervals) {
    const double q1 = a + 0.25 * (b - a);
    const double q3 = b - 0.25 * (b - a);
    const int budget = max_intervals / 3;

    // left quarter: x = a + u^2
    auto left = [&](double u) { return f(a + u * u) * 2.0 * u; };
    // right quarter: x = b - u^2
    auto right = [&](double u) { return f(b - u * u) * 2.0 * u; };

    const QuadResult rl = adapt(left, 0.0, std::sqrt(q1 - a), rel_tol, abs_tol, budget);
    const QuadResult rm = adapt(f, q1, q3, rel_tol, abs_tol, budget);
    const QuadResult rr = adapt(right, 0.0, std::sqrt(b - q3), rel_tol, abs_tol, budget);

    QuadResult out;
    out.value = rl.value + rm.value + rr.value;
    out.abs_error = rl.abs_error + rm.abs_error + rr.abs_error;
    out.converged = rl.converged && rm.converged && rr.converged;
    out.intervals = rl.intervals + rm.intervals + rr.intervals;
    return out;
}

}  // namespace qsd
