#pragma once

#include <functional>
#include <sstream>
#include <string>
#include <vector>

#include "weylkk/tensor.hpp"

namespace weylkk {

enum class Signature { euclidean, lorentzian };

inline std::string to_string(Signature s) {
    return s == Signature::euclidean ? "euclidean" : "lorentzian";
}

using Point = std::vector<double>;

inline std::string format_point(const Point& p) {
    std::ostringstream os;
    os << "(";
    for (std::size_t i = 0; i < p.size(); ++i) os << (i ? ", " : "") << p[i];
    os << ")";
    return os.str();
}

class singular_metric_error : public std::runtime_error {
public:
    singular_metric_error(const Point& p, double detg)
        : std::runtime_error("singular metric at " + format_point(p) +
                             ", det = " + std::to_string(detg)),
          point(p),
          det(detg) {}
    Point point;
    double det;
};

class dimension_error : public std::runtime_error {
public:
    explicit dimension_error(const std::string& what) : std::runtime_error(what) {}
};

// A signature-tagged metric field: the component function maps a chart point
// to the symmetric matrix of order-3 jets expanded at that point. This is the
// sole geometry input of the engine.
struct MetricField {
    int dim = 3;
    Signature signature = Signature::euclidean;
    std::function<Ten2(const Point&)> components;
    std::string name;

    // Evaluates, symmetrizes, and validates invertibility.
    Ten2 eval(const Point& p) const {
        Ten2 g = components(p);
        for (int i = 0; i < dim; ++i)
            for (int j = i + 1; j < dim; ++j) {
                Jet s = 0.5 * (g(i, j) + g(j, i));
                g(i, j) = s;
                g(j, i) = s;
            }
        return g;
    }
};

// |det g| < 1e-12 * (max |g_ij|)^dim counts as singular.
inline void check_invertible(const MetricField& m, const Point& p, const Ten2& g,
                             double detg) {
    double gmax = 0.0;
    for (int i = 0; i < m.dim; ++i)
        for (int j = 0; j < m.dim; ++j) gmax = std::max(gmax, std::abs(g(i, j).value()));
    double scale = 1.0;
    for (int i = 0; i < m.dim; ++i) scale *= gmax;
    if (std::abs(detg) <= 1e-12 * scale) throw singular_metric_error(p, detg);
}

}  // namespace weylkk
