#pragma once

// Random smooth expression trees evaluable both on plain doubles and on jets.
// Compositions are guarded so every operation stays well inside its domain
// for any real inputs (denominators >= 1.3, log/sqrt arguments >= 0.3,
// tan arguments in (-0.4, 0.4)); derivatives of all orders stay bounded.

#include <cmath>
#include <cstdint>
#include <memory>
#include <random>
#include <vector>

#include "weylkk/jet.hpp"

namespace testsupport {

inline double pow_int(double x, int n) {
    if (n == 0) return 1.0;
    if (n < 0) return 1.0 / pow_int(x, -n);
    double r = x;
    for (int i = 1; i < n; ++i) r *= x;
    return r;
}

struct RExpr {
    enum Kind {
        kConst,
        kVar,
        kAdd,
        kSub,
        kMul,
        kNeg,
        kSafeDiv,  // a / (1.3 + b^2)
        kSin,
        kCos,
        kTanB,   // tan(0.4 sin(a))
        kExpS,   // exp(sin(a))
        kLnQ,    // ln(0.3 + a^2)
        kSqrtQ,  // sqrt(0.3 + a^2)
        kPow     // a^n, n in 2..3
    };
    Kind kind;
    double cval = 0.0;
    int var = 0;
    int ipow = 2;
    std::shared_ptr<RExpr> a, b;

    template <typename T>
    T eval(const std::vector<T>& vars) const {
        using std::cos;
        using std::exp;
        using std::log;
        using std::sin;
        using std::sqrt;
        using std::tan;
        switch (kind) {
            case kConst:
                return vars[0] * 0.0 + cval;
            case kVar:
                return vars[var];
            case kAdd:
                return a->eval(vars) + b->eval(vars);
            case kSub:
                return a->eval(vars) - b->eval(vars);
            case kMul:
                return a->eval(vars) * b->eval(vars);
            case kNeg:
                return -a->eval(vars);
            case kSafeDiv: {
                T d = b->eval(vars);
                return a->eval(vars) / (1.3 + d * d);
            }
            case kSin:
                return sin(a->eval(vars));
            case kCos:
                return cos(a->eval(vars));
            case kTanB:
                return tan(0.4 * sin(a->eval(vars)));
            case kExpS:
                return exp(sin(a->eval(vars)));
            case kLnQ: {
                T u = a->eval(vars);
                return log(0.3 + u * u);
            }
            case kSqrtQ: {
                T u = a->eval(vars);
                return sqrt(0.3 + u * u);
            }
            case kPow:
                return pow_int(a->eval(vars), ipow);
        }
        return vars[0] * 0.0;
    }

    double eval_at(const std::vector<double>& x) const { return eval<double>(x); }
};

inline std::shared_ptr<RExpr> random_expr(std::mt19937_64& rng, int depth, int nvars) {
    auto e = std::make_shared<RExpr>();
    std::uniform_real_distribution<double> uni(-1.0, 1.0);
    if (depth <= 0) {
        if (rng() % 3 == 0) {
            e->kind = RExpr::kConst;
            e->cval = 2.0 * uni(rng);
        } else {
            e->kind = RExpr::kVar;
            e->var = static_cast<int>(rng() % nvars);
        }
        return e;
    }
    static const RExpr::Kind kinds[] = {RExpr::kAdd,   RExpr::kSub,  RExpr::kMul,
                                        RExpr::kNeg,   RExpr::kSafeDiv,
                                        RExpr::kSin,   RExpr::kCos,  RExpr::kTanB,
                                        RExpr::kExpS,  RExpr::kLnQ,  RExpr::kSqrtQ,
                                        RExpr::kPow};
    e->kind = kinds[rng() % (sizeof(kinds) / sizeof(kinds[0]))];
    e->a = random_expr(rng, depth - 1, nvars);
    switch (e->kind) {
        case RExpr::kAdd:
        case RExpr::kSub:
        case RExpr::kMul:
        case RExpr::kSafeDiv:
            e->b = random_expr(rng, depth - 1, nvars);
            break;
        case RExpr::kPow:
            e->ipow = 2 + static_cast<int>(rng() % 2);
            break;
        default:
            break;
    }
    return e;
}

inline weylkk::Jet eval_as_jet(const RExpr& e, const std::vector<double>& x, int dim,
                               int order = 3) {
    std::vector<weylkk::Jet> vars;
    for (int i = 0; i < dim; ++i)
        vars.push_back(weylkk::Jet::variable(i, x[i], dim, order));
    return e.eval<weylkk::Jet>(vars);
}

}  // namespace testsupport
