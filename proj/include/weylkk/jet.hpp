#pragma once

// Forward-mode truncated Taylor arithmetic ("jets") in up to four variables,
// truncation order up to three. A Jet stores the Taylor coefficients of a
// scalar about the expansion point over all multi-indices of total degree
// <= order; derivatives are coefficient * factorial(multi-index).

#include <array>
#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace weylkk {

class jet_error : public std::runtime_error {
public:
    explicit jet_error(const std::string& what) : std::runtime_error(what) {}
};

namespace detail {

// Multi-index bookkeeping for one dimension (3 or 4), order 3.
// Terms are enumerated by graded lexicographic order; a packed key
// (2 bits per axis) gives O(1) position lookup.
struct MultiIndexTable {
    static constexpr int kMaxTerms = 35;   // C(4+3,3)
    static constexpr int kMaxOrder = 3;

    int dim = 0;
    int nterms = 0;
    std::array<std::array<std::uint8_t, 4>, kMaxTerms> expo{};
    std::array<std::uint8_t, kMaxTerms> degree{};
    std::array<std::uint8_t, kMaxTerms> packed{};
    std::array<double, kMaxTerms> factorial{};  // product of axis factorials
    std::array<std::int16_t, 256> pos{};        // packed key -> term index

    struct MulTriple {
        std::uint16_t a, b, c;
    };
    std::vector<MulTriple> mul_pairs;  // all (a,b) with deg(a)+deg(b) <= 3

    explicit MultiIndexTable(int d) : dim(d) {
        pos.fill(-1);
        // graded lex enumeration
        for (int deg = 0; deg <= kMaxOrder; ++deg) {
            std::array<std::uint8_t, 4> e{};
            enumerate(deg, 0, deg, e);
        }
        for (int a = 0; a < nterms; ++a)
            for (int b = 0; b < nterms; ++b)
                if (degree[a] + degree[b] <= kMaxOrder) {
                    const std::uint8_t key = packed[a] + packed[b];
                    mul_pairs.push_back({static_cast<std::uint16_t>(a),
                                         static_cast<std::uint16_t>(b),
                                         static_cast<std::uint16_t>(pos[key])});
                }
    }

    static const MultiIndexTable& get(int dim) {
        static const MultiIndexTable t3(3);
        static const MultiIndexTable t4(4);
        if (dim == 3) return t3;
        if (dim == 4) return t4;
        throw jet_error("jet dimension must be 3 or 4, got " + std::to_string(dim));
    }

    int index_of(const std::array<std::uint8_t, 4>& e) const {
        const std::uint8_t key =
            static_cast<std::uint8_t>(e[0] | (e[1] << 2) | (e[2] << 4) | (e[3] << 6));
        return pos[key];
    }

private:
    void enumerate(int deg, int axis, int left, std::array<std::uint8_t, 4>& e) {
        if (axis == dim - 1) {
            e[axis] = static_cast<std::uint8_t>(left);
            commit(deg, e);
            return;
        }
        for (int k = left; k >= 0; --k) {
            e[axis] = static_cast<std::uint8_t>(k);
            enumerate(deg, axis + 1, left - k, e);
        }
        e[axis] = 0;
    }

    void commit(int deg, const std::array<std::uint8_t, 4>& e) {
        const int i = nterms++;
        expo[i] = e;
        degree[i] = static_cast<std::uint8_t>(deg);
        packed[i] =
            static_cast<std::uint8_t>(e[0] | (e[1] << 2) | (e[2] << 4) | (e[3] << 6));
        double f = 1.0;
        for (int a = 0; a < 4; ++a)
            for (int k = 2; k <= e[a]; ++k) f *= k;
        factorial[i] = f;
        pos[packed[i]] = static_cast<std::int16_t>(i);
    }
};

}  // namespace detail

class Jet {
public:
    Jet() = default;

    Jet(int dim, int order, double value) : dim_(dim), order_(order) {
        check_shape(dim, order);
        c_.fill(0.0);
        c_[0] = value;
    }

    static Jet constant(double value, int dim, int order = 3) {
        return Jet(dim, order, value);
    }

    // Jet of the coordinate function x^axis at the given point.
    static Jet variable(int axis, double value, int dim, int order = 3) {
        check_shape(dim, order);
        if (axis < 0 || axis >= dim)
            throw jet_error("jet variable axis " + std::to_string(axis) +
                            " out of range for dim " + std::to_string(dim));
        Jet j(dim, order, value);
        if (order >= 1) {
            std::array<std::uint8_t, 4> e{};
            e[axis] = 1;
            j.c_[detail::MultiIndexTable::get(dim).index_of(e)] = 1.0;
        }
        return j;
    }

    int dim() const { return dim_; }
    int order() const { return order_; }
    int nterms() const { return detail::MultiIndexTable::get(dim_).nterms; }

    double value() const { return c_[0]; }

    double coeff(int term) const { return c_[term]; }
    double& coeff(int term) { return c_[term]; }

    // Partial derivatives (not Taylor coefficients).
    double d1(int i) const {
        std::array<std::uint8_t, 4> e{};
        e[i] = 1;
        return deriv(e);
    }
    double d2(int i, int j) const {
        std::array<std::uint8_t, 4> e{};
        ++e[i];
        ++e[j];
        return deriv(e);
    }
    double d3(int i, int j, int k) const {
        std::array<std::uint8_t, 4> e{};
        ++e[i];
        ++e[j];
        ++e[k];
        return deriv(e);
    }

    // d/dx^axis as a jet. The top-degree coefficients of the result are
    // unknown (they would need degree order+1 of the input) and are set to
    // zero; downstream results are exact one derivative level shallower.
    Jet partial(int axis) const {
        const auto& t = table();
        Jet r(dim_, order_, 0.0);
        for (int i = 0; i < t.nterms; ++i) {
            if (t.degree[i] > order_) continue;
            auto e = t.expo[i];
            if (e[axis] == 0) continue;
            const int src = i;
            --e[axis];
            const int dst = t.index_of(e);
            r.c_[dst] = c_[src] * (t.expo[src][axis]);
        }
        return r;
    }

    Jet operator-() const {
        Jet r = *this;
        for (int i = 0; i < r.nterms(); ++i) r.c_[i] = -r.c_[i];
        return r;
    }

    Jet& operator+=(const Jet& o) {
        check_match(o);
        for (int i = 0; i < nterms(); ++i) c_[i] += o.c_[i];
        return *this;
    }
    Jet& operator-=(const Jet& o) {
        check_match(o);
        for (int i = 0; i < nterms(); ++i) c_[i] -= o.c_[i];
        return *this;
    }
    Jet& operator*=(const Jet& o) { return *this = *this * o; }
    Jet& operator/=(const Jet& o) { return *this = *this / o; }

    Jet& operator+=(double s) {
        c_[0] += s;
        return *this;
    }
    Jet& operator-=(double s) {
        c_[0] -= s;
        return *this;
    }
    Jet& operator*=(double s) {
        for (int i = 0; i < nterms(); ++i) c_[i] *= s;
        return *this;
    }
    Jet& operator/=(double s) { return *this *= 1.0 / s; }

    friend Jet operator+(Jet a, const Jet& b) { return a += b; }
    friend Jet operator-(Jet a, const Jet& b) { return a -= b; }
    friend Jet operator+(Jet a, double b) { return a += b; }
    friend Jet operator-(Jet a, double b) { return a -= b; }
    friend Jet operator+(double a, Jet b) { return b += a; }
    friend Jet operator-(double a, const Jet& b) { return -b + a; }
    friend Jet operator*(Jet a, double b) { return a *= b; }
    friend Jet operator*(double a, Jet b) { return b *= a; }
    friend Jet operator/(Jet a, double b) { return a /= b; }
    friend Jet operator/(double a, const Jet& b) { return Jet::constant(a, b.dim_, b.order_) / b; }

    friend Jet operator*(const Jet& a, const Jet& b) {
        a.check_match(b);
        const auto& t = a.table();
        Jet r(a.dim_, a.order_, 0.0);
        const int ord = a.order_;
        for (const auto& p : t.mul_pairs) {
            if (t.degree[p.a] + t.degree[p.b] > ord) continue;
            r.c_[p.c] += a.c_[p.a] * b.c_[p.b];
        }
        return r;
    }

    friend Jet operator/(const Jet& a, const Jet& b) {
        if (b.value() == 0.0) throw jet_error("jet division by zero value part");
        const double u = b.value();
        return a * b.compose({1.0 / u, -1.0 / (u * u), 2.0 / (u * u * u),
                              -6.0 / (u * u * u * u)});
    }

    friend Jet sqrt(const Jet& a) {
        const double u = a.value();
        if (u <= 0.0) throw jet_error("jet sqrt of nonpositive value part");
        const double s = std::sqrt(u);
        return a.compose({s, 0.5 / s, -0.25 / (u * s), 0.375 / (u * u * s)});
    }
    friend Jet exp(const Jet& a) {
        const double e = std::exp(a.value());
        return a.compose({e, e, e, e});
    }
    friend Jet log(const Jet& a) {
        const double u = a.value();
        if (u <= 0.0) throw jet_error("jet ln of nonpositive value part");
        return a.compose({std::log(u), 1.0 / u, -1.0 / (u * u), 2.0 / (u * u * u)});
    }
    friend Jet sin(const Jet& a) {
        const double s = std::sin(a.value()), c = std::cos(a.value());
        return a.compose({s, c, -s, -c});
    }
    friend Jet cos(const Jet& a) {
        const double s = std::sin(a.value()), c = std::cos(a.value());
        return a.compose({c, -s, -c, s});
    }
    friend Jet tan(const Jet& a) {
        const double t = std::tan(a.value());
        const double s = 1.0 + t * t;  // sec^2
        return a.compose({t, s, 2.0 * t * s, 2.0 * s * s + 4.0 * t * t * s});
    }

    friend Jet pow_int(const Jet& a, int n) {
        if (n == 0) return Jet::constant(1.0, a.dim_, a.order_);
        if (n < 0) return Jet::constant(1.0, a.dim_, a.order_) / pow_int(a, -n);
        Jet r = a;
        for (int i = 1; i < n; ++i) r = r * a;
        return r;
    }

    double max_abs_coeff() const {
        double m = 0.0;
        for (int i = 0; i < nterms(); ++i) m = std::max(m, std::abs(c_[i]));
        return m;
    }

private:
    int dim_ = 3;
    int order_ = 3;
    std::array<double, detail::MultiIndexTable::kMaxTerms> c_{};

    const detail::MultiIndexTable& table() const {
        return detail::MultiIndexTable::get(dim_);
    }

    static void check_shape(int dim, int order) {
        if (dim != 3 && dim != 4)
            throw jet_error("jet dimension must be 3 or 4, got " + std::to_string(dim));
        if (order < 0 || order > detail::MultiIndexTable::kMaxOrder)
            throw jet_error("jet order must be in 0..3, got " + std::to_string(order));
    }

    void check_match(const Jet& o) const {
        if (dim_ != o.dim_ || order_ != o.order_)
            throw jet_error("jet shape mismatch: dim " + std::to_string(dim_) + "/" +
                            std::to_string(o.dim_) + ", order " + std::to_string(order_) +
                            "/" + std::to_string(o.order_));
    }

    double deriv(const std::array<std::uint8_t, 4>& e) const {
        const auto& t = table();
        int deg = 0;
        for (int a = 0; a < 4; ++a) deg += e[a];
        if (deg > order_) return 0.0;
        const int i = t.index_of(e);
        return c_[i] * t.factorial[i];
    }

    // g(u) truncated at order 3 via Horner on h = u - u0; gd holds
    // g(u0), g'(u0), g''(u0), g'''(u0).
    Jet compose(const std::array<double, 4>& gd) const {
        Jet h = *this;
        h.c_[0] = 0.0;
        Jet r = Jet::constant(gd[3] / 6.0, dim_, order_);
        r = r * h + gd[2] / 2.0;
        r = r * h + gd[1];
        r = r * h + gd[0];
        return r;
    }
};

}  // namespace weylkk
