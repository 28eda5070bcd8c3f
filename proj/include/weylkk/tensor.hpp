#pragma once

// Fixed-rank tensors of jets with runtime dimension 3 or 4, plus the small
// amount of dense linear algebra the curvature stack needs (determinant and
// inverse of symmetric jet matrices via cofactors).

#include <vector>

#include "weylkk/jet.hpp"

namespace weylkk {

template <int Rank>
class Ten {
public:
    Ten() = default;
    Ten(int dim, const Jet& fill) : dim_(dim), v_(size_for(dim), fill) {}
    static Ten zeros(int dim, int order = 3) {
        return Ten(dim, Jet::constant(0.0, dim, order));
    }

    int dim() const { return dim_; }

    template <typename... I>
    Jet& operator()(I... idx) {
        static_assert(sizeof...(I) == Rank);
        return v_[flat(idx...)];
    }
    template <typename... I>
    const Jet& operator()(I... idx) const {
        static_assert(sizeof...(I) == Rank);
        return v_[flat(idx...)];
    }

    double max_abs_value() const {
        double m = 0.0;
        for (const auto& j : v_) m = std::max(m, std::abs(j.value()));
        return m;
    }

private:
    int dim_ = 0;
    std::vector<Jet> v_;

    static std::size_t size_for(int dim) {
        std::size_t s = 1;
        for (int r = 0; r < Rank; ++r) s *= static_cast<std::size_t>(dim);
        return s;
    }

    template <typename... I>
    std::size_t flat(I... idx) const {
        std::size_t f = 0;
        ((f = f * dim_ + static_cast<std::size_t>(idx)), ...);
        return f;
    }
};

using Ten1 = Ten<1>;
using Ten2 = Ten<2>;
using Ten3 = Ten<3>;
using Ten4 = Ten<4>;

inline Jet det(const Ten2& m) {
    const int n = m.dim();
    if (n == 3) {
        return m(0, 0) * (m(1, 1) * m(2, 2) - m(1, 2) * m(2, 1)) -
               m(0, 1) * (m(1, 0) * m(2, 2) - m(1, 2) * m(2, 0)) +
               m(0, 2) * (m(1, 0) * m(2, 1) - m(1, 1) * m(2, 0));
    }
    // 4x4: Laplace expansion along the first row with 3x3 minors
    Jet d = Jet::constant(0.0, 4, m(0, 0).order());
    for (int j = 0; j < 4; ++j) {
        int rr = 0;
        Jet sub[3][3];
        for (int r = 1; r < 4; ++r) {
            int cc = 0;
            for (int c = 0; c < 4; ++c) {
                if (c == j) continue;
                sub[rr][cc] = m(r, c);
                ++cc;
            }
            ++rr;
        }
        Jet m3 = sub[0][0] * (sub[1][1] * sub[2][2] - sub[1][2] * sub[2][1]) -
                 sub[0][1] * (sub[1][0] * sub[2][2] - sub[1][2] * sub[2][0]) +
                 sub[0][2] * (sub[1][0] * sub[2][1] - sub[1][1] * sub[2][0]);
        d += ((j % 2 == 0) ? 1.0 : -1.0) * m(0, j) * m3;
    }
    return d;
}

// Inverse of a (symmetric) jet matrix via adjugate / determinant.
inline Ten2 inverse(const Ten2& m, const Jet& d) {
    const int n = m.dim();
    Ten2 inv = Ten2::zeros(n, m(0, 0).order());
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) {
            // cofactor C_ji (adjugate is transposed cofactor matrix)
            Jet sub[3][3];
            int rr = 0;
            for (int r = 0; r < n; ++r) {
                if (r == j) continue;
                int cc = 0;
                for (int c = 0; c < n; ++c) {
                    if (c == i) continue;
                    sub[rr][cc] = m(r, c);
                    ++cc;
                }
                ++rr;
            }
            Jet cof;
            if (n == 3)
                cof = sub[0][0] * sub[1][1] - sub[0][1] * sub[1][0];
            else
                cof = sub[0][0] * (sub[1][1] * sub[2][2] - sub[1][2] * sub[2][1]) -
                      sub[0][1] * (sub[1][0] * sub[2][2] - sub[1][2] * sub[2][0]) +
                      sub[0][2] * (sub[1][0] * sub[2][1] - sub[1][1] * sub[2][0]);
            inv(i, j) = (((i + j) % 2 == 0) ? 1.0 : -1.0) * cof / d;
        }
    }
    return inv;
}

inline Ten2 inverse(const Ten2& m) { return inverse(m, det(m)); }

}  // namespace weylkk
