#ifndef HPEZ_TEST_RATIONAL_HPP
#define HPEZ_TEST_RATIONAL_HPP

#include <cstdint>
#include <numeric>
#include <stdexcept>
#include <vector>

namespace hpez::test {

struct Rational {
    __int128 num = 0;
    __int128 den = 1;

    Rational() = default;
    Rational(long long n, long long d = 1) : num(n), den(d) { normalize(); }

    void normalize() {
        if (den == 0) throw std::domain_error("zero denominator");
        if (den < 0) {
            num = -num;
            den = -den;
        }
        __int128 a = num < 0 ? -num : num, b = den;
        while (b != 0) {
            __int128 t = a % b;
            a = b;
            b = t;
        }
        if (a > 1) {
            num /= a;
            den /= a;
        }
    }

    friend Rational operator+(Rational a, const Rational &b) {
        Rational r;
        r.num = a.num * b.den + b.num * a.den;
        r.den = a.den * b.den;
        r.normalize();
        return r;
    }
    friend Rational operator-(Rational a, const Rational &b) {
        Rational n = b;
        n.num = -n.num;
        return a + n;
    }
    friend Rational operator*(Rational a, const Rational &b) {
        Rational r;
        r.num = a.num * b.num;
        r.den = a.den * b.den;
        r.normalize();
        return r;
    }
    friend Rational operator/(Rational a, const Rational &b) {
        Rational r;
        r.num = a.num * b.den;
        r.den = a.den * b.num;
        r.normalize();
        return r;
    }
    friend bool operator==(const Rational &a, const Rational &b) { return a.num == b.num && a.den == b.den; }
};

/// Weights w_j with p(t) = sum w_j p(x_j) for the interpolating polynomial.
inline std::vector<Rational> lagrange_row(const std::vector<long long> &xs, long long t) {
    std::vector<Rational> w;
    for (std::size_t j = 0; j < xs.size(); ++j) {
        Rational v(1);
        for (std::size_t k = 0; k < xs.size(); ++k) {
            if (k != j) v = v * Rational(t - xs[k], xs[j] - xs[k]);
        }
        w.push_back(v);
    }
    return w;
}

/// Weights of the natural cubic spline through knots xs, evaluated at t.
inline std::vector<Rational> natural_spline_row(const std::vector<long long> &xs, long long t) {
    const std::size_t n = xs.size() - 1;
    std::vector<Rational> row;
    for (std::size_t j = 0; j <= n; ++j) {
        std::vector<Rational> y(n + 1, Rational(0));
        y[j] = Rational(1);
        std::vector<Rational> h;
        for (std::size_t i = 0; i < n; ++i) h.emplace_back(xs[i + 1] - xs[i]);
        const std::size_t m = n - 1;
        std::vector<std::vector<Rational>> A(m, std::vector<Rational>(m, Rational(0)));
        std::vector<Rational> b(m);
        for (std::size_t i = 1; i < n; ++i) {
            const std::size_t r = i - 1;
            if (i >= 2) A[r][r - 1] = h[i - 1] / Rational(6);
            A[r][r] = (h[i - 1] + h[i]) / Rational(3);
            if (i + 1 <= n - 1) A[r][r + 1] = h[i] / Rational(6);
            b[r] = (y[i + 1] - y[i]) / h[i] - (y[i] - y[i - 1]) / h[i - 1];
        }
        for (std::size_t c = 0; c < m; ++c) {
            for (std::size_t r = c + 1; r < m; ++r) {
                Rational f = A[r][c] / A[c][c];
                for (std::size_t k = 0; k < m; ++k) A[r][k] = A[r][k] - f * A[c][k];
                b[r] = b[r] - f * b[c];
            }
        }
        std::vector<Rational> M(n + 1, Rational(0));
        for (std::size_t r = m; r-- > 0;) {
            Rational acc = b[r];
            for (std::size_t k = r + 1; k < m; ++k) acc = acc - A[r][k] * M[k + 1];
            M[r + 1] = acc / A[r][r];
        }
        std::size_t k = 0;
        while (k + 1 < n && xs[k + 1] <= t) ++k;
        const Rational hh = h[k], a(xs[k + 1] - t), bb(t - xs[k]);
        row.push_back(M[k] * a * a * a / (Rational(6) * hh) + M[k + 1] * bb * bb * bb / (Rational(6) * hh) +
                      (y[k] / hh - M[k] * hh / Rational(6)) * a + (y[k + 1] / hh - M[k + 1] * hh / Rational(6)) * bb);
    }
    return row;
}

}  // namespace hpez::test

#endif
