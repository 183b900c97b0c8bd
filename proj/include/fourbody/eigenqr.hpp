#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <utility>
#include <vector>

#include "fourbody/bigfloat.hpp"
#include "fourbody/linalg.hpp"

namespace fourbody {

inline double qr_abs(double x) { return std::fabs(x); }
inline double qr_sqrt(double x) { return std::sqrt(x); }
inline double qr_eps(double) { return std::numeric_limits<double>::epsilon(); }
inline BigFloat qr_abs(const BigFloat& x) { return abs(x); }
inline BigFloat qr_sqrt(const BigFloat& x) { return sqrt(x); }
inline BigFloat qr_eps(const BigFloat&) { return BigFloat::epsilon(); }
inline double qr_to_double(double x) { return x; }
inline double qr_to_double(const BigFloat& x) { return x.to_double(); }

template <class F>
F qr_sign(const F& a, const F& b) {
    return b < F(0) ? -qr_abs(a) : qr_abs(a);
}

/** Osborne balancing: diagonal similarity scaling by powers of two until row
 * and column norms roughly agree.  Leaves eigenvalues unchanged, improves the
 * conditioning of the QR iteration on badly scaled input. */
template <class F>
void balance(Rows<F>& a) {
    const int n = (int)a.size();
    bool done = false;
    int guard = 0;
    while (!done && ++guard < 100) {
        done = true;
        for (int i = 0; i < n; ++i) {
            F r(0), c(0);
            for (int j = 0; j < n; ++j) {
                if (j == i) continue;
                c += qr_abs(a[j][i]);
                r += qr_abs(a[i][j]);
            }
            if (c == F(0) || r == F(0)) continue;
            F g = r / F(2), f(1);
            const F s = c + r;
            int steps = 0;
            while (c < g && ++steps < 400) {
                f *= F(2);
                c *= F(4);
            }
            g = r * F(2);
            while (c > g && ++steps < 400) {
                f /= F(2);
                c /= F(4);
            }
            if ((c + r) / f < s * F(0.95)) {
                done = false;
                const F ginv = F(1) / f;
                for (int j = 0; j < n; ++j) a[i][j] *= ginv;
                for (int j = 0; j < n; ++j) a[j][i] *= f;
            }
        }
    }
}

/// In-place orthogonal reduction to upper Hessenberg form via Householder
/// reflections on the trailing columns.
template <class F>
void hessenberg_reduce(Rows<F>& a) {
    const int n = (int)a.size();
    std::vector<F> v((std::size_t)n, F(0));
    for (int k = 0; k + 2 < n; ++k) {
        F scale(0);
        for (int i = k + 1; i < n; ++i) scale += qr_abs(a[i][k]);
        if (scale == F(0)) continue;
        F ssq(0);
        for (int i = k + 1; i < n; ++i) {
            v[(std::size_t)i] = a[i][k] / scale;
            ssq += v[(std::size_t)i] * v[(std::size_t)i];
        }
        F alpha = qr_sqrt(ssq);
        if (a[k + 1][k] < F(0)) alpha = -alpha;
        v[(std::size_t)(k + 1)] += alpha;
        const F beta = F(1) / (alpha * v[(std::size_t)(k + 1)]);
        for (int j = k; j < n; ++j) {
            F s(0);
            for (int i = k + 1; i < n; ++i) s += v[(std::size_t)i] * a[i][j];
            s *= beta;
            for (int i = k + 1; i < n; ++i) a[i][j] -= s * v[(std::size_t)i];
        }
        for (int i = 0; i < n; ++i) {
            F s(0);
            for (int j = k + 1; j < n; ++j) s += a[i][j] * v[(std::size_t)j];
            s *= beta;
            for (int j = k + 1; j < n; ++j) a[i][j] -= s * v[(std::size_t)j];
        }
        a[k + 1][k] = -(alpha * scale);
        for (int i = k + 2; i < n; ++i) a[i][k] = F(0);
    }
}

/** Francis implicit double-shift QR on an upper Hessenberg matrix (destroyed).
 * Returns eigenvalues as (real, imag) pairs; complex values come in conjugate
 * pairs.  Throws if a 1x1/2x2 block fails to deflate within max_sweeps. */
template <class F>
std::vector<std::pair<F, F>> hessenberg_eigenvalues(Rows<F>& h, int max_sweeps = 0) {
    const int n = (int)h.size();
    std::vector<std::pair<F, F>> w((std::size_t)n, {F(0), F(0)});
    const F eps = qr_eps(F(0));
    if (max_sweeps <= 0) {
        // Defective clusters deflate only linearly, roughly one bit per
        // sweep, so the budget scales with the precision being asked for.
        max_sweeps = 30 - (int)std::log2(qr_to_double(eps));
    }
    F anorm(0);
    for (int i = 0; i < n; ++i)
        for (int j = std::max(i - 1, 0); j < n; ++j) anorm += qr_abs(h[i][j]);
    int nn = n - 1;
    F t(0);
    while (nn >= 0) {
        int its = 0;
        int l = 0;
        do {
            for (l = nn; l >= 1; --l) {
                F s = qr_abs(h[l - 1][l - 1]) + qr_abs(h[l][l]);
                if (s == F(0)) s = anorm;
                if (qr_abs(h[l][l - 1]) <= eps * s) {
                    h[l][l - 1] = F(0);
                    break;
                }
            }
            if (l < 0) l = 0;
            F x = h[nn][nn];
            if (l == nn) {
                w[(std::size_t)nn] = {x + t, F(0)};
                --nn;
            } else {
                F y = h[nn - 1][nn - 1];
                F ww = h[nn][nn - 1] * h[nn - 1][nn];
                if (l == nn - 1) {
                    F p = (y - x) * F(0.5);
                    F q = p * p + ww;
                    F z = qr_sqrt(qr_abs(q));
                    x += t;
                    if (q >= F(0)) {
                        z = p + qr_sign(z, p);
                        w[(std::size_t)(nn - 1)] = {x + z, F(0)};
                        w[(std::size_t)nn] = w[(std::size_t)(nn - 1)];
                        if (!(z == F(0))) w[(std::size_t)nn] = {x - ww / z, F(0)};
                    } else {
                        w[(std::size_t)(nn - 1)] = {x + p, z};
                        w[(std::size_t)nn] = {x + p, -z};
                    }
                    nn -= 2;
                } else {
                    if (its >= max_sweeps)
                        throw std::runtime_error("eigenvalue iteration failed to converge");
                    if (its > 0 && its % 10 == 0) {
                        t += x;
                        for (int i = 0; i <= nn; ++i) h[i][i] -= x;
                        const F s = qr_abs(h[nn][nn - 1]) + qr_abs(h[nn - 1][nn - 2]);
                        x = s * F(0.75);
                        y = x;
                        ww = s * s * F(-0.4375);
                    }
                    ++its;
                    int m;
                    F p(0), q(0), r(0);
                    for (m = nn - 2; m >= l; --m) {
                        const F z = h[m][m];
                        const F rr = x - z;
                        const F ss = y - z;
                        p = (rr * ss - ww) / h[m + 1][m] + h[m][m + 1];
                        q = h[m + 1][m + 1] - z - rr - ss;
                        r = h[m + 2][m + 1];
                        const F norm = qr_abs(p) + qr_abs(q) + qr_abs(r);
                        p /= norm;
                        q /= norm;
                        r /= norm;
                        if (m == l) break;
                        const F u = qr_abs(h[m][m - 1]) * (qr_abs(q) + qr_abs(r));
                        const F vv = qr_abs(p) *
                            (qr_abs(h[m - 1][m - 1]) + qr_abs(z) + qr_abs(h[m + 1][m + 1]));
                        if (u <= eps * vv) break;
                    }
                    if (m < l) m = l;
                    for (int i = m + 2; i <= nn; ++i) {
                        h[i][i - 2] = F(0);
                        if (i != m + 2) h[i][i - 3] = F(0);
                    }
                    for (int k = m; k <= nn - 1; ++k) {
                        if (k != m) {
                            p = h[k][k - 1];
                            q = h[k + 1][k - 1];
                            r = (k != nn - 1) ? h[k + 2][k - 1] : F(0);
                            x = qr_abs(p) + qr_abs(q) + qr_abs(r);
                            if (!(x == F(0))) {
                                p /= x;
                                q /= x;
                                r /= x;
                            }
                        }
                        const F s = qr_sign(qr_sqrt(p * p + q * q + r * r), p);
                        if (s == F(0)) continue;
                        if (k == m) {
                            if (l != m) h[k][k - 1] = -h[k][k - 1];
                        } else {
                            h[k][k - 1] = -(s * x);
                        }
                        p += s;
                        x = p / s;
                        y = q / s;
                        const F z = r / s;
                        q /= p;
                        r /= p;
                        for (int j = k; j <= nn; ++j) {
                            F pp = h[k][j] + q * h[k + 1][j];
                            if (k != nn - 1) {
                                pp += r * h[k + 2][j];
                                h[k + 2][j] -= pp * z;
                            }
                            h[k + 1][j] -= pp * y;
                            h[k][j] -= pp * x;
                        }
                        const int mmin = nn < k + 3 ? nn : k + 3;
                        for (int i = l; i <= mmin; ++i) {
                            F pp = x * h[i][k] + y * h[i][k + 1];
                            if (k != nn - 1) {
                                pp += z * h[i][k + 2];
                                h[i][k + 2] -= pp * r;
                            }
                            h[i][k + 1] -= pp * q;
                            h[i][k] -= pp;
                        }
                    }
                }
            }
        } while (l < nn - 1);
    }
    return w;
}

/// Eigenvalues of a general real matrix: balance, reduce, iterate.
template <class F>
std::vector<std::pair<F, F>> real_eigenvalues(Rows<F> a, int max_sweeps = 0) {
    balance(a);
    hessenberg_reduce(a);
    return hessenberg_eigenvalues(a, max_sweeps);
}

/// Sorts (real, imag) pairs lexicographically, real part first.
template <class F>
void sort_eigenvalues(std::vector<std::pair<F, F>>& w) {
    std::sort(w.begin(), w.end(), [](const auto& a, const auto& b) {
        if (a.first < b.first) return true;
        if (b.first < a.first) return false;
        return a.second < b.second;
    });
}

}  // namespace fourbody
