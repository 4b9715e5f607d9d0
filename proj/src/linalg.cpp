#include "dgxfem/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <numeric>

namespace dgxfem {

namespace {

double dot(const std::vector<double>& a, const std::vector<double>& b) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
    return s;
}

double norm2(const std::vector<double>& a) { return std::sqrt(dot(a, a)); }

std::vector<double> residual(const CsrMatrix& A, const std::vector<double>& b,
                             const std::vector<double>& x) {
    std::vector<double> r(b.size());
    A.multiply(x, r);
    for (std::size_t i = 0; i < r.size(); ++i) r[i] = b[i] - r[i];
    return r;
}

std::vector<double> jacobi_inverse(const CsrMatrix& A) {
    std::vector<double> inv = A.diagonal();
    for (double& d : inv) d = (std::abs(d) > 1e-300) ? 1.0 / d : 1.0;
    return inv;
}

}  // namespace

CsrMatrix CsrMatrix::from_triplets(int n, std::vector<Triplet> triplets) {
    std::sort(triplets.begin(), triplets.end(), [](const Triplet& a, const Triplet& b) {
        return a.row != b.row ? a.row < b.row : a.col < b.col;
    });
    CsrMatrix m;
    m.n = n;
    m.row_ptr.assign(n + 1, 0);
    for (std::size_t k = 0; k < triplets.size();) {
        std::size_t j = k;
        double sum = 0.0;
        while (j < triplets.size() && triplets[j].row == triplets[k].row &&
               triplets[j].col == triplets[k].col)
            sum += triplets[j++].value;
        m.col_idx.push_back(triplets[k].col);
        m.values.push_back(sum);
        m.row_ptr[triplets[k].row + 1]++;
        k = j;
    }
    for (int i = 0; i < n; ++i) m.row_ptr[i + 1] += m.row_ptr[i];
    return m;
}

void CsrMatrix::multiply(const std::vector<double>& x, std::vector<double>& y) const {
    y.assign(n, 0.0);
    for (int i = 0; i < n; ++i) {
        double s = 0.0;
        for (int k = row_ptr[i]; k < row_ptr[i + 1]; ++k) s += values[k] * x[col_idx[k]];
        y[i] = s;
    }
}

std::vector<double> CsrMatrix::diagonal() const {
    std::vector<double> d(n, 0.0);
    for (int i = 0; i < n; ++i)
        for (int k = row_ptr[i]; k < row_ptr[i + 1]; ++k)
            if (col_idx[k] == i) d[i] = values[k];
    return d;
}

double CsrMatrix::quadratic_form(const std::vector<double>& v) const {
    double s = 0.0;
    for (int i = 0; i < n; ++i) {
        double row = 0.0;
        for (int k = row_ptr[i]; k < row_ptr[i + 1]; ++k) row += values[k] * v[col_idx[k]];
        s += v[i] * row;
    }
    return s;
}

double CsrMatrix::asymmetry() const {
    double max_abs = 0.0;
    for (double v : values) max_abs = std::max(max_abs, std::abs(v));
    if (max_abs == 0.0) return 0.0;
    // build a transpose lookup: for moderate n a dense scan per entry is too
    // slow, so walk both triangles via a transposed copy
    std::vector<Triplet> t;
    t.reserve(values.size());
    for (int i = 0; i < n; ++i)
        for (int k = row_ptr[i]; k < row_ptr[i + 1]; ++k)
            t.push_back({col_idx[k], i, values[k]});
    const CsrMatrix at = from_triplets(n, std::move(t));
    double worst = 0.0;
    for (int i = 0; i < n; ++i) {
        int ka = row_ptr[i], kb = at.row_ptr[i];
        const int ea = row_ptr[i + 1], eb = at.row_ptr[i + 1];
        while (ka < ea || kb < eb) {
            const int ca = ka < ea ? col_idx[ka] : n;
            const int cb = kb < eb ? at.col_idx[kb] : n;
            if (ca == cb) {
                worst = std::max(worst, std::abs(values[ka] - at.values[kb]));
                ++ka;
                ++kb;
            } else if (ca < cb) {
                worst = std::max(worst, std::abs(values[ka++]));
            } else {
                worst = std::max(worst, std::abs(at.values[kb++]));
            }
        }
    }
    return worst / max_abs;
}

std::pair<std::vector<double>, SolveReport> solve_spd(const SparseSystem& sys, double tol,
                                                      int maxit) {
    const CsrMatrix& A = sys.A;
    const int n = A.n;
    if (maxit < 0) maxit = 20 * n;
    const std::vector<double> dinv = jacobi_inverse(A);
    const double bnorm = norm2(sys.b);

    std::vector<double> x(n, 0.0);
    if (bnorm == 0.0) return {x, {0, 0.0, "pcg-jacobi"}};

    std::vector<double> r = sys.b;
    std::vector<double> z(n), p(n), Ap(n);
    for (int i = 0; i < n; ++i) z[i] = dinv[i] * r[i];
    p = z;
    double rz = dot(r, z);
    double best_res = norm2(r) / bnorm;
    std::vector<double> best_x = x;

    int it = 0;
    for (; it < maxit; ++it) {
        if (norm2(r) / bnorm <= tol) break;
        A.multiply(p, Ap);
        const double pAp = dot(p, Ap);
        if (pAp <= 0.0) break;  // loss of positive definiteness
        const double alpha = rz / pAp;
        for (int i = 0; i < n; ++i) {
            x[i] += alpha * p[i];
            r[i] -= alpha * Ap[i];
        }
        // periodically replace the recurrence residual with the true one
        if ((it + 1) % 50 == 0) r = residual(A, sys.b, x);
        for (int i = 0; i < n; ++i) z[i] = dinv[i] * r[i];
        const double rz_new = dot(r, z);
        const double beta = rz_new / rz;
        rz = rz_new;
        for (int i = 0; i < n; ++i) p[i] = z[i] + beta * p[i];
        const double res = norm2(r) / bnorm;
        if (res < best_res) {
            best_res = res;
            best_x = x;
        }
    }

    const double true_res = norm2(residual(A, sys.b, x)) / bnorm;
    if (true_res > tol) {
        if (best_res < true_res) {
            x = best_x;
        }
        const double final_res = norm2(residual(A, sys.b, x)) / bnorm;
        if (final_res > tol)
            throw NoConvergence("solve_spd: pcg stalled at relative residual " +
                                    std::to_string(final_res),
                                std::move(x), final_res);
    }
    return {x, {it, true_res, "pcg-jacobi"}};
}

std::pair<std::vector<double>, SolveReport> solve_general(const SparseSystem& sys, double tol,
                                                          int maxit) {
    const CsrMatrix& A = sys.A;
    const int n = A.n;
    if (maxit < 0) maxit = 20 * n;
    const int restart = std::min(200, n);
    const std::vector<double> dinv = jacobi_inverse(A);
    const double bnorm = norm2(sys.b);

    std::vector<double> x(n, 0.0);
    if (bnorm == 0.0) return {x, {0, 0.0, "gmres-jacobi"}};

    int total_it = 0;
    double res = 1.0;
    while (total_it < maxit) {
        std::vector<double> r = residual(A, sys.b, x);
        for (int i = 0; i < n; ++i) r[i] *= dinv[i];
        const double beta = norm2(r);
        res = norm2(residual(A, sys.b, x)) / bnorm;
        if (res <= tol) break;

        // Arnoldi with Givens rotations on the Hessenberg matrix
        std::vector<std::vector<double>> V;
        V.push_back(r);
        for (double& v : V[0]) v /= beta;
        std::vector<std::vector<double>> H;  // H[j] holds column j (j+2 entries)
        std::vector<double> cs, sn, g;
        g.push_back(beta);

        int k = 0;
        for (; k < restart && total_it < maxit; ++k, ++total_it) {
            std::vector<double> w(n);
            A.multiply(V[k], w);
            for (int i = 0; i < n; ++i) w[i] *= dinv[i];
            std::vector<double> h(k + 2, 0.0);
            for (int j = 0; j <= k; ++j) {
                h[j] = dot(w, V[j]);
                for (int i = 0; i < n; ++i) w[i] -= h[j] * V[j][i];
            }
            h[k + 1] = norm2(w);
            for (int j = 0; j < k; ++j) {
                const double t = cs[j] * h[j] + sn[j] * h[j + 1];
                h[j + 1] = -sn[j] * h[j] + cs[j] * h[j + 1];
                h[j] = t;
            }
            const double denom = std::hypot(h[k], h[k + 1]);
            cs.push_back(denom > 0 ? h[k] / denom : 1.0);
            sn.push_back(denom > 0 ? h[k + 1] / denom : 0.0);
            h[k] = denom;
            h[k + 1] = 0.0;
            g.push_back(-sn[k] * g[k]);
            g[k] *= cs[k];
            H.push_back(h);
            if (h[k] != 0.0)
                for (double& v : w) v /= denom;
            V.push_back(std::move(w));
            if (std::abs(g[k + 1]) / (beta > 0 ? beta : 1.0) < 0.01 * tol) {
                ++k;
                ++total_it;
                break;
            }
        }

        // back substitution and update
        std::vector<double> y(k, 0.0);
        for (int i = k - 1; i >= 0; --i) {
            double s = g[i];
            for (int j = i + 1; j < k; ++j) s -= H[j][i] * y[j];
            y[i] = s / H[i][i];
        }
        for (int j = 0; j < k; ++j)
            for (int i = 0; i < n; ++i) x[i] += y[j] * V[j][i];
        if (k == 0) break;
    }

    res = norm2(residual(A, sys.b, x)) / bnorm;
    if (res > tol)
        throw NoConvergence("solve_general: gmres stalled at relative residual " +
                                std::to_string(res),
                            std::move(x), res);
    return {x, {total_it, res, "gmres-jacobi"}};
}

void write_matrix_market(const CsrMatrix& A, const std::string& path) {
    std::ofstream out(path);
    out << "%%MatrixMarket matrix coordinate real general\n";
    out << A.n << " " << A.n << " " << A.values.size() << "\n";
    char buf[64];
    for (int i = 0; i < A.n; ++i)
        for (int k = A.row_ptr[i]; k < A.row_ptr[i + 1]; ++k) {
            std::snprintf(buf, sizeof(buf), "%d %d %.16e\n", i + 1, A.col_idx[k] + 1, A.values[k]);
            out << buf;
        }
}

}  // namespace dgxfem
