#pragma once

#include <string>
#include <vector>

#include "dgxfem/common.hpp"

namespace dgxfem {

struct Triplet {
    int row;
    int col;
    double value;
};

// Compressed sparse row matrix with strictly increasing column indices per row.
struct CsrMatrix {
    int n = 0;
    std::vector<int> row_ptr;
    std::vector<int> col_idx;
    std::vector<double> values;

    static CsrMatrix from_triplets(int n, std::vector<Triplet> triplets);

    void multiply(const std::vector<double>& x, std::vector<double>& y) const;
    std::vector<double> diagonal() const;
    double quadratic_form(const std::vector<double>& v) const;
    // max |A - A^T| over max |A|
    double asymmetry() const;
};

struct SparseSystem {
    CsrMatrix A;
    std::vector<double> b;

    int size() const { return A.n; }
};

struct SolveReport {
    int iterations = 0;
    double relative_residual = 0.0;
    std::string method;
};

// Thrown when an iterative solver exhausts maxit; carries the best iterate.
struct NoConvergence : Error {
    NoConvergence(std::string msg, std::vector<double> best_, double residual_)
        : Error(std::move(msg)), best(std::move(best_)), residual(residual_) {}
    std::vector<double> best;
    double residual;
};

// Jacobi-preconditioned conjugate gradients; requires symmetric A.
// Returns x with ||b - Ax|| / ||b|| <= tol.
std::pair<std::vector<double>, SolveReport> solve_spd(const SparseSystem& sys, double tol = 1e-12,
                                                      int maxit = -1);

// Jacobi-preconditioned restarted GMRES(200); same residual contract.
std::pair<std::vector<double>, SolveReport> solve_general(const SparseSystem& sys,
                                                          double tol = 1e-12, int maxit = -1);

// MatrixMarket coordinate-format dump (debug aid).
void write_matrix_market(const CsrMatrix& A, const std::string& path);

}  // namespace dgxfem
