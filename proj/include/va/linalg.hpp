#ifndef VA_LINALG_HPP
#define VA_LINALG_HPP

#include "va/scalar.hpp"

#include <optional>
#include <string>
#include <vector>

namespace va {

// Dense matrix over the Gaussian rationals. Desk scale: exact arithmetic,
// deterministic pivoting (first nonzero in column order).
class Mat {
public:
    Mat() = default;
    Mat(int rows, int cols) : rows_(rows), cols_(cols), a_(rows * cols) {}
    static Mat identity(int n);
    static Mat zero(int rows, int cols) { return Mat(rows, cols); }

    int rows() const { return rows_; }
    int cols() const { return cols_; }

    Scalar& at(int r, int c) { return a_[r * cols_ + c]; }
    const Scalar& at(int r, int c) const { return a_[r * cols_ + c]; }

    Mat& operator+=(const Mat& o);
    Mat& operator-=(const Mat& o);
    friend Mat operator+(Mat a, const Mat& b) { return a += b; }
    friend Mat operator-(Mat a, const Mat& b) { return a -= b; }
    friend Mat operator*(const Mat& a, const Mat& b);
    Mat scaled(const Scalar& s) const;
    Mat transpose() const;
    bool is_zero() const;
    friend bool operator==(const Mat& a, const Mat& b) {
        return a.rows_ == b.rows_ && a.cols_ == b.cols_ && a.a_ == b.a_;
    }

    friend Mat commutator(const Mat& a, const Mat& b) { return a * b - b * a; }

    // Kronecker product (tensor of operators).
    friend Mat kron(const Mat& a, const Mat& b);

    Mat pow(int n) const;

    std::string str() const;

private:
    int rows_ = 0, cols_ = 0;
    std::vector<Scalar> a_;
};

// Reduced row echelon form in place; returns pivot columns.
std::vector<int> rref(Mat& m);

int rank(Mat m);

// Basis of the right kernel (columns).
std::vector<std::vector<Scalar>> kernel_basis(Mat m);

struct LinearSolution {
    bool consistent = false;
    std::vector<Scalar> particular;            // one solution when consistent
    std::vector<std::vector<Scalar>> homogeneous; // kernel basis
    // When inconsistent: coefficients c with c^T A = 0 but c^T b != 0, i.e. an
    // exact certificate that no solution exists.
    std::vector<Scalar> certificate;
};

// Solve A x = b exactly.
LinearSolution solve(const Mat& a, const std::vector<Scalar>& b);

std::vector<Scalar> mat_apply(const Mat& a, const std::vector<Scalar>& x);

} // namespace va

#endif
