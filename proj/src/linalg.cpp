#include "va/linalg.hpp"

#include "va/error.hpp"

#include <sstream>

namespace va {

Mat Mat::identity(int n) {
    Mat m(n, n);
    for (int i = 0; i < n; ++i) m.at(i, i) = Scalar(1);
    return m;
}

Mat& Mat::operator+=(const Mat& o) {
    if (rows_ != o.rows_ || cols_ != o.cols_) throw Error("matrix shape mismatch");
    for (std::size_t i = 0; i < a_.size(); ++i) a_[i] += o.a_[i];
    return *this;
}

Mat& Mat::operator-=(const Mat& o) {
    if (rows_ != o.rows_ || cols_ != o.cols_) throw Error("matrix shape mismatch");
    for (std::size_t i = 0; i < a_.size(); ++i) a_[i] -= o.a_[i];
    return *this;
}

Mat operator*(const Mat& a, const Mat& b) {
    if (a.cols_ != b.rows_) throw Error("matrix shape mismatch in product");
    Mat r(a.rows_, b.cols_);
    for (int i = 0; i < a.rows_; ++i)
        for (int k = 0; k < a.cols_; ++k) {
            const Scalar& aik = a.at(i, k);
            if (aik.is_zero()) continue;
            for (int j = 0; j < b.cols_; ++j) {
                const Scalar& bkj = b.at(k, j);
                if (bkj.is_zero()) continue;
                r.at(i, j) += aik * bkj;
            }
        }
    return r;
}

Mat Mat::scaled(const Scalar& s) const {
    Mat r(rows_, cols_);
    for (std::size_t i = 0; i < a_.size(); ++i) r.a_[i] = a_[i] * s;
    return r;
}

Mat Mat::transpose() const {
    Mat r(cols_, rows_);
    for (int i = 0; i < rows_; ++i)
        for (int j = 0; j < cols_; ++j) r.at(j, i) = at(i, j);
    return r;
}

bool Mat::is_zero() const {
    for (const auto& x : a_)
        if (!x.is_zero()) return false;
    return true;
}

Mat kron(const Mat& a, const Mat& b) {
    Mat r(a.rows_ * b.rows_, a.cols_ * b.cols_);
    for (int i = 0; i < a.rows_; ++i)
        for (int j = 0; j < a.cols_; ++j) {
            if (a.at(i, j).is_zero()) continue;
            for (int k = 0; k < b.rows_; ++k)
                for (int l = 0; l < b.cols_; ++l)
                    r.at(i * b.rows_ + k, j * b.cols_ + l) = a.at(i, j) * b.at(k, l);
        }
    return r;
}

Mat Mat::pow(int n) const {
    if (rows_ != cols_) throw Error("pow of non-square matrix");
    Mat acc = identity(rows_);
    for (int i = 0; i < n; ++i) acc = acc * (*this);
    return acc;
}

std::string Mat::str() const {
    std::ostringstream os;
    for (int i = 0; i < rows_; ++i) {
        os << (i ? "; " : "[");
        for (int j = 0; j < cols_; ++j) os << (j ? "," : "") << at(i, j).str();
    }
    os << "]";
    return os.str();
}

std::vector<int> rref(Mat& m) {
    std::vector<int> pivots;
    int r = 0;
    for (int c = 0; c < m.cols() && r < m.rows(); ++c) {
        int p = -1;
        for (int i = r; i < m.rows(); ++i)
            if (!m.at(i, c).is_zero()) {
                p = i;
                break;
            }
        if (p < 0) continue;
        if (p != r)
            for (int j = 0; j < m.cols(); ++j) std::swap(m.at(p, j), m.at(r, j));
        Scalar inv = m.at(r, c).inv();
        for (int j = c; j < m.cols(); ++j) m.at(r, j) *= inv;
        for (int i = 0; i < m.rows(); ++i) {
            if (i == r || m.at(i, c).is_zero()) continue;
            Scalar f = m.at(i, c);
            for (int j = c; j < m.cols(); ++j) m.at(i, j) -= f * m.at(r, j);
        }
        pivots.push_back(c);
        ++r;
    }
    return pivots;
}

int rank(Mat m) {
    return static_cast<int>(rref(m).size());
}

std::vector<std::vector<Scalar>> kernel_basis(Mat m) {
    int n = m.cols();
    std::vector<int> pivots = rref(m);
    std::vector<bool> is_pivot(n, false);
    for (int c : pivots) is_pivot[c] = true;

    std::vector<std::vector<Scalar>> basis;
    for (int free = 0; free < n; ++free) {
        if (is_pivot[free]) continue;
        std::vector<Scalar> v(n);
        v[free] = Scalar(1);
        for (std::size_t r = 0; r < pivots.size(); ++r)
            v[pivots[r]] = -m.at(static_cast<int>(r), free);
        basis.push_back(std::move(v));
    }
    return basis;
}

LinearSolution solve(const Mat& a, const std::vector<Scalar>& b) {
    if (static_cast<int>(b.size()) != a.rows()) throw Error("rhs size mismatch");
    int n = a.cols();
    // Augment with b and with an identity block recording row operations, so
    // an inconsistent row yields the combination certifying inconsistency.
    Mat aug(a.rows(), n + 1 + a.rows());
    for (int i = 0; i < a.rows(); ++i) {
        for (int j = 0; j < n; ++j) aug.at(i, j) = a.at(i, j);
        aug.at(i, n) = b[i];
        aug.at(i, n + 1 + i) = Scalar(1);
    }

    // Eliminate on the first n columns only.
    int r = 0;
    std::vector<int> pivots;
    for (int c = 0; c < n && r < aug.rows(); ++c) {
        int p = -1;
        for (int i = r; i < aug.rows(); ++i)
            if (!aug.at(i, c).is_zero()) {
                p = i;
                break;
            }
        if (p < 0) continue;
        if (p != r)
            for (int j = 0; j < aug.cols(); ++j) std::swap(aug.at(p, j), aug.at(r, j));
        Scalar inv = aug.at(r, c).inv();
        for (int j = 0; j < aug.cols(); ++j) aug.at(r, j) *= inv;
        for (int i = 0; i < aug.rows(); ++i) {
            if (i == r || aug.at(i, c).is_zero()) continue;
            Scalar f = aug.at(i, c);
            for (int j = 0; j < aug.cols(); ++j) aug.at(i, j) -= f * aug.at(r, j);
        }
        pivots.push_back(c);
        ++r;
    }

    LinearSolution sol;
    for (int i = r; i < aug.rows(); ++i)
        if (!aug.at(i, n).is_zero()) {
            sol.consistent = false;
            sol.certificate.assign(a.rows(), Scalar());
            for (int j = 0; j < a.rows(); ++j) sol.certificate[j] = aug.at(i, n + 1 + j);
            return sol;
        }

    sol.consistent = true;
    sol.particular.assign(n, Scalar());
    for (std::size_t i = 0; i < pivots.size(); ++i)
        sol.particular[pivots[i]] = aug.at(static_cast<int>(i), n);

    Mat sub(a.rows(), n);
    for (int i = 0; i < a.rows(); ++i)
        for (int j = 0; j < n; ++j) sub.at(i, j) = aug.at(i, j);
    // rows are already reduced; reuse kernel extraction
    std::vector<bool> is_pivot(n, false);
    for (int c : pivots) is_pivot[c] = true;
    for (int free = 0; free < n; ++free) {
        if (is_pivot[free]) continue;
        std::vector<Scalar> v(n);
        v[free] = Scalar(1);
        for (std::size_t rr = 0; rr < pivots.size(); ++rr)
            v[pivots[rr]] = -sub.at(static_cast<int>(rr), free);
        sol.homogeneous.push_back(std::move(v));
    }
    return sol;
}

std::vector<Scalar> mat_apply(const Mat& a, const std::vector<Scalar>& x) {
    if (static_cast<int>(x.size()) != a.cols()) throw Error("vector size mismatch");
    std::vector<Scalar> y(a.rows());
    for (int i = 0; i < a.rows(); ++i)
        for (int j = 0; j < a.cols(); ++j)
            if (!a.at(i, j).is_zero() && !x[j].is_zero()) y[i] += a.at(i, j) * x[j];
    return y;
}

} // namespace va
