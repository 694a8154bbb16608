#include "fractrunc/geometry.hpp"

#include <cmath>

#include "fractrunc/errors.hpp"

namespace fractrunc {

double orthonormality_defect(const Mat& m) {
    const Mat g = m.transpose() * m - Mat::Identity(m.cols(), m.cols());
    return g.cwiseAbs().maxCoeff();
}

Frame::Frame(Mat vectors) : vectors_(std::move(vectors)) {
    if (vectors_.cols() > vectors_.rows() || vectors_.cols() == 0) {
        throw InvariantViolation("a frame needs between 1 and N vectors");
    }
    if (orthonormality_defect() > 1e-12) throw InvariantViolation("frame vectors are not orthonormal");
}

double Frame::orthonormality_defect() const { return fractrunc::orthonormality_defect(vectors_); }

Vec unit(int N, int i) {
    Vec e = Vec::Zero(N);
    e(i) = 1.0;
    return e;
}

Mat householder(const Vec& from, const Vec& to) {
    const int N = static_cast<int>(from.size());
    Vec v = from - to;
    const double n2 = v.squaredNorm();
    if (n2 < 1e-30) return Mat::Identity(N, N);
    return Mat::Identity(N, N) - 2.0 * v * v.transpose() / n2;
}

Frame canonical_frame(int N, const std::vector<int>& indices) {
    Mat m(N, static_cast<int>(indices.size()));
    for (std::size_t j = 0; j < indices.size(); ++j) {
        if (indices[j] < 0 || indices[j] >= N) throw DomainError("frame index out of range");
        m.col(static_cast<int>(j)) = unit(N, indices[j]);
    }
    return Frame(m);
}

Frame equiangular_frame(const Vec& direction) {
    const int N = static_cast<int>(direction.size());
    const double n = direction.norm();
    if (!(n > 0.0)) throw DomainError("direction must be non-zero");
    const Vec ones = Vec::Constant(N, 1.0 / std::sqrt(static_cast<double>(N)));
    return Frame(householder(ones, direction / n));
}

Frame completion_frame(const Vec& direction, int k) {
    const int N = static_cast<int>(direction.size());
    const double n = direction.norm();
    if (!(n > 0.0)) throw DomainError("direction must be non-zero");
    if (k < 1 || k > N) throw DomainError("k must lie in {1..N}");
    const Mat H = householder(unit(N, 0), direction / n);
    return Frame(H.leftCols(k));
}

Mat random_orthogonal(int N, std::mt19937_64& rng) {
    std::normal_distribution<double> gauss(0.0, 1.0);
    Mat a(N, N);
    for (int j = 0; j < N; ++j)
        for (int i = 0; i < N; ++i) a(i, j) = gauss(rng);
    Eigen::HouseholderQR<Mat> qr(a);
    Mat q = qr.householderQ() * Mat::Identity(N, N);
    const Mat r = qr.matrixQR();
    for (int j = 0; j < N; ++j)
        if (r(j, j) < 0) q.col(j) = -q.col(j);
    return q;
}

Frame random_frame(int N, int k, std::mt19937_64& rng) { return Frame(random_orthogonal(N, rng).leftCols(k)); }

}  // namespace fractrunc
