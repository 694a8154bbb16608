#pragma once

#include <Eigen/Dense>
#include <random>
#include <vector>

namespace fractrunc {

using Vec = Eigen::VectorXd;
using Mat = Eigen::MatrixXd;

// k orthonormal vectors in R^N, stored as the columns of an N×k matrix.
class Frame {
public:
    Frame() = default;
    // Throws InvariantViolation if the columns are not orthonormal to 1e-12.
    explicit Frame(Mat vectors);

    int dim() const { return static_cast<int>(vectors_.rows()); }
    int size() const { return static_cast<int>(vectors_.cols()); }
    Vec vector(int i) const { return vectors_.col(i); }
    const Mat& vectors() const { return vectors_; }
    double orthonormality_defect() const;

private:
    Mat vectors_;
};

double orthonormality_defect(const Mat& m);

Vec unit(int N, int i);

// Householder reflection H (symmetric, orthogonal) with H·from = to; both unit.
Mat householder(const Vec& from, const Vec& to);

// Frame {e_i : i in indices} (0-based).
Frame canonical_frame(int N, const std::vector<int>& indices);

// Orthonormal basis ξ_1..ξ_N with ⟨d̂, ξ_i⟩ = 1/√N for every i, obtained by
// reflecting the all-ones direction onto d̂.
Frame equiangular_frame(const Vec& direction);

// {d̂, completion}: the first k columns of the reflection sending e_1 to d̂.
Frame completion_frame(const Vec& direction, int k);

// Haar-distributed orthogonal matrix (QR of a Gaussian matrix, signs fixed).
Mat random_orthogonal(int N, std::mt19937_64& rng);

Frame random_frame(int N, int k, std::mt19937_64& rng);

}  // namespace fractrunc
