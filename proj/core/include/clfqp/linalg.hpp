#pragma once

#include <Eigen/Dense>
#include <stdexcept>
#include <string>

namespace clfqp {

using Vec = Eigen::VectorXd;
using Mat = Eigen::MatrixXd;
using RowVec = Eigen::RowVectorXd;

class Error : public std::runtime_error {
public:
    explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

/// Argument/dimension violations caught at API boundaries.
class DimensionError : public Error {
public:
    explicit DimensionError(const std::string& msg) : Error(msg) {}
};

/// NaN/Inf produced by a model callback.
class ModelEvalError : public Error {
public:
    explicit ModelEvalError(const std::string& msg) : Error(msg) {}
};

/// A matrix inversion exceeded the condition-number ceiling.
class SingularMatrixError : public Error {
public:
    SingularMatrixError(const std::string& what_matrix, double cond);
    double condition() const { return cond_; }

private:
    double cond_;
};

class ConfigError : public Error {
public:
    ConfigError(const std::string& key_path, const std::string& msg);
    const std::string& key_path() const { return key_path_; }

private:
    std::string key_path_;
};

/// Condition ceiling for all dense inversions in the library. Anything
/// above this is treated as numerically singular and raised as an error
/// instead of producing garbage torques.
inline constexpr double kMaxCondition = 1e12;

/// 2-norm condition number via SVD (matrices here are tiny).
double condition_number(const Mat& A);

/// Solve A x = b, throwing SingularMatrixError (with the measured
/// condition number) when cond(A) > kMaxCondition.
Vec solve_checked(const Mat& A, const Vec& b, const std::string& label);
Mat solve_checked(const Mat& A, const Mat& B, const std::string& label);

/// Solve the continuous Lyapunov equation  Aᵀ X + X A + C = 0  for
/// Hurwitz A and symmetric C, by complex Schur reduction and triangular
/// back-substitution. Result is symmetrized.
Mat solve_continuous_lyapunov(const Mat& A, const Mat& C);

bool is_hurwitz(const Mat& A, double margin = 0.0);

inline void require(bool cond, const std::string& msg) {
    if (!cond) throw DimensionError(msg);
}

inline void check_finite(const Vec& v, const std::string& label) {
    if (!v.allFinite()) throw ModelEvalError("non-finite values in " + label);
}

inline void check_finite(const Mat& m, const std::string& label) {
    if (!m.allFinite()) throw ModelEvalError("non-finite values in " + label);
}

}  // namespace clfqp
