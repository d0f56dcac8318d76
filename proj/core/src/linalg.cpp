#include <clfqp/linalg.hpp>

#include <Eigen/Eigenvalues>

#include <complex>
#include <sstream>

namespace clfqp {

SingularMatrixError::SingularMatrixError(const std::string& what_matrix, double cond)
    : Error([&] {
          std::ostringstream os;
          os << what_matrix << " is numerically singular (cond = " << cond << ")";
          return os.str();
      }()),
      cond_(cond) {}

ConfigError::ConfigError(const std::string& key_path, const std::string& msg)
    : Error("config error at '" + key_path + "': " + msg), key_path_(key_path) {}

double condition_number(const Mat& A) {
    Eigen::JacobiSVD<Mat> svd(A);
    const auto& s = svd.singularValues();
    if (s.size() == 0) return 1.0;
    const double smin = s(s.size() - 1);
    if (smin <= 0.0) return std::numeric_limits<double>::infinity();
    return s(0) / smin;
}

Mat solve_checked(const Mat& A, const Mat& B, const std::string& label) {
    const double cond = condition_number(A);
    if (!(cond < kMaxCondition)) throw SingularMatrixError(label, cond);
    return A.partialPivLu().solve(B);
}

Vec solve_checked(const Mat& A, const Vec& b, const std::string& label) {
    return Vec(solve_checked(A, Mat(b), label));
}

Mat solve_continuous_lyapunov(const Mat& A, const Mat& C) {
    const Eigen::Index n = A.rows();
    require(A.cols() == n && C.rows() == n && C.cols() == n,
            "solve_continuous_lyapunov: shape mismatch");

    Eigen::ComplexSchur<Mat> schur(A);
    if (schur.info() != Eigen::Success) throw Error("Schur decomposition failed");
    const Eigen::MatrixXcd U = schur.matrixU();
    const Eigen::MatrixXcd T = schur.matrixT();

    // Tᴴ Y + Y T = -Uᴴ C U, solved entrywise; both triangular sums only
    // touch entries already computed when sweeping j then i ascending.
    Eigen::MatrixXcd Ct = -U.adjoint() * C * U;
    Eigen::MatrixXcd Y(n, n);
    for (Eigen::Index j = 0; j < n; ++j) {
        for (Eigen::Index i = 0; i < n; ++i) {
            std::complex<double> s = Ct(i, j);
            for (Eigen::Index k = 0; k < i; ++k) s -= std::conj(T(k, i)) * Y(k, j);
            for (Eigen::Index k = 0; k < j; ++k) s -= Y(i, k) * T(k, j);
            const std::complex<double> denom = std::conj(T(i, i)) + T(j, j);
            if (std::abs(denom) < 1e-14)
                throw Error("Lyapunov equation is singular (eigenvalue pair sums to zero)");
            Y(i, j) = s / denom;
        }
    }
    Mat X = (U * Y * U.adjoint()).real();
    return 0.5 * (X + X.transpose());
}

bool is_hurwitz(const Mat& A, double margin) {
    Eigen::EigenSolver<Mat> es(A, /*computeEigenvectors=*/false);
    return (es.eigenvalues().real().array() < -margin).all();
}

}  // namespace clfqp
