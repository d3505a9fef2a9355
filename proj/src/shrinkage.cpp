#include "sensrec/shrinkage.hpp"

#include <Eigen/SVD>

#include <algorithm>
#include <cmath>

namespace sensrec {

namespace {

using ConstMap = Eigen::Map<const Eigen::MatrixXd>;

ConstMap as_eigen(const DenseTensor& m) {
    return {m.data(), static_cast<Eigen::Index>(m.rows()), static_cast<Eigen::Index>(m.cols())};
}

template <class Svd>
void check(const Svd& dec) {
    if (dec.info() != Eigen::Success) throw NumericalError("SVD failed to converge");
    if (!dec.singularValues().allFinite()) throw NumericalError("SVD produced non-finite singular values");
}

}  // namespace

SvdFactors svd(const DenseTensor& m) {
    const auto a = as_eigen(m);
    Eigen::BDCSVD<Eigen::MatrixXd> dec(a, Eigen::ComputeThinU | Eigen::ComputeThinV);
    check(dec);
    const auto p = dec.singularValues().size();
    SvdFactors f{DenseTensor({m.rows(), static_cast<std::size_t>(p)}),
                 std::vector<double>(dec.singularValues().data(), dec.singularValues().data() + p),
                 DenseTensor({static_cast<std::size_t>(p), m.cols()})};
    Eigen::Map<Eigen::MatrixXd>(f.u.data(), a.rows(), p) = dec.matrixU();
    Eigen::Map<Eigen::MatrixXd>(f.vt.data(), p, a.cols()) = dec.matrixV().transpose();
    return f;
}

Shrunk shrink(const DenseTensor& m, double tau) {
    if (!(tau >= 0.0)) throw std::invalid_argument("shrink: tau must be nonnegative");
    const auto a = as_eigen(m);
    Eigen::BDCSVD<Eigen::MatrixXd> dec(a, Eigen::ComputeThinU | Eigen::ComputeThinV);
    check(dec);
    const Eigen::VectorXd& sigma = dec.singularValues();

    Shrunk out{DenseTensor(m.shape())};
    Eigen::Index keep = 0;
    while (keep < sigma.size() && sigma[keep] > tau) ++keep;
    out.rank = static_cast<std::size_t>(keep);
    if (keep == 0) return out;

    const Eigen::VectorXd shrunk = (sigma.head(keep).array() - tau).matrix();
    out.nuclear_norm = shrunk.sum();
    Eigen::Map<Eigen::MatrixXd>(out.value.data(), a.rows(), a.cols()).noalias() =
        dec.matrixU().leftCols(keep) * shrunk.asDiagonal() * dec.matrixV().leftCols(keep).transpose();
    return out;
}

double nuclear_norm(const DenseTensor& m) {
    Eigen::BDCSVD<Eigen::MatrixXd> dec(as_eigen(m));
    check(dec);
    return dec.singularValues().sum();
}

std::size_t numerical_rank(const DenseTensor& m, double rel_tol) {
    Eigen::BDCSVD<Eigen::MatrixXd> dec(as_eigen(m));
    check(dec);
    const auto& s = dec.singularValues();
    if (s.size() == 0 || s[0] == 0.0) return 0;
    return static_cast<std::size_t>((s.array() > rel_tol * s[0]).count());
}

}  // namespace sensrec
