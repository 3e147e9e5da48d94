#include "sfq/model.hpp"

#include <cmath>
#include <iostream>
#include <stdexcept>

#include <Eigen/Dense>

namespace sfq {

namespace {

Eigen::MatrixXcd to_eigen(const CMatrix& m) {
    const int n = static_cast<int>(m.dim());
    Eigen::MatrixXcd out(n, n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) out(i, j) = m(i, j);
    return out;
}

CMatrix from_eigen(const Eigen::MatrixXcd& m) {
    CMatrix out(static_cast<std::size_t>(m.rows()));
    for (int i = 0; i < m.rows(); ++i)
        for (int j = 0; j < m.cols(); ++j) out(i, j) = m(i, j);
    return out;
}

// Lowering operator in the truncated Fock basis.
Eigen::MatrixXd lowering(int dim) {
    Eigen::MatrixXd a = Eigen::MatrixXd::Zero(dim, dim);
    for (int n = 1; n < dim; ++n) a(n - 1, n) = std::sqrt(static_cast<double>(n));
    return a;
}

}  // namespace

bool CircuitParams::validate() const {
    if (ej_ghz <= 0.0 || ec_ghz <= 0.0)
        throw std::invalid_argument("CircuitParams: energies must be positive");
    if (cc_fF <= 0.0 || cq_fF <= 0.0)
        throw std::invalid_argument("CircuitParams: capacitances must be positive");
    if (ej_ghz / ec_ghz < 20.0) {
        std::cerr << "warning: E_J/E_C = " << ej_ghz / ec_ghz
                  << " below transmon regime (>= 20)\n";
        return false;
    }
    return true;
}

void TransmonParams::validate() const {
    if (f01 < 1.0 || f01 > 20.0)
        throw std::invalid_argument("TransmonParams: f01 outside [1, 20] GHz");
    if (mu_mag <= 0.0)
        throw std::invalid_argument("TransmonParams: mu_mag must be positive");
    if (theta <= 0.0 || theta >= 0.2)
        throw std::invalid_argument("TransmonParams: theta outside (0, 0.2) rad");
    if (dim < 2) throw std::invalid_argument("TransmonParams: dim must be >= 2");
}

TransmonParams derive_effective(const CircuitParams& circ) {
    circ.validate();
    TransmonParams p;
    p.f01 = std::sqrt(8.0 * circ.ej_ghz * circ.ec_ghz);
    p.mu_mag = circ.ec_ghz;
    const double omega01 = kTau * p.f01 * 1e9;  // rad/s
    const double cq = circ.cq_fF * 1e-15;
    p.theta = circ.cc_fF * 1e-15 * kFluxQuantum *
              std::sqrt(omega01 / (2.0 * cq * kHbar));
    p.dim = 10;
    return p;
}

StaticModel build_static(const TransmonParams& p) {
    p.validate();
    const int dim = p.dim;
    const Eigen::MatrixXd a = lowering(dim);
    const Eigen::MatrixXd q = a + a.transpose();
    const Eigen::MatrixXd q4 = q * q * q * q;
    Eigen::MatrixXd num = Eigen::MatrixXd::Zero(dim, dim);
    for (int n = 0; n < dim; ++n) num(n, n) = n;

    const double mu_quartic = kTau * p.mu_mag / 12.0;
    const double gap_target = kTau * p.f01;

    // Calibrate the harmonic coefficient so the dressed 0<->1 gap matches
    // f01. The gap responds to omega with slope ~1, so fixed-point
    // iteration converges in a few rounds.
    double omega = gap_target + 12.0 * mu_quartic;
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es;
    for (int it = 0; it < 60; ++it) {
        es.compute(omega * num - mu_quartic * q4, Eigen::EigenvaluesOnly);
        const double gap = es.eigenvalues()(1) - es.eigenvalues()(0);
        const double err = gap_target - gap;
        omega += err;
        if (std::abs(err) < 1e-13) break;
    }

    const Eigen::MatrixXd h0 = omega * num - mu_quartic * q4;
    es.compute(h0);
    if (es.info() != Eigen::Success)
        throw std::runtime_error("build_static: diagonalization failed");

    StaticModel m;
    m.dim = dim;
    m.bare_omega = omega;
    m.h0 = from_eigen(h0.cast<cx>());
    Eigen::MatrixXcd drive = cx{0.0, 1.0} * (a - a.transpose()).cast<cx>();
    m.drive_op = from_eigen(drive);

    m.eigvals.resize(dim);
    for (int i = 0; i < dim; ++i) m.eigvals[i] = es.eigenvalues()(i);
    for (int i = 0; i + 1 < dim; ++i)
        if (m.eigvals[i + 1] <= m.eigvals[i])
            throw std::runtime_error("build_static: eigenvalues not strictly increasing");

    // Phase fix: largest-magnitude component of each column real positive.
    Eigen::MatrixXd vecs = es.eigenvectors();
    for (int j = 0; j < dim; ++j) {
        int k = 0;
        vecs.col(j).cwiseAbs().maxCoeff(&k);
        if (vecs(k, j) < 0.0) vecs.col(j) = -vecs.col(j);
    }
    m.eigvecs = from_eigen(vecs.cast<cx>());

    // Drive generator in the eigenbasis and the spectral factors of its
    // Hermitian companion i*(a - a^dag).
    const Eigen::MatrixXcd vc = vecs.cast<cx>();
    const Eigen::MatrixXcd gen = vc.adjoint() * (a - a.transpose()).cast<cx>() * vc;
    m.gen_eig = from_eigen(gen);
    m.drive_elem01 = std::abs(gen(0, 1));
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> esg(cx{0.0, 1.0} * gen);
    if (esg.info() != Eigen::Success)
        throw std::runtime_error("build_static: drive generator diagonalization failed");
    m.gen_evals.resize(dim);
    for (int i = 0; i < dim; ++i) m.gen_evals[i] = esg.eigenvalues()(i);
    m.gen_evecs = from_eigen(esg.eigenvectors());
    return m;
}

CMatrix StaticModel::to_eigenbasis(const CMatrix& op) const {
    if (static_cast<int>(op.dim()) != dim)
        throw std::invalid_argument("to_eigenbasis: dimension mismatch");
    return eigvecs.adjoint() * op * eigvecs;
}

CMatrix StaticModel::free_propagator(double t_ns) const {
    CMatrix u(dim);
    for (int i = 0; i < dim; ++i)
        u(i, i) = std::polar(1.0, -eigvals[i] * t_ns);
    return u;
}

CMatrix StaticModel::drive_exponential(double s) const {
    // exp(s G) with G = gen_eig anti-Hermitian: spectral form through
    // iG = W diag(g) W^dag, so exp(s G) = W diag(exp(-i s g)) W^dag.
    CMatrix phase(dim);
    for (int i = 0; i < dim; ++i)
        phase(i, i) = std::polar(1.0, -s * gen_evals[i]);
    return gen_evecs * phase * gen_evecs.adjoint();
}

}  // namespace sfq
