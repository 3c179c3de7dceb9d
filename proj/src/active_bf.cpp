#include "risec/active_bf.hpp"

#include <cmath>
#include <stdexcept>

#include "risec/numerics.hpp"

namespace risec {

namespace {

Complex dot(const CRowVector& row, const CVector& x) {
    return (row * x).value();
}

} // namespace

double mse_e1(Complex x1, const CVector& w, const CVector& v, const EffectiveChannels& eff) {
    const Complex hw = dot(eff.to_user, w);
    const Complex gv = dot(eff.jam_to_user, v);
    return std::norm(1.0 - std::conj(x1) * hw) + std::norm(x1) * (1.0 + std::norm(gv));
}

double mse_e2(const CVector& x2, const CVector& v, const EffectiveChannels& eff) {
    const CVector u = eff.jam_to_eve * v;
    return std::norm(1.0 - x2.dot(u)) + x2.squaredNorm();
}

CMatrix mse_e3(const CVector& w, const CVector& v, const EffectiveChannels& eff) {
    const CVector u = eff.jam_to_eve * v;
    const CVector m = eff.to_eve * w;
    CMatrix e3 = CMatrix::Identity(u.size(), u.size());
    e3 += u * u.adjoint() + m * m.adjoint();
    return e3;
}

std::pair<Complex, CVector> update_x(const EffectiveChannels& eff, const CVector& w, const CVector& v) {
    const Complex hw = dot(eff.to_user, w);
    const Complex gv = dot(eff.jam_to_user, v);
    const Complex x1 = hw / (1.0 + std::norm(gv) + std::norm(hw));

    const CVector u = eff.jam_to_eve * v;
    const CMatrix cov = CMatrix::Identity(u.size(), u.size()) + u * u.adjoint();
    const CVector x2 = numerics::solve_hermitian(cov, u);
    return {x1, x2};
}

WmmseAuxiliaries update_eps(const EffectiveChannels& eff, const CVector& w, const CVector& v,
                            Complex x1, const CVector& x2) {
    WmmseAuxiliaries aux;
    aux.x1 = x1;
    aux.x2 = x2;
    const double e1 = mse_e1(x1, w, v, eff);
    const double e2 = mse_e2(x2, v, eff);
    if (!(e1 > 0.0) || !(e2 > 0.0) || !std::isfinite(e1) || !std::isfinite(e2))
        throw std::runtime_error("update_eps: MSE values are not positive finite; upstream state corrupt");
    aux.eps1 = 1.0 / e1;
    aux.eps2 = 1.0 / e2;
    aux.eps3 = numerics::inverse_hermitian(mse_e3(w, v, eff));
    return aux;
}

CVector solve_w(const EffectiveChannels& eff, Complex x1, double eps1, const CMatrix& eps3,
                double p_bs) {
    const CRowVector& h = eff.to_user;
    const CMatrix& he = eff.to_eve;
    const Eigen::Index k = h.cols();

    CMatrix a = (eps1 * std::norm(x1)) * (h.adjoint() * h);
    a += he.adjoint() * eps3 * he;
    const CVector b = (eps1 * x1) * h.adjoint();

    auto eig = numerics::hermitian_eig(a);
    const RVector lam = eig.eigenvalues.cwiseMax(0.0); // A is PSD; clip roundoff
    const CVector beta = eig.eigenvectors.adjoint() * b;

    const double b_norm = b.norm();
    const double null_tol = 1e-12 * std::max(lam(0), 1.0);

    auto coeffs_at = [&](double mu) {
        CVector c(k);
        for (Eigen::Index i = 0; i < k; ++i)
            c(i) = beta(i) / (lam(i) + mu);
        return c;
    };
    auto norm_sq_at = [&](double mu) {
        double s = 0.0;
        for (Eigen::Index i = 0; i < k; ++i)
            s += std::norm(beta(i)) / ((lam(i) + mu) * (lam(i) + mu));
        return s;
    };

    // Interior candidate: pseudo-inverse along non-null directions; valid
    // unless b has weight on a null direction (objective then unbounded
    // below without the constraint, so the constraint must be active).
    bool b_in_range = true;
    for (Eigen::Index i = 0; i < k; ++i)
        if (lam(i) <= null_tol && std::abs(beta(i)) > 1e-12 * std::max(b_norm, 1.0))
            b_in_range = false;
    if (b_in_range) {
        CVector c(k);
        for (Eigen::Index i = 0; i < k; ++i)
            c(i) = lam(i) > null_tol ? beta(i) / lam(i) : Complex(0.0, 0.0);
        if (c.squaredNorm() <= p_bs)
            return eig.eigenvectors * c;
    }

    // Boundary: ||w(mu)||^2 is strictly decreasing in mu, and mu_hi makes it
    // <= p_bs since ||w(mu)|| <= ||b||/mu.
    double mu_lo = 0.0;
    double mu_hi = b_norm / std::sqrt(p_bs);
    double mu = mu_hi;
    bool found = false;
    for (int it = 0; it < 200; ++it) {
        mu = 0.5 * (mu_lo + mu_hi);
        const double n = norm_sq_at(mu);
        if (std::abs(n - p_bs) <= 1e-8 * p_bs) {
            found = true;
            break;
        }
        (n > p_bs ? mu_lo : mu_hi) = mu;
    }
    if (!found)
        throw std::runtime_error("solve_w: power bisection failed to meet tolerance in 200 iterations");
    return eig.eigenvectors * coeffs_at(mu);
}

double wmmse_objective(const EffectiveChannels& eff, const CVector& w, const CVector& v,
                       const WmmseAuxiliaries& aux) {
    const double e1 = mse_e1(aux.x1, w, v, eff);
    const double e2 = mse_e2(aux.x2, v, eff);
    const CMatrix e3 = mse_e3(w, v, eff);
    const double n_r = static_cast<double>(e3.rows());
    double f = std::log(aux.eps1) - aux.eps1 * e1 + 1.0;
    f += std::log(aux.eps2) - aux.eps2 * e2 + 1.0;
    f += numerics::log_det_hermitian(aux.eps3) - numerics::trace_product(aux.eps3, e3) + n_r;
    return f;
}

ActiveBcdResult active_bcd(const EffectiveChannels& eff, const CVector& v, double p_bs,
                           double tol, int max_iter, const CVector* w_init) {
    ActiveBcdResult res;
    if (w_init) {
        res.w = *w_init;
    } else {
        const CVector h = eff.to_user.adjoint();
        const double hn = h.norm();
        res.w = hn > 0.0 ? CVector(std::sqrt(p_bs) / hn * h) : CVector(CVector::Zero(eff.to_user.cols()));
    }

    auto [x1, x2] = update_x(eff, res.w, v);
    res.aux = update_eps(eff, res.w, v, x1, x2);
    double prev = wmmse_objective(eff, res.w, v, res.aux);

    for (int t = 0; t < max_iter; ++t) {
        res.w = solve_w(eff, res.aux.x1, res.aux.eps1, res.aux.eps3, p_bs);
        std::tie(x1, x2) = update_x(eff, res.w, v);
        res.aux = update_eps(eff, res.w, v, x1, x2);
        const double cur = wmmse_objective(eff, res.w, v, res.aux);
        res.objective.push_back(cur);
        res.cycles = t + 1;
        if (cur < prev - 1e-7)
            throw std::runtime_error("active_bcd: surrogate objective decreased across a cycle");
        if (std::abs(cur - prev) <= tol * std::max(std::abs(prev), 1e-12)) {
            res.converged = true;
            prev = cur;
            break;
        }
        prev = cur;
    }
    return res;
}

} // namespace risec
