// yield.hpp — singlet yield: closed-form Lorentzian sum and Simpson time
// integration, cross-validated against each other
#pragma once

#include <radpair/dynamics.hpp>

#include <cmath>
#include <stdexcept>
#include <string>
#include <vector>

namespace radpair {

enum class YieldMethod { closed_form, integrated };

struct YieldResult {
    double value = 0.0;
    YieldMethod method = YieldMethod::closed_form;
    std::string config_digest;
    double tail_bound = 0.0;  // integrated method only: e^{-k*horizon}
};

struct YieldOptions {
    // skip Lorentzian terms whose matrix-element product magnitude falls
    // below this; set exact=true to sum everything
    double term_cutoff = 1e-18;
    bool exact = false;
};

namespace detail {

// (S_p)_mn (S_q)_nm as a dense matrix; Hermitian because the spin matrices are.
inline Matrix element_product(const EigenSystem& sys, int p, int q) {
    return sys.spin_eig.component(p).cwiseProduct(sys.spin_eig.component(q).transpose());
}

}  // namespace detail

// Phi_S = 1/4 + (1/N) sum_pq sum_mn sum_sr (S_Ap)_mn (S_Aq)_nm (S_Bp)_sr (S_Bq)_rs
//         * k^2 / (k^2 + (w_Am - w_An + w_Bs - w_Br)^2)
inline YieldResult singlet_yield_closed(const PairSystem& sys, const YieldOptions& opt = {}) {
    require_equal_rates(sys.config, "singlet_yield_closed");
    const double k = sys.config.rates.ks_per_s;
    const double k2 = k * k;
    const Eigen::Index da = sys.a.dim, db = sys.b.dim;

    // flattened to match the column-major layout of element_product: entry
    // i = r*db + s carries weight (S_p)_sr (S_q)_rs and frequency w_s - w_r
    Eigen::ArrayXd dwb(db * db);
    for (Eigen::Index r = 0, i = 0; r < db; ++r)
        for (Eigen::Index s = 0; s < db; ++s, ++i) dwb(i) = sys.b.omega(s) - sys.b.omega(r);

    const double cutoff = opt.exact ? -1.0 : opt.term_cutoff;
    Complex acc = 0.0;
    Eigen::ArrayXd lorentz(db * db);
    for (int p = 0; p < 3; ++p) {
        for (int q = 0; q < 3; ++q) {
            Matrix wa = detail::element_product(sys.a, p, q);
            Matrix wb = detail::element_product(sys.b, p, q);
            Eigen::Map<const Eigen::ArrayXcd> wbf(wb.data(), db * db);
            const double wb_max = wbf.abs().maxCoeff();
            for (Eigen::Index m = 0; m < da; ++m) {
                for (Eigen::Index n = 0; n < da; ++n) {
                    const Complex wmn = wa(m, n);  // (S_p)_mn (S_q)_nm
                    if (std::abs(wmn) * wb_max < cutoff) continue;
                    const double dwa = sys.a.omega(m) - sys.a.omega(n);
                    lorentz = k2 / (k2 + (dwb + dwa).square());
                    acc += wmn * (wbf * lorentz).sum();
                }
            }
        }
    }
    acc /= static_cast<double>(sys.nuclear_space());
    if (std::abs(acc.imag()) > 1e-9) {
        throw std::runtime_error("singlet_yield_closed: imaginary residual " +
                                 std::to_string(acc.imag()) + " exceeds 1e-9");
    }
    YieldResult r;
    r.value = 0.25 + acc.real();
    r.method = YieldMethod::closed_form;
    r.config_digest = config_digest(sys.config);
    if (r.value < 0.25 - 1e-9 || r.value > 1.0 + 1e-9) {
        throw std::runtime_error("singlet_yield_closed: value " + std::to_string(r.value) +
                                 " outside [1/4, 1]");
    }
    return r;
}

inline YieldResult singlet_yield_closed(const RadicalPairConfig& config,
                                        const YieldOptions& opt = {}) {
    return singlet_yield_closed(prepare(config), opt);
}

namespace detail {

// Real cosine-series form of one radical's correlation tensor, for fast
// repeated evaluation: R_pq(t) = dc_pq + sum_i [wr cos(dw_i t) + wi sin(dw_i t)].
struct CorrelationSeries {
    Eigen::ArrayXd dw;        // pair frequencies w_m - w_n, m < n
    Eigen::MatrixXd weights;  // 9 x 2P: [2 Re W | -2 Im W]
    Eigen::Matrix<double, 9, 1> dc;

    explicit CorrelationSeries(const EigenSystem& sys) {
        const Eigen::Index d = sys.dim;
        const Eigen::Index pairs = d * (d - 1) / 2;
        dw.resize(pairs);
        weights.resize(9, 2 * pairs);
        dc.setZero();
        for (int p = 0; p < 3; ++p) {
            for (int q = 0; q < 3; ++q) {
                const int row = 3 * p + q;
                Matrix w = element_product(sys, p, q);
                Eigen::Index i = 0;
                for (Eigen::Index m = 0; m < d; ++m) {
                    dc(row) += w(m, m).real();
                    for (Eigen::Index n = m + 1; n < d; ++n, ++i) {
                        if (row == 0) dw(i) = sys.omega(m) - sys.omega(n);
                        weights(row, i) = 2.0 * w(m, n).real();
                        weights(row, pairs + i) = -2.0 * w(m, n).imag();
                    }
                }
            }
        }
    }

    // fill one column of the trig table from the complex pair phases
    void fill_column(Eigen::MatrixXd& trig, Eigen::Index col,
                     const Eigen::ArrayXcd& phases) const {
        const Eigen::Index pairs = dw.size();
        trig.col(col).head(pairs) = phases.real();
        trig.col(col).tail(pairs) = phases.imag();
    }
};

}  // namespace detail

struct IntegrationPlan {
    double horizon = 0.0;
    double dt = 0.0;
};

// Defaults satisfying the stability/accuracy preconditions.
inline IntegrationPlan suggested_integration_plan(const PairSystem& sys) {
    const double k = sys.config.rates.ks_per_s;
    const double maxdw = sys.max_delta_omega();
    IntegrationPlan plan;
    plan.horizon = 10.0 / k;
    plan.dt = maxdw > 0.0 ? 0.1 / maxdw : plan.horizon / 64.0;
    return plan;
}

// Composite Simpson integration of k * rho_S(t) * e^{-kt} on [0, horizon].
inline YieldResult singlet_yield_integrated(const PairSystem& sys, double horizon, double dt) {
    require_equal_rates(sys.config, "singlet_yield_integrated");
    const double k = sys.config.rates.ks_per_s;
    const double maxdw = sys.max_delta_omega();
    if (horizon < 10.0 / k) {
        throw std::invalid_argument("singlet_yield_integrated: horizon " +
                                    std::to_string(horizon) + " s too short; need >= " +
                                    std::to_string(10.0 / k) + " s (10/k)");
    }
    if (maxdw > 0.0 && dt > 0.1 / maxdw) {
        throw std::invalid_argument("singlet_yield_integrated: dt " + std::to_string(dt) +
                                    " s too coarse; need <= " + std::to_string(0.1 / maxdw) +
                                    " s (0.1/max|dw|)");
    }

    Eigen::Index n = static_cast<Eigen::Index>(std::ceil(horizon / dt));
    if (n % 2 != 0) ++n;
    if (n < 2) n = 2;
    const double h = horizon / static_cast<double>(n);

    detail::CorrelationSeries sa(sys.a), sb(sys.b);
    const Eigen::ArrayXcd step_a =
        (Complex(0.0, -h) * sa.dw.cast<Complex>()).exp();  // e^{-i dw h} matches cos+isin of -dwh
    const Eigen::ArrayXcd step_b = (Complex(0.0, -h) * sb.dw.cast<Complex>()).exp();

    const Eigen::Index batch = 1024;
    Eigen::MatrixXd trig_a(2 * sa.dw.size(), batch), trig_b(2 * sb.dw.size(), batch);
    Eigen::MatrixXd ra(9, batch), rb(9, batch);

    const double invN = 1.0 / static_cast<double>(sys.nuclear_space());
    double total = 0.0;
    Eigen::Index node = 0;
    while (node <= n) {
        const Eigen::Index count = std::min<Eigen::Index>(batch, n + 1 - node);
        // exact phases at the batch start, recurrence within the batch
        Eigen::ArrayXcd pa = (Complex(0.0, -h * static_cast<double>(node)) *
                              sa.dw.cast<Complex>()).exp();
        Eigen::ArrayXcd pb = (Complex(0.0, -h * static_cast<double>(node)) *
                              sb.dw.cast<Complex>()).exp();
        for (Eigen::Index j = 0; j < count; ++j) {
            // conj: table stores cos(dw t), sin(dw t) while p carries e^{-i dw t}
            sa.fill_column(trig_a, j, pa.conjugate());
            sb.fill_column(trig_b, j, pb.conjugate());
            pa *= step_a;
            pb *= step_b;
        }
        ra.leftCols(count).noalias() = sa.weights * trig_a.leftCols(count);
        rb.leftCols(count).noalias() = sb.weights * trig_b.leftCols(count);
        ra.leftCols(count).colwise() += sa.dc;
        rb.leftCols(count).colwise() += sb.dc;
        for (Eigen::Index j = 0; j < count; ++j) {
            const Eigen::Index i = node + j;
            const double t = h * static_cast<double>(i);
            const double rho_s = 0.25 + invN * ra.col(j).dot(rb.col(j));
            const double g = k * rho_s * std::exp(-k * t);
            const double w = (i == 0 || i == n) ? 1.0 : (i % 2 == 1 ? 4.0 : 2.0);
            total += w * g;
        }
        node += count;
    }

    YieldResult r;
    r.value = total * h / 3.0;
    r.method = YieldMethod::integrated;
    r.config_digest = config_digest(sys.config);
    r.tail_bound = std::exp(-k * horizon);
    return r;
}

inline YieldResult singlet_yield_integrated(const RadicalPairConfig& config, double horizon,
                                            double dt) {
    return singlet_yield_integrated(prepare(config), horizon, dt);
}

inline YieldResult singlet_yield_integrated(const PairSystem& sys) {
    IntegrationPlan plan = suggested_integration_plan(sys);
    return singlet_yield_integrated(sys, plan.horizon, plan.dt);
}

}  // namespace radpair
