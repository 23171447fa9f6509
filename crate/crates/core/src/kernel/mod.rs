//! Closed-form evaluation of every law of the stationary quadratic CB
//! population: the branching mechanism and its cumulant semigroup, the
//! excursion extinction rate `c` and its integrals, stationary population
//! and ancestor-count transforms, excursion slice laws, genealogical
//! tree-length moments, and the limit tree-length law (`phi`, its Laplace
//! transform, and the lag covariance).
//!
//! Everything here is a pure function of its arguments in binary64; the
//! documented tolerances assume that. Only `phi` and `w_covariance` use
//! numerical quadrature, both with controlled absolute error.

mod dilog;
pub mod quad;

pub use dilog::dilogarithm;
use dilog::dilog_complement;

use crate::params::{DomainError, ModelParams};
use std::f64::consts::PI;

type Res = Result<f64, DomainError>;

fn require(cond: bool, quantity: &'static str, arg: f64, reason: &'static str) -> Result<(), DomainError> {
    if cond {
        Ok(())
    } else {
        Err(DomainError::new(quantity, arg, reason))
    }
}

/// Branching mechanism `psi(lambda) = beta lambda^2 + 2 beta theta lambda`.
pub fn branching_mechanism(p: &ModelParams, lambda: f64) -> Res {
    require(lambda >= 0.0, "branching_mechanism", lambda, "lambda must be >= 0")?;
    Ok(p.beta() * lambda * lambda + p.decay_rate() * lambda)
}

/// Cumulant `u(lambda, t)` of the CB semigroup under the excursion measure:
/// `2 theta lambda / ((2 theta + lambda) e^{2 beta theta t} - lambda)`.
/// Returns `lambda` exactly at `t = 0`.
pub fn cumulant(p: &ModelParams, lambda: f64, t: f64) -> Res {
    require(lambda >= 0.0, "cumulant", lambda, "lambda must be >= 0")?;
    require(t >= 0.0, "cumulant", t, "t must be >= 0")?;
    if t == 0.0 {
        return Ok(lambda);
    }
    let two_theta = 2.0 * p.theta();
    let at = p.decay_rate() * t;
    // denominator rewritten as 2 theta e^{at} + lambda (e^{at} - 1): no cancellation
    Ok(two_theta * lambda / (two_theta * at.exp() + lambda * at.exp_m1()))
}

/// Excursion survival rate `c(t) = 2 theta / (e^{2 beta theta t} - 1)`,
/// the mass of excursions living longer than `t`.
pub fn extinction_rate(p: &ModelParams, t: f64) -> Res {
    require(t > 0.0, "extinction_rate", t, "t must be > 0 (c diverges at 0+)")?;
    Ok(2.0 * p.theta() / (p.decay_rate() * t).exp_m1())
}

/// Inverse of `c`: the unique `t` with `c(t) = y`.
pub fn extinction_rate_inverse(p: &ModelParams, y: f64) -> Res {
    require(y > 0.0, "extinction_rate_inverse", y, "y must be > 0")?;
    Ok((2.0 * p.theta() / y).ln_1p() / p.decay_rate())
}

/// Derivative `c'(t) = -4 beta theta^2 e^{2 beta theta t} / (e^{2 beta theta t} - 1)^2`;
/// its absolute value is the lifetime density of the lineage-tree intensity.
pub fn extinction_rate_derivative(p: &ModelParams, t: f64) -> Res {
    require(t > 0.0, "extinction_rate_derivative", t, "t must be > 0")?;
    let at = p.decay_rate() * t;
    let em = at.exp_m1();
    Ok(-4.0 * p.beta() * p.theta() * p.theta() * at.exp() / (em * em))
}

/// `∫_0^t u(lambda, r) dr = log(1 + lambda (1 - e^{-2 beta theta t}) / (2 theta)) / beta`.
pub fn band_cumulant_integral(p: &ModelParams, lambda: f64, t: f64) -> Res {
    require(lambda >= 0.0, "band_cumulant_integral", lambda, "lambda must be >= 0")?;
    require(t > 0.0, "band_cumulant_integral", t, "t must be > 0")?;
    let one_minus = -(-p.decay_rate() * t).exp_m1();
    Ok((lambda * one_minus / (2.0 * p.theta())).ln_1p() / p.beta())
}

/// `∫_s^∞ c(r) dr = -log(1 - e^{-2 beta theta s}) / beta`.
pub fn tail_rate_integral(p: &ModelParams, s: f64) -> Res {
    require(s > 0.0, "tail_rate_integral", s, "s must be > 0")?;
    Ok(-(-(-p.decay_rate() * s).exp_m1()).ln() / p.beta())
}

/// `∫_t^s c(r) dr` for `0 < t <= s`, in closed logarithmic form.
pub fn band_rate_integral(p: &ModelParams, t: f64, s: f64) -> Res {
    require(t > 0.0, "band_rate_integral", t, "t must be > 0")?;
    require(s >= t, "band_rate_integral", s, "s must be >= t")?;
    let a = p.decay_rate();
    Ok(((-(-a * s).exp_m1()).ln() - (-(-a * t).exp_m1()).ln()) / p.beta())
}

/// Mean excursion mass `N[Y_t] = e^{-2 beta theta t}`.
pub fn excursion_mean(p: &ModelParams, t: f64) -> Res {
    require(t > 0.0, "excursion_mean", t, "t must be > 0")?;
    Ok((-p.decay_rate() * t).exp())
}

/// `N[e^{-lambda Y_t} 1{zeta > t}] = c(t) - u(lambda, t)`, evaluated in the
/// cancellation-free form `4 theta^2 e^{at} / ((e^{at}-1)(2 theta e^{at} + lambda(e^{at}-1)))`.
pub fn survival_laplace(p: &ModelParams, lambda: f64, t: f64) -> Res {
    require(lambda >= 0.0, "survival_laplace", lambda, "lambda must be >= 0")?;
    require(t > 0.0, "survival_laplace", t, "t must be > 0")?;
    let th = p.theta();
    let at = p.decay_rate() * t;
    let em = at.exp_m1();
    Ok(4.0 * th * th * at.exp() / (em * (2.0 * th * at.exp() + lambda * em)))
}

/// `N[Y_s 1{Y_{s+t} = 0}] = psi(c(s+t)) / psi(c(t))`.
pub fn extinct_weighted_mean(p: &ModelParams, s: f64, t: f64) -> Res {
    require(s > 0.0, "extinct_weighted_mean", s, "s must be > 0")?;
    require(t > 0.0, "extinct_weighted_mean", t, "t must be > 0")?;
    let num = branching_mechanism(p, extinction_rate(p, s + t)?)?;
    let den = branching_mechanism(p, extinction_rate(p, t)?)?;
    Ok(num / den)
}

/// Stationary population Laplace transform `E[e^{-lambda Z}] = (1 + lambda/(2 theta))^{-2}`.
pub fn pop_laplace(p: &ModelParams, lambda: f64) -> Res {
    require(lambda >= 0.0, "pop_laplace", lambda, "lambda must be >= 0")?;
    Ok((1.0 + lambda / (2.0 * p.theta())).powi(-2))
}

/// `E[Z] = 1/theta`.
pub fn pop_mean(p: &ModelParams) -> f64 {
    1.0 / p.theta()
}

/// `E[Z^2] = 3/(2 theta^2)`.
pub fn pop_second_moment(p: &ModelParams) -> f64 {
    1.5 / (p.theta() * p.theta())
}

/// Raw product moment `E[Z_0 Z_s] = (2 + e^{-2 beta theta s}) / (2 theta^2)`.
pub fn pop_autocovariance_raw(p: &ModelParams, s: f64) -> Res {
    require(s >= 0.0, "pop_autocovariance_raw", s, "s must be >= 0")?;
    Ok((2.0 + (-p.decay_rate() * s).exp()) / (2.0 * p.theta() * p.theta()))
}

/// TMRCA distribution function `P(A <= t) = (1 - e^{-2 beta theta t})^2`:
/// the maximum of two independent exponentials of mean `1/(2 beta theta)`.
pub fn tmrca_cdf(p: &ModelParams, t: f64) -> Res {
    require(t > 0.0, "tmrca_cdf", t, "t must be > 0")?;
    let one_minus = -(-p.decay_rate() * t).exp_m1();
    Ok(one_minus * one_minus)
}

/// `E[A] = 3/(4 beta theta)`.
pub fn tmrca_mean(p: &ModelParams) -> f64 {
    0.75 / (p.beta() * p.theta())
}

/// Mean ancestor count `E[M_{-t}] = c(t)/theta`.
pub fn ancestors_mean(p: &ModelParams, t: f64) -> Res {
    Ok(extinction_rate(p, t)? / p.theta())
}

/// `E[M_{-t}^2] = (c(t)/theta)(1 + 3 c(t) / (2 theta))`.
pub fn ancestors_second_moment(p: &ModelParams, t: f64) -> Res {
    let c = extinction_rate(p, t)?;
    Ok(c / p.theta() * (1.0 + 1.5 * c / p.theta()))
}

/// `E[e^{-lambda M_{-r}}] = (1 + c(r)(1 - e^{-lambda})/(2 theta))^{-2}`.
pub fn ancestors_laplace(p: &ModelParams, lambda: f64, r: f64) -> Res {
    require(lambda >= 0.0, "ancestors_laplace", lambda, "lambda must be >= 0")?;
    let c = extinction_rate(p, r)?;
    Ok((1.0 + c * (-(-lambda).exp_m1()) / (2.0 * p.theta())).powi(-2))
}

/// Joint transform `E[e^{-lambda M_0^r - mu M_0^t}]` of the forward ancestor
/// counts at the two levels `r > t > 0`:
/// `(1 + c(t)(1-e^{-mu})/(2 theta) + c(r)(1-e^{-lambda}) e^{-mu}/(2 theta))^{-2}`.
pub fn joint_forward_laplace(p: &ModelParams, lambda: f64, mu: f64, t: f64, r: f64) -> Res {
    require(lambda >= 0.0, "joint_forward_laplace", lambda, "lambda must be >= 0")?;
    require(mu >= 0.0, "joint_forward_laplace", mu, "mu must be >= 0")?;
    require(t > 0.0, "joint_forward_laplace", t, "t must be > 0")?;
    require(r > t, "joint_forward_laplace", r, "the deeper level r must exceed t")?;
    let two_theta = 2.0 * p.theta();
    let ct = extinction_rate(p, t)?;
    let cr = extinction_rate(p, r)?;
    let inner =
        1.0 + ct / two_theta * (-(-mu).exp_m1()) + cr / two_theta * (-(-lambda).exp_m1()) * (-mu).exp();
    Ok(inner.powi(-2))
}

/// Conditional mean `E[M_{-t} | M_{-r} = m]` for `r >= t > 0`:
/// `(c(t)/theta)(1 - e^{-2 beta theta (r-t)}) + (c(t)/c(r)) e^{-2 beta theta (r-t)} m`.
pub fn cond_mean(p: &ModelParams, t: f64, r: f64, m: f64) -> Res {
    require(t > 0.0, "cond_mean", t, "t must be > 0")?;
    require(r >= t, "cond_mean", r, "need r >= t")?;
    require(m >= 0.0, "cond_mean", m, "count must be >= 0")?;
    let ct = extinction_rate(p, t)?;
    let cr = extinction_rate(p, r)?;
    let decay = (-p.decay_rate() * (r - t)).exp();
    Ok(ct / p.theta() * (1.0 - decay) + ct / cr * decay * m)
}

/// Product moment `E[M_{-t} M_{-r}] = (c(r)/theta)(1 + 3 c(t)/(2 theta))` for `r >= t > 0`.
pub fn cross_moment(p: &ModelParams, t: f64, r: f64) -> Res {
    require(t > 0.0, "cross_moment", t, "t must be > 0")?;
    require(r >= t, "cross_moment", r, "need r >= t")?;
    let ct = extinction_rate(p, t)?;
    let cr = extinction_rate(p, r)?;
    Ok(cr / p.theta() * (1.0 + 1.5 * ct / p.theta()))
}

/// Two-observation product moment `E[M_{-r} M_{s-q}^s]` with observation
/// times `0` and `s >= 0` and depths `r` and `q > s`. The closed form
/// branches on whether the second window reaches past the first
/// (`q >= s + r`) or not; both branches agree at `q = s + r`.
pub fn two_time_cross_moment(p: &ModelParams, r: f64, s: f64, q: f64) -> Res {
    require(r > 0.0, "two_time_cross_moment", r, "r must be > 0")?;
    require(s >= 0.0, "two_time_cross_moment", s, "s must be >= 0")?;
    require(q > s, "two_time_cross_moment", q, "need q > s")?;
    let th = p.theta();
    let cr = extinction_rate(p, r)?;
    let cq = extinction_rate(p, q)?;
    let cqs = extinction_rate(p, q - s)?;
    if s + r >= q {
        Ok(cr / th * cq / th * (th / cqs + 1.5))
    } else {
        let crs = extinction_rate(p, r + s)?;
        Ok(cr / th * cq / th * (th / cqs * cq / crs + 1.5))
    }
}

/// Excursion slice transform `N[1 - e^{-lambda R_v^{v+q}}] = u(c(q)(1 - e^{-lambda}), v)`.
pub fn slice_laplace(p: &ModelParams, lambda: f64, v: f64, q: f64) -> Res {
    require(lambda >= 0.0, "slice_laplace", lambda, "lambda must be >= 0")?;
    require(v > 0.0, "slice_laplace", v, "v must be > 0")?;
    let cq = extinction_rate(p, q)?;
    cumulant(p, cq * (-(-lambda).exp_m1()), v)
}

/// `N[R_v^{v+q}] = c(q) e^{-2 beta theta v}`.
pub fn slice_mean(p: &ModelParams, v: f64, q: f64) -> Res {
    require(v > 0.0, "slice_mean", v, "v must be > 0")?;
    Ok(extinction_rate(p, q)? * (-p.decay_rate() * v).exp())
}

/// `N[R_v^{v+q} | zeta > v + q] = (c(q)/c(v+q)) e^{-2 beta theta v}`.
pub fn slice_mean_conditioned(p: &ModelParams, v: f64, q: f64) -> Res {
    require(v > 0.0, "slice_mean_conditioned", v, "v must be > 0")?;
    Ok(extinction_rate(p, q)? / extinction_rate(p, v + q)? * (-p.decay_rate() * v).exp())
}

/// Per-ancestor thinning factor of the slice count between two depths
/// (`q > r > 0`): `h(lambda) = e^{-lambda}(1 - u(c(q-r)(1 - e^{-lambda}), r)/c(r))`.
pub fn thinning_factor(p: &ModelParams, lambda: f64, q: f64, r: f64) -> Res {
    require(lambda >= 0.0, "thinning_factor", lambda, "lambda must be >= 0")?;
    require(r > 0.0, "thinning_factor", r, "r must be > 0")?;
    require(q > r, "thinning_factor", q, "need q > r")?;
    let inner = cumulant(p, extinction_rate(p, q - r)? * (-(-lambda).exp_m1()), r)?;
    Ok((-lambda).exp() * (1.0 - inner / extinction_rate(p, r)?))
}

fn kappa1(p: &ModelParams, lambda: f64, q: f64, s: f64) -> Res {
    let w = (-lambda).exp();
    Ok((-(-lambda).exp_m1()) * extinction_rate(p, q)? + w * extinction_rate(p, q + s)?)
}

/// `N[(1 - e^{-lambda R_v^{v+q}}) 1{zeta < v+q+s}] = u(kappa_1, v) - c(v+q+s)`
/// with `kappa_1 = (1 - e^{-lambda}) c(q) + e^{-lambda} c(q+s)`.
pub fn restricted_laplace_1(p: &ModelParams, lambda: f64, v: f64, q: f64, s: f64) -> Res {
    require(lambda >= 0.0, "restricted_laplace_1", lambda, "lambda must be >= 0")?;
    require(v > 0.0, "restricted_laplace_1", v, "v must be > 0")?;
    require(q > 0.0, "restricted_laplace_1", q, "q must be > 0")?;
    require(s > 0.0, "restricted_laplace_1", s, "s must be > 0")?;
    Ok(cumulant(p, kappa1(p, lambda, q, s)?, v)? - extinction_rate(p, v + q + s)?)
}

/// Two-depth restricted transform with the second count at the shallower
/// slice `v - v'` and upper level `v + q - v'` (`0 < v' < q`):
/// `u(kappa_2, v) - c(v+q+s)`, `kappa_2 = (1-e^{-mu}) c(q-v') + e^{-mu} kappa_1`.
pub fn restricted_laplace_2(p: &ModelParams, lambda: f64, mu: f64, v: f64, vp: f64, q: f64, s: f64) -> Res {
    require(lambda >= 0.0, "restricted_laplace_2", lambda, "lambda must be >= 0")?;
    require(mu >= 0.0, "restricted_laplace_2", mu, "mu must be >= 0")?;
    require(v > 0.0, "restricted_laplace_2", v, "v must be > 0")?;
    require(vp > 0.0 && vp < q, "restricted_laplace_2", vp, "need 0 < v' < q")?;
    require(s > 0.0, "restricted_laplace_2", s, "s must be > 0")?;
    let k1 = kappa1(p, lambda, q, s)?;
    let k2 = (-(-mu).exp_m1()) * extinction_rate(p, q - vp)? + (-mu).exp() * k1;
    Ok(cumulant(p, k2, v)? - extinction_rate(p, v + q + s)?)
}

/// Two-depth restricted transform with both counts at the same upper level
/// (`0 < v' < v`): `u(kappa_3, v - v') - c(v+q+s)`,
/// `kappa_3 = (1-e^{-mu}) c(q+v') + e^{-mu} u(kappa_1, v')`.
pub fn restricted_laplace_3(p: &ModelParams, lambda: f64, mu: f64, v: f64, vp: f64, q: f64, s: f64) -> Res {
    require(lambda >= 0.0, "restricted_laplace_3", lambda, "lambda must be >= 0")?;
    require(mu >= 0.0, "restricted_laplace_3", mu, "mu must be >= 0")?;
    require(vp > 0.0 && vp < v, "restricted_laplace_3", vp, "need 0 < v' < v")?;
    require(q > 0.0, "restricted_laplace_3", q, "q must be > 0")?;
    require(s > 0.0, "restricted_laplace_3", s, "s must be > 0")?;
    let k1 = kappa1(p, lambda, q, s)?;
    let k3 = (-(-mu).exp_m1()) * extinction_rate(p, q + vp)? + (-mu).exp() * cumulant(p, k1, vp)?;
    Ok(cumulant(p, k3, v - vp)? - extinction_rate(p, v + q + s)?)
}

/// `N[R_v^{v+q} 1{zeta < v+q+s}] = (c(q) - c(q+s)) e^{2 beta theta v} (c(v+q+s)/c(q+s))^2`.
pub fn restricted_mean(p: &ModelParams, v: f64, q: f64, s: f64) -> Res {
    require(v > 0.0, "restricted_mean", v, "v must be > 0")?;
    require(q > 0.0, "restricted_mean", q, "q must be > 0")?;
    require(s > 0.0, "restricted_mean", s, "s must be > 0")?;
    let ratio = extinction_rate(p, v + q + s)? / extinction_rate(p, q + s)?;
    Ok((extinction_rate(p, q)? - extinction_rate(p, q + s)?) * (p.decay_rate() * v).exp() * ratio * ratio)
}

/// Mean truncated tree length `E[L_eps] = -log(1 - e^{-2 beta theta eps}) / (beta theta)`.
pub fn length_mean(p: &ModelParams, eps: f64) -> Res {
    require(eps > 0.0, "length_mean", eps, "eps must be > 0")?;
    Ok(-(-(-p.decay_rate() * eps).exp_m1()).ln() / (p.beta() * p.theta()))
}

/// Second moment of the compensated-length increment between truncation
/// levels `0 < eps < eta`:
/// `[Li2(1-e^{-2bt eta}) - Li2(1-e^{-2bt eps})]/(bt)^2 + (2 eps/(bt)) log((1-e^{-2bt eps})/(1-e^{-2bt eta}))`.
pub fn increment_second_moment(p: &ModelParams, eps: f64, eta: f64) -> Res {
    require(eps > 0.0, "increment_second_moment", eps, "eps must be > 0")?;
    require(eta >= eps, "increment_second_moment", eta, "need eta >= eps")?;
    let bt = p.beta() * p.theta();
    let a = p.decay_rate();
    let li = (dilog_complement((-a * eta).exp()) - dilog_complement((-a * eps).exp())) / (bt * bt);
    let logs = (-(-a * eps).exp_m1()).ln() - (-(-a * eta).exp_m1()).ln();
    Ok(li + 2.0 * eps / bt * logs)
}

/// L2 truncation error of the compensated length:
/// `E[(L~_eta - W)^2] = Li2(1 - e^{-2 beta theta eta})/(beta theta)^2`, which
/// is bounded by `4 eta / (beta theta)`.
pub fn truncation_error_second_moment(p: &ModelParams, eta: f64) -> Res {
    require(eta > 0.0, "truncation_error_second_moment", eta, "eta must be > 0")?;
    let bt = p.beta() * p.theta();
    Ok(dilog_complement((-p.decay_rate() * eta).exp()) / (bt * bt))
}

/// Second moment of the compensated truncated length itself:
/// `E[L~_eps^2] = [pi^2/6 - Li2(1-e^{-2bt eps})]/(bt)^2 + (2 eps/(bt)) log(1-e^{-2bt eps})`.
pub fn compensated_length_second_moment(p: &ModelParams, eps: f64) -> Res {
    require(eps > 0.0, "compensated_length_second_moment", eps, "eps must be > 0")?;
    let bt = p.beta() * p.theta();
    let a = p.decay_rate();
    let li = (PI * PI / 6.0 - dilog_complement((-a * eps).exp())) / (bt * bt);
    Ok(li + 2.0 * eps / bt * (-(-a * eps).exp_m1()).ln())
}

/// Raw second moment of the truncated length:
/// `E[L_eps^2] = E[L~_eps^2] + (3/(2 bt^2)) log(1-e^{-2bt eps})^2`.
pub fn length_second_moment(p: &ModelParams, eps: f64) -> Res {
    let bt = p.beta() * p.theta();
    let lg = (-(-p.decay_rate() * eps).exp_m1()).ln();
    Ok(compensated_length_second_moment(p, eps)? + 1.5 / (bt * bt) * lg * lg)
}

/// Variance of the truncated length, `E[L_eps^2] - E[L_eps]^2`.
pub fn length_variance(p: &ModelParams, eps: f64) -> Res {
    let bt = p.beta() * p.theta();
    let lg = (-(-p.decay_rate() * eps).exp_m1()).ln();
    Ok(compensated_length_second_moment(p, eps)? + 0.5 / (bt * bt) * lg * lg)
}

/// Laplace exponent of the limit tree length given the population size:
/// `phi(lambda) = -lambda ∫_0^1 (1 - v^lambda)/(1 - v) dv`, absolute error
/// below 1e-10. At integers `phi(n) = -n H_n`.
///
/// The integrand has a removable singularity at `v = 1` (value `lambda`);
/// a first-order expansion takes over within 1e-9 of the endpoint.
pub fn phi(lambda: f64) -> Res {
    require(lambda > 0.0 && lambda.is_finite(), "phi", lambda, "lambda must be finite and > 0")?;
    let integrand = move |v: f64| {
        let w = 1.0 - v;
        if w == 0.0 {
            lambda
        } else {
            // 1 - v^lambda = -expm1(lambda log1p(-w)), exact down to w -> 0
            -(lambda * (-w).ln_1p()).exp_m1() / w
        }
    };
    let r = quad::integrate(integrand, 0.0, 1.0, 1e-12, 1e-13);
    Ok(-lambda * r.value)
}

/// Conditional Laplace transform of the limit tree length,
/// `E[e^{-2 beta theta lambda W} | Z = z/(2 theta)] = e^{-z phi(lambda)}`.
pub fn w_laplace_conditional(lambda: f64, z: f64) -> Res {
    require(z >= 0.0, "w_laplace_conditional", z, "z must be >= 0")?;
    if lambda == 0.0 {
        return Ok(1.0);
    }
    Ok((-z * phi(lambda)?).exp())
}

/// Unconditional transform `E[e^{-2 beta theta lambda W}] = (1 + phi(lambda))^{-2}`,
/// finite only for `lambda` in `[0, 1)`: `1 + phi(1) = 0` and the transform
/// diverges from `lambda = 1` on.
pub fn w_laplace(lambda: f64) -> Res {
    require(
        (0.0..1.0).contains(&lambda),
        "w_laplace",
        lambda,
        "transform diverges for lambda >= 1; need 0 <= lambda < 1",
    )?;
    if lambda == 0.0 {
        return Ok(1.0);
    }
    Ok((1.0 + phi(lambda)?).powi(-2))
}

/// Stationary second moment of the limit tree length,
/// `E[W^2] = pi^2 / (6 beta^2 theta^2)`.
pub fn w_second_moment(p: &ModelParams) -> f64 {
    PI * PI / 6.0 / (p.beta() * p.theta()).powi(2)
}

/// Lag covariance `E[W_0 W_s]` of the limit tree-length process.
///
/// The double integral of the closed form is reduced to a single integral
/// through the antiderivative `∫ dq/(e^{aq}-1) = log(1 - e^{-aq})/a`, and
/// the remaining integral over the first lag is evaluated by adaptive
/// quadrature to absolute error below 1e-8. The integrand decays like
/// `e^{-a r}`, so a finite upper limit with tail below 1e-13 suffices.
pub fn w_covariance(p: &ModelParams, s: f64) -> Res {
    require(s > 0.0 && s.is_finite(), "w_covariance", s, "s must be finite and > 0")?;
    let a = p.decay_rate();
    let bt2 = (p.beta() * p.theta()).powi(2);
    let as_ = a * s;
    if as_ > 700.0 {
        // decorrelated beyond double-precision resolution
        return Ok(0.0);
    }
    let one_minus = -(-as_).exp_m1(); // 1 - e^{-as}, full precision
    let ratio = (-as_).exp() / one_minus;

    // inner closed form: log((1-e^{-a(s+r)})/(1-e^{-as})) = log1p(e^{-as}(1-e^{-ar})/(1-e^{-as}))
    let integrand = move |r: f64| {
        let num = (ratio * -(-a * r).exp_m1()).ln_1p();
        num / (a * r).exp_m1()
    };
    let scale = ratio.ln_1p().max(1.0);
    let r_max = (scale.ln() + 34.5) / a;
    let integral = quad::integrate(integrand, 0.0, r_max, 1e-13, 1e-11);

    // Li2(e^{-as}): series side takes the exact small exponential, the
    // reflection side the exact complement
    let x = (-as_).exp();
    let li2 = if x <= 0.5 { dilogarithm(x).expect("x in [0,1]") } else { dilog_complement(one_minus) };
    let first = (PI * PI / 6.0 * x + as_.exp() * li2) / (2.0 * bt2);
    Ok(first - 2.0 * (as_.exp() - x) * integral.value / a)
}

/// Mean-square increment of the limit tree length,
/// `E[(W_s - W_0)^2] = 2 (E[W^2] - E[W_0 W_s])`.
pub fn w_increment_second_moment(p: &ModelParams, s: f64) -> Res {
    Ok(2.0 * (w_second_moment(p) - w_covariance(p, s)?))
}

/// Descendant-free weight of the ancestor path over `(t, ∞)`, reduced to its
/// indicator form: `(2 theta / (2 theta + c(t)))^2`, which coincides with the
/// TMRCA distribution function and with `E[e^{-c(t) Z}]`.
pub fn graft_identity(p: &ModelParams, t: f64) -> Res {
    let c = extinction_rate(p, t)?;
    Ok((1.0 + c / (2.0 * p.theta())).powi(-2))
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::{assert_abs_diff_eq, assert_relative_eq};

    fn unit() -> ModelParams {
        ModelParams::unit()
    }

    // -- frozen example values (30-digit evaluations of the closed forms) --

    #[test]
    fn branching_mechanism_examples() {
        let p = unit();
        assert_eq!(branching_mechanism(&p, 0.0).unwrap(), 0.0);
        assert_eq!(branching_mechanism(&p, 1.0).unwrap(), 3.0);
        let q = ModelParams::new(2.0, 0.5).unwrap();
        assert_eq!(branching_mechanism(&q, 1.0).unwrap(), 4.0);
        assert!(branching_mechanism(&p, -0.5).is_err());
    }

    #[test]
    fn cumulant_examples() {
        let p = unit();
        assert_eq!(cumulant(&p, 5.0, 0.0).unwrap(), 5.0);
        assert_abs_diff_eq!(
            cumulant(&p, 1.0, 0.5).unwrap(),
            0.279_530_844_388_958_73,
            epsilon = 1e-15
        );
        assert!(cumulant(&p, 1.0, 700.0).unwrap() < 1e-300);
        assert!(cumulant(&p, -1.0, 1.0).is_err());
        assert!(cumulant(&p, 1.0, -1.0).is_err());
    }

    #[test]
    fn extinction_rate_family() {
        let p = unit();
        assert_abs_diff_eq!(
            extinction_rate(&p, 0.5).unwrap(),
            1.163_953_413_738_652_8,
            epsilon = 1e-15
        );
        assert_abs_diff_eq!(
            extinction_rate_inverse(&p, 2.0).unwrap(),
            0.346_573_590_279_972_65,
            epsilon = 1e-15
        );
        // round trip
        for &y in &[0.01, 0.5, 3.0, 250.0] {
            let t = extinction_rate_inverse(&p, y).unwrap();
            assert_relative_eq!(extinction_rate(&p, t).unwrap(), y, max_relative = 1e-12);
        }
        // c'(t) from finite differences
        let h = 1e-6;
        let fd = (extinction_rate(&p, 0.5 + h).unwrap() - extinction_rate(&p, 0.5 - h).unwrap()) / (2.0 * h);
        assert_relative_eq!(extinction_rate_derivative(&p, 0.5).unwrap(), fd, max_relative = 1e-8);
        assert!(extinction_rate(&p, 0.0).is_err());
    }

    #[test]
    fn rate_consistency_identity() {
        // u(c(s), t) = c(t+s)
        let p = ModelParams::new(0.7, 1.3).unwrap();
        let c_half = extinction_rate(&p, 0.5).unwrap();
        assert_relative_eq!(
            cumulant(&p, c_half, 0.5).unwrap(),
            extinction_rate(&p, 1.0).unwrap(),
            max_relative = 1e-13
        );
    }

    #[test]
    fn cumulant_integrals() {
        let p = unit();
        assert_abs_diff_eq!(
            band_cumulant_integral(&p, 1.0, 0.5).unwrap(),
            0.274_642_636_880_155_04,
            epsilon = 1e-15
        );
        assert_abs_diff_eq!(
            tail_rate_integral(&p, 0.5).unwrap(),
            0.458_675_145_387_081_89,
            epsilon = 1e-15
        );
        assert_eq!(band_rate_integral(&p, 0.7, 0.7).unwrap(), 0.0);
        // band + tail consistency: int_t^s + int_s^inf = int_t^inf
        let total = band_rate_integral(&p, 0.25, 2.0).unwrap() + tail_rate_integral(&p, 2.0).unwrap();
        assert_relative_eq!(total, tail_rate_integral(&p, 0.25).unwrap(), max_relative = 1e-13);
        assert!(tail_rate_integral(&p, 0.0).is_err());
        assert!(band_rate_integral(&p, 0.5, 0.2).is_err());
    }

    #[test]
    fn excursion_laws() {
        let p = unit();
        assert_abs_diff_eq!(
            excursion_mean(&p, 0.5).unwrap(),
            0.367_879_441_171_442_32,
            epsilon = 1e-15
        );
        assert_abs_diff_eq!(
            survival_laplace(&p, 1.0, 0.5).unwrap(),
            0.884_422_569_349_694_12,
            epsilon = 1e-15
        );
        // definition route: c(t) - u(lambda, t)
        let direct = extinction_rate(&p, 0.5).unwrap() - cumulant(&p, 1.0, 0.5).unwrap();
        assert_relative_eq!(survival_laplace(&p, 1.0, 0.5).unwrap(), direct, max_relative = 1e-12);
        assert_abs_diff_eq!(
            extinct_weighted_mean(&p, 0.5, 0.5).unwrap(),
            0.196_611_933_241_481_85,
            epsilon = 1e-15
        );
    }

    #[test]
    fn extinct_weighted_mean_two_forms_agree() {
        // psi-ratio form versus e^{2 beta theta s} (c(s+t)/c(t))^2
        for &(s, t) in &[(0.5, 0.5), (0.2, 1.0), (2.0, 0.3)] {
            for p in [unit(), ModelParams::new(0.5, 2.0).unwrap()] {
                let lhs = extinct_weighted_mean(&p, s, t).unwrap();
                let ratio = extinction_rate(&p, s + t).unwrap() / extinction_rate(&p, t).unwrap();
                let rhs = (p.decay_rate() * s).exp() * ratio * ratio;
                assert_abs_diff_eq!(lhs, rhs, epsilon = 1e-12);
            }
        }
    }

    #[test]
    fn population_laws() {
        let p = unit();
        assert_abs_diff_eq!(pop_laplace(&p, 1.0).unwrap(), 4.0 / 9.0, epsilon = 1e-15);
        assert_eq!(pop_mean(&p), 1.0);
        assert_eq!(pop_second_moment(&p), 1.5);
        assert_abs_diff_eq!(
            tmrca_cdf(&p, 0.5).unwrap(),
            0.399_576_400_893_728_05,
            epsilon = 1e-15
        );
        assert_abs_diff_eq!(
            pop_autocovariance_raw(&p, 0.5).unwrap(),
            1.183_939_720_585_721_2,
            epsilon = 1e-15
        );
        assert_eq!(tmrca_mean(&p), 0.75);
        // tmrca_cdf(t) = pop_laplace(c(t))
        let c = extinction_rate(&p, 0.5).unwrap();
        assert_abs_diff_eq!(
            tmrca_cdf(&p, 0.5).unwrap(),
            pop_laplace(&p, c).unwrap(),
            epsilon = 1e-12
        );
    }

    #[test]
    fn ancestor_laws() {
        let p = unit();
        assert_abs_diff_eq!(ancestors_mean(&p, 0.5).unwrap(), 1.163_953_413_738_652_8, epsilon = 1e-15);
        assert_abs_diff_eq!(
            ancestors_second_moment(&p, 0.5).unwrap(),
            3.196_134_737_769_448_2,
            epsilon = 1e-14
        );
        assert_abs_diff_eq!(
            ancestors_laplace(&p, 1.0, 0.5).unwrap(),
            0.534_446_645_388_523_03,
            epsilon = 1e-15
        );
        let l2 = std::f64::consts::LN_2;
        assert_abs_diff_eq!(
            joint_forward_laplace(&p, l2, l2, 0.5, 1.0).unwrap(),
            0.565_222_982_990_672_69,
            epsilon = 1e-15
        );
        assert!(joint_forward_laplace(&p, 1.0, 1.0, 1.0, 0.5).is_err());
    }

    #[test]
    fn joint_forward_laplace_marginals() {
        let p = ModelParams::new(1.4, 0.6).unwrap();
        for &(lam, t, r) in &[(0.3, 0.4, 1.2), (2.0, 0.1, 0.7)] {
            assert_abs_diff_eq!(
                joint_forward_laplace(&p, lam, 0.0, t, r).unwrap(),
                ancestors_laplace(&p, lam, r).unwrap(),
                epsilon = 1e-14
            );
            assert_abs_diff_eq!(
                joint_forward_laplace(&p, 0.0, lam, t, r).unwrap(),
                ancestors_laplace(&p, lam, t).unwrap(),
                epsilon = 1e-14
            );
        }
    }

    #[test]
    fn cross_moments() {
        let p = unit();
        assert_abs_diff_eq!(
            cross_moment(&p, 0.5, 1.0).unwrap(),
            0.859_573_019_265_732_03,
            epsilon = 1e-15
        );
        assert_abs_diff_eq!(
            two_time_cross_moment(&p, 1.0, 0.3, 0.8).unwrap(),
            0.373_634_349_701_543_38,
            epsilon = 1e-15
        );
        assert_abs_diff_eq!(
            two_time_cross_moment(&p, 0.5, 0.3, 1.0).unwrap(),
            0.890_913_206_798_702_95,
            epsilon = 1e-15
        );
        assert!(two_time_cross_moment(&p, 1.0, 0.5, 0.4).is_err());
    }

    #[test]
    fn two_time_boundary_agreement() {
        // the two branches agree at q = s + r, and s = 0 reduces to cross_moment
        for p in [unit(), ModelParams::new(2.0, 0.4).unwrap()] {
            for &(r, s) in &[(0.5, 0.3), (1.0, 0.1), (0.2, 1.0)] {
                let q = s + r;
                let at_boundary = two_time_cross_moment(&p, r, s, q).unwrap();
                let th = p.theta();
                let (cr, cq, cqs) = (
                    extinction_rate(&p, r).unwrap(),
                    extinction_rate(&p, q).unwrap(),
                    extinction_rate(&p, q - s).unwrap(),
                );
                let other = cr / th * cq / th * (th / cqs * cq / extinction_rate(&p, r + s).unwrap() + 1.5);
                assert_abs_diff_eq!(at_boundary, other, epsilon = 1e-10);
            }
            for &(r, q) in &[(1.0, 0.5), (0.8, 0.8)] {
                assert_abs_diff_eq!(
                    two_time_cross_moment(&p, r, 0.0, q).unwrap(),
                    cross_moment(&p, q, r).unwrap(),
                    epsilon = 1e-10
                );
            }
        }
    }

    #[test]
    fn slice_laws() {
        let p = unit();
        let l2 = std::f64::consts::LN_2;
        assert_abs_diff_eq!(
            slice_laplace(&p, l2, 0.5, 0.5).unwrap(),
            0.180_834_599_916_932_81,
            epsilon = 1e-15
        );
        assert_abs_diff_eq!(
            slice_mean(&p, 0.5, 0.5).unwrap(),
            0.428_194_531_395_768_21,
            epsilon = 1e-15
        );
        assert_abs_diff_eq!(
            restricted_mean(&p, 0.5, 0.5, 0.5).unwrap(),
            0.259_207_101_938_960_23,
            epsilon = 1e-15
        );
        assert_abs_diff_eq!(
            restricted_laplace_1(&p, l2, 0.5, 0.5, 0.5).unwrap(),
            0.115_473_699_951_406_08,
            epsilon = 1e-14
        );
        // at lambda = 0 the restricted transform vanishes identically
        assert_abs_diff_eq!(restricted_laplace_1(&p, 0.0, 0.5, 0.5, 0.5).unwrap(), 0.0, epsilon = 1e-12);
        // and so do the two-depth variants at lambda = mu = 0
        assert_abs_diff_eq!(
            restricted_laplace_2(&p, 0.0, 0.0, 0.5, 0.3, 0.5, 0.5).unwrap(),
            0.0,
            epsilon = 1e-12
        );
        assert_abs_diff_eq!(
            restricted_laplace_3(&p, 0.0, 0.0, 0.5, 0.3, 0.5, 0.5).unwrap(),
            0.0,
            epsilon = 1e-12
        );
    }

    #[test]
    fn thinning_factor_is_a_probability_weight() {
        let p = unit();
        // at lambda = 0 nothing is removed
        assert_abs_diff_eq!(thinning_factor(&p, 0.0, 1.0, 0.4).unwrap(), 1.0, epsilon = 1e-14);
        let h = thinning_factor(&p, 0.7, 1.0, 0.4).unwrap();
        assert!(h > 0.0 && h < 1.0);
        assert!(thinning_factor(&p, 0.7, 0.3, 0.4).is_err());
    }

    #[test]
    fn length_laws() {
        let p = unit();
        assert_abs_diff_eq!(length_mean(&p, 0.1).unwrap(), 1.707_771_800_970_519_9, epsilon = 1e-14);
        assert_abs_diff_eq!(
            increment_second_moment(&p, 0.1, 1.0).unwrap(),
            0.711_200_767_205_533,
            epsilon = 1e-13
        );
        assert_eq!(increment_second_moment(&p, 0.1, 0.1).unwrap(), 0.0);
        assert!(increment_second_moment(&p, 0.3, 0.2).is_err());
        assert_abs_diff_eq!(
            compensated_length_second_moment(&p, 0.1).unwrap(),
            1.113_157_573_260_367_5,
            epsilon = 1e-13
        );
        // limit of E[L~_eps^2] as eps -> 0 is pi^2/6
        assert_abs_diff_eq!(
            compensated_length_second_moment(&p, 1e-8).unwrap(),
            PI * PI / 6.0,
            epsilon = 1e-5
        );
        // truncation error bound <= 4 eta / (beta theta)
        for &eta in &[1e-4, 1e-3, 1e-2, 0.1] {
            let v = truncation_error_second_moment(&p, eta).unwrap();
            assert!(v > 0.0 && v <= 4.0 * eta, "eta={eta} v={v}");
        }
        // Remark-5.3 combination: Var(L) = E[L~^2] + log^2/(2 b^2 t^2)
        let var = length_variance(&p, 0.1).unwrap();
        let direct = length_second_moment(&p, 0.1).unwrap() - length_mean(&p, 0.1).unwrap().powi(2);
        assert_relative_eq!(var, direct, max_relative = 1e-12);
    }

    #[test]
    fn phi_examples() {
        // phi(n) = -n H_n
        let mut harmonic = 0.0;
        for n in 1..=10u32 {
            harmonic += 1.0 / f64::from(n);
            assert_abs_diff_eq!(phi(f64::from(n)).unwrap(), -f64::from(n) * harmonic, epsilon = 1e-10);
        }
        assert_abs_diff_eq!(phi(0.5).unwrap(), 2f64.ln() - 1.0, epsilon = 1e-12);
        assert_abs_diff_eq!(phi(0.25).unwrap(), -0.087_440_532_881_316_86, epsilon = 1e-12);
        assert!(phi(0.0).is_err());
        assert!(phi(-1.0).is_err());
    }

    #[test]
    fn phi_against_digamma_oracle() {
        // independent route: phi(lambda) = -lambda (psi0(lambda+1) + gamma),
        // with psi0 from the recurrence + asymptotic series
        fn digamma(mut x: f64) -> f64 {
            let mut acc = 0.0;
            while x < 10.0 {
                acc -= 1.0 / x;
                x += 1.0;
            }
            let inv = 1.0 / x;
            let inv2 = inv * inv;
            acc + x.ln() - 0.5 * inv
                - inv2 * (1.0 / 12.0 - inv2 * (1.0 / 120.0 - inv2 * (1.0 / 252.0 - inv2 / 240.0)))
        }
        const EULER_GAMMA: f64 = 0.577_215_664_901_532_9;
        for &lam in &[0.1, 0.25, 0.5, 0.9, 1.5, 3.3, 7.7, 20.0] {
            let oracle = -lam * (digamma(lam + 1.0) + EULER_GAMMA);
            assert_abs_diff_eq!(phi(lam).unwrap(), oracle, epsilon = 1e-10);
        }
    }

    #[test]
    fn phi_is_negative_and_strictly_decreasing() {
        let grid: Vec<f64> = (1..60).map(|i| f64::from(i) * 0.25).collect();
        let mut prev = 0.0;
        for &lam in &grid {
            let v = phi(lam).unwrap();
            assert!(v < 0.0, "phi({lam}) = {v}");
            assert!(v < prev, "phi not decreasing at {lam}");
            prev = v;
        }
    }

    #[test]
    fn w_laplace_family() {
        assert_abs_diff_eq!(w_laplace(0.5).unwrap(), 2.081_368_981_005_607_8, epsilon = 1e-11);
        assert_abs_diff_eq!(w_laplace(0.25).unwrap(), 1.200_819_274_280_110_6, epsilon = 1e-11);
        assert_eq!(w_laplace(0.0).unwrap(), 1.0);
        assert!(w_laplace(1.0).is_err());
        assert!(w_laplace(1.5).is_err());
        assert_eq!(w_laplace_conditional(0.7, 0.0).unwrap(), 1.0);
        assert_eq!(w_laplace_conditional(0.0, 3.0).unwrap(), 1.0);
        // conditional transform exceeds 1 (W has mean zero, phi < 0)
        assert!(w_laplace_conditional(0.5, 2.0).unwrap() > 1.0);
        let p = unit();
        assert_abs_diff_eq!(w_second_moment(&p), PI * PI / 6.0, epsilon = 1e-15);
    }

    #[test]
    fn w_covariance_pinned_and_monotone() {
        let p = unit();
        // production value must sit within 1e-6 of the 30-digit oracle
        assert_abs_diff_eq!(
            w_covariance(&p, 0.5).unwrap(),
            0.254_133_750_906_084_86,
            epsilon = 1e-8
        );
        assert_abs_diff_eq!(
            w_covariance(&p, 1e-4).unwrap(),
            1.636_399_150_561_711_2,
            epsilon = 1e-6
        );
        assert_abs_diff_eq!(
            w_covariance(&p, 2.0).unwrap(),
            0.010_569_872_235_374_55,
            epsilon = 1e-8
        );
        let grid = [0.01, 0.03, 0.1, 0.3, 0.5, 1.0, 2.0, 5.0];
        let mut prev = f64::INFINITY;
        let bound = w_second_moment(&p);
        for &s in &grid {
            let v = w_covariance(&p, s).unwrap();
            assert!(v > 0.0 && v < bound, "cov({s}) = {v} out of (0, pi^2/6)");
            assert!(v < prev, "cov not strictly decreasing at {s}");
            prev = v;
        }
        assert!(w_covariance(&p, 0.0).is_err());
    }

    #[test]
    fn w_increment_ratio_approaches_constant() {
        // E[(W_s - W_0)^2] / (s log^2 s) settles near its limit once s is
        // small enough; across {0.01, 0.003, 0.001} the ratio varies < 15%.
        let p = unit();
        let ratios: Vec<f64> = [0.01, 0.003, 0.001]
            .iter()
            .map(|&s| {
                let w = w_increment_second_moment(&p, s).unwrap();
                w / (s * s.ln() * s.ln())
            })
            .collect();
        let (lo, hi) = ratios.iter().fold((f64::MAX, f64::MIN), |(l, h), &r| (l.min(r), h.max(r)));
        assert!(lo > 0.0 && lo.is_finite());
        assert!(hi / lo - 1.0 < 0.15, "ratios {ratios:?}");
        // on the coarser decade the drift is still visibly shrinking
        let coarse: Vec<f64> = [0.1, 0.03, 0.01]
            .iter()
            .map(|&s| w_increment_second_moment(&p, s).unwrap() / (s * s.ln() * s.ln()))
            .collect();
        assert!((coarse[1] / coarse[2] - 1.0).abs() < (coarse[0] / coarse[1] - 1.0).abs());
    }

    #[test]
    fn graft_identity_examples() {
        let p = unit();
        assert_abs_diff_eq!(graft_identity(&p, 0.5).unwrap(), 0.399_576_400_893_728_05, epsilon = 1e-15);
        assert!(graft_identity(&p, 1e-9).unwrap() < 1e-8);
        assert!(graft_identity(&p, 40.0).unwrap() > 1.0 - 1e-8);
    }

    #[test]
    fn triple_identity_three_code_paths() {
        for p in [unit(), ModelParams::new(0.3, 2.5).unwrap()] {
            for &t in &[0.1, 0.5, 1.0, 3.0] {
                let g = graft_identity(&p, t).unwrap();
                let cdf = tmrca_cdf(&p, t).unwrap();
                let lap = pop_laplace(&p, extinction_rate(&p, t).unwrap()).unwrap();
                assert_abs_diff_eq!(g, cdf, epsilon = 1e-12);
                assert_abs_diff_eq!(g, lap, epsilon = 1e-12);
            }
        }
    }

    #[test]
    fn semigroup_identity_on_grid() {
        // u(u(lambda, s), t) = u(lambda, t + s) within 1e-10 (1 + lambda)
        let p = unit();
        let lambdas = [1e-3, 1e-2, 0.1, 1.0, 10.0, 100.0, 1e3];
        let times = [1e-3, 0.01, 0.1, 0.5, 1.0, 2.5, 5.0];
        for &lam in &lambdas {
            for &s in &times {
                for &t in &times {
                    let lhs = cumulant(&p, cumulant(&p, lam, s).unwrap(), t).unwrap();
                    let rhs = cumulant(&p, lam, t + s).unwrap();
                    assert!(
                        (lhs - rhs).abs() <= 1e-10 * (1.0 + lam),
                        "lam={lam} s={s} t={t}: {lhs} vs {rhs}"
                    );
                }
            }
        }
    }

    #[test]
    fn rate_consistency_on_grid() {
        let p = unit();
        let times = [1e-3, 0.01, 0.1, 0.5, 1.0, 2.5, 5.0];
        for &s in &times {
            for &t in &times {
                let lhs = cumulant(&p, extinction_rate(&p, s).unwrap(), t).unwrap();
                let rhs = extinction_rate(&p, t + s).unwrap();
                assert!(
                    (lhs - rhs).abs() <= 1e-10 * (1.0 + extinction_rate(&p, s).unwrap()),
                    "s={s} t={t}"
                );
            }
        }
    }

    #[test]
    fn backward_ode_via_finite_differences() {
        // d/dt u(lambda, t) = -psi(u(lambda, t)) to relative 1e-5
        let p = unit();
        let h = 1e-5;
        for &lam in &[0.1, 1.0, 10.0, 100.0] {
            for &t in &[0.1, 0.5, 1.0, 2.0] {
                let fd = (cumulant(&p, lam, t + h).unwrap() - cumulant(&p, lam, t - h).unwrap()) / (2.0 * h);
                let rhs = -branching_mechanism(&p, cumulant(&p, lam, t).unwrap()).unwrap();
                assert_relative_eq!(fd, rhs, max_relative = 1e-5);
            }
        }
    }

    #[test]
    fn extinction_rate_is_large_lambda_cumulant_limit() {
        // |u(lambda,t) - c(t)| / c(t) <= (2 theta + c(t)) / lambda
        let p = unit();
        for &t in &[0.02, 0.1, 0.5, 1.0, 2.0, 5.0] {
            let c = extinction_rate(&p, t).unwrap();
            let u = cumulant(&p, 1e8, t).unwrap();
            assert_relative_eq!(u, c, max_relative = 1e-6);
        }
    }
}
