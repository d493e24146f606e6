//! Vector ℓp → ℓq sparsifier promotion: the minimal-sparsity oracle, the
//! exact extra-budget formula, and the tail-norm bound it rests on.
//!
//! Promotion keeps the largest-magnitude entries, which is the optimal
//! support for every ℓp tail norm: replacing a kept entry with a smaller
//! omitted one can only increase the tail. The oracle is therefore a scan
//! over head sizes; this optimality is brute-force tested rather than
//! assumed.

use crate::error::{Error, Result};
use crate::matrix::{tail, Vector};
use crate::spectra::{lp_norm, SchattenExponent};

/// Budget for promoting an ℓp sparsifier to an ℓq one: keep s + ceil(c)
/// entries, where c = ((1-eps^q)^(1/q) / (1-eps^p)^(1/p))^(1/(1/p-1/q)) * s.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PromotionBudget {
    pub s: usize,
    pub c_exact: f64,
    pub c_rounded: usize,
    pub eps: f64,
    pub p: SchattenExponent,
    pub q: SchattenExponent,
}

fn require_promotion_exponents(p: SchattenExponent, q: SchattenExponent) -> Result<()> {
    match p {
        SchattenExponent::Finite(pv) if pv >= 1.0 => {}
        _ => {
            return Err(Error::invalid(
                "promotion requires a finite source exponent p >= 1",
            ))
        }
    }
    if matches!(q, SchattenExponent::Zero) || q.order() <= p.order() {
        return Err(Error::invalid("promotion requires p < q (q may be inf)"));
    }
    Ok(())
}

/// Smallest s such that the head-s sparsifier meets the ℓp error bound:
/// ||tail(x, s)||_p <= eps * ||x||_p. Returns 0 for the zero vector.
pub fn min_lp_sparsity(x: &Vector, eps: f64, p: SchattenExponent) -> usize {
    assert!(eps > 0.0 && eps < 1.0, "eps must lie in (0, 1)");
    assert!(
        matches!(p, SchattenExponent::Inf) || p.order() >= 1.0,
        "p must be finite >= 1 or inf"
    );
    let full = lp_norm(x, p);
    if full == 0.0 {
        return 0;
    }
    let bound = eps * full;
    let meets = |s: usize| lp_norm(&tail(x, s).expect("s <= dim"), p) <= bound;
    // Tail norm is nonincreasing in s, so the predicate is monotone.
    let (mut lo, mut hi) = (0usize, x.dim());
    while lo < hi {
        let mid = lo + (hi - lo) / 2;
        if meets(mid) {
            hi = mid;
        } else {
            lo = mid + 1;
        }
    }
    lo
}

/// Extra budget c for promoting an (eps, ℓp, s)-sparsifier to ℓq.
/// Valid for eps < 1/e, where the budget satisfies ln(c/s) <= 1.
pub fn extra_budget(
    s: usize,
    eps: f64,
    p: SchattenExponent,
    q: SchattenExponent,
) -> Result<PromotionBudget> {
    require_promotion_exponents(p, q)?;
    if !(eps > 0.0 && eps < std::f64::consts::E.recip()) {
        return Err(Error::invalid(format!(
            "eps = {eps} is outside the admissible range (0, 1/e)"
        )));
    }
    let pv = p.order();
    // (1 - eps^q)^(1/q) -> 1 as q -> inf.
    let q_factor = match q {
        SchattenExponent::Inf => 1.0,
        SchattenExponent::Finite(qv) => (1.0 - eps.powf(qv)).powf(1.0 / qv),
        SchattenExponent::Zero => unreachable!("rejected above"),
    };
    let p_factor = (1.0 - eps.powf(pv)).powf(1.0 / pv);
    let exponent = 1.0 / (p.inv() - q.inv());
    let ratio = (q_factor / p_factor).powf(exponent);
    let c_exact = ratio * s as f64;
    if s >= 1 {
        let ln_ratio = (c_exact / s as f64).ln();
        assert!(
            ln_ratio <= 1.0 + 1e-12,
            "extra-budget bound violated: ln(c/s) = {ln_ratio}"
        );
    }
    Ok(PromotionBudget {
        s,
        c_exact,
        c_rounded: c_exact.ceil() as usize,
        eps,
        p,
        q,
    })
}

/// Promotes the minimal ℓp head sparsifier of x to an ℓq one by keeping
/// s + ceil(c) entries. The output x'' satisfies
/// ||x - x''||_q <= eps * ||x||_q and nnz(x'') <= s + ceil(c).
pub fn promote_sparsifier(
    x: &Vector,
    eps: f64,
    p: SchattenExponent,
    q: SchattenExponent,
) -> Result<(Vector, PromotionBudget)> {
    if lp_norm(x, SchattenExponent::Zero) == 0.0 {
        return Err(Error::invalid("promotion requires a nonzero vector"));
    }
    require_promotion_exponents(p, q)?;
    if !(eps > 0.0 && eps < std::f64::consts::E.recip()) {
        return Err(Error::invalid(format!(
            "eps = {eps} is outside the admissible range (0, 1/e)"
        )));
    }
    let s = min_lp_sparsity(x, eps, p);
    let budget = extra_budget(s, eps, p, q)?;
    let keep = (s + budget.c_rounded).min(x.dim());
    let promoted = crate::matrix::head(x, keep)?;
    Ok((promoted, budget))
}

/// Both sides of the tail bound ||tail(x, c)||_q <= c^{-(1/p-1/q)} ||x||_p.
pub fn tail_bound(x: &Vector, c: usize, p: SchattenExponent, q: SchattenExponent) -> (f64, f64) {
    assert!(
        p.is_finite() && p.order() >= 1.0 && q.order() > p.order(),
        "tail bound requires 1 <= p < q"
    );
    assert!(c >= 1 && c < x.dim(), "tail bound requires 1 <= c < dim");
    let lhs = lp_norm(&tail(x, c).expect("c < dim"), q);
    let rhs = (c as f64).powf(-(p.inv() - q.inv())) * lp_norm(x, p);
    (lhs, rhs)
}
