//! The dual-witness amplifier: split an inner witness ψ into distributions
//! μ₀, μ₁, average an approximant of `f ∘ M ∘ g` over them (operator `L`),
//! and check every finite step of the lower-bound argument exactly.

use std::time::Instant;

use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::boolfn::{BooleanFunction, Builtin};
use crate::degrees::{Analyzer, DualWitness, WitnessOutcome};
use crate::error::{Error, Result};
use crate::polynomial::{interpolate, linf_error, superset_zeta, MultilinearPolynomial};
use crate::rational::{self, Rational};

/// `ψ = (μ₁ − μ₀)/2` with `μ₀, μ₁` probability distributions.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SplitDual {
    pub inner_arity: usize,
    #[serde(with = "rational::serde_rational_vec")]
    pub mu0: Vec<Rational>,
    #[serde(with = "rational::serde_rational_vec")]
    pub mu1: Vec<Rational>,
    #[serde(with = "rational::serde_rational")]
    pub epsilon_threshold: Rational,
    pub purity_degree: usize,
}

pub fn split_dual(w: &DualWitness) -> Result<SplitDual> {
    if w.purity_degree == 0 {
        return Err(Error::Precondition(
            "a witness of purity degree 0 need not sum to zero and cannot be split".into(),
        ));
    }
    let two = rational::int(2);
    let mu1: Vec<Rational> = w
        .values
        .iter()
        .map(|v| {
            if v.is_positive() {
                v * &two
            } else {
                Rational::zero()
            }
        })
        .collect();
    let mu0: Vec<Rational> = w
        .values
        .iter()
        .map(|v| {
            if v.is_negative() {
                -(v * &two)
            } else {
                Rational::zero()
            }
        })
        .collect();
    let s = SplitDual {
        inner_arity: w.arity,
        mu0,
        mu1,
        epsilon_threshold: w.epsilon.clone(),
        purity_degree: w.purity_degree,
    };
    let (s0, s1): (Rational, Rational) = (s.mu0.iter().sum(), s.mu1.iter().sum());
    if !s0.is_one() || !s1.is_one() {
        return Err(Error::Invariant(format!(
            "split masses are {} and {}, not 1",
            rational::format(&s0),
            rational::format(&s1)
        )));
    }
    for (x, v) in w.values.iter().enumerate() {
        if (&s.mu1[x] - &s.mu0[x]) / &two != *v {
            return Err(Error::Invariant(format!(
                "(μ₁ − μ₀)/2 differs from ψ at {x}"
            )));
        }
    }
    Ok(s)
}

impl SplitDual {
    pub fn mu(&self, side: bool) -> &[Rational] {
        if side {
            &self.mu1
        } else {
            &self.mu0
        }
    }

    /// `E_{x∼μ_side}[x^T]` for every mask `T`.
    fn moments(&self, side: bool) -> Vec<Rational> {
        let mut v = self.mu(side).to_vec();
        superset_zeta(&mut v);
        v
    }
}

pub fn mu_expectation(s: &SplitDual, g: &BooleanFunction, side: bool) -> Result<Rational> {
    if g.arity() != s.inner_arity {
        return Err(Error::ArityMismatch(format!(
            "g has arity {}, the split is over {} bits",
            g.arity(),
            s.inner_arity
        )));
    }
    Ok(s.mu(side)
        .iter()
        .enumerate()
        .filter(|(x, _)| g.value(*x))
        .map(|(_, m)| m.clone())
        .sum())
}

/// `(Lp)(z) = E[p(x)]` with each inner block `x_{ij}` drawn from `μ_{z_i}`.
/// Input layout: block `i` (one per `z_i`) holds `copies` consecutive inner
/// blocks of `inner_arity` bits each.
pub fn apply_l(
    p: &MultilinearPolynomial,
    s: &SplitDual,
    n_blocks: usize,
    copies: usize,
) -> Result<MultilinearPolynomial> {
    let m = s.inner_arity;
    if p.arity() != n_blocks * copies * m {
        return Err(Error::ArityMismatch(format!(
            "polynomial of arity {} does not match {n_blocks} blocks × {copies} copies × {m} bits",
            p.arity()
        )));
    }
    let a = s.moments(false);
    let b = s.moments(true);
    let inner_mask = (1usize << m) - 1;
    let points = 1usize << n_blocks;
    let mut values = vec![Rational::zero(); points];
    for (mask, c) in p.terms() {
        let mut alpha = Vec::with_capacity(n_blocks);
        let mut beta = Vec::with_capacity(n_blocks);
        for i in 0..n_blocks {
            let mut ai = Rational::one();
            let mut bi = Rational::one();
            for j in 0..copies {
                let t = (mask >> ((i * copies + j) * m)) & inner_mask;
                if t != 0 {
                    ai *= &a[t];
                    bi *= &b[t];
                }
            }
            alpha.push(ai);
            beta.push(bi);
        }
        for (z, v) in values.iter_mut().enumerate() {
            let mut prod = c.clone();
            for i in 0..n_blocks {
                prod *= if (z >> i) & 1 == 1 {
                    &beta[i]
                } else {
                    &alpha[i]
                };
                if prod.is_zero() {
                    break;
                }
            }
            *v += prod;
        }
    }
    MultilinearPolynomial::from_cube_values(n_blocks, &values)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", tag = "kind", content = "function")]
pub enum Middle {
    Maj,
    And,
    Given(BooleanFunction),
}

impl Middle {
    pub fn label(&self) -> String {
        match self {
            Middle::Maj => "MAJ".into(),
            Middle::And => "AND".into(),
            Middle::Given(h) => h.to_tt_literal(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct AmplifierReport {
    pub outer: String,
    pub inner: String,
    pub middle: String,
    pub t: usize,
    pub copies: usize,
    pub composed_arity: usize,
    #[serde(with = "rational::serde_rational")]
    pub epsilon: Rational,
    #[serde(with = "rational::serde_rational")]
    pub delta: Rational,
    #[serde(with = "rational::serde_rational")]
    pub threshold: Rational,
    pub d_inner: usize,
    #[serde(with = "rational::serde_rational")]
    pub witness_correlation: Rational,
    #[serde(with = "rational::serde_rational")]
    pub e_mu1: Rational,
    #[serde(with = "rational::serde_rational")]
    pub e_mu0: Rational,
    pub mu1_ok: bool,
    pub mu0_ok: bool,
    pub deg_before: usize,
    pub deg_after: usize,
    pub degree_bound: usize,
    pub degree_ok: bool,
    #[serde(with = "rational::serde_rational")]
    pub approx_error_of_ph: Rational,
    /// Probability the middle function outputs 1 when its inputs are
    /// independent coins of bias `E_{μ_b}[g]`, for `b = 0, 1`.
    #[serde(with = "rational::serde_rational_vec")]
    pub middle_bias: Vec<Rational>,
    #[serde(with = "rational::serde_rational")]
    pub tail_gap: Rational,
    pub delta_condition: bool,
    #[serde(with = "rational::serde_rational")]
    pub lh_error: Rational,
    #[serde(with = "rational::serde_rational")]
    pub contraction_error: Rational,
    #[serde(with = "rational::serde_rational")]
    pub approx_error_of_lp: Rational,
    #[serde(with = "rational::serde_rational")]
    pub bound_used: Rational,
    pub approx_ok: bool,
    pub passed: bool,
    pub runtime_ms: u128,
}

impl AmplifierReport {
    pub const CSV_HEADER: &'static str = "outer,inner,middle,t,epsilon,delta,d_inner,e_mu1,e_mu0,deg_before,deg_after,degree_bound,approx_error_of_lp,bound_used,passed";

    pub fn csv_row(&self) -> String {
        format!(
            "{},{},{},{},{},{},{},{},{},{},{},{},{},{},{}",
            self.outer,
            self.inner,
            self.middle,
            self.t,
            rational::format(&self.epsilon),
            rational::format(&self.delta),
            self.d_inner,
            rational::format(&self.e_mu1),
            rational::format(&self.e_mu0),
            self.deg_before,
            self.deg_after,
            self.degree_bound,
            rational::format(&self.approx_error_of_lp),
            rational::format(&self.bound_used),
            self.passed
        )
    }
}

/// `Pr[M(y) = 1]` for `y` a vector of independent coins with bias `q`.
pub fn middle_bias(m: &BooleanFunction, q: &Rational) -> Rational {
    let one = Rational::one();
    let nq = &one - q;
    (0..m.len())
        .filter(|&y| m.value(y))
        .map(|y| {
            let k = y.count_ones() as i32;
            let rest = m.arity() as i32 - k;
            pow(q, k) * pow(&nq, rest)
        })
        .sum()
}

fn pow(q: &Rational, k: i32) -> Rational {
    (0..k).fold(Rational::one(), |acc, _| acc * q)
}

/// Runs the amplification argument on `f ∘ M_t ∘ g` and reports each
/// checked quantity. Failed checks are reported in the result (`passed =
/// false`); errors are reserved for inputs the argument does not cover.
pub fn verify_amplifier_pipeline(
    analyzer: &Analyzer,
    f: &BooleanFunction,
    g: &BooleanFunction,
    t: usize,
    eps: &Rational,
    delta: &Rational,
    middle: &Middle,
) -> Result<AmplifierReport> {
    let start = Instant::now();
    if t == 0 {
        return Err(Error::InvalidArgument("t must be at least 1".into()));
    }
    if *delta <= Rational::zero() {
        return Err(Error::InvalidArgument("δ must be positive".into()));
    }
    let (inner, copies, mid, one_sided) = match middle {
        Middle::Maj => {
            if t % 2 == 0 {
                return Err(Error::InvalidArgument(format!(
                    "MAJ_t needs odd t, got {t}"
                )));
            }
            (
                g.clone(),
                t,
                BooleanFunction::builtin(Builtin::Maj, t)?,
                false,
            )
        }
        Middle::And => (
            g.clone(),
            t,
            BooleanFunction::builtin(Builtin::And, t)?,
            true,
        ),
        Middle::Given(h) => (
            h.compose_with(g)?,
            1,
            BooleanFunction::builtin(Builtin::Id, 1)?,
            false,
        ),
    };
    let block = mid.compose_with(&inner)?;
    let big = f.compose_with(&block)?;
    let n = f.arity();

    let threshold = (Rational::one() - eps) / rational::int(2);
    let d_inner = analyzer.degree_at_threshold(&inner, &threshold, one_sided)?;
    if d_inner == 0 {
        return Err(Error::Precondition(format!(
            "inner function {inner} is within {} of a constant; nothing to amplify",
            rational::format(&threshold)
        )));
    }
    let witness = match analyzer.witness_at_threshold(&inner, &threshold, d_inner, one_sided)? {
        WitnessOutcome::Witness(w) => w,
        WitnessOutcome::Refutation(r) => {
            return Err(Error::Invariant(format!(
                "no witness at purity {d_inner}: optimum {}",
                rational::format(&r.optimum)
            )))
        }
    };
    let split = split_dual(&witness)?;
    let e1 = mu_expectation(&split, &inner, true)?;
    let e0 = mu_expectation(&split, &inner, false)?;
    let half = rational::ratio(1, 2);
    if e1 <= half || e0 >= half {
        return Err(Error::Precondition(format!(
            "degenerate witness: E_μ1[g] = {}, E_μ0[g] = {}",
            rational::format(&e1),
            rational::format(&e0)
        )));
    }

    let cert = analyzer.approx_degree(&big, eps)?;
    let p_h = cert.approximant.clone().ok_or_else(|| {
        Error::LimitExceeded("no exact approximant for the composed function".into())
    })?;
    let approx_error_of_ph = linf_error(&p_h, &big)?;
    let lp = apply_l(&p_h, &split, n, copies)?;
    let deg_before = p_h.degree();
    let deg_after = lp.degree();
    let degree_bound = deg_before / d_inner;

    let bias = [middle_bias(&mid, &e0), middle_bias(&mid, &e1)];
    let tail_gap = (Rational::one() - &bias[1]).max(bias[0].clone());
    let n_r = rational::int(n as i64);
    let delta_condition = &tail_gap * &n_r <= *delta;
    let f_poly = interpolate(f)?;
    let mut lh = Vec::with_capacity(f.len());
    for z in 0..f.len() {
        let point: Vec<Rational> = (0..n).map(|i| bias[(z >> i) & 1].clone()).collect();
        lh.push(f_poly.eval(&point)?);
    }
    let lp_vals = lp.cube_values();
    let mut lh_error = Rational::zero();
    let mut contraction_error = Rational::zero();
    for z in 0..f.len() {
        let fz = if f.value(z) {
            Rational::one()
        } else {
            Rational::zero()
        };
        lh_error = lh_error.max((&lh[z] - &fz).abs());
        contraction_error = contraction_error.max((&lp_vals[z] - &lh[z]).abs());
    }
    let approx_error_of_lp = linf_error(&lp, f)?;
    let bound_used = eps + delta.clone().max(&tail_gap * &n_r);

    let mu1_ok = e1 > Rational::one() - eps;
    let mu0_ok = e0 < *eps;
    let degree_ok = deg_after <= degree_bound;
    let approx_ok = approx_error_of_lp <= bound_used && contraction_error <= *eps;
    Ok(AmplifierReport {
        outer: f.to_tt_literal(),
        inner: g.to_tt_literal(),
        middle: middle.label(),
        t,
        copies,
        composed_arity: big.arity(),
        epsilon: eps.clone(),
        delta: delta.clone(),
        threshold,
        d_inner,
        witness_correlation: witness.correlation.clone(),
        e_mu1: e1,
        e_mu0: e0,
        mu1_ok,
        mu0_ok,
        deg_before,
        deg_after,
        degree_bound,
        degree_ok,
        approx_error_of_ph,
        middle_bias: bias.to_vec(),
        tail_gap,
        delta_condition,
        lh_error,
        contraction_error,
        approx_error_of_lp,
        bound_used,
        approx_ok,
        passed: mu1_ok && mu0_ok && degree_ok && approx_ok,
        runtime_ms: start.elapsed().as_millis(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{int, ratio};

    fn b(kind: Builtin, n: usize) -> BooleanFunction {
        BooleanFunction::builtin(kind, n).unwrap()
    }

    fn parity_split() -> SplitDual {
        let a = Analyzer::default();
        let w = a
            .dual_witness(&b(Builtin::Parity, 2), &ratio(1, 3), 2)
            .unwrap();
        split_dual(w.witness().unwrap()).unwrap()
    }

    #[test]
    fn parity_split_is_uniform() {
        let s = parity_split();
        assert_eq!(s.mu1, vec![int(0), ratio(1, 2), ratio(1, 2), int(0)]);
        assert_eq!(s.mu0, vec![ratio(1, 2), int(0), int(0), ratio(1, 2)]);
        let xor = b(Builtin::Parity, 2);
        assert_eq!(mu_expectation(&s, &xor, true).unwrap(), int(1));
        assert_eq!(mu_expectation(&s, &xor, false).unwrap(), int(0));
    }

    #[test]
    fn operator_examples() {
        let s = parity_split();
        let c = MultilinearPolynomial::constant(2, ratio(7, 3));
        assert_eq!(
            apply_l(&c, &s, 1, 1).unwrap(),
            MultilinearPolynomial::constant(1, ratio(7, 3))
        );

        let p = MultilinearPolynomial::monomial(2, &[1, 2], int(1)).unwrap();
        let expect = MultilinearPolynomial::from_terms(1, [(0, ratio(1, 2)), (1, ratio(-1, 2))]);
        assert_eq!(apply_l(&p, &s, 1, 1).unwrap(), expect);

        let p = MultilinearPolynomial::monomial(4, &[1, 2, 3], int(1)).unwrap();
        let lp = apply_l(&p, &s, 2, 1).unwrap();
        let expect = MultilinearPolynomial::from_terms(2, [(0, ratio(1, 4)), (1, ratio(-1, 4))]);
        assert_eq!(lp, expect);
        assert!(lp.degree() <= 3 / 2);
    }

    #[test]
    fn middle_bias_is_binomial_tail() {
        let maj3 = b(Builtin::Maj, 3);
        // 3q²(1 − q) + q³ at q = 1/3 is 7/27.
        assert_eq!(middle_bias(&maj3, &ratio(1, 3)), ratio(7, 27));
        assert_eq!(middle_bias(&b(Builtin::And, 2), &ratio(1, 2)), ratio(1, 4));
    }

    #[test]
    fn pipeline_and_parity() {
        let a = Analyzer::default();
        let r = verify_amplifier_pipeline(
            &a,
            &b(Builtin::And, 2),
            &b(Builtin::Parity, 2),
            1,
            &ratio(1, 3),
            &ratio(1, 4),
            &Middle::Maj,
        )
        .unwrap();
        assert!(r.passed, "{r:?}");
        assert_eq!(r.lh_error, int(0));
        assert!(r.approx_error_of_lp <= ratio(1, 3));
        assert_eq!(r.d_inner, 2);
    }

    #[test]
    fn pipeline_and_middle_one_sided() {
        let a = Analyzer::default();
        let r = verify_amplifier_pipeline(
            &a,
            &b(Builtin::And, 2),
            &b(Builtin::Or, 2),
            2,
            &ratio(1, 3),
            &ratio(1, 4),
            &Middle::And,
        )
        .unwrap();
        assert_eq!(r.e_mu1, int(1));
        assert!(r.passed, "{r:?}");
    }
}
