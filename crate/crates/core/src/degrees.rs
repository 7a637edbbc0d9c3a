//! Exact, approximate, one-sided and sign degree, each with a primal
//! certificate (a polynomial) and a dual certificate (a witness ψ).
//!
//! All LPs are posed over the orbits of the symmetry group of `f` (see
//! [`crate::symmetry`]); the certificates are expanded back to the full cube
//! and re-verified there in exact arithmetic.

use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::boolfn::BooleanFunction;
use crate::cache::Cache;
use crate::error::{Error, Result};
use crate::lp::{
    self, LpLimits, LpOutcome, LpProblem, LpStatus, Relation, Sense, Solution, SolveMode,
};
use crate::polynomial::{interpolate, linf_error, superset_zeta, MultilinearPolynomial};
use crate::rational::{self, Rational};
use crate::symmetry::Orbits;

/// Float answers closer than this to the ε threshold are re-solved exactly.
pub const ESCALATION_MARGIN: f64 = 1e-5;

/// Largest arity any degree measure accepts.
pub const MAX_DEGREE_ARITY: usize = 20;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Measure {
    Exact,
    Approx,
    Sign,
    OneSided,
}

impl Measure {
    fn tag(self) -> &'static str {
        match self {
            Measure::Exact => "exact",
            Measure::Approx => "approx",
            Measure::Sign => "sign",
            Measure::OneSided => "one_sided",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum WitnessKind {
    TwoSided,
    OneSided,
    Sign,
}

/// A function ψ on the cube with `Σ|ψ| = 1` that is orthogonal to every
/// polynomial of degree `< purity_degree`.
///
/// For the two- and one-sided kinds `correlation = Σψ(x)f(x) > epsilon`; the
/// one-sided kind also has `ψ ≤ 0` on `f⁻¹(0)`. For the sign kind ψ agrees in
/// sign with `1 − 2f`, `correlation = Σψ(x)(1 − 2f(x)) = 1` and `epsilon = 0`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DualWitness {
    pub arity: usize,
    pub kind: WitnessKind,
    #[serde(with = "rational::serde_rational_vec")]
    pub values: Vec<Rational>,
    pub purity_degree: usize,
    #[serde(with = "rational::serde_rational")]
    pub epsilon: Rational,
    #[serde(with = "rational::serde_rational")]
    pub correlation: Rational,
}

impl DualWitness {
    pub fn verify(&self, f: &BooleanFunction) -> Result<()> {
        let fail = |m: String| Err(Error::Invariant(format!("dual witness: {m}")));
        if f.arity() != self.arity || self.values.len() != f.len() {
            return Err(Error::ArityMismatch(format!(
                "witness of arity {} for a function of arity {}",
                self.arity,
                f.arity()
            )));
        }
        let l1: Rational = self.values.iter().map(|v| v.abs()).sum();
        if !l1.is_one() {
            return fail(format!("ℓ1 mass is {}", rational::format(&l1)));
        }
        let mut moments = self.values.clone();
        superset_zeta(&mut moments);
        for (mask, m) in moments.iter().enumerate() {
            if (mask.count_ones() as usize) < self.purity_degree && !m.is_zero() {
                return fail(format!("not orthogonal to monomial {mask:#b}"));
            }
        }
        match self.kind {
            WitnessKind::TwoSided | WitnessKind::OneSided => {
                let corr: Rational = (0..f.len())
                    .filter(|&x| f.value(x))
                    .map(|x| self.values[x].clone())
                    .sum();
                if corr != self.correlation {
                    return fail("stored correlation does not match".into());
                }
                if corr <= self.epsilon {
                    return fail(format!(
                        "correlation {} does not exceed ε = {}",
                        rational::format(&corr),
                        rational::format(&self.epsilon)
                    ));
                }
                if self.kind == WitnessKind::OneSided
                    && (0..f.len()).any(|x| !f.value(x) && self.values[x].is_positive())
                {
                    return fail("positive on a 0-input".into());
                }
            }
            WitnessKind::Sign => {
                for x in 0..f.len() {
                    let v = &self.values[x];
                    if (f.value(x) && v.is_positive()) || (!f.value(x) && v.is_negative()) {
                        return fail(format!("sign disagrees with 1 − 2f at {x}"));
                    }
                }
                if !self.correlation.is_one() || !self.epsilon.is_zero() {
                    return fail("sign witness must record correlation 1 and ε 0".into());
                }
            }
        }
        Ok(())
    }
}

/// The optimal correlation at purity `purity_degree` did not exceed ε. By LP
/// duality the approximant (degree `< purity_degree`) has error `optimum`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Refutation {
    pub arity: usize,
    pub kind: WitnessKind,
    pub purity_degree: usize,
    #[serde(with = "rational::serde_rational")]
    pub epsilon: Rational,
    #[serde(with = "rational::serde_rational")]
    pub optimum: Rational,
    pub approximant: MultilinearPolynomial,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "outcome", rename_all = "snake_case")]
pub enum WitnessOutcome {
    Witness(DualWitness),
    Refutation(Refutation),
}

impl WitnessOutcome {
    pub fn witness(&self) -> Option<&DualWitness> {
        match self {
            WitnessOutcome::Witness(w) => Some(w),
            WitnessOutcome::Refutation(_) => None,
        }
    }
}

/// Best achievable error at one degree of the ascending search.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ProfileEntry {
    pub degree: usize,
    pub best_error: f64,
    #[serde(with = "rational::serde_rational_opt", default)]
    pub exact: Option<Rational>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DegreeCertificate {
    pub measure: Measure,
    pub degree: usize,
    #[serde(with = "rational::serde_rational_opt", default)]
    pub epsilon: Option<Rational>,
    pub approximant: Option<MultilinearPolynomial>,
    pub witness: Option<DualWitness>,
    #[serde(default)]
    pub profile: Vec<ProfileEntry>,
    /// Both certificates present and checked in exact arithmetic.
    pub certified: bool,
}

impl DegreeCertificate {
    /// Re-checks every attached certificate against `f`.
    pub fn verify(&self, f: &BooleanFunction) -> Result<()> {
        let fail = |m: String| {
            Err(Error::Invariant(format!(
                "{} certificate: {m}",
                self.measure.tag()
            )))
        };
        if let Some(p) = &self.approximant {
            if p.arity() != f.arity() {
                return fail("approximant arity".into());
            }
            if p.degree() > self.degree {
                return fail(format!(
                    "approximant has degree {} > {}",
                    p.degree(),
                    self.degree
                ));
            }
            match self.measure {
                Measure::Exact => {
                    if linf_error(p, f)? != Rational::zero() || p.degree() != self.degree {
                        return fail("approximant is not the exact representation".into());
                    }
                }
                Measure::Approx => {
                    let eps = self.epsilon.clone().unwrap_or_default();
                    if linf_error(p, f)? > eps {
                        return fail("approximant error exceeds ε".into());
                    }
                }
                Measure::OneSided => {
                    let eps = self.epsilon.clone().unwrap_or_default();
                    if !is_one_sided_approximation(p, f, &eps) {
                        return fail("approximant is not a one-sided ε-approximation".into());
                    }
                }
                Measure::Sign => {
                    if !sign_represents(p, f) {
                        return fail("approximant does not sign-represent".into());
                    }
                }
            }
        } else if self.certified {
            return fail("missing approximant".into());
        }
        if let Some(w) = &self.witness {
            let kind = match self.measure {
                Measure::Approx => WitnessKind::TwoSided,
                Measure::OneSided => WitnessKind::OneSided,
                Measure::Sign => WitnessKind::Sign,
                Measure::Exact => return fail("exact degree carries no witness".into()),
            };
            if w.kind != kind || w.purity_degree != self.degree {
                return fail("witness kind or purity degree mismatch".into());
            }
            if self.measure != Measure::Sign && Some(&w.epsilon) != self.epsilon.as_ref() {
                return fail("witness ε mismatch".into());
            }
            w.verify(f)?;
        } else if self.certified && self.degree > 0 && self.measure != Measure::Exact {
            return fail("missing dual witness".into());
        }
        Ok(())
    }
}

pub fn is_one_sided_approximation(
    p: &MultilinearPolynomial,
    f: &BooleanFunction,
    eps: &Rational,
) -> bool {
    let one = Rational::one();
    p.cube_values().iter().enumerate().all(|(x, v)| {
        if f.value(x) {
            (v - &one).abs() <= *eps
        } else {
            v <= eps
        }
    })
}

pub fn sign_represents(p: &MultilinearPolynomial, f: &BooleanFunction) -> bool {
    p.cube_values().iter().enumerate().all(|(x, v)| {
        if f.value(x) {
            v.is_negative()
        } else {
            v.is_positive()
        }
    })
}

/// Computes degree measures. The LP mode decides how ascending searches are
/// run; certificates are always produced in exact arithmetic when the LP fits
/// the exact-mode budget.
#[derive(Clone, Debug)]
pub struct Analyzer {
    pub mode: SolveMode,
    pub limits: LpLimits,
    pub cache: Option<Cache>,
}

impl Default for Analyzer {
    fn default() -> Self {
        Analyzer {
            mode: SolveMode::Exact,
            limits: LpLimits::default(),
            cache: None,
        }
    }
}

/// Per-function data shared by all LPs on that function.
struct Ctx<'a> {
    f: &'a BooleanFunction,
    orbits: Orbits,
    fval: Vec<bool>,
    sizes: Vec<Rational>,
}

impl<'a> Ctx<'a> {
    fn new(f: &'a BooleanFunction) -> Result<Self> {
        if f.arity() > MAX_DEGREE_ARITY {
            return Err(Error::LimitExceeded(format!(
                "degree measures are capped at arity {MAX_DEGREE_ARITY}, got {}",
                f.arity()
            )));
        }
        let orbits = Orbits::of(f);
        let fval = orbits.representatives.iter().map(|&x| f.value(x)).collect();
        let sizes = orbits
            .sizes
            .iter()
            .map(|&s| rational::int(s as i64))
            .collect();
        Ok(Ctx {
            f,
            orbits,
            fval,
            sizes,
        })
    }

    fn k(&self) -> usize {
        self.orbits.count()
    }

    fn expand(&self, per_orbit: &[Rational]) -> Vec<Rational> {
        self.orbits
            .orbit_of
            .iter()
            .map(|&o| per_orbit[o as usize].clone())
            .collect()
    }

    /// Orbit values `Σ_k y_k r_k[O] / |O|` of the symmetrised polynomial
    /// `Σ_k y_k x^{S_k}`.
    fn orbit_poly(&self, rows: &[(usize, Vec<u64>)], y: &[Rational]) -> Vec<Rational> {
        (0..self.k())
            .map(|o| {
                let mut s = Rational::zero();
                for ((_, r), yk) in rows.iter().zip(y) {
                    if r[o] != 0 && !yk.is_zero() {
                        s += yk * rational::int(r[o] as i64);
                    }
                }
                s / &self.sizes[o]
            })
            .collect()
    }

    fn poly_from_orbits(&self, per_orbit: &[Rational]) -> Result<MultilinearPolynomial> {
        MultilinearPolynomial::from_cube_values(self.f.arity(), &self.expand(per_orbit))
    }
}

/// Witness LP: maximise `Σψf` with `Σ|ψ| ≤ 1` and ψ orthogonal to degree
/// `< purity`, ψ constant on orbits, split as `ψ = ψ⁺ − ψ⁻`.
struct WitnessLp {
    problem: LpProblem,
    plus: Vec<Option<usize>>,
    minus: Vec<usize>,
    rows: Vec<(usize, Vec<u64>)>,
}

fn witness_lp(ctx: &Ctx, purity: usize, one_sided: bool) -> WitnessLp {
    let k = ctx.k();
    let rows = if purity == 0 {
        Vec::new()
    } else {
        ctx.orbits.independent_moments(purity - 1)
    };
    let mut plus = Vec::with_capacity(k);
    let mut minus = Vec::with_capacity(k);
    let mut nvars = 0;
    for o in 0..k {
        if one_sided && !ctx.fval[o] {
            plus.push(None);
        } else {
            plus.push(Some(nvars));
            nvars += 1;
        }
        minus.push(nvars);
        nvars += 1;
    }
    let mut problem = LpProblem::new(nvars, Sense::Maximize);
    for o in 0..k {
        if ctx.fval[o] {
            if let Some(v) = plus[o] {
                problem.set_objective(v, ctx.sizes[o].clone());
            }
            problem.set_objective(minus[o], -ctx.sizes[o].clone());
        }
    }
    let mut l1 = Vec::new();
    for o in 0..k {
        if let Some(v) = plus[o] {
            l1.push((v, ctx.sizes[o].clone()));
        }
        l1.push((minus[o], ctx.sizes[o].clone()));
    }
    problem.add_sparse(l1, Relation::Le, Rational::one());
    for (_, r) in &rows {
        let mut terms = Vec::new();
        for o in 0..k {
            if r[o] == 0 {
                continue;
            }
            let c = rational::int(r[o] as i64);
            if let Some(v) = plus[o] {
                terms.push((v, c.clone()));
            }
            terms.push((minus[o], -c));
        }
        problem.add_sparse(terms, Relation::Eq, Rational::zero());
    }
    WitnessLp {
        problem,
        plus,
        minus,
        rows,
    }
}

/// Exact solution of a witness LP, mapped back to orbit values.
struct WitnessSolution {
    optimum: Rational,
    /// ψ value on each point of each orbit.
    psi: Vec<Rational>,
    /// Approximant value on each orbit (degree `< purity`, error `optimum`).
    approx: Vec<Rational>,
}

fn optimal<T>(out: LpOutcome<T>, what: &str) -> Result<LpOutcome<T>> {
    match out.status {
        LpStatus::Optimal => Ok(out),
        s => Err(Error::Invariant(format!("{what} LP unexpectedly {s:?}"))),
    }
}

impl Analyzer {
    pub fn new(mode: SolveMode) -> Self {
        Analyzer {
            mode,
            ..Self::default()
        }
    }

    pub fn with_cache(mut self, cache: Option<Cache>) -> Self {
        self.cache = cache;
        self
    }

    fn mode_tag(&self) -> String {
        match self.mode {
            SolveMode::Exact => "exact".into(),
            SolveMode::Float { tolerance } => format!("float:{tolerance:e}"),
        }
    }

    fn cache_key(&self, f: &BooleanFunction, measure: Measure, eps: Option<&Rational>) -> String {
        let eps = eps.map(rational::format).unwrap_or_default();
        Cache::key(&[
            "degree-v1",
            measure.tag(),
            &f.to_tt_literal(),
            &eps,
            &self.mode_tag(),
        ])
    }

    fn cached(
        &self,
        f: &BooleanFunction,
        measure: Measure,
        eps: Option<&Rational>,
        compute: impl FnOnce() -> Result<DegreeCertificate>,
    ) -> Result<DegreeCertificate> {
        let key = self.cache.as_ref().map(|_| self.cache_key(f, measure, eps));
        if let (Some(cache), Some(key)) = (&self.cache, &key) {
            if let Some(cert) = cache.get::<DegreeCertificate>(key) {
                if cert.measure == measure && cert.verify(f).is_ok() {
                    return Ok(cert);
                }
            }
        }
        let cert = compute()?;
        cert.verify(f)?;
        if let (Some(cache), Some(key)) = (&self.cache, &key) {
            cache.put(key, &cert)?;
        }
        Ok(cert)
    }

    fn solve_exact(&self, p: &LpProblem) -> Result<LpOutcome<Rational>> {
        Ok(lp::solve_exact(p, &self.limits)?)
    }

    fn solve_witness_exact(
        &self,
        ctx: &Ctx,
        purity: usize,
        one_sided: bool,
    ) -> Result<WitnessSolution> {
        let lp = witness_lp(ctx, purity, one_sided);
        let out = optimal(self.solve_exact(&lp.problem)?, "witness")?;
        let optimum = out.objective.clone().unwrap_or_default();
        let mut psi: Vec<Rational> = (0..ctx.k())
            .map(|o| {
                let p = lp.plus[o]
                    .map(|v| out.primal[v].clone())
                    .unwrap_or_default();
                p - &out.primal[lp.minus[o]]
            })
            .collect();
        let l1: Rational = psi.iter().zip(&ctx.sizes).map(|(v, s)| v.abs() * s).sum();
        if optimum.is_positive() && !l1.is_one() {
            for v in &mut psi {
                *v = &*v / &l1;
            }
        }
        let approx = ctx.orbit_poly(&lp.rows, &out.dual[1..]);
        Ok(WitnessSolution {
            optimum,
            psi,
            approx,
        })
    }

    /// Best error of a degree-`d` approximation, i.e. the witness optimum at
    /// purity `d + 1`, with float answers near `eps` escalated to exact.
    fn best_error(
        &self,
        ctx: &Ctx,
        d: usize,
        one_sided: bool,
        eps: &Rational,
    ) -> Result<(f64, Option<WitnessSolution>)> {
        match self.mode {
            SolveMode::Exact => {
                let sol = self.solve_witness_exact(ctx, d + 1, one_sided)?;
                Ok((rational::to_f64(&sol.optimum), Some(sol)))
            }
            SolveMode::Float { tolerance } => {
                let lp = witness_lp(ctx, d + 1, one_sided);
                let out = optimal(
                    lp::solve_float(&lp.problem, tolerance, &self.limits)?,
                    "witness",
                )?;
                let opt = out.objective.unwrap_or(0.0);
                if (opt - rational::to_f64(eps)).abs() < ESCALATION_MARGIN {
                    let sol = self.solve_witness_exact(ctx, d + 1, one_sided).map_err(|e| {
                        Error::LimitExceeded(format!(
                            "float optimum {opt} is within {ESCALATION_MARGIN} of ε and exact escalation failed: {e}"
                        ))
                    })?;
                    Ok((rational::to_f64(&sol.optimum), Some(sol)))
                } else {
                    Ok((opt, None))
                }
            }
        }
    }

    pub fn exact_degree(&self, f: &BooleanFunction) -> Result<DegreeCertificate> {
        self.cached(f, Measure::Exact, None, || {
            let p = interpolate(f)?;
            Ok(DegreeCertificate {
                measure: Measure::Exact,
                degree: p.degree(),
                epsilon: None,
                approximant: Some(p),
                witness: None,
                profile: Vec::new(),
                certified: true,
            })
        })
    }

    pub fn approx_degree(&self, f: &BooleanFunction, eps: &Rational) -> Result<DegreeCertificate> {
        check_eps(eps)?;
        self.cached(f, Measure::Approx, Some(eps), || {
            self.ascending(f, eps, false)
        })
    }

    pub fn one_sided_approx_degree(
        &self,
        f: &BooleanFunction,
        eps: &Rational,
    ) -> Result<DegreeCertificate> {
        check_eps(eps)?;
        self.cached(f, Measure::OneSided, Some(eps), || {
            self.ascending(f, eps, true)
        })
    }

    fn ascending(
        &self,
        f: &BooleanFunction,
        eps: &Rational,
        one_sided: bool,
    ) -> Result<DegreeCertificate> {
        let ctx = Ctx::new(f)?;
        let n = f.arity();
        let eps_f = rational::to_f64(eps);
        let mut profile = Vec::new();
        let mut answer = None;
        for d in 0..n {
            let (err, sol) = self.best_error(&ctx, d, one_sided, eps)?;
            let exact = sol.as_ref().map(|s| s.optimum.clone());
            let within = match &exact {
                Some(e) => e <= eps,
                None => err <= eps_f,
            };
            profile.push(ProfileEntry {
                degree: d,
                best_error: err,
                exact,
            });
            if within {
                answer = Some((d, sol));
                break;
            }
        }
        let (degree, sol) = answer.unwrap_or((n, None));
        if degree == n {
            profile.push(ProfileEntry {
                degree: n,
                best_error: 0.0,
                exact: Some(Rational::zero()),
            });
        }

        let approximant = if degree == n {
            Some(interpolate(f)?)
        } else {
            let sol = match sol {
                Some(s) => Some(s),
                None => self.solve_witness_exact(&ctx, degree + 1, one_sided).ok(),
            };
            match sol {
                Some(s) => Some(ctx.poly_from_orbits(&s.approx)?),
                None => None,
            }
        };
        let witness = if degree == 0 {
            None
        } else {
            match self.witness_at(&ctx, eps, degree, one_sided) {
                Ok(WitnessOutcome::Witness(w)) => Some(w),
                Ok(WitnessOutcome::Refutation(r)) => {
                    return Err(Error::Invariant(format!(
                        "degree {degree} chosen but the witness LP only reaches {}",
                        rational::format(&r.optimum)
                    )))
                }
                Err(_) if self.mode != SolveMode::Exact => None,
                Err(e) => return Err(e),
            }
        };
        let certified = approximant.is_some() && (degree == 0 || witness.is_some());
        Ok(DegreeCertificate {
            measure: if one_sided {
                Measure::OneSided
            } else {
                Measure::Approx
            },
            degree,
            epsilon: Some(eps.clone()),
            approximant,
            witness,
            profile,
            certified,
        })
    }

    fn witness_at(
        &self,
        ctx: &Ctx,
        eps: &Rational,
        d: usize,
        one_sided: bool,
    ) -> Result<WitnessOutcome> {
        let sol = self.solve_witness_exact(ctx, d, one_sided)?;
        let kind = if one_sided {
            WitnessKind::OneSided
        } else {
            WitnessKind::TwoSided
        };
        if sol.optimum > *eps {
            let w = DualWitness {
                arity: ctx.f.arity(),
                kind,
                values: ctx.expand(&sol.psi),
                purity_degree: d,
                epsilon: eps.clone(),
                correlation: sol.optimum.clone(),
            };
            w.verify(ctx.f)?;
            Ok(WitnessOutcome::Witness(w))
        } else {
            let approximant = ctx.poly_from_orbits(&sol.approx)?;
            let err = if one_sided {
                one_sided_error(&approximant, ctx.f)
            } else {
                linf_error(&approximant, ctx.f)?
            };
            if approximant.degree() >= d || err != sol.optimum {
                return Err(Error::Invariant(format!(
                    "refutation approximant has degree {} and error {} (optimum {})",
                    approximant.degree(),
                    rational::format(&err),
                    rational::format(&sol.optimum)
                )));
            }
            Ok(WitnessOutcome::Refutation(Refutation {
                arity: ctx.f.arity(),
                kind,
                purity_degree: d,
                epsilon: eps.clone(),
                optimum: sol.optimum,
                approximant,
            }))
        }
    }

    /// Maximises `Σψf` over ψ of ℓ1-mass 1 orthogonal to degree `< d`; a
    /// witness if the optimum exceeds ε (so `adeg_ε(f) ≥ d`), otherwise a
    /// refutation whose approximant shows `adeg_ε(f) < d`.
    pub fn dual_witness(
        &self,
        f: &BooleanFunction,
        eps: &Rational,
        d: usize,
    ) -> Result<WitnessOutcome> {
        check_eps(eps)?;
        check_purity(f, d)?;
        self.witness_at(&Ctx::new(f)?, eps, d, false)
    }

    /// One-sided variant: ψ is additionally `≤ 0` on `f⁻¹(0)`.
    pub fn one_sided_witness(
        &self,
        f: &BooleanFunction,
        eps: &Rational,
        d: usize,
    ) -> Result<WitnessOutcome> {
        check_eps(eps)?;
        check_purity(f, d)?;
        self.witness_at(&Ctx::new(f)?, eps, d, true)
    }

    /// Witness at an explicit threshold, which may lie outside `(0, 1/2)`;
    /// used by the amplifier with threshold `(1 − ε)/2`.
    pub fn witness_at_threshold(
        &self,
        f: &BooleanFunction,
        threshold: &Rational,
        d: usize,
        one_sided: bool,
    ) -> Result<WitnessOutcome> {
        check_purity(f, d)?;
        self.witness_at(&Ctx::new(f)?, threshold, d, one_sided)
    }

    /// Least `d` whose best (one-sided) error is `≤ threshold`; no range
    /// restriction on the threshold beyond `threshold ≥ 0`.
    pub fn degree_at_threshold(
        &self,
        f: &BooleanFunction,
        threshold: &Rational,
        one_sided: bool,
    ) -> Result<usize> {
        if threshold.is_negative() {
            return Err(Error::InvalidArgument("negative threshold".into()));
        }
        let ctx = Ctx::new(f)?;
        for d in 0..f.arity() {
            let sol = self.solve_witness_exact(&ctx, d + 1, one_sided)?;
            if sol.optimum <= *threshold {
                return Ok(d);
            }
        }
        Ok(f.arity())
    }

    fn sign_feasible(&self, ctx: &Ctx, d: usize) -> Result<Option<Vec<Rational>>> {
        let rows = ctx.orbits.independent_moments(d);
        let m = rows.len();
        let mut p = LpProblem::new(m.max(1), Sense::Maximize);
        for j in 0..m {
            p.set_free(j);
        }
        for o in 0..ctx.k() {
            let s = if ctx.fval[o] { -1 } else { 1 };
            let terms = rows
                .iter()
                .enumerate()
                .filter(|(_, (_, r))| r[o] != 0)
                .map(|(j, (_, r))| (j, rational::int(s * r[o] as i64)));
            p.add_sparse(terms, Relation::Ge, ctx.sizes[o].clone());
        }
        let status = match self.mode {
            SolveMode::Exact => None,
            SolveMode::Float { tolerance } => {
                Some(lp::solve_float(&p, tolerance, &self.limits).map(|o| o.status))
            }
        };
        match status {
            Some(Ok(LpStatus::Infeasible)) => return Ok(None),
            Some(Ok(_)) | None => {}
            Some(Err(e)) => return Err(e.into()),
        }
        let out = match self.solve_exact(&p) {
            Ok(o) => o,
            Err(Error::Lp(lp::LpError::SizeCap { .. })) if status.is_some() => {
                return Ok(Some(Vec::new()));
            }
            Err(e) => return Err(e),
        };
        match out.status {
            LpStatus::Infeasible => Ok(None),
            LpStatus::Optimal => Ok(Some(ctx.orbit_poly(&rows, &out.primal[..m]))),
            LpStatus::Unbounded => Err(Error::Invariant("sign LP unbounded".into())),
        }
    }

    fn sign_witness(&self, ctx: &Ctx, purity: usize) -> Result<DualWitness> {
        let rows = ctx.orbits.independent_moments(purity - 1);
        let k = ctx.k();
        let mut p = LpProblem::new(k, Sense::Maximize);
        p.add_sparse(
            (0..k).map(|o| (o, ctx.sizes[o].clone())),
            Relation::Eq,
            Rational::one(),
        );
        for (_, r) in &rows {
            let terms = (0..k).filter(|&o| r[o] != 0).map(|o| {
                let s = if ctx.fval[o] { -1 } else { 1 };
                (o, rational::int(s * r[o] as i64))
            });
            p.add_sparse(terms, Relation::Eq, Rational::zero());
        }
        let out = optimal(self.solve_exact(&p)?, "sign witness")?;
        let psi: Vec<Rational> = (0..k)
            .map(|o| {
                if ctx.fval[o] {
                    -out.primal[o].clone()
                } else {
                    out.primal[o].clone()
                }
            })
            .collect();
        let w = DualWitness {
            arity: ctx.f.arity(),
            kind: WitnessKind::Sign,
            values: ctx.expand(&psi),
            purity_degree: purity,
            epsilon: Rational::zero(),
            correlation: Rational::one(),
        };
        w.verify(ctx.f)?;
        Ok(w)
    }

    /// Least `d` admitting `p` of degree `≤ d` with `(1 − 2f(x))p(x) ≥ 1`.
    pub fn sign_degree(&self, f: &BooleanFunction) -> Result<DegreeCertificate> {
        self.cached(f, Measure::Sign, None, || {
            let ctx = Ctx::new(f)?;
            let n = f.arity();
            let mut found = None;
            for d in 0..n {
                if let Some(vals) = self.sign_feasible(&ctx, d)? {
                    found = Some((d, vals));
                    break;
                }
            }
            let (degree, approximant) = match found {
                Some((d, vals)) if vals.is_empty() => (d, None),
                Some((d, vals)) => (d, Some(ctx.poly_from_orbits(&vals)?)),
                None => {
                    let sign: Vec<Rational> = (0..f.len())
                        .map(|x| rational::int(if f.value(x) { -1 } else { 1 }))
                        .collect();
                    (n, Some(MultilinearPolynomial::from_cube_values(n, &sign)?))
                }
            };
            let witness = if degree == 0 {
                None
            } else {
                match self.sign_witness(&ctx, degree) {
                    Ok(w) => Some(w),
                    Err(_) if self.mode != SolveMode::Exact => None,
                    Err(e) => return Err(e),
                }
            };
            let certified = approximant.is_some() && (degree == 0 || witness.is_some());
            Ok(DegreeCertificate {
                measure: Measure::Sign,
                degree,
                epsilon: None,
                approximant,
                witness,
                profile: Vec::new(),
                certified,
            })
        })
    }

    pub fn is_full_sign_degree(&self, f: &BooleanFunction) -> Result<bool> {
        Ok(self.sign_degree(f)?.degree == f.arity())
    }

    /// Dispatches to the LP solver in the analyzer's mode.
    pub fn solve(&self, p: &LpProblem) -> Result<Solution> {
        Ok(lp::solve(p, self.mode, &self.limits)?)
    }
}

fn one_sided_error(p: &MultilinearPolynomial, f: &BooleanFunction) -> Rational {
    let one = Rational::one();
    p.cube_values()
        .iter()
        .enumerate()
        .map(|(x, v)| {
            if f.value(x) {
                (v - &one).abs()
            } else {
                v.clone().max(Rational::zero())
            }
        })
        .max()
        .unwrap_or_default()
}

fn check_eps(eps: &Rational) -> Result<()> {
    if !eps.is_positive() || *eps >= rational::ratio(1, 2) {
        return Err(Error::InvalidArgument(format!(
            "ε must lie in (0, 1/2), got {}",
            rational::format(eps)
        )));
    }
    Ok(())
}

fn check_purity(f: &BooleanFunction, d: usize) -> Result<()> {
    if d == 0 {
        return Err(Error::InvalidArgument(
            "purity degree must be at least 1".into(),
        ));
    }
    if d > f.arity() + 1 {
        return Err(Error::InvalidArgument(format!(
            "purity degree {d} exceeds arity {} + 1",
            f.arity()
        )));
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::boolfn::Builtin;
    use crate::rational::{int, ratio};

    fn b(kind: Builtin, n: usize) -> BooleanFunction {
        BooleanFunction::builtin(kind, n).unwrap()
    }

    fn third() -> Rational {
        ratio(1, 3)
    }

    #[test]
    fn exact_degrees() {
        let a = Analyzer::default();
        assert_eq!(a.exact_degree(&b(Builtin::And, 2)).unwrap().degree, 2);
        assert_eq!(a.exact_degree(&b(Builtin::Maj, 3)).unwrap().degree, 3);
        assert_eq!(a.exact_degree(&b(Builtin::Const1, 0)).unwrap().degree, 0);
    }

    #[test]
    fn approx_and2() {
        let a = Analyzer::default();
        let cert = a.approx_degree(&b(Builtin::And, 2), &third()).unwrap();
        assert_eq!(cert.degree, 1);
        let p = cert.approximant.clone().unwrap();
        assert_eq!(linf_error(&p, &b(Builtin::And, 2)).unwrap(), ratio(1, 4));
        assert!(cert.witness.is_some());
        assert!(cert.certified);
    }

    #[test]
    fn approx_parity() {
        let a = Analyzer::default();
        for n in 1..=4 {
            let cert = a.approx_degree(&b(Builtin::Parity, n), &third()).unwrap();
            assert_eq!(cert.degree, n);
            assert!(cert.certified);
        }
    }

    #[test]
    fn witness_examples() {
        let a = Analyzer::default();
        let xor = b(Builtin::Parity, 2);
        let w = a.dual_witness(&xor, &third(), 2).unwrap();
        let w = w.witness().unwrap();
        assert_eq!(w.correlation, ratio(1, 2));
        assert_eq!(
            w.values,
            vec![ratio(-1, 4), ratio(1, 4), ratio(1, 4), ratio(-1, 4)]
        );

        let and = b(Builtin::And, 2);
        match a.dual_witness(&and, &third(), 2).unwrap() {
            WitnessOutcome::Refutation(r) => assert_eq!(r.optimum, ratio(1, 4)),
            other => panic!("expected refutation, got {other:?}"),
        }
        let w = a.dual_witness(&and, &third(), 1).unwrap();
        assert_eq!(w.witness().unwrap().correlation, ratio(1, 2));
    }

    #[test]
    fn sign_degrees() {
        let a = Analyzer::default();
        let maj = a.sign_degree(&b(Builtin::Maj, 3)).unwrap();
        assert_eq!(maj.degree, 1);
        assert!(maj.certified);
        assert_eq!(a.sign_degree(&b(Builtin::Parity, 2)).unwrap().degree, 2);
        assert_eq!(a.sign_degree(&b(Builtin::And, 2)).unwrap().degree, 1);
        assert!(!a.is_full_sign_degree(&b(Builtin::Maj, 3)).unwrap());
        assert!(a.is_full_sign_degree(&b(Builtin::Parity, 2)).unwrap());
    }

    #[test]
    fn one_sided_degrees() {
        let a = Analyzer::default();
        for (kind, expect) in [(Builtin::Or, 1), (Builtin::And, 1), (Builtin::Parity, 2)] {
            let cert = a.one_sided_approx_degree(&b(kind, 2), &third()).unwrap();
            assert_eq!(cert.degree, expect, "{kind}");
            assert!(cert.certified);
        }
        let w = a
            .one_sided_witness(&b(Builtin::Or, 2), &third(), 1)
            .unwrap();
        let w = w.witness().unwrap().clone();
        assert!(!w.values[0].is_positive());
    }

    #[test]
    fn float_mode_agrees() {
        let a = Analyzer::new(SolveMode::float());
        let maj = b(Builtin::Maj, 3);
        let exact = Analyzer::default().approx_degree(&maj, &third()).unwrap();
        let float = a.approx_degree(&maj, &third()).unwrap();
        assert_eq!(exact.degree, float.degree);
    }

    #[test]
    fn eps_is_validated() {
        let a = Analyzer::default();
        assert!(a.approx_degree(&b(Builtin::And, 2), &ratio(1, 2)).is_err());
        assert!(a.approx_degree(&b(Builtin::And, 2), &int(0)).is_err());
    }

    #[test]
    fn certificate_json_round_trip() {
        let a = Analyzer::default();
        let f = b(Builtin::Maj, 3);
        let cert = a.approx_degree(&f, &third()).unwrap();
        let json = serde_json::to_string(&cert).unwrap();
        assert!(json.contains("\"measure\":\"approx\""));
        let back: DegreeCertificate = serde_json::from_str(&json).unwrap();
        back.verify(&f).unwrap();
        assert_eq!(back, cert);
    }
}
