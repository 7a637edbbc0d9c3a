//! Acceptance run: one PASS/FAIL line per criterion, with elapsed time and
//! the pinned time limit. Exits nonzero when any criterion fails.

use std::time::{Duration, Instant};

use num_traits::One;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use adeg::amplify::{apply_l, mu_expectation, split_dual, verify_amplifier_pipeline, Middle};
use adeg::boolfn::{BooleanFunction, Builtin};
use adeg::degrees::{Analyzer, WitnessOutcome};
use adeg::experiments::{
    composition_table, count_depending_on_all, default_composition_grid, gadget_census,
    rows_to_csv, Manifest,
};
use adeg::gadgets::{majority_projection, MajorityBase, MajoritySearch};
use adeg::polynomial::{interpolate, robustness_probe, MultilinearPolynomial};
use adeg::rational::{self, Rational};
use adeg::spectral::spectral_sensitivity;

type Check = Result<String, String>;

fn b(kind: Builtin, n: usize) -> BooleanFunction {
    BooleanFunction::builtin(kind, n).unwrap()
}

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn err<E: std::fmt::Display>(e: E) -> String {
    e.to_string()
}

fn spectral_values() -> Check {
    let ao = b(Builtin::And, 2).compose_with(&b(Builtin::Or, 2)).unwrap();
    let cases = [
        ("AND2", b(Builtin::And, 2), 2f64.sqrt(), 1e-9),
        ("MAJ3", b(Builtin::Maj, 3), 2.0, 1e-9),
        ("MAJ3^2", b(Builtin::Maj, 3).power(2).unwrap(), 4.0, 1e-9),
        ("AND2 o OR2", ao.clone(), 2.0, 1e-9),
        ("(AND2 o OR2)^2", ao.power(2).unwrap(), 4.0, 1e-6),
    ];
    let mut worst: f64 = 0.0;
    for (name, f, want, tol) in cases {
        let r = spectral_sensitivity(&f, 1e-12).map_err(err)?;
        let gap = (r.lambda - want).abs();
        ensure(gap <= tol, || {
            format!("λ({name}) = {} differs from {want} by {gap:e}", r.lambda)
        })?;
        worst = worst.max(gap);
    }
    Ok(format!("5 values, max deviation {worst:.1e}"))
}

fn degree_oracles() -> Check {
    let an = Analyzer::default();
    let third = rational::ratio(1, 3);
    let mut checks = Vec::new();
    let mut approx =
        |name: String, f: BooleanFunction, want: usize, one_sided: bool| -> Result<(), String> {
            let c = if one_sided {
                an.one_sided_approx_degree(&f, &third)
            } else {
                an.approx_degree(&f, &third)
            }
            .map_err(err)?;
            ensure(c.degree == want, || {
                format!("{name}: degree {} ≠ {want}", c.degree)
            })?;
            ensure(c.certified && c.approximant.is_some(), || {
                format!("{name}: missing approximant")
            })?;
            ensure(want == 0 || c.witness.is_some(), || {
                format!("{name}: missing witness")
            })?;
            c.verify(&f).map_err(|e| format!("{name}: {e}"))?;
            checks.push(name);
            Ok(())
        };
    approx("adeg(AND2) = 1".into(), b(Builtin::And, 2), 1, false)?;
    for n in 1..=4 {
        approx(
            format!("adeg(PARITY{n}) = {n}"),
            b(Builtin::Parity, n),
            n,
            false,
        )?;
    }
    approx("odeg(OR2) = 1".into(), b(Builtin::Or, 2), 1, true)?;
    for (name, f, want) in [
        ("sdeg(MAJ3) = 1", b(Builtin::Maj, 3), 1),
        ("sdeg(PARITY2) = 2", b(Builtin::Parity, 2), 2),
    ] {
        let c = an.sign_degree(&f).map_err(err)?;
        ensure(c.degree == want, || format!("{name}: got {}", c.degree))?;
        ensure(
            c.certified && c.approximant.is_some() && c.witness.is_some(),
            || format!("{name}: certificates missing"),
        )?;
        c.verify(&f).map_err(|e| format!("{name}: {e}"))?;
        checks.push(name.into());
    }
    Ok(format!(
        "{} answers, all certificates re-verified exactly",
        checks.len()
    ))
}

fn duality_consistency() -> Check {
    let an = Analyzer::default();
    let third = rational::ratio(1, 3);
    let mut count = 0;
    for n in 0..=3 {
        for f in BooleanFunction::all(n) {
            let d = an.approx_degree(&f, &third).map_err(err)?.degree;
            if d >= 1 {
                match an.dual_witness(&f, &third, d).map_err(err)? {
                    WitnessOutcome::Witness(w) => {
                        w.verify(&f).map_err(|e| format!("{f}: {e}"))?;
                        ensure(w.correlation > third, || format!("{f}: weak witness"))?;
                    }
                    WitnessOutcome::Refutation(_) => {
                        return Err(format!("{f}: no witness at degree {d}"))
                    }
                }
            }
            match an.dual_witness(&f, &third, d + 1).map_err(err)? {
                WitnessOutcome::Refutation(r) => {
                    let p = &r.approximant;
                    let e = adeg::polynomial::linf_error(p, &f).map_err(err)?;
                    ensure(p.degree() <= d && e <= third, || {
                        format!("{f}: refutation at {} invalid", d + 1)
                    })?;
                }
                WitnessOutcome::Witness(_) => {
                    return Err(format!(
                        "{f}: witness at degree {} contradicts adeg {d}",
                        d + 1
                    ))
                }
            }
            count += 1;
        }
    }
    ensure(count == 278, || format!("enumerated {count} functions"))?;
    Ok(format!(
        "{count} functions on ≤ 3 bits (2+4+16+256), witness at d (d ≥ 1) and refutation at d+1"
    ))
}

fn gadget_census_check() -> Check {
    let r3 = gadget_census(3, None, 0).map_err(err)?;
    let expected = count_depending_on_all(3) - 4;
    ensure(count_depending_on_all(3) == 218 && expected == 214, || {
        "inclusion–exclusion count".into()
    })?;
    ensure(r3.qualifying as u64 == expected, || {
        format!("{} qualifying, expected {expected}", r3.qualifying)
    })?;
    ensure(r3.all_passed(), || {
        format!("t=3: {}/{} passed", r3.passed, r3.qualifying)
    })?;
    ensure(r3.max_depth <= 3, || format!("depth {}", r3.max_depth))?;
    ensure(
        r3.entries
            .iter()
            .all(|e| e.block.as_ref().is_some_and(|b| b.indices.0 != b.indices.1)),
        || "a block is missing".into(),
    )?;
    let r4 = gadget_census(4, Some(1000), 20240611).map_err(err)?;
    ensure(r4.all_passed() && r4.qualifying == 1000, || {
        format!("t=4: {}/{} passed", r4.passed, r4.qualifying)
    })?;
    Ok(format!(
        "t=3: {}/{} (inclusion–exclusion 218 − 4), max depth {}; t=4 sample: {}/1000",
        r3.passed, expected, r3.max_depth, r4.passed
    ))
}

fn random_poly(rng: &mut ChaCha8Rng, arity: usize) -> MultilinearPolynomial {
    let terms = rng.gen_range(1..=8);
    let mut p = MultilinearPolynomial::zero(arity);
    for _ in 0..terms {
        let mask = rng.gen_range(0..1usize << arity);
        let c = rational::ratio(rng.gen_range(-9..=9), rng.gen_range(1..=5));
        p.add_term(mask, c);
    }
    p
}

fn amplifier_machinery() -> Check {
    let an = Analyzer::default();
    let eps = rational::ratio(1, 3);
    let threshold = (Rational::one() - &eps) / rational::int(2);
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let mut notes = Vec::new();
    for (name, g) in [
        ("PARITY2", b(Builtin::Parity, 2)),
        ("OR2", b(Builtin::Or, 2)),
        ("MAJ3", b(Builtin::Maj, 3)),
    ] {
        let d = an.degree_at_threshold(&g, &threshold, false).map_err(err)?;
        let w = match an
            .witness_at_threshold(&g, &threshold, d, false)
            .map_err(err)?
        {
            WitnessOutcome::Witness(w) => w,
            WitnessOutcome::Refutation(_) => return Err(format!("{name}: no witness at {d}")),
        };
        let s = split_dual(&w).map_err(err)?;
        let e1 = mu_expectation(&s, &g, true).map_err(err)?;
        let e0 = mu_expectation(&s, &g, false).map_err(err)?;
        ensure(
            e1 > rational::ratio(2, 3) && e0 < rational::ratio(1, 3),
            || {
                format!(
                    "{name}: E_μ1 = {}, E_μ0 = {}",
                    rational::format(&e1),
                    rational::format(&e0)
                )
            },
        )?;
        let m = g.arity();
        for _ in 0..100 {
            let p = random_poly(&mut rng, 2 * m);
            let lp = apply_l(&p, &s, 2, 1).map_err(err)?;
            ensure(lp.degree() <= p.degree() / d, || {
                format!(
                    "{name}: deg Lp = {} > floor({} / {d})",
                    lp.degree(),
                    p.degree()
                )
            })?;
        }
        notes.push(format!(
            "{name} d={d} E1={} E0={}",
            rational::format(&e1),
            rational::format(&e0)
        ));
    }
    let delta = rational::ratio(1, 4);
    let r = verify_amplifier_pipeline(
        &an,
        &b(Builtin::Or, 2),
        &b(Builtin::Parity, 2),
        3,
        &eps,
        &delta,
        &Middle::Maj,
    )
    .map_err(err)?;
    let bound = &delta + &eps;
    ensure(r.composed_arity == 12, || {
        format!("composed arity {}", r.composed_arity)
    })?;
    ensure(r.passed && r.approx_error_of_lp <= bound, || {
        format!(
            "12-bit run: error {} vs δ+ε = {}",
            rational::format(&r.approx_error_of_lp),
            rational::format(&bound)
        )
    })?;
    Ok(format!(
        "{}; 300 random degree checks; OR2∘MAJ3∘PARITY2: ‖Lp − f‖ = {} ≤ {}",
        notes.join(", "),
        rational::format(&r.approx_error_of_lp),
        rational::format(&bound)
    ))
}

fn projections() -> Check {
    let mut out = Vec::new();
    for (base, d_max, seed, limit) in [
        (MajorityBase::Maj3, 6, 1u64, 60u64),
        (MajorityBase::AndOr, 8, 1, 60),
    ] {
        let start = Instant::now();
        let p = majority_projection(&MajoritySearch::new(5, base, d_max, seed)).map_err(err)?;
        ensure(p.depth <= d_max, || format!("{base:?}: depth {}", p.depth))?;
        ensure(p.verify().map_err(err)?, || {
            format!("{base:?}: projection fails on some input")
        })?;
        let t = start.elapsed();
        ensure(t <= Duration::from_secs(limit), || {
            format!("{base:?}: {t:.1?} over {limit}s")
        })?;
        out.push(format!("{base:?} d={} ({:.2}s)", p.depth, t.as_secs_f64()));
    }
    Ok(format!("MAJ5 from {}; 32/32 inputs each", out.join(", ")))
}

fn sandwich() -> Check {
    let an = Analyzer::default();
    let eps = rational::ratio(1, 3);
    let grid = default_composition_grid();
    ensure(grid.len() == 12, || "grid size".into())?;
    ensure(
        grid.iter()
            .all(|(f, g)| f.function.arity() * g.function.arity() <= 12),
        || "grid arity".into(),
    )?;
    let manifest = Manifest::new(
        "compose-table",
        Some(0),
        serde_json::json!({ "epsilon": "1/3" }),
    );
    let rows = composition_table(&an, &grid, &eps);
    for r in &rows {
        ensure(r.error.is_none(), || {
            format!(
                "{} o {}: {}",
                r.f_id,
                r.g_id,
                r.error.clone().unwrap_or_default()
            )
        })?;
        ensure(r.sandwich_ok && r.certified, || {
            format!("{} o {}: sandwich violated", r.f_id, r.g_id)
        })?;
    }
    let first = rows_to_csv(&rows, &manifest, false).map_err(err)?;
    let second = rows_to_csv(
        &composition_table(&Analyzer::default(), &grid, &eps),
        &manifest,
        false,
    )
    .map_err(err)?;
    ensure(first == second, || "reruns differ".into())?;
    Ok(
        "12/12 rows within max(adeg f, adeg g) ≤ adeg(f∘g) ≤ deg f·deg g; rerun byte-identical"
            .into(),
    )
}

fn robustness() -> Check {
    let delta = rational::ratio(1, 10);
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    let mut violations = 0;
    let trials = 10_000;
    for _ in 0..trials {
        let n = rng.gen_range(1..=6);
        // Boolean-valued and [0, 1]-valued multilinear polynomials alike.
        let p = if rng.gen_bool(0.5) {
            interpolate(&BooleanFunction::from_fn(n, |_| rng.gen::<bool>()).unwrap()).unwrap()
        } else {
            let vals: Vec<Rational> = (0..1usize << n)
                .map(|_| rational::ratio(rng.gen_range(0..=12), 12))
                .collect();
            MultilinearPolynomial::from_cube_values(n, &vals).unwrap()
        };
        let x: Vec<bool> = (0..n).map(|_| rng.gen()).collect();
        let scale = 1000 * n as i64;
        // Inward perturbations of size ≤ 100/(1000n) = δ/n: x + Δ stays in [0, 1]^n.
        let dv: Vec<Rational> = x
            .iter()
            .map(|&xi| {
                let mag = rational::ratio(rng.gen_range(0..=100), scale);
                if xi {
                    -mag
                } else {
                    mag
                }
            })
            .collect();
        if !robustness_probe(&p, &x, &dv, &delta).map_err(err)? {
            violations += 1;
        }
    }
    ensure(violations == 0, || {
        format!("{violations} violations in {trials} trials")
    })?;
    Ok(format!(
        "{trials} trials, n ≤ 6, δ = 1/10, inward ‖Δ‖∞ ≤ δ/n: 0 violations"
    ))
}

fn main() {
    let criteria: [(&str, u64, fn() -> Check); 8] = [
        ("spectral sensitivity values", 30, spectral_values),
        ("degree oracle suite (exact LP)", 60, degree_oracles),
        ("duality consistency on ≤ 3 bits", 600, duality_consistency),
        ("gadget census", 300, gadget_census_check),
        ("amplifier machinery", 900, amplifier_machinery),
        ("MAJ5 projections", 120, projections),
        ("composition sandwich", 1800, sandwich),
        ("robustness of multilinear polynomials", 60, robustness),
    ];
    let mut failed = 0;
    for (i, (name, limit, run)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let result = run();
        let secs = start.elapsed().as_secs_f64();
        let over = secs > *limit as f64;
        let (tag, detail) = match (&result, over) {
            (Ok(d), false) => ("PASS", d.clone()),
            (Ok(d), true) => ("FAIL", format!("{d}; exceeded the time limit")),
            (Err(e), _) => ("FAIL", e.clone()),
        };
        if tag == "FAIL" {
            failed += 1;
        }
        println!(
            "criterion {} [{tag}] {name}: {detail} ({secs:.2}s, limit {limit}s)",
            i + 1
        );
    }
    if failed > 0 {
        eprintln!("{failed} acceptance criteria failed");
        std::process::exit(1);
    }
}
