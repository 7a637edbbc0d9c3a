//! Exact multilinear interpolation and the robustness probe.

use adeg::boolfn::{BooleanFunction, Builtin};
use adeg::polynomial::{interpolate, linf_error, robustness_probe, MultilinearPolynomial};
use adeg::rational::{self, ratio};

fn main() -> adeg::error::Result<()> {
    let maj = BooleanFunction::builtin(Builtin::Maj, 3)?;
    let p = interpolate(&maj)?;
    println!("MAJ3 = {}", serde_json::to_string(&p)?);
    println!(
        "degree {}, exact: {}",
        p.degree(),
        linf_error(&p, &maj)? == rational::zero()
    );

    let and = BooleanFunction::builtin(Builtin::And, 2)?;
    let q = MultilinearPolynomial::from_terms(
        2,
        [(0, ratio(-1, 4)), (1, ratio(1, 2)), (2, ratio(1, 2))],
    );
    println!(
        "degree-1 approximant of AND2 has error {}",
        rational::format(&linf_error(&q, &and)?)
    );

    let delta = ratio(1, 10);
    let inward = vec![ratio(-1, 30); 3];
    let ok = robustness_probe(&p, &[true, true, true], &inward, &delta)?;
    println!("|p(x) - p(x + Δ)| ≤ 1/10 at x = 111, Δ = -1/30: {ok}");
    Ok(())
}
