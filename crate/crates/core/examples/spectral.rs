//! Spectral sensitivity of recursive functions.

use adeg::boolfn::{BooleanFunction, Builtin};
use adeg::spectral::spectral_sensitivity;

fn main() -> adeg::error::Result<()> {
    let maj = BooleanFunction::builtin(Builtin::Maj, 3)?;
    let ao = BooleanFunction::builtin(Builtin::And, 2)?
        .compose_with(&BooleanFunction::builtin(Builtin::Or, 2)?)?;
    for d in 1..=2 {
        let r = spectral_sensitivity(&maj.power(d)?, 1e-12)?;
        println!(
            "λ(MAJ3^{d}) = {:.9}  ({} iterations)",
            r.lambda, r.iterations
        );
    }
    for d in 1..=2 {
        let r = spectral_sensitivity(&ao.power(d)?, 1e-12)?;
        println!("λ((AND2 o OR2)^{d}) = {:.9}", r.lambda);
    }
    Ok(())
}
