//! The dual-witness amplifier on OR2 o MAJ3 o XOR2 (12 bits).

use adeg::amplify::{verify_amplifier_pipeline, Middle};
use adeg::boolfn::{BooleanFunction, Builtin};
use adeg::degrees::Analyzer;
use adeg::rational::{format, ratio};

fn main() -> adeg::error::Result<()> {
    let f = BooleanFunction::builtin(Builtin::Or, 2)?;
    let g = BooleanFunction::builtin(Builtin::Parity, 2)?;
    let r = verify_amplifier_pipeline(
        &Analyzer::default(),
        &f,
        &g,
        3,
        &ratio(1, 3),
        &ratio(1, 4),
        &Middle::Maj,
    )?;
    println!("inner purity degree {}", r.d_inner);
    println!(
        "E_μ1[g] = {}, E_μ0[g] = {}",
        format(&r.e_mu1),
        format(&r.e_mu0)
    );
    println!(
        "deg p_h = {} -> deg Lp_h = {} (bound {})",
        r.deg_before, r.deg_after, r.degree_bound
    );
    println!(
        "|Lp_h - f| = {} <= {}",
        format(&r.approx_error_of_lp),
        format(&r.bound_used)
    );
    println!("passed: {}", r.passed);
    Ok(())
}
