//! Degree measures with primal and dual certificates.

use adeg::boolfn::{BooleanFunction, Builtin};
use adeg::degrees::{Analyzer, WitnessOutcome};
use adeg::rational::{self, ratio};

fn main() -> adeg::error::Result<()> {
    let an = Analyzer::default();
    let eps = ratio(1, 3);
    for (name, f) in [
        ("AND2", BooleanFunction::builtin(Builtin::And, 2)?),
        ("OR3", BooleanFunction::builtin(Builtin::Or, 3)?),
        ("MAJ3", BooleanFunction::builtin(Builtin::Maj, 3)?),
        ("XOR3", BooleanFunction::builtin(Builtin::Parity, 3)?),
    ] {
        let adeg = an.approx_degree(&f, &eps)?;
        adeg.verify(&f)?;
        println!(
            "{name:<5} deg {}  adeg {}  odeg {}  sdeg {}  certified {}",
            an.exact_degree(&f)?.degree,
            adeg.degree,
            an.one_sided_approx_degree(&f, &eps)?.degree,
            an.sign_degree(&f)?.degree,
            adeg.certified
        );
    }

    let xor = BooleanFunction::builtin(Builtin::Parity, 2)?;
    if let WitnessOutcome::Witness(w) = an.dual_witness(&xor, &eps, 2)? {
        let vals: Vec<String> = w.values.iter().map(rational::format).collect();
        println!(
            "XOR2 witness at degree 2: ({}), correlation {}",
            vals.join(", "),
            rational::format(&w.correlation)
        );
    }
    Ok(())
}
