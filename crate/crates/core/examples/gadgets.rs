//! AND2 and OR2 from circuits of a non-monotone base function, and a small census.

use adeg::boolfn::{BooleanFunction, Builtin};
use adeg::experiments::gadget_census;
use adeg::gadgets::{
    find_min_sensitive_block2, find_negation_gadget, simulate, verify_circuit, Gate2,
};

fn main() -> adeg::error::Result<()> {
    // x1 ∧ ¬x2 ∨ x3: depends on everything, neither monotone nor parity.
    let h = BooleanFunction::from_fn(3, |x| (x & 1 == 1 && x & 2 == 0) || x & 4 != 0)?;
    println!("base {h}");
    if let Some(g) = find_negation_gadget(&h) {
        println!(
            "negation gadget: free x{}, fixed {:?}",
            g.free, g.fixed.entries
        );
    }
    let block = find_min_sensitive_block2(&h)?;
    println!(
        "sensitive block at {:#05b} on x{}, x{}",
        block.point, block.indices.0, block.indices.1
    );
    for (gate, kind) in [(Gate2::And, Builtin::And), (Gate2::Or, Builtin::Or)] {
        let mut c = simulate(&h, gate)?;
        let ok = verify_circuit(&mut c, &BooleanFunction::builtin(kind, 2)?)?;
        println!(
            "{gate:?}: depth {}, verified {ok}, {}",
            c.depth,
            serde_json::to_string(&c.root)?
        );
    }

    let census = gadget_census(3, None, 0)?;
    println!(
        "census t=3: {}/{} pass, max depth {}",
        census.passed, census.qualifying, census.max_depth
    );
    Ok(())
}
