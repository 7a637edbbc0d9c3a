//! MAJ5 as a projection of MAJ3^d and of (AND2 o OR2)^d.

use adeg::gadgets::{majority_projection, MajorityBase, MajoritySearch};

fn main() -> adeg::error::Result<()> {
    for base in [MajorityBase::Maj3, MajorityBase::AndOr] {
        let p = majority_projection(&MajoritySearch::new(5, base, 8, 1))?;
        let tried: u64 = p.stats.iter().map(|s| s.attempts).sum();
        println!(
            "{base:?}: depth {}, {} leaves, {tried} attempts, verified {}",
            p.depth,
            p.projection.source_arity(),
            p.verify()?
        );
    }
    Ok(())
}
