//! Build functions from expressions and inspect their tables.

use adeg::boolfn::{Assignment, BooleanFunction, Builtin};
use adeg::expr::parse_function_expr;

fn main() -> adeg::error::Result<()> {
    for src in [
        "MAJ3",
        "(AND2 o OR2)^2",
        "MAJ3[x3=0]",
        "AND2 o (XOR2, ~OR2)",
    ] {
        let e = parse_function_expr(src)?;
        let f = e.eval()?;
        println!(
            "{src:<22} arity {:>2}  weight {:>5}  class {:?}",
            f.arity(),
            f.weight(),
            f.classify()
        );
    }

    let maj = BooleanFunction::builtin(Builtin::Maj, 3)?;
    println!("MAJ3 = {maj}, monotone: {}", maj.is_monotone());
    let and = maj.restrict(&Assignment::new().with(3, false))?;
    println!(
        "MAJ3 with x3 = 0 is AND2: {}",
        and == BooleanFunction::builtin(Builtin::And, 2)?
    );
    println!(
        "MAJ3^2 depends on all 9 inputs: {}",
        maj.power(2)?.depends_on_all()
    );
    Ok(())
}
