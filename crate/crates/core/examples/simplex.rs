//! The exact two-phase simplex on a small LP, with its duals.

use adeg::lp::{solve, LpLimits, LpProblem, Relation, Sense, Solution, SolveMode};
use adeg::rational::{self, int};

fn main() -> adeg::error::Result<()> {
    // max 3x + 2y  s.t.  x + y ≤ 4,  x + 3y ≤ 6,  x ≤ 3
    let mut p = LpProblem::new(2, Sense::Maximize);
    p.set_objective(0, int(3));
    p.set_objective(1, int(2));
    p.add_constraint(vec![int(1), int(1)], Relation::Le, int(4));
    p.add_constraint(vec![int(1), int(3)], Relation::Le, int(6));
    p.set_bounds(0, Some(int(0)), Some(int(3)));

    match solve(&p, SolveMode::Exact, &LpLimits::default())? {
        Solution::Exact(out) => {
            let fmt = |v: &[_]| {
                v.iter()
                    .map(rational::format)
                    .collect::<Vec<_>>()
                    .join(", ")
            };
            println!("status {:?} after {} pivots", out.status, out.pivots);
            println!("x = ({})", fmt(&out.primal));
            println!("y = ({})", fmt(&out.dual));
            println!(
                "objective {}",
                rational::format(out.objective.as_ref().unwrap())
            );
        }
        Solution::Float(_) => unreachable!(),
    }

    let mut lp_text = Vec::new();
    p.write_lp_format(&mut lp_text)?;
    print!("{}", String::from_utf8_lossy(&lp_text));
    Ok(())
}
