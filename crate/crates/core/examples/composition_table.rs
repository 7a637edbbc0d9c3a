//! The default composition grid as CSV.

use adeg::degrees::Analyzer;
use adeg::experiments::{composition_table, default_composition_grid, rows_to_csv, Manifest};
use adeg::rational::ratio;

fn main() -> adeg::error::Result<()> {
    let rows = composition_table(
        &Analyzer::default(),
        &default_composition_grid(),
        &ratio(1, 3),
    );
    let manifest = Manifest::new(
        "compose-table",
        None,
        serde_json::json!({ "epsilon": "1/3" }),
    );
    print!("{}", rows_to_csv(&rows, &manifest, true)?);
    Ok(())
}
