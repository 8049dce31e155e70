//! Mod 2 Chern classes of the universal bundle and the splitting-principle check.

use gocohom::charclass::{chern_image_in, f_poly, invert_unitriangular, matrix_a, splitting_oracle};
use gocohom::cohomring::CohomologyModel;

fn main() -> gocohom::error::Result<()> {
    let n = std::env::args().nth(1).and_then(|s| s.parse().ok()).unwrap_or(4);
    let a = matrix_a(n);
    let b = invert_unitriangular(&a)?;
    println!("A and its inverse for n = {n}:");
    for r in 1..=n {
        let row_a: Vec<String> = (1..=r).map(|k| a.get(r, k).to_string()).collect();
        let row_b: Vec<String> = (1..=r).map(|k| b.get(r, k).to_string()).collect();
        println!("  [{}]    [{}]", row_a.join(", "), row_b.join(", "));
    }
    for r in 1..=n {
        println!("f_{r} = {}", f_poly(n, r)?);
    }

    let model = CohomologyModel::new(n)?;
    for i in 1..=2 * n {
        let c = chern_image_in(&model, i)?;
        println!("c{i} = {}    restricts to {}", c.formula, c.element.q());
    }

    let report = splitting_oracle(n)?;
    println!("splitting principle: odd {:?} even {:?}", report.odd_ok, report.even_ok);
    Ok(())
}
