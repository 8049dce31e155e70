//! Bases of the first few cohomology groups of BGO(2n).

use gocohom::cohomring::CohomologyModel;

fn main() -> gocohom::error::Result<()> {
    for n in 1..=3 {
        let model = CohomologyModel::new(n)?;
        println!("BGO({})", 2 * n);
        for row in model.table_small()? {
            println!("  H^{} = <{}>", row.degree, row.labels.join(", "));
        }
        let dims: Vec<usize> = (0..=10).map(|d| model.basis(d).map(|b| b.len())).collect::<Result<_, _>>()?;
        println!("  dims up to 10: {dims:?}");
    }
    Ok(())
}
