//! Relations of the two presentations and their quotient dimensions.

use gocohom::presentation::{cohomology_presentation, gens_i, gens_n, verify_presentations};

fn main() -> gocohom::error::Result<()> {
    let n = 2;
    println!("relations for A[c_T]/N, n = {n}:");
    for rel in gens_n(n) {
        println!("  ({}) {}", rel.family, rel.poly);
    }
    println!("relations for H*(BGO({})), n = {n}:", 2 * n);
    for rel in gens_i(n) {
        println!("  ({}) {}", rel.family, rel.poly);
    }

    let p = cohomology_presentation(n);
    let dims: Vec<usize> = (0..=10).map(|d| p.quotient_dim(d)).collect();
    println!("dim (R/I)_d: {dims:?}");

    let report = verify_presentations(3, 10)?;
    for (k, c) in report.koszul.iter().zip(&report.cohomology) {
        println!("n=3 d={:>2}  koszul {} = {}  cohomology {} = {}", k.d, k.dim_lhs, k.dim_rhs, c.dim_lhs, c.dim_rhs);
    }
    println!("all equal: {}", report.ok());
    Ok(())
}
