//! Dimensions of the kernel ring B = ker(s) and the decomposition ker(s) = im(s) + A.

use gocohom::graded::{hilbert_series, KernelRing, SeriesKind};

fn main() -> gocohom::error::Result<()> {
    let n = std::env::args().nth(1).and_then(|s| s.parse().ok()).unwrap_or(2);
    let max_degree = 12;

    let kernel = hilbert_series(SeriesKind::Kernel, n, max_degree)?;
    let total = hilbert_series(SeriesKind::Stiefel, n, max_degree)?;
    println!("n = {n}");
    println!("dim C_d: {total:?}");
    println!("dim B_d: {kernel:?}");

    let kr = KernelRing::new(n)?;
    for d in 0..=max_degree {
        let r = kr.verify_ker_decomposition(d);
        println!(
            "d={d:>2}  ker {:>3}  im {:>3}  A {:>3}  span {:>3}  {}",
            r.kernel_dim,
            r.image_dim,
            r.a_dim,
            r.span_dim,
            if r.ok { "ok" } else { "MISMATCH" }
        );
    }

    let basis = kr.kernel_basis(5);
    println!("basis of B_5:");
    for p in &basis.elements {
        println!("  {p}");
    }
    Ok(())
}
