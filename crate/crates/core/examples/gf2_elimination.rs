//! Rank, kernel and membership over GF(2) with packed rows.

use std::time::Instant;

use gocohom::f2linalg::{BitMatrix, BitVec};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn main() -> gocohom::error::Result<()> {
    let rows = [
        BitVec::from_indices(4, [0usize, 1]),
        BitVec::from_indices(4, [1usize, 2]),
        BitVec::from_indices(4, [0usize, 2]),
    ];
    let m = BitMatrix::from_rows(4, &rows)?;
    println!("rank {}", m.rank());
    for v in m.kernel_basis() {
        println!("kernel vector {:?}", v.iter_ones().collect::<Vec<_>>());
    }
    let target = BitVec::from_indices(4, [0usize, 2]);
    println!("x M = (1,0,1,0) has solution {:?}", m.solve_membership(&target)?.map(|x| x.iter_ones().collect::<Vec<_>>()));

    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let big = BitMatrix::random(4000, 4000, &mut rng);
    let start = Instant::now();
    let rank = big.rank();
    println!("random 4000 x 4000: rank {rank} in {:?}", start.elapsed());
    Ok(())
}
