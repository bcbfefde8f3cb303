//! Builds truncated CMV matrices and prints their band structure.

use cgmv::cmv::{build_cmv, cmv_power_entry, unitarity_residual, VerblunskySeq};
use cgmv::Complex64 as C;

fn main() -> cgmv::Result<()> {
    let seqs = [
        VerblunskySeq::zero(),
        VerblunskySeq::NullOdd(C::new(0.5, 0.0)),
        VerblunskySeq::NullEven(C::new(0.3, -0.4)),
        VerblunskySeq::Explicit(vec![C::new(0.2, 0.1), C::new(-0.5, 0.3), C::new(0.4, 0.0)]),
    ];
    for seq in &seqs {
        let c = build_cmv(seq, 8)?;
        println!("{seq:?}");
        for row in c.to_dense() {
            let cells: Vec<String> = row
                .iter()
                .map(|z| if z.norm() < 1e-15 { "      .      ".into() } else { format!("{:+.3}{:+.3}i", z.re, z.im) })
                .collect();
            println!("  {}", cells.join(" "));
        }
        // The last row of a truncation loses a column, so only a large
        // truncation is close to unitary in its leading block.
        let big = build_cmv(seq, 64)?;
        println!("  unitarity residual at n=64: {:.2e}", unitarity_residual(&big));
        println!("  (C^4)_00 = {:.6}", cmv_power_entry(&big, 4, 0, 0)?);
    }
    Ok(())
}
