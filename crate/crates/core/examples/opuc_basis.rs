//! Laurent orthonormal polynomials in CMV order and their eigen-relation.

use cgmv::cmv::{build_cmv, VerblunskySeq};
use cgmv::opuc::{caratheodory_ratio, eigen_residual, opuc_basis, szego, BasisKind};
use cgmv::Complex64 as C;

fn main() -> cgmv::Result<()> {
    let seq = VerblunskySeq::NullOdd(C::new(0.5, 0.2));
    let basis = opuc_basis(&seq, 6, BasisKind::FirstKind)?;
    for (j, p) in basis.polys().iter().enumerate() {
        let terms: Vec<String> = p.terms().map(|(e, c)| format!("({:.4}{:+.4}i)z^{e}", c.re, c.im)).collect();
        println!("x_{j} = {}", terms.join(" + "));
    }

    let c = build_cmv(&seq, 40)?;
    let basis = opuc_basis(&seq, 40, BasisKind::FirstKind)?;
    for k in 0..4 {
        let z = C::from_polar(1.0, 0.7 * k as f64 + 0.2);
        println!("z = {z:.3}: |Cx - zx| = {:.2e}", eigen_residual(&c, &basis, z)?);
    }

    let z = C::new(0.3, 0.4);
    let (phi, phi_star) = szego(&seq, z, 10);
    println!("Phi_10({z}) = {phi:.6}, Phi*_10 = {phi_star:.6}");
    println!("Psi*/Phi* at n=40: {:.8}", caratheodory_ratio(&seq, z, 40));
    Ok(())
}
