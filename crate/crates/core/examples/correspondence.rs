//! Folds a walk onto its diagonal sector and compares it with the CMV
//! matrix of its Verblunsky parameter under every phase convention.

use cgmv::coin::{canonical_coin, realize_b, QuantumCoin, WalkKind};
use cgmv::walk::{correspondence_residual, Walk};
use cgmv::Complex64 as C;

fn report(name: &str, walk: &Walk) -> cgmv::Result<()> {
    let r = correspondence_residual(walk, 32)?;
    println!("{name}: parameter {:.4}, paper class {}", r.parameter, r.paper_class);
    for (c, res) in &r.residuals {
        println!("  {:<28} {res:.3e}", c.label());
    }
    println!("  best {} {:.3e}, return residual {:.3e}", r.best.label(), r.residual, r.return_residual);
    Ok(())
}

fn main() -> cgmv::Result<()> {
    report("identity", &Walk::new(WalkKind::TypeI, QuantumCoin::identity(), [0.0, 0.0]))?;
    report("C(0.3)", &Walk::new(WalkKind::TypeI, canonical_coin(C::new(0.3, 0.0))?, [0.0, 0.0]))?;
    let (coin, gamma) = realize_b(C::new(0.5, 0.0))?;
    report("Type II b=0.5", &Walk::new(WalkKind::TypeII, coin, gamma))?;
    Ok(())
}
