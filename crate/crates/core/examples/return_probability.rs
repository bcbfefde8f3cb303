//! Time-averaged return probability and the diagonal decay profile.

use cgmv::coin::{realize_a, realize_b, WalkKind};
use cgmv::limits::{nu_i, nu_ii};
use cgmv::walk::{diagonal_profile, time_avg_return, CoinState, Walk};
use cgmv::Complex64 as C;

fn main() -> cgmv::Result<()> {
    let e1 = CoinState::TypeI([C::new(1.0, 0.0), C::new(0.0, 0.0), C::new(0.0, 0.0), C::new(0.0, 0.0)]);
    for a in [C::new(0.5, 0.0), C::new(0.0, 0.6)] {
        let walk = Walk::new(WalkKind::TypeI, realize_a(a)?, [0.0, 0.0]);
        let r = time_avg_return(&walk, &e1, 128)?;
        let p = diagonal_profile(&walk, &e1, 96, 128, 3)?;
        println!("Type I a={a}: cesaro {:.5}, tail {:.5}, nu^2 {:.4}", r.cesaro, r.tail, nu_i(a)?.powi(2));
        println!("  P(k,k)/P(0,0): {:?}", p.ratios);
    }
    for b in [C::new(0.5, 0.0), C::new(-0.5, 0.0)] {
        let (coin, gamma) = realize_b(b)?;
        let walk = Walk::new(WalkKind::TypeII, coin, gamma);
        let cs = CoinState::TypeII([0.0, 0.0]);
        let r = time_avg_return(&walk, &cs, 128)?;
        let p = diagonal_profile(&walk, &cs, 96, 128, 3)?;
        println!("Type II b={b}: cesaro {:.5}, tail {:.5}, nu^2 {:.4}", r.cesaro, r.tail, nu_ii(b)?.powi(2));
        println!("  P(k,k)/P(0,0): {:?}", p.ratios);
    }
    Ok(())
}
