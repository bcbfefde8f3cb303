//! Direct simulation of the Type I and Type II walks.

use cgmv::coin::{canonical_coin, realize_b, WalkKind};
use cgmv::walk::{distribution, initial_state, CoinState, EdgeRule, Walk};
use cgmv::Complex64 as C;

fn show(walk: &Walk, cs: &CoinState, steps: usize) -> cgmv::Result<()> {
    let mut s = initial_state(walk.kind, cs, steps + 4)?;
    s = walk.run(&s, steps)?;
    let d = distribution(&s);
    println!("{:?} {:?}, t={steps}, total {:.12}", walk.kind, walk.edge, d.total());
    for y in (0..=8).rev() {
        let row: Vec<String> = (0..=8).map(|x| format!("{:.3}", d.get(x, y))).collect();
        println!("  {}", row.join(" "));
    }
    Ok(())
}

fn main() -> cgmv::Result<()> {
    let e1 = CoinState::TypeI([C::new(1.0, 0.0), C::new(0.0, 0.0), C::new(0.0, 0.0), C::new(0.0, 0.0)]);
    let walk = Walk::new(WalkKind::TypeI, canonical_coin(C::new(0.5, 0.0))?, [0.0, 0.0]);
    show(&walk, &e1, 12)?;

    let (coin, gamma) = realize_b(C::new(0.5, 0.0))?;
    let walk = Walk::new(WalkKind::TypeII, coin, gamma);
    show(&walk, &CoinState::TypeII([0.0, 0.0]), 12)?;
    show(&walk.clone().with_edge(EdgeRule::Reflecting), &CoinState::TypeII([0.0, 0.0]), 12)?;

    // The sticky wall rule merges states, so probability leaks.
    let sticky = walk.with_edge(EdgeRule::Sticky);
    let s = sticky.run(&initial_state(WalkKind::TypeII, &CoinState::TypeII([0.0, 0.0]), 16)?, 12)?;
    println!("sticky walls: norm after 12 steps {:.6}", s.norm_sqr());
    Ok(())
}
