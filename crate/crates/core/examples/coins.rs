//! Coins, their derived phases and Verblunsky parameters.

use cgmv::coin::{
    canonical_coin, mixing_coin, off_diagonal_sum, paper_class_defect, random_paper_class_coin, realize_a, realize_b,
    verblunsky_a, verblunsky_b, QuantumCoin,
};
use cgmv::Complex64 as C;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn describe(name: &str, coin: &QuantumCoin) {
    let d = coin.derived();
    println!(
        "{name}: paper class {} (defect {:.1e}), delta {:.4}, theta {:+.4}, off-diagonal sum {:.4}",
        d.paper_class,
        paper_class_defect(coin),
        d.delta,
        d.theta,
        off_diagonal_sum(coin)
    );
    match verblunsky_a(coin) {
        Ok(a) => println!("  a = {a:.6}"),
        Err(e) => println!("  a: {e}"),
    }
}

fn main() -> cgmv::Result<()> {
    describe("identity", &QuantumCoin::identity());
    describe("C(0.5)", &canonical_coin(C::new(0.5, 0.0))?);
    describe("C(0.2+0.4i)", &canonical_coin(C::new(0.2, 0.4))?);
    describe("mixing(0.7)", &mixing_coin(0.7));

    let mut rng = ChaCha8Rng::seed_from_u64(3);
    describe("random", &random_paper_class_coin(&mut rng));

    let a = C::new(0.0, 0.6);
    let coin = realize_a(a)?;
    println!("realize_a({a}) gives a = {:.6}", verblunsky_a(&coin)?);
    let b = C::new(0.3, -0.4);
    let (coin, gamma) = realize_b(b)?;
    println!("realize_b({b}) gives b = {:.6} with gamma {gamma:?}", verblunsky_b(&coin, gamma)?);

    println!("{}", serde_json::to_string(&canonical_coin(C::new(0.3, 0.0))?.to_json()).expect("plain data"));
    Ok(())
}
