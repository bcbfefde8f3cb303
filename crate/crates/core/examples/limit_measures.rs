//! Closed-form limit masses and the two Type II localization predicates.

use cgmv::cli::disk_raster;
use cgmv::limits::{
    localizes_i, localizes_ii, mass_m, nu_i, nu_ii, theorem1_mass, theorem3_mass, LimitParamsI, LimitParamsII,
    Parity,
};
use cgmv::Complex64 as C;

fn main() -> cgmv::Result<()> {
    let e1 = [C::new(1.0, 0.0), C::new(0.0, 0.0), C::new(0.0, 0.0), C::new(0.0, 0.0)];
    let a = C::new(0.5, 0.0);
    let p = LimitParamsI::new(a, 0.0, e1)?;
    println!("Type I a={a}: nu {:.6}, localizes {}", nu_i(a)?, localizes_i(e1, a, 0.0)?);
    for k in 0..4 {
        println!("  mu({k},{k}) = {:.6}", theorem1_mass(&p, k, k)?);
    }

    let b = C::new(0.5, 0.0);
    let q = LimitParamsII::new(b)?;
    println!("Type II b={b}: nu {:.6}, M {:.6}", nu_ii(b)?, mass_m(b)?);
    for k in 0..4 {
        println!("  mu_even({k},{k}) = {:.6}", theorem3_mass(&q, k, k, Parity::Even)?);
    }

    let pts = disk_raster(24);
    let mut disagree = Vec::new();
    for z in &pts {
        let l = localizes_ii(*z)?;
        if !l.agree() {
            disagree.push(*z);
        }
    }
    println!("{} of {} raster points where the region and M(b) > 0 disagree", disagree.len(), pts.len());
    for z in disagree.iter().take(5) {
        println!("  b = {z:.3}, M = {:.4}", mass_m(*z)?);
    }
    Ok(())
}
