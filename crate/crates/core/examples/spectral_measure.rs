//! Spectral measures: absolutely continuous weight, atoms and moments.

use cgmv::cmv::{build_cmv, cmv_power_entry, VerblunskySeq};
use cgmv::spectral::{measure, measure_moment, MeasureConfig};
use cgmv::Complex64 as C;

fn main() -> cgmv::Result<()> {
    let cfg = MeasureConfig::default();
    for seq in [
        VerblunskySeq::zero(),
        VerblunskySeq::NullOdd(C::new(0.3, 0.3)),
        VerblunskySeq::NullEven(C::new(0.5, 0.0)),
        VerblunskySeq::NullEven(C::new(-0.5, 0.0)),
    ] {
        let mu = measure(&seq, &cfg)?;
        println!("{seq:?}");
        println!("  total {:.10} = ac {:.10} + atoms {:.10}", mu.total, mu.ac_mass(), mu.atom_mass());
        for a in &mu.atoms {
            println!("  atom at theta={:+.6} mass {:.8}", a.theta, a.mass);
        }
        let c = build_cmv(&seq, 40)?;
        for (t, l, m) in [(1, 0, 0), (3, 1, 2), (6, 2, 2)] {
            let lhs = measure_moment(&mu, t, l, m)?;
            let rhs = cmv_power_entry(&c, t as usize, l, m)?;
            println!("  moment t={t} ({l},{m}): {lhs:.8} vs (C^t) {rhs:.8}");
        }
    }
    Ok(())
}
