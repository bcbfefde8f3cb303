//! Carathéodory function inside the disk and its boundary behaviour.

use cgmv::cmv::VerblunskySeq;
use cgmv::spectral::{ac_weight, band_function, bands, boundary_weight, caratheodory, RadialConfig};
use cgmv::Complex64 as C;

fn main() -> cgmv::Result<()> {
    let seq = VerblunskySeq::NullEven(C::new(0.5, 0.0));
    println!("bands: {:?}", bands(&seq));
    let cfg = RadialConfig::default();
    for theta in [-2.5, -1.0, 0.0, 0.3, 1.0, 2.5] {
        let z = C::from_polar(0.9, theta);
        let radial = match ac_weight(&seq, theta, &cfg) {
            Ok(w) => format!("{w:.8}"),
            Err(e) => e.to_string(),
        };
        println!(
            "theta={theta:+.1} F(0.9e^it)={:.5} h={:+.4} radial={radial} boundary={:.8}",
            caratheodory(&seq, z)?,
            band_function(&seq, theta),
            boundary_weight(&seq, theta),
        );
    }
    Ok(())
}
