//! Bergman and Hardy minima for f(0.5) = 1 on the annulus q = 0.25.

use minl2::geometry::{Domain, Green};
use minl2::minimizers::{bergman_min, hardy_min, JetPoint, Jets, Settings};
use minl2::weights::{Gain, PhiSpec, PsiSpec};
use minl2::C64;

fn main() -> minl2::Result<()> {
    let green = Green::new(Domain::annulus(0.25)?);
    let z = C64::new(0.5, 0.0);
    let psi = PsiSpec::single(z, 1.0);
    let jets = Jets::new(vec![JetPoint {
        z,
        taylor: vec![C64::new(1.0, 0.0)],
    }]);
    let s = Settings::default();
    let m = bergman_min(&green, &PhiSpec::zero(), &psi, &Gain::Constant1, &jets, 0.0, &s)?;
    let mh = hardy_min(&green, &PhiSpec::zero(), &psi, &jets, &s)?;
    println!(
        "M = {:.12}, M_H = {:.12}, converged = {}",
        m.value,
        mh.value,
        m.converged && mh.converged
    );
    Ok(())
}
