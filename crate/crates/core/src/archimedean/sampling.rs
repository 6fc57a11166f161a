use num_complex::Complex64;
use rand::Rng;

/// Draws `z ∈ ℂ` with density `1 / (π (1 + |z|²)²)`, the Fubini–Study
/// probability measure.
///
/// A uniform point of the round sphere is taken by cos-latitude inversion
/// (`cos θ = 1 - 2u`) and pushed to the plane by stereographic projection,
/// which gives `|z|² = (1 - u) / u`. The antipode `u = 0` is redrawn.
pub fn sample_fs<R: Rng + ?Sized>(rng: &mut R) -> Complex64 {
    loop {
        let u: f64 = rng.random();
        let v: f64 = rng.random();
        if u == 0.0 {
            continue;
        }
        let r = ((1.0 - u) / u).sqrt();
        return Complex64::from_polar(r, std::f64::consts::TAU * v);
    }
}
