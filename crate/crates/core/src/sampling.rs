//! Random elements for property checks and simulations.
//!
//! Gaussian draws use `rand_distr::StandardNormal` (Ziggurat).

use rand::Rng;
use rand_distr::StandardNormal;

use crate::algebra::{Multivector, Orientation};
use crate::conformal::{Vec3, DEGENERACY_TOL};

/// One standard normal draw.
pub fn gaussian<R: Rng + ?Sized>(rng: &mut R) -> f64 {
    rng.sample(StandardNormal)
}

/// Uniform direction on `S2`, by normalizing a Gaussian vector.
pub fn random_unit_vector<R: Rng + ?Sized>(rng: &mut R) -> Vec3 {
    loop {
        let v = Vec3::new(gaussian(rng), gaussian(rng), gaussian(rng));
        if let Ok(u) = v.normalized() {
            return u;
        }
    }
}

/// Uniform direction on the unit circle of the x-y plane.
pub fn random_planar_unit<R: Rng + ?Sized>(rng: &mut R) -> Vec3 {
    loop {
        let v = Vec3::new(gaussian(rng), gaussian(rng), 0.0);
        if v.norm() >= DEGENERACY_TOL {
            if let Ok(u) = v.normalized() {
                return u;
            }
        }
    }
}

/// Dense element with independent standard normal coefficients.
pub fn random_multivector<R: Rng + ?Sized>(rng: &mut R, orientation: Orientation) -> Multivector {
    let mut c = [0.0; 8];
    for x in &mut c {
        *x = gaussian(rng);
    }
    Multivector::new(c, orientation)
}

/// Element of `S7`: a Gaussian draw with the dual half projected orthogonal
/// to the real half, then normalized.
pub fn random_s7<R: Rng + ?Sized>(rng: &mut R, orientation: Orientation) -> Multivector {
    loop {
        let mut dq = random_multivector(rng, orientation).to_dual_quaternion();
        let l = orientation.sign();
        let w = [dq.q_r[0], l * dq.q_r[1], l * dq.q_r[2], l * dq.q_r[3]];
        let ww: f64 = w.iter().map(|x| x * x).sum();
        if ww < DEGENERACY_TOL {
            continue;
        }
        let k = dq.q_d.iter().zip(w).map(|(d, w)| d * w).sum::<f64>() / ww;
        for (d, w) in dq.q_d.iter_mut().zip(w) {
            *d -= k * w;
        }
        let x = dq.to_multivector(orientation);
        let n = x.norm();
        if n >= DEGENERACY_TOL {
            return x.scale(1.0 / n);
        }
    }
}

#[cfg(test)]
mod tests {
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    use super::*;

    #[test]
    fn s7_samples_pass_membership() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for o in Orientation::BOTH {
            for _ in 0..200 {
                assert!(random_s7(&mut rng, o).is_on_s7(1e-12));
            }
        }
    }

    #[test]
    fn planar_units_are_planar_and_unit() {
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        for _ in 0..200 {
            let v = random_planar_unit(&mut rng);
            assert_eq!(v.z, 0.0);
            assert!((v.norm() - 1.0).abs() < 1e-12);
        }
    }
}
