//! Independent oracles used by the workspace test suites.
//!
//! Everything here works on raw coordinate tuples and amplitude pairs, with
//! no dependency on the crates under test, so agreement between oracle and
//! implementation is evidence rather than tautology.

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha12Rng;
use statrs::distribution::{ChiSquared, ContinuousCDF};

/// A spacetime point as `[x, y, z, t]`.
pub type Point = [f64; 4];

fn spatial_distance(p: &Point, q: &Point) -> f64 {
    let dx = p[0] - q[0];
    let dy = p[1] - q[1];
    let dz = p[2] - q[2];
    (dx * dx + dy * dy + dz * dz).sqrt()
}

/// Earliest arrival time at spatial position `r` for light leaving both
/// inputs: `max_i (t_i + |r - r_i|)`.
fn earliest_time_at(r: &[f64; 3], q0: &Point, q1: &Point) -> f64 {
    let reach = |q: &Point| {
        let dx = r[0] - q[0];
        let dy = r[1] - q[1];
        let dz = r[2] - q[2];
        q[3] + (dx * dx + dy * dy + dz * dz).sqrt()
    };
    reach(q0).max(reach(q1))
}

/// Brute-force minimizer of `t` over the intersection of the future light
/// cones of `q0` and `q1`.
///
/// Searches a refining spatial lattice: at each level a cubic grid around
/// the incumbent is scanned for the position minimizing the earliest joint
/// arrival time, then the grid shrinks. The objective is a maximum of two
/// cones (convex), so the refinement converges; 60 levels at factor 0.5
/// reach well below 1e-9 from any desk-scale starting box.
pub fn lattice_earliest_meeting(q0: Point, q1: Point) -> Point {
    let mut center = [
        (q0[0] + q1[0]) / 2.0,
        (q0[1] + q1[1]) / 2.0,
        (q0[2] + q1[2]) / 2.0,
    ];
    let mut half_width = spatial_distance(&q0, &q1).max((q0[3] - q1[3]).abs()) + 1.0;
    let steps: i32 = 6;
    for _ in 0..60 {
        let mut best = center;
        let mut best_t = earliest_time_at(&center, &q0, &q1);
        for ix in -steps..=steps {
            for iy in -steps..=steps {
                for iz in -steps..=steps {
                    let r = [
                        center[0] + half_width * ix as f64 / steps as f64,
                        center[1] + half_width * iy as f64 / steps as f64,
                        center[2] + half_width * iz as f64 / steps as f64,
                    ];
                    let t = earliest_time_at(&r, &q0, &q1);
                    if t < best_t {
                        best_t = t;
                        best = r;
                    }
                }
            }
        }
        center = best;
        half_width *= 0.5;
    }
    [
        center[0],
        center[1],
        center[2],
        earliest_time_at(&center, &q0, &q1),
    ]
}

/// Deterministic stream of random points in a box of the given spatial and
/// temporal extent.
pub fn random_point<R: Rng>(rng: &mut R, extent: f64) -> Point {
    [
        rng.random_range(-extent..extent),
        rng.random_range(-extent..extent),
        rng.random_range(-extent..extent),
        rng.random_range(-extent..extent),
    ]
}

/// Draws a pair of strictly spacelike-separated points (time gap below
/// spatial distance by a safety margin, keeping clear of any tolerance
/// band around the light cone).
pub fn random_spacelike_pair(seed: u64, extent: f64) -> (Point, Point) {
    let mut rng = ChaCha12Rng::seed_from_u64(seed);
    loop {
        let p = random_point(&mut rng, extent);
        let q = random_point(&mut rng, extent);
        let dist = spatial_distance(&p, &q);
        if dist > 1e-3 && (p[3] - q[3]).abs() < dist - 1e-3 {
            return (p, q);
        }
    }
}

/// Chi-square goodness-of-fit p-value of observed counts against expected
/// probabilities. Bins with zero expectation must hold zero observations
/// (otherwise the fit fails outright with p = 0); remaining bins contribute
/// `(obs - exp)² / exp` with `dof = bins - 1`.
pub fn chi_square_p(observed: &[u64], expected_probs: &[f64]) -> f64 {
    assert_eq!(observed.len(), expected_probs.len());
    let n: u64 = observed.iter().sum();
    assert!(n > 0, "no observations");
    let mut stat = 0.0;
    let mut used_bins = 0usize;
    for (&obs, &p) in observed.iter().zip(expected_probs) {
        let expect = p * n as f64;
        if expect < 1e-9 {
            if obs > 0 {
                return 0.0;
            }
            continue;
        }
        used_bins += 1;
        let diff = obs as f64 - expect;
        stat += diff * diff / expect;
    }
    assert!(used_bins >= 2, "fit needs at least two populated bins");
    let dist = ChiSquared::new((used_bins - 1) as f64).unwrap();
    1.0 - dist.cdf(stat)
}

/// Dense reference for the generalized Bell-basis outcome distribution:
/// builds every basis vector from the defining formula and takes full
/// `d²`-length inner products against the supplied amplitudes
/// (`(re, im)` pairs over the product basis `|k⟩|l⟩ → k·d + l`).
pub fn dense_bell_probs(d: usize, amps: &[(f64, f64)]) -> Vec<f64> {
    assert_eq!(amps.len(), d * d);
    let mut probs = Vec::with_capacity(d * d);
    let scale = 1.0 / (d as f64).sqrt();
    for a in 0..d {
        for b in 0..d {
            // Basis vector components: ω^{bk}/√d at |k⟩|k+a mod d⟩.
            let mut basis = vec![(0.0, 0.0); d * d];
            for k in 0..d {
                let theta = std::f64::consts::TAU * (b * k) as f64 / d as f64;
                basis[k * d + (k + a) % d] = (scale * theta.cos(), scale * theta.sin());
            }
            let mut re = 0.0;
            let mut im = 0.0;
            for (bc, ac) in basis.iter().zip(amps) {
                // conj(basis) * amp
                re += bc.0 * ac.0 + bc.1 * ac.1;
                im += bc.0 * ac.1 - bc.1 * ac.0;
            }
            probs.push(re * re + im * im);
        }
    }
    probs
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn lattice_recovers_symmetric_meeting() {
        let y = lattice_earliest_meeting([-1.0, 0.0, 0.0, 1.0], [1.0, 0.0, 0.0, 1.0]);
        assert!((y[0]).abs() < 1e-9);
        assert!((y[3] - 2.0).abs() < 1e-9);
    }

    #[test]
    fn lattice_handles_unequal_times() {
        // q1 later: meeting point shifts toward q0's side of the segment.
        let y = lattice_earliest_meeting([0.0, 0.0, 0.0, 0.0], [4.0, 0.0, 0.0, 2.0]);
        // Closed form along the axis: s = (Δt + D)/2 = 3, t = (0 + 2 + 4)/2 = 3.
        assert!((y[0] - 3.0).abs() < 1e-6);
        assert!((y[3] - 3.0).abs() < 1e-6);
    }

    #[test]
    fn spacelike_pairs_are_spacelike() {
        for seed in 0..32 {
            let (p, q) = random_spacelike_pair(seed, 5.0);
            assert!((p[3] - q[3]).abs() < spatial_distance(&p, &q));
        }
    }

    #[test]
    fn chi_square_accepts_perfect_fit() {
        let p = chi_square_p(&[500, 500], &[0.5, 0.5]);
        assert!(p > 0.9);
    }

    #[test]
    fn chi_square_rejects_gross_misfit() {
        let p = chi_square_p(&[900, 100], &[0.5, 0.5]);
        assert!(p < 1e-6);
    }

    #[test]
    fn chi_square_zero_bin_violation() {
        assert_eq!(chi_square_p(&[10, 10, 5], &[0.5, 0.5, 0.0]), 0.0);
    }

    #[test]
    fn dense_probs_product_state() {
        // |00⟩ at d = 2: half mass each on (0,0) and (0,1).
        let mut amps = vec![(0.0, 0.0); 4];
        amps[0] = (1.0, 0.0);
        let probs = dense_bell_probs(2, &amps);
        assert!((probs[0] - 0.5).abs() < 1e-12);
        assert!((probs[1] - 0.5).abs() < 1e-12);
        assert!(probs[2].abs() < 1e-12);
        assert!(probs[3].abs() < 1e-12);
    }
}
