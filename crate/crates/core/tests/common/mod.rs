//! Shared generators for the randomized suites. Everything is seeded; the
//! suites are deterministic run to run.

use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

use troptoda::rational::{rat, rat_i, Rat};
use troptoda::udtoda::{SpectralInvariants, UdState};

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// A small rational with denominator 1, 2, 3 or 4.
pub fn rand_rat(rng: &mut ChaCha8Rng, lo: i64, hi: i64) -> Rat {
    let den = *[1i64, 2, 3, 4].get(rng.gen_range(0..4)).unwrap();
    rat(rng.gen_range(lo * den..=hi * den), den)
}

/// A valid phase-space point with entries in `[0, hi]`.
pub fn rand_state(rng: &mut ChaCha8Rng, g: usize, hi: i64) -> UdState {
    loop {
        let q: Vec<Rat> = (0..=g).map(|_| rand_rat(rng, 0, hi)).collect();
        let mut w: Vec<Rat> = (0..=g).map(|_| rand_rat(rng, 0, hi)).collect();
        let sq: Rat = q.iter().sum();
        let sw: Rat = w.iter().sum();
        if sq < sw {
            return UdState::new(g, q, w).unwrap();
        }
        // push one site up to restore the strict inequality
        let i = rng.gen_range(0..=g);
        w[i] = &w[i] + (sq - sw) + rat_i(1);
        return UdState::new(g, q, w).unwrap();
    }
}

/// Random generic invariants built from a breakpoint partition: ascending
/// `lambda` with small integer gaps and `L` above the closure bound.
pub fn rand_generic_inv(rng: &mut ChaCha8Rng, g: usize) -> SpectralInvariants {
    let lambda0 = rat_i(rng.gen_range(0..=2));
    let mut lambda = vec![lambda0.clone()];
    for _ in 1..=g {
        let gap = rat_i(rng.gen_range(1..=3));
        lambda.push(lambda.last().unwrap() + gap);
    }
    let closure: Rat = lambda.iter().map(|l| l - &lambda0).sum::<Rat>() * rat_i(2);
    let l_period = closure + rat_i(rng.gen_range(1..=6));

    // rebuild C: C_g = lambda_0, C_{g-i} = lambda_i + C_{g-i+1},
    // C_{-1} = L + 2(g+1) C_g
    let mut c = vec![Rat::from_integer(0.into()); g + 2];
    c[g + 1] = lambda0.clone();
    for i in 1..=g {
        c[g + 1 - i] = &lambda[i] + &c[g + 2 - i];
    }
    c[0] = &l_period + &lambda0 * rat_i(2 * (g as i64 + 1));
    SpectralInvariants::new(g, c).unwrap()
}

/// A random rational vector of length `g`.
pub fn rand_z(rng: &mut ChaCha8Rng, g: usize, span: i64) -> Vec<Rat> {
    (0..g).map(|_| rand_rat(rng, -span, span)).collect()
}
