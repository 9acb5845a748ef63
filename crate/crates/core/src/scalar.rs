//! Exact rational scalars and seeded rational sampling.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};

pub type Rat = BigRational;

pub fn rat(n: i64, d: i64) -> Rat {
    Rat::new(BigInt::from(n), BigInt::from(d))
}

pub fn rat_int(n: i64) -> Rat {
    Rat::from_integer(BigInt::from(n))
}

pub fn rat_to_f64(x: &Rat) -> f64 {
    x.to_f64().unwrap_or_else(|| {
        let n = x.numer().to_f64().unwrap_or(f64::NAN);
        let d = x.denom().to_f64().unwrap_or(f64::NAN);
        n / d
    })
}

/// Parses "p", "-p" or "p/q".
pub fn parse_rat(s: &str) -> Result<Rat> {
    let s = s.trim();
    let (n, d) = match s.split_once('/') {
        Some((n, d)) => (n, d),
        None => (s, "1"),
    };
    let n: BigInt = n
        .trim()
        .parse()
        .map_err(|_| Error::Parse(format!("bad rational `{s}`")))?;
    let d: BigInt = d
        .trim()
        .parse()
        .map_err(|_| Error::Parse(format!("bad rational `{s}`")))?;
    if d.is_zero() {
        return Err(Error::Parse(format!("zero denominator in `{s}`")));
    }
    Ok(Rat::new(n, d))
}

pub fn fmt_rat(x: &Rat) -> String {
    if x.denom().is_one() {
        format!("{}", x.numer())
    } else {
        format!("{}/{}", x.numer(), x.denom())
    }
}

/// Deterministic source of small rational numbers.
///
/// All samplers in the crate draw through this, so a run is reproducible
/// from its seed alone.
pub struct RatSampler {
    rng: ChaCha8Rng,
}

impl RatSampler {
    pub fn new(seed: u64) -> Self {
        RatSampler {
            rng: ChaCha8Rng::seed_from_u64(seed),
        }
    }

    pub fn rng(&mut self) -> &mut ChaCha8Rng {
        &mut self.rng
    }

    /// A small rational with numerator in [-9, 9] and denominator in [1, 4].
    pub fn small(&mut self) -> Rat {
        let n = self.rng.gen_range(-9i64..=9);
        let d = self.rng.gen_range(1i64..=4);
        rat(n, d)
    }

    /// A small nonzero rational.
    pub fn small_nonzero(&mut self) -> Rat {
        loop {
            let x = self.small();
            if !x.is_zero() {
                return x;
            }
        }
    }

    /// `k` pairwise distinct rationals, enforced by construction: a shuffled
    /// base point plus increasing offsets.
    pub fn distinct(&mut self, k: usize) -> Vec<Rat> {
        let base = self.rng.gen_range(-6i64..=6);
        let step = self.rng.gen_range(1i64..=3);
        let denom = self.rng.gen_range(1i64..=3);
        (0..k)
            .map(|i| rat(base + step * i as i64, denom))
            .collect()
    }
}

/// Sum of squares is the exact stand-in for a Frobenius norm; it is zero
/// exactly when the matrix is.
pub fn rat_abs(x: &Rat) -> Rat {
    x.abs()
}
