use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Skew used for every Zipfian key stream.
pub const ZIPF_THETA: f64 = 0.99;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, serde::Serialize, serde::Deserialize)]
pub enum KeyDistribution {
    Uniform,
    Zipfian,
}

/// Precomputed constants of the Gray et al. quick Zipfian generator over
/// ranks `1..=n`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Zipf {
    n: u64,
    theta: f64,
    alpha: f64,
    zetan: f64,
    eta: f64,
}

fn zeta(n: u64, theta: f64) -> f64 {
    (1..=n).map(|i| (i as f64).powf(-theta)).sum()
}

impl Zipf {
    pub fn new(n: u64, theta: f64) -> Self {
        assert!(n >= 1, "empty key domain");
        assert!(theta > 0.0 && theta < 1.0, "theta must lie in (0, 1)");
        let zetan = zeta(n, theta);
        let zeta2 = zeta(2.min(n), theta);
        let eta = if n == 1 {
            0.0
        } else {
            (1.0 - (2.0 / n as f64).powf(1.0 - theta)) / (1.0 - zeta2 / zetan)
        };
        Zipf {
            n,
            theta,
            alpha: 1.0 / (1.0 - theta),
            zetan,
            eta,
        }
    }

    pub fn n(&self) -> u64 {
        self.n
    }

    /// The normalizer `sum 1/i^theta` for `i` in `1..=n`.
    pub fn zetan(&self) -> f64 {
        self.zetan
    }

    /// Maps a uniform draw `u` in `[0, 1)` to a rank.
    pub fn rank(&self, u: f64) -> u64 {
        let uz = u * self.zetan;
        if uz < 1.0 {
            return 1;
        }
        if uz < 1.0 + 0.5f64.powf(self.theta) {
            return 2.min(self.n);
        }
        let r = 1 + (self.n as f64 * (self.eta * u - self.eta + 1.0).powf(self.alpha)) as u64;
        r.clamp(1, self.n)
    }
}

/// Seeded key stream over the domain `[1, max]`.
#[derive(Debug, Clone)]
pub struct KeySampler {
    dist: KeyDistribution,
    max: u64,
    zipf: Option<Zipf>,
    rng: ChaCha8Rng,
}

impl KeySampler {
    pub fn new(dist: KeyDistribution, max: u64, seed: u64) -> Self {
        assert!(max >= 1, "empty key domain");
        let zipf = (dist == KeyDistribution::Zipfian).then(|| Zipf::new(max, ZIPF_THETA));
        KeySampler {
            dist,
            max,
            zipf,
            rng: ChaCha8Rng::seed_from_u64(seed),
        }
    }

    pub fn distribution(&self) -> KeyDistribution {
        self.dist
    }

    pub fn max(&self) -> u64 {
        self.max
    }

    pub fn sample(&mut self) -> u64 {
        match &self.zipf {
            Some(z) => z.rank(self.rng.gen::<f64>()),
            None => self.rng.gen_range(1..=self.max),
        }
    }
}

/// One Zipfian draw from `sampler`'s stream; a uniform sampler draws uniformly.
pub fn zipf_sample(sampler: &mut KeySampler) -> u64 {
    sampler.sample()
}
