//! Asynchronous single-site threshold dynamics.
//!
//! One time step is `N` update attempts. Each attempt draws a site uniformly
//! (with replacement), then one standard-normal noise value, in that order,
//! from the same ChaCha8 stream, and sets
//!
//! ```text
//! s_i = sign_q( J * (sum of the 4 neighbours of i) + sigma * noise ),   q = lambda * |M|
//! ```
//!
//! Neighbours are read from the current, partially updated configuration.
//! `M` is the magnetization at the start of the step ([`ThresholdMode::Frozen`])
//! or the running value before each attempt ([`ThresholdMode::Live`]).

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::error::Result;
use crate::lattice::SpinLattice;
use crate::params::{ModelParams, ThresholdMode};
use crate::series::Series;
use crate::spin::Spin;

/// Signum with a dead zone: `+1` above `q`, `-1` below `-q`, otherwise `0`.
///
/// The boundary points `x = q` and `x = -q` map to `0`, so `q = 0` gives the
/// symmetric signum with `sign(0) = 0`.
#[inline]
pub fn threshold_sign(x: f64, q: f64) -> Spin {
    debug_assert!(q >= 0.0);
    if x > q {
        Spin::Up
    } else if x < -q {
        Spin::Down
    } else {
        Spin::Zero
    }
}

/// `J` times the sum of the four periodic neighbours of site `i`.
#[inline]
pub fn local_field(lattice: &SpinLattice, i: usize, coupling: f64) -> f64 {
    coupling * lattice.neighbor_sum(i) as f64
}

/// Applies the update rule to site `i` with an externally supplied noise draw,
/// writes the result into the lattice and returns it.
#[inline]
pub fn update_site(
    lattice: &mut SpinLattice,
    i: usize,
    params: &ModelParams,
    threshold_q: f64,
    noise: f64,
) -> Spin {
    let x = local_field(lattice, i, params.coupling) + params.sigma * noise;
    let s = threshold_sign(x, threshold_q);
    lattice.set(i, s);
    s
}

/// Supplies the random site choices and noise draws consumed by [`step`].
pub trait UpdateSource {
    /// A site index in `0..n`.
    fn next_site(&mut self, n: usize) -> usize;
    /// A standard-normal draw.
    fn next_noise(&mut self) -> f64;
}

/// The production source: a ChaCha8 stream seeded from a `u64`.
#[derive(Debug, Clone)]
pub struct SeededSource {
    rng: ChaCha8Rng,
}

impl SeededSource {
    pub fn new(seed: u64) -> Self {
        SeededSource {
            rng: ChaCha8Rng::seed_from_u64(seed),
        }
    }

    pub fn rng(&mut self) -> &mut ChaCha8Rng {
        &mut self.rng
    }
}

impl UpdateSource for SeededSource {
    #[inline]
    fn next_site(&mut self, n: usize) -> usize {
        self.rng.random_range(0..n)
    }

    #[inline]
    fn next_noise(&mut self) -> f64 {
        self.rng.sample(StandardNormal)
    }
}

/// Replays fixed site and noise sequences. Panics when either runs out.
#[derive(Debug, Clone, Default)]
pub struct ScriptedSource {
    sites: Vec<usize>,
    noise: Vec<f64>,
    next_site: usize,
    next_noise: usize,
}

impl ScriptedSource {
    pub fn new(sites: Vec<usize>, noise: Vec<f64>) -> Self {
        ScriptedSource {
            sites,
            noise,
            ..Default::default()
        }
    }
}

impl UpdateSource for ScriptedSource {
    fn next_site(&mut self, n: usize) -> usize {
        let i = self.sites[self.next_site];
        assert!(i < n, "scripted site {i} out of range for {n} sites");
        self.next_site += 1;
        i
    }

    fn next_noise(&mut self) -> f64 {
        let v = self.noise[self.next_noise];
        self.next_noise += 1;
        v
    }
}

/// Same site sequence as the wrapped source, negated noise.
#[derive(Debug, Clone)]
pub struct MirroredNoise<S>(pub S);

impl<S: UpdateSource> UpdateSource for MirroredNoise<S> {
    #[inline]
    fn next_site(&mut self, n: usize) -> usize {
        self.0.next_site(n)
    }

    #[inline]
    fn next_noise(&mut self) -> f64 {
        -self.0.next_noise()
    }
}

#[inline]
fn threshold(lambda: f64, spin_sum: i64, n: usize) -> f64 {
    lambda * (spin_sum.unsigned_abs() as f64 / n as f64)
}

/// One time step: `N` single-site updates. Returns the magnetization afterwards.
pub fn step<S: UpdateSource + ?Sized>(
    lattice: &mut SpinLattice,
    params: &ModelParams,
    source: &mut S,
) -> f64 {
    let n = lattice.len();
    let frozen_q = threshold(params.lambda, lattice.spin_sum(), n);
    for _ in 0..n {
        let i = source.next_site(n);
        let noise = source.next_noise();
        let q = match params.threshold_mode {
            ThresholdMode::Frozen => frozen_q,
            ThresholdMode::Live => threshold(params.lambda, lattice.spin_sum(), n),
        };
        update_site(lattice, i, params, q, noise);
    }
    lattice.magnetization()
}

/// A running simulation: lattice, parameters and random stream.
#[derive(Debug, Clone)]
pub struct Simulation<S = SeededSource> {
    params: ModelParams,
    lattice: SpinLattice,
    source: S,
    steps_done: u64,
}

impl Simulation<SeededSource> {
    /// Seeds the stream from `params.seed`, draws a uniform random start over
    /// {-1, 0, +1} from it, and continues with the same stream for the dynamics.
    pub fn new(params: ModelParams) -> Result<Self> {
        params.validate()?;
        let mut source = SeededSource::new(params.seed);
        let lattice = SpinLattice::random(params.side, source.rng())?;
        Ok(Simulation {
            params,
            lattice,
            source,
            steps_done: 0,
        })
    }
}

impl<S: UpdateSource> Simulation<S> {
    /// Starts from an explicit configuration and update source.
    pub fn with_source(params: ModelParams, lattice: SpinLattice, source: S) -> Result<Self> {
        params.validate()?;
        if lattice.side() != params.side {
            return Err(crate::Error::LatticeShape {
                side: params.side,
                expected: params.sites(),
                actual: lattice.len(),
            });
        }
        Ok(Simulation {
            params,
            lattice,
            source,
            steps_done: 0,
        })
    }

    pub fn params(&self) -> &ModelParams {
        &self.params
    }

    pub fn lattice(&self) -> &SpinLattice {
        &self.lattice
    }

    pub fn steps_done(&self) -> u64 {
        self.steps_done
    }

    pub fn step(&mut self) -> f64 {
        self.steps_done += 1;
        step(&mut self.lattice, &self.params, &mut self.source)
    }

    /// Runs the configured number of thermalization steps, discarding output.
    pub fn thermalize(&mut self) {
        for _ in 0..self.params.thermalization_steps {
            self.step();
        }
    }

    /// Runs `measurement_steps` steps and records `M(t)` after each. The
    /// returned series starts at the 0-based index of its first step.
    pub fn measure(&mut self) -> Series {
        self.measure_with(|_| {})
    }

    /// Like [`Simulation::measure`], calling `observe` on the lattice after every step.
    pub fn measure_with(&mut self, mut observe: impl FnMut(&SpinLattice)) -> Series {
        let t0 = self.steps_done as i64;
        let steps = self.params.measurement_steps as usize;
        let mut values = Vec::with_capacity(steps);
        for _ in 0..steps {
            values.push(self.step());
            observe(&self.lattice);
        }
        Series::new(t0, values)
    }

    pub fn run(mut self) -> Series {
        self.thermalize();
        self.measure()
    }
}

/// Full protocol from a random start: thermalize, then record `M(t)` once per step.
pub fn run_simulation(params: &ModelParams) -> Result<Series> {
    Ok(Simulation::new(params.clone())?.run())
}
