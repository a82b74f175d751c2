//! Seeded Monte Carlo for the supremum law of the probability construction and for
//! the Rademacher symmetrization of its blocks.
//!
//! Sampling is split into sub-batches of [`SUB_BATCH`] points, each driven by its own
//! ChaCha stream, and evaluated in parallel; results are merged in sub-batch order so
//! a `(seed, N)` pair always produces the same batch.

use rand::{Rng, RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::check::{anchors, CheckResult};
use crate::counterexample::{block_lp_exact, Case, DisjointSystem};
use crate::quad::CompensatedSum;
use crate::special::gamma;
use crate::{Error, Result};

pub const SUB_BATCH: usize = 1 << 16;

/// Counter-based Rademacher sequence: `sign(n)` is bit `n mod 32` of word `n / 32`
/// of the ChaCha keystream for `seed`, so any index is available without storing
/// the sequence.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct RademacherSigns {
    seed: u64,
}

impl RademacherSigns {
    pub fn new(seed: u64) -> Self {
        RademacherSigns { seed }
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn sign(&self, n: u64) -> f64 {
        let mut rng = ChaCha8Rng::seed_from_u64(self.seed);
        rng.set_word_pos((n / 32) as u128);
        let word = rng.next_u32();
        if (word >> (n % 32)) & 1 == 1 {
            1.0
        } else {
            -1.0
        }
    }

    /// Signs `1..=count` in one pass over the keystream.
    pub fn signs(&self, count: u64) -> Vec<f64> {
        let mut rng = ChaCha8Rng::seed_from_u64(self.seed);
        let mut out = Vec::with_capacity(count as usize);
        let mut word = 0u32;
        for n in 1..=count {
            if n % 32 == 0 || n == 1 {
                rng.set_word_pos((n / 32) as u128);
                word = rng.next_u32();
            }
            out.push(if (word >> (n % 32)) & 1 == 1 { 1.0 } else { -1.0 });
        }
        out
    }
}

/// Seed of the sign realization attached to sample `k` of a batch.
fn realization_seed(seed: u64, k: u64) -> u64 {
    // splitmix64 finalizer
    let mut z = seed ^ 0x9e37_79b9_7f4a_7c15u64.wrapping_mul(k.wrapping_add(1));
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

#[derive(Debug, Clone, PartialEq)]
pub struct SampleBatch {
    pub seed: u64,
    pub count: usize,
    /// Realized `g(x) = sup_t |θ(t, x)|`.
    pub values: Vec<f64>,
    /// `ε(n)·g_n(x)` for the block `n` containing `x` (0 outside every block).
    pub signed_values: Vec<f64>,
    /// Block index per sample; `None` when `x ≤ 1/2` or on a block boundary.
    pub indices: Vec<Option<u64>>,
}

/// `N` samples of the supremum `g(x)`, `x` uniform on `(0, 1)`.
///
/// Each sample draws the block through the complement `y = 1 - x` and the relative
/// position `u` inside the block from a second uniform; given its block, `x` is
/// uniform on it, so `(n, u)` has the law of `x`. This keeps blocks far narrower than
/// the spacing of `f64` near 1 reachable. Each sample carries its own realization of
/// the Rademacher sequence; indices beyond `u64` saturate for the sign lookup only.
pub fn sample_sup(sys: &DisjointSystem, seed: u64, count: usize) -> Result<SampleBatch> {
    if sys.case() != Case::Probability {
        return Err(Error::BadParameter("sample_sup needs the probability case".into()));
    }
    if count == 0 {
        return Err(Error::EmptyBatch);
    }
    let batches = count.div_ceil(SUB_BATCH);
    let parts: Vec<Vec<(f64, f64, Option<u64>)>> = (0..batches)
        .into_par_iter()
        .map(|b| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            rng.set_stream(b as u64 + 1);
            let start = b * SUB_BATCH;
            let len = SUB_BATCH.min(count - start);
            (0..len)
                .map(|i| {
                    let y: f64 = rng.random();
                    let u: f64 = 1.0 - rng.random::<f64>();
                    match sys.block_of_complement(y) {
                        None => (0.0, 0.0, None),
                        Some(nu) => {
                            let v = sys.c_real(nu) * (-u.ln()).sqrt();
                            let n = nu as u64;
                            let k = (start + i) as u64;
                            let s = RademacherSigns::new(realization_seed(seed, k)).sign(n);
                            (v, s * v, Some(n))
                        }
                    }
                })
                .collect()
        })
        .collect();
    let mut values = Vec::with_capacity(count);
    let mut signed = Vec::with_capacity(count);
    let mut indices = Vec::with_capacity(count);
    for part in parts {
        for (v, s, n) in part {
            values.push(v);
            signed.push(s);
            indices.push(n);
        }
    }
    Ok(SampleBatch {
        seed,
        count,
        values,
        signed_values: signed,
        indices,
    })
}

/// Fraction of values strictly above `z`, with binomial standard error.
pub fn empirical_tail(values: &[f64], z: f64) -> Result<(f64, f64)> {
    if values.is_empty() {
        return Err(Error::EmptyBatch);
    }
    let n = values.len() as f64;
    let hits = values.iter().filter(|&&v| v > z).count() as f64;
    let f = hits / n;
    Ok((f, (f * (1.0 - f) / n).sqrt()))
}

/// Mean of `|v|^p` and its standard error from the sample variance.
pub fn empirical_moment(values: &[f64], p: f64) -> Result<(f64, f64)> {
    if values.is_empty() {
        return Err(Error::EmptyBatch);
    }
    let n = values.len() as f64;
    let xs: Vec<f64> = values.iter().map(|v| v.abs().powf(p)).collect();
    let mean = xs.iter().copied().collect::<CompensatedSum>().value() / n;
    let var = xs
        .iter()
        .map(|x| (x - mean) * (x - mean))
        .collect::<CompensatedSum>()
        .value()
        / (n - 1.0).max(1.0);
    Ok((mean, (var / n).sqrt()))
}

/// Mean of signed values and its standard error.
pub fn empirical_mean(values: &[f64]) -> Result<(f64, f64)> {
    if values.is_empty() {
        return Err(Error::EmptyBatch);
    }
    let n = values.len() as f64;
    let mean = values.iter().copied().collect::<CompensatedSum>().value() / n;
    let var = values
        .iter()
        .map(|x| (x - mean) * (x - mean))
        .collect::<CompensatedSum>()
        .value()
        / (n - 1.0).max(1.0);
    Ok((mean, (var / n).sqrt()))
}

/// `mean(|v|^p)` over the first `N` values for each checkpoint `N`.
pub fn running_moments(values: &[f64], p: f64, checkpoints: &[usize]) -> Result<Vec<f64>> {
    if checkpoints.iter().any(|&c| c == 0 || c > values.len()) {
        return Err(Error::BadParameter("running-moment checkpoint outside the batch".into()));
    }
    let mut out = Vec::with_capacity(checkpoints.len());
    let mut acc = CompensatedSum::new();
    let mut done = 0;
    for &c in checkpoints {
        while done < c {
            acc.add(values[done].abs().powf(p));
            done += 1;
        }
        out.push(acc.value() / c as f64);
    }
    Ok(out)
}

/// Standard-error multiple for the Monte Carlo bands.
pub const MC_BAND: f64 = 3.0;

/// Symmetrization on block `n`, from `count` samples of `x` conditioned on the
/// block's support, each with a fresh sign:
/// (a) the signed mean is within 3 standard errors of 0;
/// (b) `|ε(n)·g_n(x)| = g_n(x)` exactly at every sample;
/// (c) `Δ(n)·mean(|g_n|^p)` matches `|g_n|_p^p` within 3 standard errors, `p ∈ {1, 2}`.
pub fn symmetrization_check(sys: &DisjointSystem, n: u64, seed: u64, count: usize) -> Result<CheckResult> {
    if sys.case() != Case::Probability {
        return Err(Error::BadParameter("symmetrization_check needs the probability case".into()));
    }
    if count < 2 {
        return Err(Error::EmptyBatch);
    }
    let c = sys.c(n);
    let batches = count.div_ceil(SUB_BATCH);
    let parts: Vec<Vec<(f64, f64)>> = (0..batches)
        .into_par_iter()
        .map(|b| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            rng.set_stream(b as u64 + 1);
            let start = b * SUB_BATCH;
            let len = SUB_BATCH.min(count - start);
            (0..len)
                .map(|i| {
                    // u uniform on (0, 1): relative position inside the block
                    let u: f64 = 1.0 - rng.random::<f64>();
                    let v = c * (-u.ln()).sqrt();
                    let s = RademacherSigns::new(realization_seed(seed, (start + i) as u64)).sign(n);
                    (v, s * v)
                })
                .collect()
        })
        .collect();
    let (values, signed): (Vec<f64>, Vec<f64>) = parts.into_iter().flatten().unzip();
    let (mean, se) = empirical_mean(&signed)?;
    let centered = mean.abs() <= MC_BAND * se;
    let exact_abs = values.iter().zip(&signed).all(|(v, s)| s.abs() == *v);
    let width = sys.width(n);
    let mut moment_ok = true;
    let mut notes = vec![format!("(a) mean {mean:.3e} ± {se:.3e}: {centered}"), format!("(b) |signed| = value at all points: {exact_abs}")];
    for p in [1.0, 2.0] {
        let (m, mse) = empirical_moment(&signed, p)?;
        let target = block_lp_exact(sys, n, p)?.powf(p);
        let got = width * m;
        let ok = (got - target).abs() <= MC_BAND * width * mse;
        moment_ok &= ok;
        notes.push(format!(
            "(c) p={p}: Δ·mean|v|^p = {got:.6e} vs |g_n|_p^p = {target:.6e} ± {:.2e}: {ok}",
            MC_BAND * width * mse
        ));
        // conditional moment identity E|v|^p = c^p Γ(p/2+1)
        debug_assert!((target / width - c.powf(p) * gamma(p / 2.0 + 1.0)).abs() < 1e-9 * target / width);
    }
    let pass = centered && exact_abs && moment_ok;
    Ok(CheckResult::new(
        format!("mc_symmetrization[n={n}]"),
        anchors::SYMMETRIZATION,
        mean,
        0.0,
        MC_BAND * se,
        pass,
    )
    .with_detail(notes.join("; ")))
}
