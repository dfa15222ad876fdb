use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use super::tubezeta::ZetaEstimate;
use crate::error::{domain, Result};
use crate::geometry::{SetDescriptor, TubeMode};
use crate::sum::{pairwise_sum, pairwise_sum_complex};

/// Accepted samples per random stream.
const CHUNK: usize = 1 << 14;
/// Rejection attempts per accepted sample before a chunk gives up.
const MAX_ATTEMPTS: usize = 10_000;

/// Monte Carlo estimate of `ζ_A(s)` over `A_δ ∩ Ω` (inner) or `A_δ` (full).
///
/// Points are drawn uniformly from the integration region by rejection from
/// its bounding box; the region volume comes from the exact tube oracle. The
/// sample set depends only on `seed` and `n`: chunk `c` draws from stream `c`
/// of a ChaCha8 generator, and partial sums are combined pairwise in chunk order.
pub fn distance_zeta_mc(
    desc: &SetDescriptor,
    mode: TubeMode,
    s: Complex64,
    delta: f64,
    n: usize,
    seed: u64,
) -> Result<ZetaEstimate> {
    if n < 1000 {
        return domain("Monte Carlo needs at least 1000 samples");
    }
    if !(delta > 0.0) {
        return domain("δ must be positive");
    }
    let volume = desc.tube_volume(delta, mode)?;
    let dim = desc.ambient_dim() as usize;
    let margin = if mode == TubeMode::Full { delta } else { 0.0 };
    let (lo, hi) = desc.bounding_box(margin);
    let exponent = s - dim as f64;
    let chunks = n.div_ceil(CHUNK);
    let partials: Vec<Result<(Complex64, f64)>> = (0..chunks)
        .into_par_iter()
        .map(|c| {
            let quota = CHUNK.min(n - c * CHUNK);
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            rng.set_stream(c as u64);
            let mut values = Vec::with_capacity(quota);
            let mut x = vec![0.0; dim];
            let mut attempts = 0usize;
            while values.len() < quota {
                attempts += 1;
                if attempts > MAX_ATTEMPTS * quota {
                    return domain("rejection sampling acceptance rate too low");
                }
                for i in 0..dim {
                    x[i] = lo[i] + (hi[i] - lo[i]) * rng.random::<f64>();
                }
                let d = desc.distance(&x);
                if !(d > 0.0 && d < delta) {
                    continue;
                }
                if mode == TubeMode::Inner && !desc.in_region(&x) {
                    continue;
                }
                values.push((exponent * d.ln()).exp());
            }
            let sum = pairwise_sum_complex(&values);
            let sq: Vec<f64> = values.iter().map(|v| v.norm_sqr()).collect();
            Ok((sum, pairwise_sum(&sq)))
        })
        .collect();
    let mut sums = Vec::with_capacity(chunks);
    let mut squares = Vec::with_capacity(chunks);
    for p in partials {
        let (a, b) = p?;
        sums.push(a);
        squares.push(b);
    }
    let nf = n as f64;
    let mean = pairwise_sum_complex(&sums) / nf;
    let second = pairwise_sum(&squares) / nf;
    let var = (second - mean.norm_sqr()).max(0.0) * nf / (nf - 1.0);
    Ok(ZetaEstimate {
        value: mean * volume,
        std_err: Some(volume * (var / nf).sqrt()),
        quad_err: None,
        samples: n as u64,
    })
}
