//! Quasiperiodic unions of Cantor sets and truncated hyperfractal strings.

use num_bigint::{BigInt, BigUint};
use num_complex::Complex64;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::Serialize;
use std::f64::consts::PI;

use crate::error::{domain, Error, Result};
use crate::geometry::{cantor_set, union, FractalString, SetDescriptor};
use crate::rational::{approx_rational, to_f64};

/// Relative tolerance for merging lengths that are not exact rationals.
pub const MERGE_TOL: f64 = 1e-15;

/// Denominator cap when recognizing scales and ratios as fractions.
const RATIONAL_DEN: u64 = 1 << 32;

/// Prime factorization `m = Π p_i^(e_i)`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ExponentVector {
    pub primes: Vec<u64>,
    pub exponents: Vec<u32>,
}

impl ExponentVector {
    pub fn value(&self) -> BigUint {
        self.primes
            .iter()
            .zip(&self.exponents)
            .fold(BigUint::one(), |acc, (&p, &e)| acc * BigUint::from(p).pow(e))
    }

    /// Exponents on `support`, zero for primes not dividing `m`.
    pub fn aligned(&self, support: &[u64]) -> Vec<i64> {
        support
            .iter()
            .map(|p| match self.primes.iter().position(|q| q == p) {
                Some(i) => i64::from(self.exponents[i]),
                None => 0,
            })
            .collect()
    }
}

/// Factorization of `m >= 2` by trial division.
pub fn exponent_vector(m: u64) -> Result<ExponentVector> {
    if m < 2 {
        return domain(format!("exponent vector needs m >= 2, got {m}"));
    }
    let (mut primes, mut exponents) = (Vec::new(), Vec::new());
    let mut rest = m;
    let mut p = 2u64;
    while p * p <= rest {
        if rest % p == 0 {
            let mut e = 0;
            while rest % p == 0 {
                rest /= p;
                e += 1;
            }
            primes.push(p);
            exponents.push(e);
        }
        p += if p == 2 { 1 } else { 2 };
    }
    if rest > 1 {
        primes.push(rest);
        exponents.push(1);
    }
    Ok(ExponentVector { primes, exponents })
}

/// Sorted union of the prime supports.
pub fn common_support(vectors: &[ExponentVector]) -> Vec<u64> {
    let mut s: Vec<u64> = vectors.iter().flat_map(|v| v.primes.iter().copied()).collect();
    s.sort_unstable();
    s.dedup();
    s
}

/// Rank over ℚ of an integer matrix by fraction-free (Bareiss) elimination.
pub fn integer_rank(rows: &[Vec<i64>]) -> usize {
    let mut a: Vec<Vec<BigInt>> = rows.iter().map(|r| r.iter().map(|&x| BigInt::from(x)).collect()).collect();
    let cols = a.first().map_or(0, Vec::len);
    let mut prev = BigInt::one();
    let mut rank = 0;
    for c in 0..cols {
        let Some(p) = (rank..a.len()).find(|&i| !a[i][c].is_zero()) else {
            continue;
        };
        a.swap(rank, p);
        for i in rank + 1..a.len() {
            for j in c + 1..cols {
                let v = &a[rank][c] * &a[i][j] - &a[i][c] * &a[rank][j];
                // exact division is the point of the Bareiss step
                a[i][j] = v / &prev;
            }
            a[i][c] = BigInt::zero();
        }
        prev = a[rank][c].clone();
        rank += 1;
    }
    rank
}

/// Whether the exponent vectors are linearly independent over ℚ.
pub fn rationally_independent(vectors: &[ExponentVector]) -> bool {
    let support = common_support(vectors);
    let rows: Vec<Vec<i64>> = vectors.iter().map(|v| v.aligned(&support)).collect();
    integer_rank(&rows) == vectors.len()
}

/// A primitive integer relation `Σ c_i e_i = 0`, if the vectors are dependent.
pub fn integer_relation(vectors: &[ExponentVector]) -> Option<Vec<i64>> {
    let support = common_support(vectors);
    let k = vectors.len();
    // columns are the vectors; solve M c = 0 in reduced row echelon form
    let cols: Vec<Vec<i64>> = vectors.iter().map(|v| v.aligned(&support)).collect();
    let mut m: Vec<Vec<BigRational>> = (0..support.len())
        .map(|i| (0..k).map(|j| BigRational::from_integer(cols[j][i].into())).collect())
        .collect();
    let mut pivots = Vec::new();
    let mut row = 0;
    for c in 0..k {
        let Some(p) = (row..m.len()).find(|&i| !m[i][c].is_zero()) else {
            continue;
        };
        m.swap(row, p);
        let inv = m[row][c].recip();
        for j in 0..k {
            m[row][j] = &m[row][j] * &inv;
        }
        for i in 0..m.len() {
            if i != row && !m[i][c].is_zero() {
                let f = m[i][c].clone();
                for j in 0..k {
                    let v = &f * &m[row][j];
                    m[i][j] -= v;
                }
            }
        }
        pivots.push(c);
        row += 1;
    }
    let free = (0..k).find(|c| !pivots.contains(c))?;
    let mut x = vec![BigRational::zero(); k];
    x[free] = BigRational::one();
    for (r, &c) in pivots.iter().enumerate() {
        x[c] = -m[r][free].clone();
    }
    let den = x.iter().fold(BigInt::one(), |acc, q| acc.lcm(q.denom()));
    let ints: Vec<BigInt> = x.iter().map(|q| (q * BigRational::from_integer(den.clone())).to_integer()).collect();
    let g = ints.iter().fold(BigInt::zero(), |acc, v| acc.gcd(v));
    let sign = match ints.iter().find(|v| !v.is_zero()) {
        Some(v) if v.is_negative() => BigInt::from(-1),
        _ => BigInt::one(),
    };
    ints.iter().map(|v| (v / &g * &sign).to_i64()).collect()
}

fn check_independent(vectors: &[ExponentVector]) -> Result<()> {
    match integer_relation(vectors) {
        Some(relation) => Err(Error::DependentExponents { relation }),
        None => Ok(()),
    }
}

/// `a = m^(-1/D)`, computed exactly when `1/D` is an integer.
fn scaling_ratio(m: u64, d: f64) -> f64 {
    let inv = 1.0 / d;
    if (inv - inv.round()).abs() < 1e-12 && inv.round() <= 64.0 {
        1.0 / (m as f64).powi(inv.round() as i32)
    } else {
        (m as f64).powf(-inv)
    }
}

/// A union of two Cantor sets with a common dimension and independent quasiperiods.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct QpReport {
    pub d: f64,
    pub a1: f64,
    pub a2: f64,
    /// Quasiperiods `T_i = log(1/a_i)`.
    pub t1: f64,
    pub t2: f64,
    pub independent: bool,
    /// `D + (2π/T_1 ℤ ∪ 2π/T_2 ℤ) i` with `|Im| <= band`, sorted by imaginary part.
    pub principal_dims: Vec<Complex64>,
    /// Transcendence of `T_1 / T_2` is a theorem about the construction and is never computed.
    pub transcendence: &'static str,
    #[serde(skip)]
    pub set: SetDescriptor,
}

/// `C^(m1, a1)` on `[0, 1]` and `C^(m2, a2)` on `[1, 2]`, both of dimension `D`.
pub fn two_qp_set(m1: u64, m2: u64, d: f64, band: f64) -> Result<QpReport> {
    if m1 < 2 || m2 < 2 {
        return domain("quasiperiodic set needs m1, m2 >= 2");
    }
    if !(d > 0.0 && d < 1.0) {
        return domain(format!("quasiperiodic set needs 0 < D < 1, got {d}"));
    }
    if !(band >= 0.0) {
        return domain("band must be nonnegative");
    }
    check_independent(&[exponent_vector(m1)?, exponent_vector(m2)?])?;
    let (a1, a2) = (scaling_ratio(m1, d), scaling_ratio(m2, d));
    let c1 = cantor_set(u32::try_from(m1).map_err(|_| Error::Domain("m1 too large".into()))?, a1)?;
    let c2 = cantor_set(u32::try_from(m2).map_err(|_| Error::Domain("m2 too large".into()))?, a2)?.translated(1.0);
    let (t1, t2) = (-a1.ln(), -a2.ln());
    let mut ims = vec![0.0];
    for t in [t1, t2] {
        let p = 2.0 * PI / t;
        let kmax = (band / p).floor() as i64;
        for k in 1..=kmax {
            ims.push(k as f64 * p);
            ims.push(-(k as f64) * p);
        }
    }
    ims.sort_by(f64::total_cmp);
    Ok(QpReport {
        d,
        a1,
        a2,
        t1,
        t2,
        independent: true,
        principal_dims: ims.into_iter().map(|y| Complex64::new(d, y)).collect(),
        transcendence: "asserted-by-theorem",
        set: union(vec![c1, c2])?,
    })
}

/// A finite stage of the hyperfractal string construction.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct HyperfractalTruncation {
    /// Gap strings of `C^(m_k, a_k)`, `levels` deep, scaled by `c_k`.
    pub component_strings: Vec<FractalString>,
    pub scales: Vec<f64>,
    /// Oscillatory periods `p_k = 2π / log(1/a_k)`.
    pub periods: Vec<f64>,
    pub merged: FractalString,
    /// Smallest distance between distinct points of `∪_k p_k ℤ ∩ [0, band]`.
    pub min_gap: f64,
    /// Whether lengths were merged by exact rational comparison.
    pub exact_merge: bool,
    #[serde(skip)]
    pub exact_lengths: Option<Vec<(BigRational, u64)>>,
}

impl HyperfractalTruncation {
    /// Total length of the merged string in rational arithmetic, when exact.
    pub fn exact_total(&self) -> Option<BigRational> {
        self.exact_lengths.as_ref().map(|ls| {
            ls.iter()
                .fold(BigRational::zero(), |acc, (l, m)| acc + l * BigRational::from_integer((*m).into()))
        })
    }
}

/// Component levels `(count, length)` of the gap string of `C^(m, a)` scaled by `c`.
fn component_levels(m: u64, a: f64, c: f64, levels: u32) -> Vec<(f64, u64)> {
    let h = (1.0 - m as f64 * a) / (m as f64 - 1.0);
    (0..levels)
        .map(|j| (c * h * a.powi(j as i32), (m - 1) * m.pow(j)))
        .collect()
}

fn exact_component(m: u64, a: &BigRational, c: &BigRational, levels: u32) -> Vec<(BigRational, u64)> {
    let mq = BigRational::from_integer(m.into());
    let h = (BigRational::one() - &mq * a) / (&mq - BigRational::one());
    let mut out = Vec::new();
    let mut len = c * h;
    for j in 0..levels {
        out.push((len.clone(), (m - 1) * m.pow(j)));
        len = len * a;
    }
    out
}

/// Smallest gap between distinct points of `∪_k p_k ℤ` in `[0, band]`.
///
/// The points are indexed by `(k, n)`; the origin, shared by every
/// component, is kept once.
pub fn min_ordinate_gap(periods: &[f64], band: f64) -> f64 {
    let mut pts = vec![0.0];
    for &p in periods {
        let nmax = (band / p).floor() as u64;
        pts.extend((1..=nmax).map(|n| n as f64 * p));
    }
    pts.sort_by(f64::total_cmp);
    pts.windows(2).map(|w| w[1] - w[0]).fold(f64::INFINITY, f64::min)
}

/// The first `k` components of the hyperfractal string of dimension `D`.
///
/// The `m_seq[..k]` must have pairwise independent exponent vectors.
pub fn hyperfractal_truncation(
    d: f64,
    k: usize,
    m_seq: &[u64],
    c_seq: &[f64],
    band: f64,
    levels: u32,
) -> Result<HyperfractalTruncation> {
    if !(d > 0.0 && d < 1.0) {
        return domain(format!("hyperfractal string needs 0 < D < 1, got {d}"));
    }
    if k == 0 || m_seq.len() < k || c_seq.len() < k {
        return domain("need at least k values of m and c");
    }
    if levels == 0 {
        return domain("component strings need at least one level");
    }
    let (ms, cs) = (&m_seq[..k], &c_seq[..k]);
    if cs.iter().any(|&c| !(c > 0.0 && c.is_finite())) || !cs.iter().sum::<f64>().is_finite() {
        return domain("scales c_k must be positive with a finite sum");
    }
    let vectors = ms.iter().map(|&m| exponent_vector(m)).collect::<Result<Vec<_>>>()?;
    for i in 0..k {
        for j in i + 1..k {
            check_independent(&[vectors[i].clone(), vectors[j].clone()])?;
        }
    }
    let a: Vec<f64> = ms.iter().map(|&m| scaling_ratio(m, d)).collect();
    let mut strings = Vec::with_capacity(k);
    for i in 0..k {
        strings.push(FractalString::new(component_levels(ms[i], a[i], cs[i], levels))?);
    }
    let periods: Vec<f64> = a.iter().map(|&ai| 2.0 * PI / -ai.ln()).collect();
    let exact: Option<Vec<(BigRational, BigRational)>> = a
        .iter()
        .zip(cs)
        .map(|(&ai, &ci)| Some((approx_rational(ai, RATIONAL_DEN)?, approx_rational(ci, RATIONAL_DEN)?)))
        .collect();
    let (merged, exact_lengths) = match exact {
        Some(qs) => {
            let mut all: Vec<(BigRational, u64)> = Vec::new();
            for (i, (aq, cq)) in qs.iter().enumerate() {
                all.extend(exact_component(ms[i], aq, cq, levels));
            }
            all.sort_by(|x, y| y.0.cmp(&x.0));
            let mut out: Vec<(BigRational, u64)> = Vec::new();
            for (l, m) in all {
                match out.last_mut() {
                    Some(last) if last.0 == l => last.1 += m,
                    _ => out.push((l, m)),
                }
            }
            let s = FractalString::new(out.iter().map(|(l, m)| (to_f64(l), *m)).collect())?;
            (s, Some(out))
        }
        None => (FractalString::merged(&strings, MERGE_TOL), None),
    };
    Ok(HyperfractalTruncation {
        min_gap: min_ordinate_gap(&periods, band),
        exact_merge: exact_lengths.is_some(),
        component_strings: strings,
        scales: cs.to_vec(),
        periods,
        merged,
        exact_lengths,
    })
}
