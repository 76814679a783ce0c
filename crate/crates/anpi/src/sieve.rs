//! Segmented sieve, exact moment sums, and the window sum of
//! (1/m)[χ_x(p^m) − φ(p^m)] over prime powers near x.

use crate::error::{Error, Result};
use crate::mellin::{self, MellinContext};
use rayon::prelude::*;
use rint::{Precision, RealInterval};
use rug::{Float, Integer};

#[derive(Debug, Clone, Copy)]
pub struct WindowSpec {
    /// Inclusive integer endpoints with x1 < x < x2.
    pub x1: u64,
    pub x2: u64,
    /// Target full width (2w+1) of interior segments.
    pub segment_width: u64,
}

/// Exact per-segment moment sums over primes p ∈ [x0−w, x0+w]:
/// S0 = Σ 1, S1 = Σ (x0−p), S2 = Σ (x0−p)².
///
/// S0 and S1 fit comfortably in 64 bits for any desk-scale segment
/// (|S1| ≤ S0·w); S2 accumulates in 128 bits.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SegmentSummary {
    pub x0: u64,
    pub w: u32,
    pub s0: u64,
    pub s1: i64,
    pub s2: i128,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Chi {
    Zero,
    Half,
    One,
}

#[derive(Debug, Clone, Copy)]
pub struct PrimePowerTerm {
    pub p: u64,
    pub m: u32,
    pub value: u64,
    pub chi: Chi,
}

pub fn isqrt(n: u64) -> u64 {
    if n == 0 {
        return 0;
    }
    let mut r = (n as f64).sqrt() as u64;
    while r.saturating_mul(r) > n {
        r -= 1;
    }
    while (r + 1).saturating_mul(r + 1) <= n {
        r += 1;
    }
    r
}

/// Integer m-th root: largest r with r^m ≤ n.
pub fn iroot(n: u64, m: u32) -> u64 {
    if m == 1 {
        return n;
    }
    let mut r = (n as f64).powf(1.0 / m as f64).round() as u64 + 1;
    while r > 0 && checked_pow(r, m).map_or(true, |v| v > n) {
        r -= 1;
    }
    r
}

fn checked_pow(base: u64, exp: u32) -> Option<u64> {
    let mut acc: u64 = 1;
    for _ in 0..exp {
        acc = acc.checked_mul(base)?;
    }
    Some(acc)
}

/// All primes ≤ limit, ascending (simple sieve of Eratosthenes).
pub fn small_primes(limit: u64) -> Vec<u64> {
    if limit < 2 {
        return Vec::new();
    }
    let n = limit as usize;
    let mut composite = vec![false; n + 1];
    let mut out = Vec::new();
    for i in 2..=n {
        if !composite[i] {
            out.push(i as u64);
            let mut j = i * i;
            while j <= n {
                composite[j] = true;
                j += i;
            }
        }
    }
    out
}

/// Marks the composites in [lo, hi] and returns the primality bitmap.
fn sieve_range(lo: u64, hi: u64, primes: &[u64]) -> Result<Vec<bool>> {
    assert!(lo <= hi);
    let need = isqrt(hi);
    match primes.last() {
        Some(&p) if p >= need => {}
        _ if need < 2 => {}
        _ => {
            return Err(Error::InsufficientSievingPrimes {
                have: primes.last().copied().unwrap_or(0),
                need,
            })
        }
    }
    let len = (hi - lo + 1) as usize;
    let mut is_prime = vec![true; len];
    for n in lo..=lo.min(1) {
        if n <= 1 {
            is_prime[(n - lo) as usize] = false;
        }
    }
    if lo == 0 && hi >= 1 {
        is_prime[1] = false;
    }
    for &p in primes {
        if p * p > hi {
            break;
        }
        let mut start = p.max(lo.div_ceil(p)) * p;
        if start < p * p {
            start = p * p;
        }
        let mut j = start;
        while j <= hi {
            is_prime[(j - lo) as usize] = false;
            j += p;
        }
    }
    Ok(is_prime)
}

/// Exact S0, S1, S2 over primes in [x0−w, x0+w].
pub fn sieve_segment(x0: u64, w: u32, primes: &[u64]) -> Result<SegmentSummary> {
    let lo = x0
        .checked_sub(w as u64)
        .ok_or(Error::SegmentTooWide("segment reaches below zero".into()))?;
    let hi = x0 + w as u64;
    let bitmap = sieve_range(lo, hi, primes)?;
    let mut s0: u64 = 0;
    let mut s1: i64 = 0;
    let mut s2: i128 = 0;
    for (off, &flag) in bitmap.iter().enumerate() {
        if flag {
            let n = lo + off as u64;
            if n < 2 {
                continue;
            }
            let d = x0 as i64 - n as i64;
            s0 += 1;
            s1 += d;
            s2 += (d as i128) * (d as i128);
        }
    }
    Ok(SegmentSummary { x0, w, s0, s1, s2 })
}

/// Exact count of primes in [a, b].
pub fn count_primes_in(a: u64, b: u64, primes: &[u64]) -> Result<u64> {
    if a > b {
        return Ok(0);
    }
    let bitmap = sieve_range(a, b, primes)?;
    Ok(bitmap
        .iter()
        .enumerate()
        .filter(|(off, &f)| f && a + *off as u64 >= 2)
        .count() as u64)
}

pub fn is_prime(n: u64, primes: &[u64]) -> Result<bool> {
    if n < 2 {
        return Ok(false);
    }
    let need = isqrt(n);
    if primes.last().copied().unwrap_or(0) < need {
        return Err(Error::InsufficientSievingPrimes {
            have: primes.last().copied().unwrap_or(0),
            need,
        });
    }
    for &p in primes {
        if p > need {
            break;
        }
        if n % p == 0 {
            return Ok(n == p);
        }
    }
    Ok(true)
}

/// Best linear approximation a·t to a cubic a₃·t³ on [−w, w]:
/// a = 3a₃w²/4 with worst-case error |a₃|w³/4.
pub fn cubic_line_coeff(a3: &RealInterval, w: &RealInterval) -> (RealInterval, RealInterval) {
    let prec = a3.prec();
    let three = RealInterval::from_u64(3, prec);
    let a = three.mul(a3).mul(&w.square()).mul_2exp(-2);
    let err = a3.abs().mul(&w.powi(3)).mul_2exp(-2);
    let err = RealInterval::new(Float::new(prec.bits()), err.mag());
    (a, err)
}

fn int_to_interval(v: &Integer, prec: Precision) -> RealInterval {
    RealInterval::from_integer(v, prec)
}

/// Encloses Σ_{p ∈ segment} φ(p) through the moment sums:
/// φ(x0)S0 − (φ′(x0)+a)S1 + ½φ″(x0)S2, with the cubic-line correction error
/// and the degree-4 Taylor remainder (sup |φ⁗| over the segment) charged
/// symmetrically per prime.
pub fn segment_phi_sum(seg: &SegmentSummary, ctx: &MellinContext) -> Result<RealInterval> {
    let prec = ctx.prec();
    if seg.x0 <= seg.w as u64 {
        return Err(Error::SegmentTooWide(format!(
            "segment [{} ± {}] touches zero",
            seg.x0, seg.w
        )));
    }
    let x0 = RealInterval::from_u64(seg.x0, prec);
    let w = RealInterval::from_u64(seg.w as u64, prec);
    let der = mellin::phi_derivatives(&x0, ctx)?;
    let span = RealInterval::from_u64(seg.x0 - seg.w as u64, prec)
        .hull(&RealInterval::from_u64(seg.x0 + seg.w as u64, prec));
    let der_range = mellin::phi_derivatives(&span, ctx)?;
    let m4 = RealInterval::new(Float::new(prec.bits()), der_range.d4.mag());

    let a3 = der.d3.div(&RealInterval::from_u64(6, prec))?;
    let (a, cub_err) = cubic_line_coeff(&a3, &w);

    let s0 = RealInterval::from_u64(seg.s0, prec);
    let s1 = RealInterval::from_i64(seg.s1, prec);
    let s2 = int_to_interval(&Integer::from(seg.s2), prec);

    let mut sum = der.phi.mul(&s0);
    sum = sum.sub(&der.d1.add(&a).mul(&s1));
    sum = sum.add(&der.d2.mul_2exp(-1).mul(&s2));

    // Per-prime remainder: cubic-line error + w⁴/24 · sup|φ⁗|.
    let fact24 = RealInterval::from_u64(24, prec);
    let rem = cub_err.add(&m4.mul(&w.powi(4)).div(&fact24)?).mul(&s0);
    let rem = RealInterval::new(Float::new(prec.bits()), rem.mag());
    Ok(sum.add(&rem.neg().hull(&rem)))
}

/// All p^m ∈ [x1, x2] with m ≥ 2, exact, with χ_x weights.
pub fn prime_power_terms(window: &WindowSpec, x: u64) -> Vec<PrimePowerTerm> {
    let mut out = Vec::new();
    let root_primes = small_primes(isqrt(window.x2));
    for m in 2..=63u32 {
        if checked_pow(2, m).map_or(true, |v| v > window.x2) {
            break;
        }
        let p_max = iroot(window.x2, m);
        for &p in &root_primes {
            if p > p_max {
                break;
            }
            let v = match checked_pow(p, m) {
                Some(v) => v,
                None => continue,
            };
            if v < window.x1 || v > window.x2 {
                continue;
            }
            let chi = if v < x {
                Chi::One
            } else if v == x {
                Chi::Half
            } else {
                Chi::Zero
            };
            out.push(PrimePowerTerm { p, m, value: v, chi });
        }
    }
    out.sort_by_key(|t| t.value);
    out
}

/// Splits [x1, x2] into centered segments of (odd) width ≤ segment_width.
pub fn tile_window(window: &WindowSpec) -> Vec<(u64, u32)> {
    let mut out = Vec::new();
    let target = window.segment_width.max(1);
    let mut a = window.x1;
    while a <= window.x2 {
        let remaining = window.x2 - a + 1;
        let mut len = remaining.min(target);
        if len % 2 == 0 {
            len -= 1;
        }
        let len = len.max(1);
        let w = ((len - 1) / 2) as u32;
        out.push((a + w as u64, w));
        a += len;
    }
    out
}

fn check_tiling(window: &WindowSpec, segments: &[SegmentSummary]) -> Result<()> {
    let mut expect = window.x1;
    for seg in segments {
        let lo = seg.x0 - seg.w as u64;
        if lo != expect {
            return Err(Error::TilingGap(format!(
                "segment starts at {} but {} was expected",
                lo, expect
            )));
        }
        expect = seg.x0 + seg.w as u64 + 1;
    }
    if expect != window.x2 + 1 {
        return Err(Error::TilingGap(format!(
            "window ends at {} but segments stop at {}",
            window.x2,
            expect - 1
        )));
    }
    Ok(())
}

/// Encloses Σ_{p^m ∈ [x1,x2]} (1/m)[χ_x(p^m) − φ(p^m)].
pub fn window_sum(
    window: &WindowSpec,
    segments: &[SegmentSummary],
    power_terms: &[PrimePowerTerm],
    ctx: &MellinContext,
    x: u64,
) -> Result<RealInterval> {
    let prec = ctx.prec();
    check_tiling(window, segments)?;
    let primes = small_primes(isqrt(window.x2) + 1);

    // m = 1: χ contributes the exact count of primes in [x1, min(x−1, x2)]
    // plus ½ when x itself is prime and inside the window.
    let chi_hi = x.saturating_sub(1).min(window.x2);
    let mut chi_part = RealInterval::from_u64(count_primes_in(window.x1, chi_hi, &primes)?, prec);
    if x >= window.x1 && x <= window.x2 && is_prime(x, &primes)? {
        chi_part = chi_part.add(&RealInterval::from_decimal("0.5", prec)?);
    }

    // m = 1: φ over the tiled segments (parallel, deterministic fold).
    let phi_sums: Vec<RealInterval> = segments
        .par_iter()
        .map(|seg| segment_phi_sum(seg, ctx))
        .collect::<Result<Vec<_>>>()?;
    let mut phi_part = RealInterval::zero(prec);
    for s in &phi_sums {
        phi_part = phi_part.add(s);
    }

    let mut total = chi_part.sub(&phi_part);

    // m ≥ 2 terms individually.
    for term in power_terms {
        let inv_m = RealInterval::from_u64(term.m as u64, prec).recip()?;
        let chi = match term.chi {
            Chi::Zero => RealInterval::zero(prec),
            Chi::Half => RealInterval::from_decimal("0.5", prec)?,
            Chi::One => RealInterval::one(prec),
        };
        let phi_v = mellin::phi(&RealInterval::from_u64(term.value, prec), ctx)?;
        total = total.add(&inv_m.mul(&chi.sub(&phi_v)));
    }
    Ok(total)
}

/// Bound for the prime-power mass discarded outside [x1, x2]:
/// every integer majorizes the prime powers since each term is nonnegative
/// and weighted by 1/m ≤ 1. With α = 1/(√2 λ) and closed forms
/// ∫ e^{±u} erfc(αu) du, the two tails are
///   Σ_{n ≤ x1} (1−φ(n)) ≤ (x/2)[e^{−U}erfc(αU) − e^{λ²/2}erfc(α(U+λ²))],
///     U = log(x/(x1+1)),
///   Σ_{n ≥ x2} φ(n) ≤ (x/2)[e^{λ²/2}erfc(α(V−λ²)) − e^{V}erfc(αV)],
///     V = log((x2−1)/x).
pub fn window_tail_bound(window: &WindowSpec, ctx: &MellinContext) -> Result<RealInterval> {
    let prec = ctx.prec();
    let x = ctx.x();
    let lam = ctx.lambda();
    let alpha = RealInterval::from_u64(2, prec)
        .sqrt()?
        .mul(lam)
        .recip()?;
    let half_lam_sq = lam.square().mul_2exp(-1);
    let e_half = half_lam_sq.exp();
    let lam_sq = lam.square();

    // Lower tail at X = x1 + 1.
    let x_low = RealInterval::from_u64(window.x1 + 1, prec);
    let u = x.div(&x_low)?.ln()?;
    let lower = x
        .mul_2exp(-1)
        .mul(
            &u.neg()
                .exp()
                .mul(&alpha.mul(&u).erfc())
                .sub(&e_half.mul(&alpha.mul(&u.add(&lam_sq)).erfc())),
        );

    // Upper tail at X = x2 − 1.
    let x_high = RealInterval::from_u64(window.x2 - 1, prec);
    let v = x_high.div(x)?.ln()?;
    let upper = x
        .mul_2exp(-1)
        .mul(
            &e_half
                .mul(&alpha.mul(&v.sub(&lam_sq)).erfc())
                .sub(&v.exp().mul(&alpha.mul(&v).erfc())),
        );

    let total = lower.add(&upper);
    Ok(RealInterval::new(Float::new(prec.bits()), total.mag()))
}
