//! Radix-2 DFT over complex intervals with interval twiddle factors.

use crate::error::{Error, Result};
use rint::{ComplexInterval, Precision, RealInterval};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Direction {
    /// Σ_n v[n] e(−mn/N)
    Forward,
    /// Σ_m v[m] e(+mn/N)
    Inverse,
}

/// Unnormalized DFT; `inverse(forward(v))` encloses `N·v`.
pub fn dft(values: &[ComplexInterval], dir: Direction, prec: Precision) -> Result<Vec<ComplexInterval>> {
    let n = values.len();
    if n == 0 || n & (n - 1) != 0 {
        return Err(Error::SizeMismatch(format!(
            "DFT length {} is not a power of two",
            n
        )));
    }
    // Twiddles e(∓ j/N) for j < N/2.
    let two_pi = RealInterval::pi(prec).mul_2exp(1);
    let n_iv = RealInterval::from_u64(n as u64, prec);
    let mut twiddles = Vec::with_capacity(n / 2);
    for j in 0..n / 2 {
        let angle = two_pi
            .mul(&RealInterval::from_u64(j as u64, prec))
            .div(&n_iv)
            .expect("N > 0");
        let (c, s) = (angle.cos(), angle.sin());
        let im = match dir {
            Direction::Forward => s.neg(),
            Direction::Inverse => s,
        };
        twiddles.push(ComplexInterval::new(c, im));
    }

    // Bit-reversal permutation, then iterative butterflies.
    let mut a: Vec<ComplexInterval> = values.to_vec();
    let bits = n.trailing_zeros();
    for i in 0..n {
        let j = (i as u32).reverse_bits() >> (32 - bits);
        let j = j as usize;
        if i < j {
            a.swap(i, j);
        }
    }
    let mut len = 2;
    while len <= n {
        let stride = n / len;
        for start in (0..n).step_by(len) {
            for k in 0..len / 2 {
                let w = &twiddles[k * stride];
                let u = a[start + k].clone();
                let v = a[start + k + len / 2].mul(w);
                a[start + k] = u.add(&v);
                a[start + k + len / 2] = u.sub(&v);
            }
        }
        len <<= 1;
    }
    Ok(a)
}

/// Cyclic cross-correlation `out[m] = Σ_{m'} s[m'] · g[(m+m') mod N]`
/// via three DFTs (s is index-reversed into a convolution).
pub fn cyclic_correlate(
    s: &[ComplexInterval],
    g: &[ComplexInterval],
    prec: Precision,
) -> Result<Vec<ComplexInterval>> {
    let n = s.len();
    if g.len() != n {
        return Err(Error::SizeMismatch(format!(
            "correlation lengths {} vs {}",
            n,
            g.len()
        )));
    }
    let mut s_rev = Vec::with_capacity(n);
    for i in 0..n {
        s_rev.push(s[(n - i) % n].clone());
    }
    let sh = dft(&s_rev, Direction::Forward, prec)?;
    let gh = dft(g, Direction::Forward, prec)?;
    let prod: Vec<ComplexInterval> = sh.iter().zip(&gh).map(|(a, b)| a.mul(b)).collect();
    let back = dft(&prod, Direction::Inverse, prec)?;
    let n_iv = RealInterval::from_u64(n as u64, prec);
    back.into_iter().map(|v| v.div_real(&n_iv).map_err(Into::into)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p() -> Precision {
        Precision::default()
    }

    fn pt(re: f64, im: f64) -> ComplexInterval {
        ComplexInterval::point_f64(re, im, p())
    }

    #[test]
    fn delta_transforms_to_constant() {
        let mut v = vec![ComplexInterval::zero(p()); 8];
        v[0] = ComplexInterval::one(p());
        let f = dft(&v, Direction::Forward, p()).unwrap();
        for x in &f {
            assert!(x.contains_point_f64(1.0, 0.0));
        }
    }

    #[test]
    fn inverse_of_forward_encloses_n_times_input() {
        let v: Vec<_> = (0..16)
            .map(|i| pt((i as f64 * 0.37).sin(), (i as f64 * 0.11).cos()))
            .collect();
        let f = dft(&v, Direction::Forward, p()).unwrap();
        let b = dft(&f, Direction::Inverse, p()).unwrap();
        for (orig, back) in v.iter().zip(&b) {
            let scaled = orig.mul_real(&RealInterval::from_u64(16, p()));
            assert!(back.overlaps(&scaled));
        }
    }

    #[test]
    fn matches_quadratic_time_oracle() {
        let n = 32usize;
        let v: Vec<_> = (0..n)
            .map(|i| pt(((i * i) as f64 * 0.05).sin(), (i as f64 * 0.3).cos() * 0.5))
            .collect();
        let fast = dft(&v, Direction::Forward, p()).unwrap();
        // O(N²) direct sum with interval twiddles.
        let two_pi = RealInterval::pi(p()).mul_2exp(1);
        for m in 0..n {
            let mut acc = ComplexInterval::zero(p());
            for (j, x) in v.iter().enumerate() {
                let angle = two_pi
                    .mul(&RealInterval::from_u64(((m * j) % n) as u64, p()))
                    .div(&RealInterval::from_u64(n as u64, p()))
                    .unwrap();
                let w = ComplexInterval::new(angle.cos(), angle.sin().neg());
                acc = acc.add(&x.mul(&w));
            }
            assert!(fast[m].overlaps(&acc), "bin {m} disagrees");
        }
    }

    #[test]
    fn parseval_overlap() {
        let n = 16usize;
        let v: Vec<_> = (0..n).map(|i| pt((i as f64).cos(), (i as f64 * 0.7).sin())).collect();
        let f = dft(&v, Direction::Forward, p()).unwrap();
        let mut time = RealInterval::zero(p());
        for x in &v {
            time = time.add(&x.norm_sq());
        }
        let mut freq = RealInterval::zero(p());
        for x in &f {
            freq = freq.add(&x.norm_sq());
        }
        let scaled = time.mul(&RealInterval::from_u64(n as u64, p()));
        assert!(freq.overlaps(&scaled));
    }

    #[test]
    fn correlation_matches_direct() {
        let n = 16usize;
        let mut s = vec![ComplexInterval::zero(p()); n];
        s[1] = pt(1.0, 0.5);
        s[4] = pt(-0.3, 0.0);
        let g: Vec<_> = (0..n).map(|i| pt((i as f64 * 0.21).sin(), 0.1)).collect();
        let fast = cyclic_correlate(&s, &g, p()).unwrap();
        for m in 0..n {
            let mut acc = ComplexInterval::zero(p());
            for mp in 0..n {
                acc = acc.add(&s[mp].mul(&g[(m + mp) % n]));
            }
            assert!(fast[m].overlaps(&acc), "lag {m}");
        }
    }

    #[test]
    fn non_power_of_two_rejected() {
        let v = vec![ComplexInterval::one(p()); 12];
        assert!(dft(&v, Direction::Forward, p()).is_err());
    }
}
