//! Directed-rounding helpers on raw MPFR floats.
//!
//! Everything here returns freshly rounded values at an explicit precision;
//! the interval layer decides which direction each endpoint needs.

use rug::float::Round;
use rug::ops::AssignRound;
use rug::Float;

pub const DOWN: Round = Round::Down;
pub const UP: Round = Round::Up;

/// Assigns `src` (any rug incomplete-computation value) rounded in `dir`.
pub fn eval<T>(prec: u32, src: T, dir: Round) -> Float
where
    Float: AssignRound<T, Round = Round>,
{
    let mut f = Float::new(prec);
    f.assign_round(src, dir);
    f
}

macro_rules! unary_directed {
    ($($name:ident => $method:ident),* $(,)?) => {
        $(
            pub fn $name(x: &Float, prec: u32, dir: Round) -> Float {
                let mut f = eval(prec, x, dir);
                f.$method(dir);
                f
            }
        )*
    };
}

unary_directed! {
    exp => exp_round,
    ln => ln_round,
    sqrt => sqrt_round,
    erf => erf_round,
    erfc => erfc_round,
    sin => sin_round,
    cos => cos_round,
    atan => atan_round,
    sinh => sinh_round,
    cosh => cosh_round,
    gamma => gamma_round,
    zeta => zeta_round,
}

/// Upper incomplete gamma Γ(s, x), correctly rounded in `dir`.
pub fn gamma_inc(s: &Float, x: &Float, prec: u32, dir: Round) -> Float {
    let mut f = eval(prec, s, dir);
    f.gamma_inc_round(x, dir);
    f
}

pub fn pi(prec: u32, dir: Round) -> Float {
    eval(prec, rug::float::Constant::Pi, dir)
}

pub fn ln2(prec: u32, dir: Round) -> Float {
    eval(prec, rug::float::Constant::Log2, dir)
}
