//! Containment-fuzz harness: random expression trees evaluated as intervals
//! against a higher-precision point oracle. Used by the test suites; not part
//! of the public contract.

use crate::complex::{cpow, ComplexInterval};
use crate::real::RealInterval;
use crate::Precision;
use rug::Float;

#[derive(Debug, Clone)]
pub enum Node {
    Leaf(usize),
    Add(Box<Node>, Box<Node>),
    Sub(Box<Node>, Box<Node>),
    Mul(Box<Node>, Box<Node>),
    /// Falls back to subtraction when the divisor interval (at base
    /// precision) contains zero; the oracle replays the same decision.
    Div(Box<Node>, Box<Node>),
    /// exp(clamp(x, −50, 50))
    Exp(Box<Node>),
    /// log(|x| + 1/4)
    Log(Box<Node>),
    Erfc(Box<Node>),
    /// Re or Im of (|x| + 1/4)^(sre + i·sim)
    CpowRe(Box<Node>, f64, f64),
    CpowIm(Box<Node>, f64, f64),
}

/// Pointwise min(max(x, −50), 50); endpoints map monotonically.
fn clamp(x: &RealInterval, prec: Precision) -> RealInterval {
    let lim = Float::with_val(prec.bits(), 50);
    let neg = Float::with_val(prec.bits(), -50);
    let cl = |v: &Float| -> Float {
        if *v < neg {
            neg.clone()
        } else if *v > lim {
            lim.clone()
        } else {
            v.clone()
        }
    };
    RealInterval::new(cl(x.lo()), cl(x.hi()))
}

fn shifted_abs(x: &RealInterval, prec: Precision) -> RealInterval {
    x.abs().add(&RealInterval::from_f64(0.25, prec))
}

/// Evaluates the tree over intervals at `prec`. `decide` must be the base
/// precision evaluation when replaying decisions for the oracle.
pub fn eval_interval(
    node: &Node,
    leaves: &[RealInterval],
    prec: Precision,
    base_leaves: &[RealInterval],
    base_prec: Precision,
) -> RealInterval {
    match node {
        Node::Leaf(i) => leaves[*i].clone(),
        Node::Add(a, b) => eval_interval(a, leaves, prec, base_leaves, base_prec)
            .add(&eval_interval(b, leaves, prec, base_leaves, base_prec)),
        Node::Sub(a, b) => eval_interval(a, leaves, prec, base_leaves, base_prec)
            .sub(&eval_interval(b, leaves, prec, base_leaves, base_prec)),
        Node::Mul(a, b) => eval_interval(a, leaves, prec, base_leaves, base_prec)
            .mul(&eval_interval(b, leaves, prec, base_leaves, base_prec)),
        Node::Div(a, b) => {
            let decider = eval_interval(b, base_leaves, base_prec, base_leaves, base_prec);
            let av = eval_interval(a, leaves, prec, base_leaves, base_prec);
            let bv = eval_interval(b, leaves, prec, base_leaves, base_prec);
            if decider.contains_zero() {
                av.sub(&bv)
            } else {
                av.div(&bv).expect("divisor cleared by decider")
            }
        }
        Node::Exp(a) => clamp(
            &eval_interval(a, leaves, prec, base_leaves, base_prec),
            prec,
        )
        .exp(),
        Node::Log(a) => shifted_abs(
            &eval_interval(a, leaves, prec, base_leaves, base_prec),
            prec,
        )
        .ln()
        .expect("argument ≥ 1/4"),
        Node::Erfc(a) => eval_interval(a, leaves, prec, base_leaves, base_prec).erfc(),
        Node::CpowRe(a, sre, sim) | Node::CpowIm(a, sre, sim) => {
            let base = shifted_abs(
                &eval_interval(a, leaves, prec, base_leaves, base_prec),
                prec,
            );
            let s = ComplexInterval::point_f64(*sre, *sim, prec);
            let z = cpow(&base, &s).expect("base ≥ 1/4");
            match node {
                Node::CpowRe(..) => z.re,
                _ => z.im,
            }
        }
    }
}

pub struct FuzzOutcome {
    pub trees: usize,
    pub disjoint_oracle: usize,
    pub monotonicity_violations: usize,
}

/// Runs `n` random trees. For each: interval result at `base_bits`, a point
/// oracle at `3×base_bits` sampled inside the leaf intervals, and a repeat at
/// `2×base_bits` for the precision-monotonicity invariant.
pub fn containment_fuzz(n: usize, seed: u64, base_bits: u32) -> FuzzOutcome {
    // Small deterministic xorshift so the harness has no RNG dependency.
    let mut state = seed | 1;
    let mut rng = move || {
        state ^= state << 13;
        state ^= state >> 7;
        state ^= state << 17;
        state
    };
    let base = Precision::new(base_bits);
    let fine = Precision::new(base_bits * 3);
    let mid = Precision::new(base_bits * 2);

    let mut disjoint = 0usize;
    let mut mono_bad = 0usize;

    for _ in 0..n {
        let n_leaves = 2 + (rng() % 3) as usize;
        let mut leaves = Vec::with_capacity(n_leaves);
        for _ in 0..n_leaves {
            let c = ((rng() % 4000) as f64 - 2000.0) / 250.0;
            let w = (rng() % 1000) as f64 / 2000.0;
            leaves.push(
                RealInterval::from_f64(c - w, base).hull(&RealInterval::from_f64(c + w, base)),
            );
        }
        let depth = 2 + (rng() % 4) as usize;
        let tree = random_tree(&mut rng, depth, n_leaves);

        let coarse = eval_interval(&tree, &leaves, base, &leaves, base);

        // Sample a point inside each leaf: dyadic combination, exact at 3×.
        let mut fine_leaves = Vec::with_capacity(n_leaves);
        let mut mid_leaves = Vec::with_capacity(n_leaves);
        for leaf in &leaves {
            let num = (rng() % 257) as u32;
            let u = Float::with_val(fine.bits(), num) >> 8; // u ∈ [0,1], 8-bit dyadic
            let one_minus = Float::with_val(fine.bits(), 1) - &u;
            let pt = Float::with_val(fine.bits(), leaf.lo() * &one_minus)
                + Float::with_val(fine.bits(), leaf.hi() * &u);
            debug_assert!(leaf.contains(&pt));
            fine_leaves.push(RealInterval::point(pt.clone()));
            mid_leaves.push(RealInterval::point(Float::with_val(mid.bits(), &pt)));
        }
        let oracle = eval_interval(&tree, &fine_leaves, fine, &leaves, base);
        if !coarse.overlaps(&oracle) {
            disjoint += 1;
        }

        // Monotonicity on point inputs: leaf lower endpoints are exact at
        // both precisions, so 2×-precision results must nest inside 1×.
        let base_pts: Vec<_> = leaves
            .iter()
            .map(|l| RealInterval::point(l.lo().clone()))
            .collect();
        let mid_pts: Vec<_> = leaves
            .iter()
            .map(|l| RealInterval::point(Float::with_val(mid.bits(), l.lo())))
            .collect();
        let r1 = eval_interval(&tree, &base_pts, base, &base_pts, base);
        let r2 = eval_interval(&tree, &mid_pts, mid, &base_pts, base);
        if !r1.contains_interval(&r2) {
            mono_bad += 1;
        }
    }
    FuzzOutcome {
        trees: n,
        disjoint_oracle: disjoint,
        monotonicity_violations: mono_bad,
    }
}

fn random_tree(rng: &mut impl FnMut() -> u64, depth: usize, n_leaves: usize) -> Node {
    if depth == 0 {
        return Node::Leaf((rng() % n_leaves as u64) as usize);
    }
    let a = Box::new(random_tree(rng, depth - 1, n_leaves));
    match rng() % 9 {
        0 => Node::Add(a, Box::new(random_tree(rng, depth - 1, n_leaves))),
        1 => Node::Sub(a, Box::new(random_tree(rng, depth - 1, n_leaves))),
        2 => Node::Mul(a, Box::new(random_tree(rng, depth - 1, n_leaves))),
        3 => Node::Div(a, Box::new(random_tree(rng, depth - 1, n_leaves))),
        4 => Node::Exp(a),
        5 => Node::Log(a),
        6 => Node::Erfc(a),
        7 => {
            let sre = ((rng() % 100) as f64 - 50.0) / 25.0;
            let sim = ((rng() % 100) as f64 - 50.0) / 5.0;
            Node::CpowRe(a, sre, sim)
        }
        _ => {
            let sre = ((rng() % 100) as f64 - 50.0) / 25.0;
            let sim = ((rng() % 100) as f64 - 50.0) / 5.0;
            Node::CpowIm(a, sre, sim)
        }
    }
}
