#![allow(dead_code)]

use rand::Rng;
use rand_chacha::ChaCha8Rng;
use simrec::exact::q;
use simrec::{Rational, RecurrenceSystem};

pub fn r(v: i64) -> Rational {
    Rational::from(v)
}

pub fn small(rng: &mut ChaCha8Rng, k: i64) -> Rational {
    r(rng.gen_range(-k..=k))
}

pub fn fraction(rng: &mut ChaCha8Rng) -> Rational {
    q(rng.gen_range(-9..=9), rng.gen_range(1..=9))
}

pub fn random_system(rng: &mut ChaCha8Rng, n: usize) -> RecurrenceSystem {
    let rows = (0..n)
        .map(|_| (0..n).map(|_| fraction(rng)).collect())
        .collect();
    let affine = (0..n).map(|_| fraction(rng)).collect();
    let initial = (0..n).map(|_| fraction(rng)).collect();
    RecurrenceSystem::from_parts(rows, affine, initial).unwrap()
}

/// Order-2 system with equal row sums.
pub fn random_pair(rng: &mut ChaCha8Rng) -> RecurrenceSystem {
    let (a11, a12, a21) = (fraction(rng), fraction(rng), fraction(rng));
    let a22 = &(&a11 + &a12) - &a21;
    RecurrenceSystem::from_parts(
        vec![vec![a11, a12], vec![a21, a22]],
        vec![fraction(rng), fraction(rng)],
        vec![fraction(rng), fraction(rng)],
    )
    .unwrap()
}

/// Which of `C1 = 1`, `C3 = 1`, `C4 = 0` to force when building a triple.
#[derive(Clone, Copy, Debug)]
pub struct Shape {
    pub unit_sum: bool,
    pub target_c3: TargetC3,
}

#[derive(Clone, Copy, Debug)]
pub enum TargetC3 {
    Free,
    One,
    /// `C3 = C1`, i.e. `C4 = 0`.
    EqualToC1,
}

pub const WEIGHTS: [(i64, i64); 6] = [(1, 2), (1, 3), (2, 3), (-1, 2), (3, 2), (0, 1)];

/// A three-variable system satisfying `b = w1·a + w2·c` along its whole
/// trajectory. With `perturb`, row `b` is not the weighted combination of
/// rows `a` and `c`, and the invariant holds only through propagation.
pub fn admissible_triple(
    rng: &mut ChaCha8Rng,
    shape: Shape,
    perturb: bool,
) -> (RecurrenceSystem, Rational) {
    let (wn, wd) = WEIGHTS[rng.gen_range(0..WEIGHTS.len())];
    let w1 = q(wn, wd);
    let w2 = &r(1) - &w1;
    let (a11, a12) = (small(rng, 3), small(rng, 3));
    let a13 = if shape.unit_sum {
        &(&r(1) - &a11) - &a12
    } else {
        small(rng, 3)
    };
    let c1 = &(&a11 + &a12) + &a13;
    let a33 = small(rng, 3);
    // C3 = w2·α11 − w1·α13 − w2·α31 + w1·α33
    let a31 = match shape.target_c3 {
        TargetC3::Free => small(rng, 3),
        TargetC3::One | TargetC3::EqualToC1 => {
            let target = if matches!(shape.target_c3, TargetC3::One) {
                r(1)
            } else {
                c1.clone()
            };
            let rest = &(&(&(&w2 * &a11) - &(&w1 * &a13)) + &(&w1 * &a33)) - &target;
            &rest / &w2
        }
    };
    let a32 = &(&c1 - &a31) - &a33;
    let row_a = [a11, a12, a13];
    let row_c = [a31, a32, a33];
    let mut row_b: Vec<Rational> = (0..3)
        .map(|j| &(&w1 * &row_a[j]) + &(&w2 * &row_c[j]))
        .collect();
    if perturb {
        let cb = small(rng, 2);
        row_b[0] -= &(&w1 * &cb);
        row_b[1] += &cb;
        row_b[2] -= &(&w2 * &cb);
    }
    let (al1, al3) = (small(rng, 4), small(rng, 4));
    let al2 = &(&w1 * &al1) + &(&w2 * &al3);
    let (i1, i3) = (small(rng, 9), small(rng, 9));
    let i2 = &(&w1 * &i1) + &(&w2 * &i3);
    let sys = RecurrenceSystem::from_parts(
        vec![row_a.to_vec(), row_b, row_c.to_vec()],
        vec![al1, al2, al3],
        vec![i1, i2, i3],
    )
    .unwrap();
    (sys, w1)
}

pub const SHAPES: [Shape; 5] = [
    Shape {
        unit_sum: false,
        target_c3: TargetC3::Free,
    },
    Shape {
        unit_sum: true,
        target_c3: TargetC3::Free,
    },
    Shape {
        unit_sum: false,
        target_c3: TargetC3::One,
    },
    Shape {
        unit_sum: false,
        target_c3: TargetC3::EqualToC1,
    },
    Shape {
        unit_sum: true,
        target_c3: TargetC3::EqualToC1,
    },
];
