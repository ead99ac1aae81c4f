//! Reduction of a matrix recurrence to regular single-variable recurrences.
//!
//! For `Y_x = A·Y_{x-1}` the Hamilton–Cayley theorem gives
//! `A^n = β_1·A^{n-1} + … + β_n·I`, and multiplying by `Y_{x-n}` yields the
//! same order-`n` recurrence for every component. Affine systems are first
//! made homogeneous by adjoining the constant equation `1 = 1`, which adds a
//! factor `(1 - λ)` to the characteristic polynomial and one extra lag.

use serde::{Deserialize, Serialize};

use crate::error::{ExactError, Result, SolveError};
use crate::exact::{Matrix, Polynomial, Rational};
use crate::model::RecurrenceSystem;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum RecurrenceKind {
    Homogeneous,
    Augmented,
    DirectTail,
}

/// `y_x = Σ_{j=1..m} betas[j-1]·y_{x-j} (+ tail[i])`, shared by every variable.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RegularRecurrence {
    pub order: usize,
    pub betas: Vec<Rational>,
    /// Per-variable constant; present only for [`RecurrenceKind::DirectTail`].
    pub tail: Option<Vec<Rational>>,
    pub kind: RecurrenceKind,
}

impl RegularRecurrence {
    /// Right-hand side for variable `var` given the history `prev[j-1] = y_{x-j}`.
    pub fn apply(&self, var: usize, prev: &[Rational]) -> Rational {
        let mut acc: Rational = self.betas.iter().zip(prev).map(|(b, y)| b * y).sum();
        if let Some(tail) = &self.tail {
            acc += &tail[var];
        }
        acc
    }
}

/// The `(n+1)×(n+1)` matrix of the system extended with `1 = 1`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AugmentedMatrix {
    pub entries: Matrix,
}

/// `det(A - λI)` via the Faddeev–LeVerrier recursion.
///
/// The leading coefficient is `(-1)^n`.
pub fn char_poly(matrix: &Matrix) -> Result<Polynomial> {
    if !matrix.is_square() || matrix.rows() == 0 {
        return Err(ExactError::Shape(format!(
            "characteristic polynomial of a {}x{} matrix",
            matrix.rows(),
            matrix.cols()
        ))
        .into());
    }
    let n = matrix.rows();
    // monic coefficients of det(λI - A), c[k] multiplies λ^k
    let mut c = vec![Rational::zero(); n + 1];
    c[n] = Rational::one();
    let mut m = Matrix::zeros(n, n);
    for k in 1..=n {
        m = matrix.mul(&m)?.add_scaled_identity(&c[n - k + 1]);
        let am = matrix.mul(&m)?;
        c[n - k] = -(&am.trace() / &Rational::from(k as i64));
    }
    let sign = if n.is_multiple_of(2) {
        Rational::one()
    } else {
        Rational::from(-1)
    };
    Ok(Polynomial::new(c.iter().map(|ck| ck * &sign).collect()))
}

/// Hamilton–Cayley coefficients from `φ(λ) = u_0λ^m + u_1λ^{m-1} + … + u_m`
/// with `u_0 = (-1)^m`: `β_j = (-1)^{m+1}·u_j`.
///
/// This single rule covers both the plain (`m = n`) and augmented
/// (`m = n + 1`, giving `(-1)^n·u*_j`) cases.
fn betas_from_char_poly(phi: &Polynomial) -> Vec<Rational> {
    let m = phi
        .degree()
        .expect("characteristic polynomials are nonzero");
    let sign = if m.is_multiple_of(2) {
        Rational::from(-1)
    } else {
        Rational::one()
    };
    (1..=m).map(|j| &phi.coeff(m - j) * &sign).collect()
}

pub fn augment(system: &RecurrenceSystem) -> AugmentedMatrix {
    let n = system.order();
    let mut entries = Matrix::zeros(n + 1, n + 1);
    for i in 0..n {
        for j in 0..n {
            entries[(i, j)] = system.alpha(i, j).clone();
        }
        entries[(i, n)] = system.affine()[i].clone();
    }
    entries[(n, n)] = Rational::one();
    AugmentedMatrix { entries }
}

pub fn decouple_homogeneous(system: &RecurrenceSystem) -> Result<RegularRecurrence> {
    if !system.is_homogeneous() {
        return Err(SolveError::Structural(
            "homogeneous decoupling needs every affine term to be zero".into(),
        ));
    }
    let betas = betas_from_char_poly(&char_poly(system.coefficients())?);
    Ok(RegularRecurrence {
        order: betas.len(),
        betas,
        tail: None,
        kind: RecurrenceKind::Homogeneous,
    })
}

/// Order `n + 1` recurrence from the augmented matrix; its betas sum to 1.
pub fn decouple_affine(system: &RecurrenceSystem) -> Result<RegularRecurrence> {
    let betas = betas_from_char_poly(&char_poly(&augment(system).entries)?);
    Ok(RegularRecurrence {
        order: betas.len(),
        betas,
        tail: None,
        kind: RecurrenceKind::Augmented,
    })
}

/// Order-`n` recurrence with an explicit per-variable constant, for `n ≤ 3`.
pub fn direct_affine_small(system: &RecurrenceSystem) -> Result<RegularRecurrence> {
    let n = system.order();
    if n > 3 {
        return Err(SolveError::UnsupportedOrder {
            order: n,
            reason: "explicit constant terms are only available up to three variables",
        });
    }
    let betas = betas_from_char_poly(&char_poly(system.coefficients())?);
    // 1-based accessors keep the formulas readable
    let a = |i: usize, j: usize| system.alpha(i - 1, j - 1).clone();
    let c = |i: usize| system.affine()[i - 1].clone();
    let one = Rational::one();
    let tail = match n {
        1 => vec![c(1)],
        2 => vec![
            c(1) * (&one - a(2, 2)) + c(2) * a(1, 2),
            c(2) * (&one - a(1, 1)) + c(1) * a(2, 1),
        ],
        _ => vec![
            c(1) * (&one - a(2, 2) - a(3, 3))
                + c(2) * a(1, 2)
                + c(3) * a(1, 3)
                + c(1) * (a(2, 2) * a(3, 3) - a(2, 3) * a(3, 2))
                + c(2) * (a(1, 3) * a(3, 2) - a(3, 3) * a(1, 2))
                + c(3) * (a(1, 2) * a(2, 3) - a(2, 2) * a(1, 3)),
            c(2) * (&one - a(1, 1) - a(3, 3))
                + c(1) * a(2, 1)
                + c(3) * a(2, 3)
                + c(2) * (a(1, 1) * a(3, 3) - a(1, 3) * a(3, 1))
                + c(3) * (a(2, 1) * a(1, 3) - a(1, 1) * a(2, 3))
                + c(1) * (a(2, 3) * a(3, 1) - a(3, 3) * a(2, 1)),
            c(3) * (&one - a(1, 1) - a(2, 2))
                + c(1) * a(3, 1)
                + c(2) * a(3, 2)
                + c(3) * (a(1, 1) * a(2, 2) - a(1, 2) * a(2, 1))
                + c(1) * (a(3, 2) * a(2, 1) - a(2, 2) * a(3, 1))
                + c(2) * (a(3, 1) * a(1, 2) - a(1, 1) * a(3, 2)),
        ],
    };
    Ok(RegularRecurrence {
        order: n,
        betas,
        tail: Some(tail),
        kind: RecurrenceKind::DirectTail,
    })
}
