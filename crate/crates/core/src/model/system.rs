use serde::{Deserialize, Serialize};

use crate::error::{Result, SolveError};
use crate::exact::{Matrix, Rational};

/// A first-order system `y_x = A·y_{x-1} + α` with its initial vector.
///
/// Row `i` of `coefficients` belongs to the equation for `names[i]`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct RecurrenceSystem {
    names: Vec<String>,
    coefficients: Matrix,
    affine: Vec<Rational>,
    initial: Vec<Rational>,
}

impl RecurrenceSystem {
    pub fn new(
        names: Vec<String>,
        coefficients: Matrix,
        affine: Vec<Rational>,
        initial: Vec<Rational>,
    ) -> Result<Self> {
        let n = names.len();
        if n == 0 {
            return Err(SolveError::Structural(
                "a system needs at least one variable".into(),
            ));
        }
        if coefficients.rows() != n || coefficients.cols() != n {
            return Err(SolveError::Structural(format!(
                "coefficient matrix is {}x{}, expected {n}x{n}",
                coefficients.rows(),
                coefficients.cols()
            )));
        }
        if affine.len() != n || initial.len() != n {
            return Err(SolveError::Structural(format!(
                "expected {n} affine terms and {n} initial values, got {} and {}",
                affine.len(),
                initial.len()
            )));
        }
        for (i, name) in names.iter().enumerate() {
            if names[..i].contains(name) {
                return Err(SolveError::Structural(format!(
                    "duplicate variable name `{name}`"
                )));
            }
        }
        Ok(RecurrenceSystem {
            names,
            coefficients,
            affine,
            initial,
        })
    }

    /// Convenience constructor with integer-or-fraction literals and default
    /// names (`a`, `b`, `c`, … for up to 26 variables, else `y1`, `y2`, …).
    pub fn from_parts(
        coefficients: Vec<Vec<Rational>>,
        affine: Vec<Rational>,
        initial: Vec<Rational>,
    ) -> Result<Self> {
        let n = coefficients.len();
        let names = default_names(n);
        Self::new(names, Matrix::from_rows(coefficients)?, affine, initial)
    }

    pub fn order(&self) -> usize {
        self.names.len()
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn coefficients(&self) -> &Matrix {
        &self.coefficients
    }

    /// Coefficient of variable `j` in the equation of variable `i` (0-based).
    pub fn alpha(&self, i: usize, j: usize) -> &Rational {
        &self.coefficients[(i, j)]
    }

    pub fn affine(&self) -> &[Rational] {
        &self.affine
    }

    pub fn initial(&self) -> &[Rational] {
        &self.initial
    }

    pub fn is_homogeneous(&self) -> bool {
        self.affine.iter().all(Rational::is_zero)
    }

    pub fn with_initial(&self, initial: Vec<Rational>) -> Result<Self> {
        Self::new(
            self.names.clone(),
            self.coefficients.clone(),
            self.affine.clone(),
            initial,
        )
    }

    pub fn with_affine(&self, affine: Vec<Rational>) -> Result<Self> {
        Self::new(
            self.names.clone(),
            self.coefficients.clone(),
            affine,
            self.initial.clone(),
        )
    }

    /// Reorders variables: new variable `k` is old variable `perm[k]`.
    pub fn permuted(&self, perm: &[usize]) -> Result<Self> {
        let n = self.order();
        let mut seen = vec![false; n];
        if perm.len() != n
            || perm
                .iter()
                .any(|&p| p >= n || std::mem::replace(&mut seen[p], true))
        {
            return Err(SolveError::Structural(
                "not a permutation of the variables".into(),
            ));
        }
        let rows = perm
            .iter()
            .map(|&pi| perm.iter().map(|&pj| self.alpha(pi, pj).clone()).collect())
            .collect();
        Self::new(
            perm.iter().map(|&p| self.names[p].clone()).collect(),
            Matrix::from_rows(rows)?,
            perm.iter().map(|&p| self.affine[p].clone()).collect(),
            perm.iter().map(|&p| self.initial[p].clone()).collect(),
        )
    }

    pub fn to_document(&self) -> SystemDocument {
        SystemDocument {
            order: self.order(),
            names: self.names.clone(),
            coefficients: self.coefficients.to_rows(),
            affine: self.affine.clone(),
            initial: self.initial.clone(),
        }
    }

    pub fn from_document(doc: SystemDocument) -> Result<Self> {
        if doc.order != doc.names.len() {
            return Err(SolveError::Structural(format!(
                "document declares order {} but lists {} names",
                doc.order,
                doc.names.len()
            )));
        }
        Self::new(
            doc.names,
            Matrix::from_rows(doc.coefficients)?,
            doc.affine,
            doc.initial,
        )
    }
}

pub(crate) fn default_names(n: usize) -> Vec<String> {
    if n <= 26 {
        (b'a'..).take(n).map(|c| (c as char).to_string()).collect()
    } else {
        (1..=n).map(|i| format!("y{i}")).collect()
    }
}

/// JSON shape of a system. Rationals serialize as strings such as `"37/6"`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SystemDocument {
    pub order: usize,
    pub names: Vec<String>,
    pub coefficients: Vec<Vec<Rational>>,
    pub affine: Vec<Rational>,
    pub initial: Vec<Rational>,
}

/// Row and column sums of the coefficient matrix (affine terms excluded).
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SumProfile {
    pub row_sums: Vec<Rational>,
    pub col_sums: Vec<Rational>,
    pub rows_equal: bool,
    pub cols_equal: bool,
}

pub fn sum_profile(system: &RecurrenceSystem) -> SumProfile {
    let n = system.order();
    let row_sums: Vec<Rational> = (0..n)
        .map(|i| (0..n).map(|j| system.alpha(i, j)).sum())
        .collect();
    let col_sums: Vec<Rational> = (0..n)
        .map(|j| (0..n).map(|i| system.alpha(i, j)).sum())
        .collect();
    let all_equal = |v: &[Rational]| v.windows(2).all(|w| w[0] == w[1]);
    SumProfile {
        rows_equal: all_equal(&row_sums),
        cols_equal: all_equal(&col_sums),
        row_sums,
        col_sums,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::q;
    use crate::fixtures;
    use proptest::prelude::*;

    #[test]
    fn golden_row_sums() {
        for sys in [fixtures::system_32(), fixtures::system_33()] {
            let p = sum_profile(&sys);
            assert_eq!(p.row_sums, vec![Rational::from(6); 3]);
            assert!(p.rows_equal);
        }
    }

    #[test]
    fn identity_profile() {
        for n in 1..=5 {
            let rows = Matrix::identity(n).to_rows();
            let sys = RecurrenceSystem::from_parts(
                rows,
                vec![Rational::zero(); n],
                vec![Rational::zero(); n],
            )
            .unwrap();
            let p = sum_profile(&sys);
            assert!(p.rows_equal && p.cols_equal);
            assert!(p.row_sums.iter().chain(&p.col_sums).all(Rational::is_one));
        }
    }

    #[test]
    fn construction_rejects_bad_shapes() {
        let m = Matrix::identity(2);
        let two = vec![Rational::zero(); 2];
        assert!(
            RecurrenceSystem::new(vec!["a".into()], m.clone(), two.clone(), two.clone()).is_err()
        );
        assert!(RecurrenceSystem::new(
            vec!["a".into(), "a".into()],
            m.clone(),
            two.clone(),
            two.clone()
        )
        .is_err());
        assert!(
            RecurrenceSystem::new(vec!["a".into(), "b".into()], m, vec![q(1, 2)], two).is_err()
        );
    }

    #[test]
    fn default_names_switch_past_alphabet() {
        assert_eq!(default_names(3), vec!["a", "b", "c"]);
        assert_eq!(default_names(27)[26], "y27");
    }

    proptest! {
        #[test]
        fn profile_is_permutation_equivariant(
            entries in prop::collection::vec((-9i64..=9, 1i64..=9), 16),
            perm in Just(vec![0usize, 1, 2, 3]).prop_shuffle(),
        ) {
            let rows = entries.chunks(4)
                .map(|r| r.iter().map(|&(n, d)| q(n, d)).collect())
                .collect();
            let sys = RecurrenceSystem::from_parts(rows, vec![Rational::zero(); 4], vec![Rational::zero(); 4]).unwrap();
            let base = sum_profile(&sys);
            let moved = sum_profile(&sys.permuted(&perm).unwrap());
            for (k, &p) in perm.iter().enumerate() {
                prop_assert_eq!(&moved.row_sums[k], &base.row_sums[p]);
                prop_assert_eq!(&moved.col_sums[k], &base.col_sums[p]);
            }
            prop_assert_eq!(moved.rows_equal, base.rows_equal);
        }
    }
}
