//! Three-variable systems that decompose into two-variable ones.
//!
//! The decomposition needs two things:
//!
//! * rows `a` and `c` of the coefficient matrix have equal sums, and
//! * weights `w1 + w2 = 1` with `b_x = w1·a_x + w2·c_x` for every `x`.
//!
//! The invariant may come from the coefficients themselves (row `b` is the
//! `w`-combination of rows `a` and `c`) or from the initial values together
//! with conditions that make it propagate from one step to the next. Either
//! way the `b` equation can be replaced by its `w`-combination (the "starred"
//! row), `c` eliminated through `c = (b − w1·a)/w2`, and the remaining
//! `(a, b)` pair has equal row sums, so [`crate::pairsolve`] applies.
//! [`closed_form_triple`] writes the resulting formulas directly in terms
//! of five constants `C1..C5`.

use serde::Serialize;

use crate::error::{Result, SolveError};
use crate::exact::{Matrix, Polynomial, Rational};
use crate::model::RecurrenceSystem;
use crate::pairsolve::{closed_form_pair_row, row_case, ClosedFormPair, TwoRate};

/// How a [`WeightPair`] was established.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Provenance {
    /// Row `b` (and `α2`) is the weighted combination of rows `a` and `c`.
    CoefficientProportion,
    /// The initial values satisfy the invariant and it carries forward.
    InitialValuePropagation,
}

/// Weights of the invariant `b = w1·a + w2·c`; always `w1 + w2 = 1`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct WeightPair {
    pub w1: Rational,
    pub w2: Rational,
    pub provenance: Provenance,
}

impl WeightPair {
    pub fn new(w1: Rational, provenance: Provenance) -> Self {
        let w2 = &Rational::one() - &w1;
        WeightPair { w1, w2, provenance }
    }

    pub fn holds(&self, a: &Rational, b: &Rational, c: &Rational) -> bool {
        b == &(&(&self.w1 * a) + &(&self.w2 * c))
    }
}

fn require_order3(system: &RecurrenceSystem) -> Result<()> {
    match system.order() {
        3 => Ok(()),
        n => Err(SolveError::Structural(format!(
            "expected three variables, got {n}"
        ))),
    }
}

fn row_sum(system: &RecurrenceSystem, i: usize) -> Rational {
    system.coefficients().row(i).iter().sum()
}

fn require_outer_rows_equal(system: &RecurrenceSystem) -> Result<()> {
    require_order3(system)?;
    if row_sum(system, 0) != row_sum(system, 2) {
        return Err(SolveError::Structural(
            "rows a and c have different sums".into(),
        ));
    }
    Ok(())
}

/// Weight `w1` for which row `b` (including `α2`) is `w1·row_a + (1 − w1)·row_c`.
fn proportion_weight(system: &RecurrenceSystem) -> Option<Rational> {
    let entry = |i: usize, j: usize| {
        if j < 3 {
            system.alpha(i, j).clone()
        } else {
            system.affine()[i].clone()
        }
    };
    let pinned = (0..4).find_map(|j| {
        let spread = &entry(0, j) - &entry(2, j);
        (!spread.is_zero()).then(|| &(&entry(1, j) - &entry(2, j)) / &spread)
    });
    let w1 = match pinned {
        Some(w1) => w1,
        // rows a and c coincide, so any weight works if row b does too;
        // prefer one that also fits the initial values
        None => initial_weight(system).unwrap_or_else(|| Rational::new(1, 2).unwrap()),
    };
    let w2 = &Rational::one() - &w1;
    (0..4)
        .all(|j| entry(1, j) == &(&w1 * &entry(0, j)) + &(&w2 * &entry(2, j)))
        .then_some(w1)
}

fn initial_weight(system: &RecurrenceSystem) -> Option<Rational> {
    let init = system.initial();
    let spread = &init[0] - &init[2];
    (!spread.is_zero()).then(|| &(&init[1] - &init[2]) / &spread)
}

/// The residual coefficients `(c_a, c_b, c_c, c_0)` of row `b` minus the
/// `w`-combination of rows `a` and `c`, as linear polynomials in `w1`.
fn residual_polys(system: &RecurrenceSystem) -> [Polynomial; 4] {
    let entry = |i: usize, j: usize| {
        if j < 3 {
            system.alpha(i, j).clone()
        } else {
            system.affine()[i].clone()
        }
    };
    // α_2j − w1·α_1j − (1 − w1)·α_3j = (α_2j − α_3j) + w1·(α_3j − α_1j)
    let poly =
        |j: usize| Polynomial::linear(&entry(1, j) - &entry(2, j), &entry(2, j) - &entry(0, j));
    [poly(0), poly(1), poly(2), poly(3)]
}

/// Conditions under which the invariant, once true, stays true:
/// `c_a + w1·c_b = 0`, `c_c + w2·c_b = 0`, `c_0 = 0`.
fn propagation_polys(system: &RecurrenceSystem) -> [Polynomial; 3] {
    let [ca, cb, cc, c0] = residual_polys(system);
    let w1 = Polynomial::linear(Rational::zero(), Rational::one());
    let w2 = Polynomial::linear(Rational::one(), Rational::from(-1));
    [&ca + &(&w1 * &cb), &cc + &(&w2 * &cb), c0]
}

pub fn propagation_holds(system: &RecurrenceSystem, w1: &Rational) -> bool {
    system.order() == 3
        && propagation_polys(system)
            .iter()
            .all(|p| p.eval(w1).is_zero())
}

/// Rational roots of a polynomial of degree at most two.
fn rational_roots(p: &Polynomial) -> Vec<Rational> {
    match p.degree() {
        Some(1) => vec![-(&p.coeff(0) / &p.coeff(1))],
        Some(2) => {
            let (a, b, c) = (p.coeff(2), p.coeff(1), p.coeff(0));
            let disc = &(&b * &b) - &(&(&Rational::from(4) * &a) * &c);
            let Some(root) = disc.sqrt_exact() else {
                return Vec::new();
            };
            let two_a = &Rational::from(2) * &a;
            let mut roots = vec![&(&-&b - &root) / &two_a, &(&-&b + &root) / &two_a];
            roots.sort();
            roots.dedup();
            roots
        }
        _ => Vec::new(),
    }
}

fn propagated_weight(system: &RecurrenceSystem) -> Option<Rational> {
    if let Some(w1) = initial_weight(system) {
        return propagation_holds(system, &w1).then_some(w1);
    }
    let init = system.initial();
    if init[1] != init[0] {
        // a0 = c0 forces b0 = a0 for every weight
        return None;
    }
    let conditions = propagation_polys(system);
    let Some(lowest) = conditions
        .iter()
        .filter(|p| !p.is_zero())
        .min_by_key(|p| p.degree())
    else {
        return Some(Rational::new(1, 2).unwrap());
    };
    let candidates: Vec<Rational> = rational_roots(lowest)
        .into_iter()
        .filter(|w1| conditions.iter().all(|p| p.eval(w1).is_zero()))
        .collect();
    // prefer weights that keep every pair reduction available
    candidates
        .iter()
        .find(|w1| !w1.is_zero() && !w1.is_one())
        .or(candidates.first())
        .cloned()
}

/// Finds weights for `b = w1·a + w2·c`, trying the coefficient proportion
/// first and the initial values second.
///
/// A coefficient proportion whose initial values break the invariant is
/// still returned when nothing else fits, so callers can report it.
pub fn detect_weights(system: &RecurrenceSystem) -> Option<WeightPair> {
    if system.order() != 3 {
        return None;
    }
    let proportional = proportion_weight(system);
    if let Some(w1) = &proportional {
        let w = WeightPair::new(w1.clone(), Provenance::CoefficientProportion);
        let init = system.initial();
        if w.holds(&init[0], &init[1], &init[2]) {
            return Some(w);
        }
    }
    propagated_weight(system)
        .map(|w1| WeightPair::new(w1, Provenance::InitialValuePropagation))
        .or_else(|| proportional.map(|w1| WeightPair::new(w1, Provenance::CoefficientProportion)))
}

/// The three two-variable systems obtained by eliminating one variable.
#[derive(Clone, Debug)]
pub struct PairReductions {
    /// `(a, b)` with `c` eliminated; needs `w2 ≠ 0`.
    pub ab: Result<RecurrenceSystem>,
    /// `(a, c)` with `b` eliminated; always available.
    pub ac: RecurrenceSystem,
    /// `(b, c)` with `a` eliminated; needs `w1 ≠ 0`.
    pub bc: Result<RecurrenceSystem>,
}

fn pair_system(
    system: &RecurrenceSystem,
    vars: [usize; 2],
    rows: [[Rational; 2]; 2],
) -> Result<RecurrenceSystem> {
    let names = vars.iter().map(|&v| system.names()[v].clone()).collect();
    let pick = |v: &[Rational]| vars.iter().map(|&i| v[i].clone()).collect();
    let pair = RecurrenceSystem::new(
        names,
        Matrix::from_rows(rows.into_iter().map(|r| r.to_vec()).collect())?,
        pick(system.affine()),
        pick(system.initial()),
    )?;
    let sums: Vec<Rational> = (0..2).map(|i| row_sum(&pair, i)).collect();
    if sums[0] != sums[1] {
        return Err(SolveError::Structural(format!(
            "reduced ({}, {}) pair has unequal row sums {} and {}",
            pair.names()[0],
            pair.names()[1],
            sums[0],
            sums[1]
        )));
    }
    Ok(pair)
}

/// Rewrites the system as three coupled pairs using the invariant.
pub fn reduce_to_pairs(system: &RecurrenceSystem, w: &WeightPair) -> Result<PairReductions> {
    require_outer_rows_equal(system)?;
    let a = |i: usize, j: usize| system.alpha(i - 1, j - 1).clone();
    let (w1, w2) = (&w.w1, &w.w2);

    let ab = if w2.is_zero() {
        Err(SolveError::UnsupportedCase(
            "w2 = 0: c cannot be eliminated".into(),
        ))
    } else {
        let ratio = w1 / w2;
        let inv = w2.recip()?;
        pair_system(
            system,
            [0, 1],
            [
                [a(1, 1) - &ratio * &a(1, 3), a(1, 2) + &inv * &a(1, 3)],
                [a(2, 1) - &ratio * &a(2, 3), a(2, 2) + &inv * &a(2, 3)],
            ],
        )
    };

    let ac = pair_system(
        system,
        [0, 2],
        [
            [a(1, 1) + w1 * &a(1, 2), w2 * &a(1, 2) + a(1, 3)],
            [a(3, 1) + w1 * &a(3, 2), w2 * &a(3, 2) + a(3, 3)],
        ],
    )?;

    let bc = if w1.is_zero() {
        Err(SolveError::UnsupportedCase(
            "w1 = 0: a cannot be eliminated".into(),
        ))
    } else {
        let inv = w1.recip()?;
        let ratio = w2 / w1;
        pair_system(
            system,
            [1, 2],
            [
                [&inv * &a(2, 1) + a(2, 2), -(&ratio * &a(2, 1)) + a(2, 3)],
                [&inv * &a(3, 1) + a(3, 2), -(&ratio * &a(3, 1)) + a(3, 3)],
            ],
        )
    };

    Ok(PairReductions { ab, ac, bc })
}

/// `w1·row_a + w2·row_c` and `w1·α1 + w2·α3`.
fn starred_row(system: &RecurrenceSystem, w: &WeightPair) -> ([Rational; 3], Rational) {
    let mix = |x: &Rational, y: &Rational| &(&w.w1 * x) + &(&w.w2 * y);
    let row = [0, 1, 2].map(|j| mix(system.alpha(0, j), system.alpha(2, j)));
    (row, mix(&system.affine()[0], &system.affine()[2]))
}

/// The system with row `b` replaced by the `w`-combination of rows `a` and `c`.
///
/// Its trajectory coincides with the original one whenever the invariant holds.
pub fn replace_b_row(system: &RecurrenceSystem, w: &WeightPair) -> Result<RecurrenceSystem> {
    require_order3(system)?;
    let (row, alpha2) = starred_row(system, w);
    let mut rows = system.coefficients().to_rows();
    rows[1] = row.to_vec();
    let mut affine = system.affine().to_vec();
    affine[1] = alpha2;
    RecurrenceSystem::new(
        system.names().to_vec(),
        Matrix::from_rows(rows)?,
        affine,
        system.initial().to_vec(),
    )
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TripleConstants {
    pub c1: Rational,
    pub c2: Rational,
    pub c3: Rational,
    pub c4: Rational,
    pub c5: Rational,
    /// Affine term used for `b`.
    pub alpha2_star: Rational,
    /// Row used for `b`: `(α*21, α*22, α*23)`.
    pub star_row: [Rational; 3],
    pub case_id: u8,
}

fn constants_from_row(
    system: &RecurrenceSystem,
    w: &WeightPair,
    b_row: [Rational; 3],
    alpha2: Rational,
) -> Result<TripleConstants> {
    if w.w2.is_zero() {
        return Err(SolveError::Structural(
            "w2 = 0: the (a, b) reduction is unavailable".into(),
        ));
    }
    let ratio = &w.w1 / &w.w2;
    let inv = w.w2.recip()?;
    let a = |j: usize| system.alpha(0, j);
    let c1 = row_sum(system, 0);
    let c2 = a(1) + &(&inv * a(2));
    let c5 = &b_row[0] - &(&ratio * &b_row[2]);
    let c3 = &(a(0) - &(&ratio * a(2))) - &c5;
    let c4 = &c2 + &c5;
    let case_id = row_case(&c4, &c1, &c3);
    Ok(TripleConstants {
        c1,
        c2,
        c3,
        c4,
        c5,
        alpha2_star: alpha2,
        star_row: b_row,
        case_id,
    })
}

/// Constants for the general decomposition: only rows `a` and `c` need
/// equal sums, and `b` is described by the starred row.
pub fn triple_constants(system: &RecurrenceSystem, w: &WeightPair) -> Result<TripleConstants> {
    require_outer_rows_equal(system)?;
    let (row, alpha2) = starred_row(system, w);
    constants_from_row(system, w, row, alpha2)
}

/// Constants computed from the actual `b` row, for systems whose three row
/// sums all agree. Coincides with [`triple_constants`] when row `b` is the
/// weighted combination of rows `a` and `c`.
pub fn proportional_constants(
    system: &RecurrenceSystem,
    w: &WeightPair,
) -> Result<TripleConstants> {
    require_outer_rows_equal(system)?;
    if row_sum(system, 1) != row_sum(system, 0) {
        return Err(SolveError::Structural(
            "row b has a different sum from rows a and c".into(),
        ));
    }
    let row = [0, 1, 2].map(|j| system.alpha(1, j).clone());
    constants_from_row(system, w, row, system.affine()[1].clone())
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ClosedFormTriple {
    pub constants: TripleConstants,
    pub weights: WeightPair,
    pub source: RecurrenceSystem,
}

fn require_initial_invariant(system: &RecurrenceSystem, w: &WeightPair) -> Result<()> {
    let init = system.initial();
    if !w.holds(&init[0], &init[1], &init[2]) {
        return Err(SolveError::Structural(format!(
            "initial values violate b = {}·a + {}·c",
            w.w1, w.w2
        )));
    }
    Ok(())
}

/// Closed form for all three variables; `c` is recovered from the invariant.
pub fn closed_form_triple(system: &RecurrenceSystem, w: &WeightPair) -> Result<ClosedFormTriple> {
    let constants = triple_constants(system, w)?;
    require_initial_invariant(system, w)?;
    Ok(ClosedFormTriple {
        constants,
        weights: w.clone(),
        source: system.clone(),
    })
}

impl ClosedFormTriple {
    pub fn case_id(&self) -> u8 {
        self.constants.case_id
    }

    /// `(a_x, b_x, c_x)`; step 0 returns the initial values untouched.
    pub fn evaluate(&self, x: u64) -> [Rational; 3] {
        let init = self.source.initial();
        if x == 0 {
            return [init[0].clone(), init[1].clone(), init[2].clone()];
        }
        let k = &self.constants;
        let (a0, b0) = (&init[0], &init[1]);
        let alpha1 = &self.source.affine()[0];
        let rates = TwoRate {
            s: &k.c1,
            d: &k.c3,
            cross: &k.c4,
            case_id: k.case_id,
        };
        let a = rates.side(x, a0, &k.c2, &(b0 - a0), alpha1, &(&k.alpha2_star - alpha1));
        let b = rates.side(
            x,
            b0,
            &k.c5,
            &(a0 - b0),
            &k.alpha2_star,
            &(alpha1 - &k.alpha2_star),
        );
        let c = recover_c(&self.weights, &a, &b);
        [a, b, c]
    }
}

/// `c = −(w1/w2)·a + (1/w2)·b`; requires `w2 ≠ 0`.
fn recover_c(w: &WeightPair, a: &Rational, b: &Rational) -> Rational {
    &(b - &(&w.w1 * a)) / &w.w2
}

/// The same solution obtained by solving the reduced `(a, b)` pair with the
/// two-variable formulas, then recovering `c`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PairRoute {
    pub pair: ClosedFormPair,
    pub weights: WeightPair,
}

pub fn pair_route(system: &RecurrenceSystem, w: &WeightPair) -> Result<PairRoute> {
    require_initial_invariant(system, w)?;
    let replaced = replace_b_row(system, w)?;
    let ab = reduce_to_pairs(&replaced, w)?.ab?;
    Ok(PairRoute {
        pair: closed_form_pair_row(&ab)?,
        weights: w.clone(),
    })
}

impl PairRoute {
    pub fn evaluate(&self, x: u64) -> [Rational; 3] {
        let [a, b] = self.pair.evaluate(x);
        let c = recover_c(&self.weights, &a, &b);
        [a, b, c]
    }
}

/// A solved three-variable system, whichever route was available.
#[derive(Clone, Debug, PartialEq, Eq)]
#[allow(clippy::large_enum_variant)]
pub enum TripleSolution {
    Direct(ClosedFormTriple),
    /// `w2 = 0` (so `b ≡ a`): the `(a, c)` pair is solved and `b` copied from `a`.
    AcPair {
        pair: ClosedFormPair,
        weights: WeightPair,
    },
}

impl TripleSolution {
    pub fn weights(&self) -> &WeightPair {
        match self {
            TripleSolution::Direct(f) => &f.weights,
            TripleSolution::AcPair { weights, .. } => weights,
        }
    }

    pub fn case_id(&self) -> u8 {
        match self {
            TripleSolution::Direct(f) => f.case_id(),
            TripleSolution::AcPair { pair, .. } => pair.case_id(),
        }
    }

    pub fn evaluate(&self, x: u64) -> [Rational; 3] {
        match self {
            TripleSolution::Direct(f) => f.evaluate(x),
            TripleSolution::AcPair { pair, weights } => {
                let [a, c] = pair.evaluate(x);
                let b = &(&weights.w1 * &a) + &(&weights.w2 * &c);
                [a, b, c]
            }
        }
    }
}

/// Detects weights and builds the closed form, falling back to the `(a, c)`
/// pair when `w2 = 0`.
pub fn solve_triple(system: &RecurrenceSystem) -> Result<TripleSolution> {
    require_outer_rows_equal(system)?;
    let w = detect_weights(system).ok_or_else(|| {
        SolveError::Structural("no weights w1 + w2 = 1 with b = w1·a + w2·c were found".into())
    })?;
    solve_triple_with(system, &w)
}

pub fn solve_triple_with(system: &RecurrenceSystem, w: &WeightPair) -> Result<TripleSolution> {
    if !w.w2.is_zero() {
        return closed_form_triple(system, w).map(TripleSolution::Direct);
    }
    require_initial_invariant(system, w)?;
    let ac = reduce_to_pairs(system, w)?.ac;
    Ok(TripleSolution::AcPair {
        pair: closed_form_pair_row(&ac)?,
        weights: w.clone(),
    })
}
