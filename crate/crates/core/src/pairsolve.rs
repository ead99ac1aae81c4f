//! Closed forms for two-variable systems
//!
//! ```text
//! a_x = α11·a_{x-1} + α12·b_{x-1} + α1
//! b_x = α21·a_{x-1} + α22·b_{x-1} + α2
//! ```
//!
//! With equal row sums `S = α11 + α12 = α21 + α22`, the difference
//! `Δ_x = b_x − a_x` obeys its own first-order recurrence
//! `Δ_x = D·Δ_{x-1} + δ` with `D = α11 − α21` and `δ = α2 − α1`, and `a_x`
//! becomes `S·a_{x-1} + α12·Δ_{x-1} + α1`. Unrolling both gives a closed form
//! whose shape depends on which of `S − D = α12 + α21`, `S − 1`, `D − 1`
//! vanish; the five resulting cases are numbered 1–5.
//!
//! Equal column sums admit a similar treatment through `σ_x = a_x + b_x`;
//! only its generic case is supported.

use serde::Serialize;

use crate::error::{Result, SolveError};
use crate::exact::Rational;
use crate::model::RecurrenceSystem;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SumMode {
    Row,
    Column,
}

/// Constants of the row-sum solution.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PairConstants {
    /// `α11 + α12`
    pub s: Rational,
    /// `α11 − α21`
    pub d: Rational,
    /// `α2 − α1`
    pub delta: Rational,
    /// `b0 − a0`
    pub delta0: Rational,
    pub case_id: u8,
}

/// Constants of the column-sum solution.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ColumnConstants {
    /// `α11 − α12`, the rate of each variable on its own.
    pub p: Rational,
    /// `α11 + α21`, the rate of `a + b`.
    pub t: Rational,
    /// `a0 + b0`
    pub sigma0: Rational,
    /// `α1 + α2`
    pub affine_sum: Rational,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum PairForm {
    Row(PairConstants),
    Column(ColumnConstants),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ClosedFormPair {
    pub form: PairForm,
    pub source: RecurrenceSystem,
}

/// Closed form of `Δ_x = b_x − a_x` under equal row sums.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DifferenceForm {
    pub d: Rational,
    pub delta: Rational,
    pub delta0: Rational,
}

struct Alphas {
    a11: Rational,
    a12: Rational,
    a21: Rational,
    a22: Rational,
    c1: Rational,
    c2: Rational,
    a0: Rational,
    b0: Rational,
}

fn alphas(system: &RecurrenceSystem) -> Result<Alphas> {
    if system.order() != 2 {
        return Err(SolveError::Structural(format!(
            "expected a two-variable system, got {} variables",
            system.order()
        )));
    }
    Ok(Alphas {
        a11: system.alpha(0, 0).clone(),
        a12: system.alpha(0, 1).clone(),
        a21: system.alpha(1, 0).clone(),
        a22: system.alpha(1, 1).clone(),
        c1: system.affine()[0].clone(),
        c2: system.affine()[1].clone(),
        a0: system.initial()[0].clone(),
        b0: system.initial()[1].clone(),
    })
}

fn row_constants(system: &RecurrenceSystem) -> Result<(Alphas, PairConstants)> {
    let al = alphas(system)?;
    let s = &al.a11 + &al.a12;
    if s != &al.a21 + &al.a22 {
        return Err(SolveError::Structural(
            "row sums α11+α12 and α21+α22 differ".into(),
        ));
    }
    let d = &al.a11 - &al.a21;
    let case_id = row_case(&(&al.a12 + &al.a21), &s, &d);
    let constants = PairConstants {
        delta: &al.c2 - &al.c1,
        delta0: &al.b0 - &al.a0,
        s,
        d,
        case_id,
    };
    Ok((al, constants))
}

/// Case number from `S − D` (the cross sum), `S` and `D`.
///
/// `S − D = 0` forces `S = D`, so the five cases partition every input.
pub(crate) fn row_case(cross: &Rational, s: &Rational, d: &Rational) -> u8 {
    match (cross.is_zero(), s.is_one(), d.is_one()) {
        (false, false, false) => 1,
        (false, true, _) => 2,
        (false, false, true) => 3,
        (true, false, _) => 4,
        (true, true, _) => 5,
    }
}

pub fn classify_pair(system: &RecurrenceSystem, mode: SumMode) -> Result<u8> {
    match mode {
        SumMode::Row => row_constants(system).map(|(_, c)| c.case_id),
        SumMode::Column => column_constants(system).map(|_| 1),
    }
}

pub fn closed_form_pair_row(system: &RecurrenceSystem) -> Result<ClosedFormPair> {
    let (_, constants) = row_constants(system)?;
    Ok(ClosedFormPair {
        form: PairForm::Row(constants),
        source: system.clone(),
    })
}

fn column_constants(system: &RecurrenceSystem) -> Result<ColumnConstants> {
    let al = alphas(system)?;
    let t = &al.a11 + &al.a21;
    if t != &al.a12 + &al.a22 {
        return Err(SolveError::Structural(
            "column sums α11+α21 and α12+α22 differ".into(),
        ));
    }
    let p = &al.a11 - &al.a12;
    if (&al.a12 + &al.a21).is_zero() {
        return Err(SolveError::UnsupportedCase(
            "column sums with α12 = −α21".into(),
        ));
    }
    if p.is_one() {
        return Err(SolveError::UnsupportedCase(
            "column sums with α11 − α12 = 1".into(),
        ));
    }
    if t.is_one() {
        return Err(SolveError::UnsupportedCase(
            "column sums with α11 + α21 = 1".into(),
        ));
    }
    Ok(ColumnConstants {
        p,
        t,
        sigma0: &al.a0 + &al.b0,
        affine_sum: &al.c1 + &al.c2,
    })
}

pub fn closed_form_pair_col(system: &RecurrenceSystem) -> Result<ClosedFormPair> {
    let constants = column_constants(system)?;
    Ok(ClosedFormPair {
        form: PairForm::Column(constants),
        source: system.clone(),
    })
}

pub fn difference_closed_form(system: &RecurrenceSystem) -> Result<DifferenceForm> {
    let (_, c) = row_constants(system)?;
    Ok(DifferenceForm {
        d: c.d,
        delta: c.delta,
        delta0: c.delta0,
    })
}

impl DifferenceForm {
    pub fn evaluate(&self, x: u64) -> Rational {
        let xr = Rational::from(x);
        if self.d.is_one() {
            return &self.delta0 + &(&xr * &self.delta);
        }
        let dx = self.d.pow(x);
        let one = Rational::one();
        &(&dx * &self.delta0) + &(&self.delta * &(&(&dx - &one) / &(&self.d - &one)))
    }
}

impl ClosedFormPair {
    pub fn case_id(&self) -> u8 {
        match &self.form {
            PairForm::Row(c) => c.case_id,
            PairForm::Column(_) => 1,
        }
    }

    /// `(a_x, b_x)`; step 0 returns the initial values untouched.
    pub fn evaluate(&self, x: u64) -> [Rational; 2] {
        let init = self.source.initial();
        if x == 0 {
            return [init[0].clone(), init[1].clone()];
        }
        let al = alphas(&self.source).expect("validated at construction");
        match &self.form {
            PairForm::Row(c) => {
                let cross = &al.a12 + &al.a21;
                let rates = TwoRate {
                    s: &c.s,
                    d: &c.d,
                    cross: &cross,
                    case_id: c.case_id,
                };
                let minus_delta = -&c.delta;
                let minus_delta0 = -&c.delta0;
                [
                    rates.side(x, &al.a0, &al.a12, &c.delta0, &al.c1, &c.delta),
                    rates.side(x, &al.b0, &al.a21, &minus_delta0, &al.c2, &minus_delta),
                ]
            }
            PairForm::Column(c) => {
                let cross = &al.a12 + &al.a21;
                [
                    column_side(x, c, &cross, &al.a0, &al.a12, &al.c1),
                    column_side(x, c, &cross, &al.b0, &al.a21, &al.c2),
                ]
            }
        }
    }
}

/// `(r^x − r) / (r − 1)`, i.e. `r + r² + … + r^{x-1}`.
fn shifted_geometric(r: &Rational, rx: &Rational) -> Rational {
    let one = Rational::one();
    &(rx - r) / &(r - &one)
}

/// One coordinate of the equal-row-sum solution. The two- and three-variable
/// closed forms share these bodies and differ only in how the rates and cross
/// coefficients are computed.
pub(crate) struct TwoRate<'a> {
    /// Own rate (`S`, or `C1`).
    pub s: &'a Rational,
    /// Difference rate (`D`, or `C3`).
    pub d: &'a Rational,
    /// `s − d` (`α12 + α21`, or `C4`).
    pub cross: &'a Rational,
    pub case_id: u8,
}

impl TwoRate<'_> {
    /// `y0` initial value; `k` cross coefficient; `dd` initial difference
    /// towards the partner; `c` own affine term; `e` affine difference
    /// towards the partner. Requires `x ≥ 1`.
    pub fn side(
        &self,
        x: u64,
        y0: &Rational,
        k: &Rational,
        dd: &Rational,
        c: &Rational,
        e: &Rational,
    ) -> Rational {
        let one = Rational::one();
        let xr = Rational::from(x);
        let (s, d) = (self.s, self.d);
        let sx = s.pow(x);
        let dx = d.pow(x);
        let own_geom = || &(&sx - &one) / &(s - &one);
        match self.case_id {
            1 => {
                &(&(&(&sx * y0) + &(&(&(k * dd) * &(&sx - &dx)) / self.cross)) + &(c * &own_geom()))
                    + &(&(&(k * e) / self.cross)
                        * &(&shifted_geometric(s, &sx) - &shifted_geometric(d, &dx)))
            }
            2 => {
                let tail = &(&shifted_geometric(d, &dx) - &xr) + &one;
                &(&(&(&sx * y0) + &(&(&(k * dd) * &(&sx - &dx)) / self.cross)) + &(c * &xr))
                    + &(&(&(k * e) / &(d - &one)) * &tail)
            }
            3 => {
                let tail = &(&shifted_geometric(s, &sx) - &xr) + &one;
                &(&(&(&sx * y0) + &(&(&(k * dd) * &(&sx - &dx)) / self.cross)) + &(c * &own_geom()))
                    + &(&(&(k * e) / &(s - &one)) * &tail)
            }
            4 => {
                let s_prev = s.pow(x - 1);
                let lead = &s_prev * &(&(s * y0) + &(&(k * dd) * &xr));
                let sm1 = s - &one;
                let bracket = &(&(&(&xr - &one) * &sx) - &(&xr * &s_prev)) + &one;
                &(&lead + &(c * &own_geom())) + &(&(&(k * e) / &(&sm1 * &sm1)) * &bracket)
            }
            5 => {
                let s_prev = s.pow(x - 1);
                let lead = &s_prev * &(&(s * y0) + &(&(k * dd) * &xr));
                let pairs = &(&xr * &(&xr - &one)) / &Rational::from(2);
                &(&lead + &(c * &xr)) + &(&(k * e) * &pairs)
            }
            other => unreachable!("case {other} is not produced by row_case"),
        }
    }
}

fn column_side(
    x: u64,
    c: &ColumnConstants,
    cross: &Rational,
    y0: &Rational,
    k: &Rational,
    own_affine: &Rational,
) -> Rational {
    let one = Rational::one();
    let px = c.p.pow(x);
    let tx = c.t.pow(x);
    let own = &px * y0;
    let mixing = &(&(k * &c.sigma0) * &(&tx - &px)) / cross;
    let affine = own_affine * &(&(&px - &one) / &(&c.p - &one));
    let drift = &(&(k * &c.affine_sum) / cross)
        * &(&shifted_geometric(&c.t, &tx) - &shifted_geometric(&c.p, &px));
    &(&(&own + &mixing) + &affine) + &drift
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::q;
    use crate::oracle::iterate;

    fn r(v: i64) -> Rational {
        Rational::from(v)
    }

    fn pair(m: [[Rational; 2]; 2], affine: [Rational; 2], init: [Rational; 2]) -> RecurrenceSystem {
        RecurrenceSystem::from_parts(
            m.into_iter().map(|row| row.to_vec()).collect(),
            affine.to_vec(),
            init.to_vec(),
        )
        .unwrap()
    }

    fn matches_oracle(form: &ClosedFormPair, steps: u64) {
        let t = iterate(&form.source, steps).unwrap();
        for x in 0..=steps {
            assert_eq!(form.evaluate(x).to_vec(), t.row(x as usize), "step {x}");
        }
    }

    #[test]
    fn classification_examples() {
        let identity = pair([[r(1), r(0)], [r(0), r(1)]], [r(0), r(0)], [r(3), r(7)]);
        assert_eq!(classify_pair(&identity, SumMode::Row).unwrap(), 5);
        let ab = pair([[r(1), r(1)], [r(2), r(0)]], [r(0), r(0)], [r(1), r(1)]);
        assert_eq!(classify_pair(&ab, SumMode::Row).unwrap(), 1);
        // D = α11 − α21 = 1 with S = 6
        let sixes = pair([[r(2), r(4)], [r(1), r(5)]], [r(0), r(0)], [r(0), r(0)]);
        assert_eq!(classify_pair(&sixes, SumMode::Row).unwrap(), 3);
        let unequal = pair([[r(2), r(4)], [r(1), r(3)]], [r(0), r(0)], [r(0), r(0)]);
        assert!(matches!(
            classify_pair(&unequal, SumMode::Row),
            Err(SolveError::Structural(_))
        ));
    }

    #[test]
    fn doubling_sequence() {
        let sys = pair([[r(1), r(1)], [r(2), r(0)]], [r(0), r(0)], [r(1), r(1)]);
        let form = closed_form_pair_row(&sys).unwrap();
        for x in 0..10 {
            assert_eq!(form.evaluate(x)[0], r(2).pow(x));
        }
        matches_oracle(&form, 30);
    }

    #[test]
    fn quadratic_growth_case() {
        let sys = pair(
            [[q(1, 2), q(1, 2)], [q(-1, 2), q(3, 2)]],
            [r(0), r(1)],
            [r(0), r(0)],
        );
        let form = closed_form_pair_row(&sys).unwrap();
        assert_eq!(form.case_id(), 5);
        for x in 0..12u64 {
            let xr = r(x as i64);
            assert_eq!(form.evaluate(x)[0], &(&xr * &(&xr - &r(1))) / &r(4));
        }
        assert_eq!(form.evaluate(2)[0], q(1, 2));
        matches_oracle(&form, 30);
    }

    #[test]
    fn fixed_point() {
        let sys = pair([[r(1), r(0)], [r(0), r(1)]], [r(0), r(0)], [r(3), r(7)]);
        let form = closed_form_pair_row(&sys).unwrap();
        for x in 0..20 {
            assert_eq!(form.evaluate(x), [r(3), r(7)]);
        }
    }

    #[test]
    fn zero_rate_short_circuits_at_step_zero() {
        // S = D = 0 (case 4): S^{x-1} is never formed at x = 0
        let sys = pair(
            [[r(1), r(-1)], [r(1), r(-1)]],
            [r(2), r(-3)],
            [q(5, 2), r(4)],
        );
        let form = closed_form_pair_row(&sys).unwrap();
        assert_eq!(form.case_id(), 4);
        assert_eq!(form.evaluate(0), [q(5, 2), r(4)]);
        matches_oracle(&form, 30);
    }

    #[test]
    fn column_sums() {
        let sys = pair([[r(3), r(1)], [r(1), r(3)]], [r(0), r(0)], [r(1), r(0)]);
        let form = closed_form_pair_col(&sys).unwrap();
        assert_eq!(form.evaluate(2)[0], r(10));
        for x in 0..10u64 {
            let expected = &r(2).pow(x) + &(&(&r(4).pow(x) - &r(2).pow(x)) / &r(2));
            assert_eq!(form.evaluate(x)[0], expected);
        }
        matches_oracle(&form, 30);

        let zero = sys.with_initial(vec![r(0), r(0)]).unwrap();
        let form = closed_form_pair_col(&zero).unwrap();
        assert!((0..10).all(|x| form.evaluate(x) == [r(0), r(0)]));
    }

    #[test]
    fn column_degeneracies() {
        let identity = pair([[r(1), r(0)], [r(0), r(1)]], [r(0), r(0)], [r(1), r(0)]);
        assert!(matches!(
            closed_form_pair_col(&identity),
            Err(SolveError::UnsupportedCase(_))
        ));
        // α11 − α12 = 1
        let p_one = pair([[r(2), r(1)], [r(0), r(1)]], [r(0), r(0)], [r(1), r(0)]);
        assert!(matches!(
            closed_form_pair_col(&p_one),
            Err(SolveError::UnsupportedCase(_))
        ));
        // α11 + α21 = 1
        let t_one = pair([[r(0), r(2)], [r(1), r(-1)]], [r(0), r(0)], [r(1), r(0)]);
        assert!(matches!(
            closed_form_pair_col(&t_one),
            Err(SolveError::UnsupportedCase(_))
        ));
        let unequal = pair([[r(1), r(2)], [r(3), r(4)]], [r(0), r(0)], [r(1), r(0)]);
        assert!(matches!(
            classify_pair(&unequal, SumMode::Column),
            Err(SolveError::Structural(_))
        ));
        assert_eq!(
            classify_pair(
                &pair([[r(3), r(1)], [r(1), r(3)]], [r(0), r(0)], [r(1), r(0)]),
                SumMode::Column
            )
            .unwrap(),
            1
        );
    }

    #[test]
    fn difference_examples() {
        let sys = pair([[r(1), r(1)], [r(2), r(0)]], [r(0), r(0)], [r(1), r(1)]);
        let diff = difference_closed_form(&sys).unwrap();
        assert!((0..30).all(|x| diff.evaluate(x).is_zero()));

        let drift = pair([[r(1), r(0)], [r(0), r(1)]], [r(0), r(1)], [r(2), r(5)]);
        let diff = difference_closed_form(&drift).unwrap();
        for x in 0..30u64 {
            assert_eq!(diff.evaluate(x), &r(3) + &r(x as i64));
        }

        // D = 0, δ = 0
        let flat = pair([[r(1), r(1)], [r(1), r(1)]], [r(3), r(3)], [r(0), r(9)]);
        let diff = difference_closed_form(&flat).unwrap();
        assert_eq!(diff.evaluate(0), r(9));
        assert!((1..30).all(|x| diff.evaluate(x).is_zero()));
    }

    #[test]
    fn wrong_order_is_structural() {
        let one = RecurrenceSystem::from_parts(vec![vec![r(1)]], vec![r(0)], vec![r(0)]).unwrap();
        assert!(matches!(
            closed_form_pair_row(&one),
            Err(SolveError::Structural(_))
        ));
    }
}
