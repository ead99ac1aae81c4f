//! Brute-force ground truth: exact step-by-step iteration of a system.

use std::fmt::Write;

use serde::Serialize;

use crate::decouple::RegularRecurrence;
use crate::error::{Result, SolveError};
use crate::exact::Rational;
use crate::model::{RecurrenceSystem, SystemDocument};
use crate::triplesolve::WeightPair;

/// Largest step count [`iterate`] accepts; magnitudes grow geometrically.
pub const DEFAULT_STEP_LIMIT: u64 = 256;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Trajectory {
    system: RecurrenceSystem,
    values: Vec<Vec<Rational>>,
}

impl Trajectory {
    pub fn system(&self) -> &RecurrenceSystem {
        &self.system
    }

    pub fn steps(&self) -> usize {
        self.values.len() - 1
    }

    /// All variable values at step `x`.
    pub fn row(&self, x: usize) -> &[Rational] {
        &self.values[x]
    }

    pub fn rows(&self) -> &[Vec<Rational>] {
        &self.values
    }

    /// One variable's sequence over every step.
    pub fn column(&self, var: usize) -> Vec<Rational> {
        self.values.iter().map(|row| row[var].clone()).collect()
    }

    /// CSV with a header of `x` followed by the variable names.
    pub fn to_csv(&self) -> String {
        let mut out = String::new();
        writeln!(out, "x,{}", self.system.names().join(",")).unwrap();
        for (x, row) in self.values.iter().enumerate() {
            let cells: Vec<String> = row.iter().map(Rational::to_string).collect();
            writeln!(out, "{x},{}", cells.join(",")).unwrap();
        }
        out
    }

    pub fn to_document(&self) -> TrajectoryDocument {
        TrajectoryDocument {
            system: self.system.to_document(),
            steps: self.steps(),
            values: self.values.clone(),
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct TrajectoryDocument {
    pub system: SystemDocument,
    pub steps: usize,
    pub values: Vec<Vec<Rational>>,
}

pub fn iterate(system: &RecurrenceSystem, steps: u64) -> Result<Trajectory> {
    iterate_with_limit(system, steps, DEFAULT_STEP_LIMIT)
}

pub fn iterate_with_limit(system: &RecurrenceSystem, steps: u64, limit: u64) -> Result<Trajectory> {
    if steps > limit {
        return Err(SolveError::StepLimit {
            requested: steps,
            limit,
        });
    }
    let mut values = Vec::with_capacity(steps as usize + 1);
    values.push(system.initial().to_vec());
    for _ in 0..steps {
        let prev = values.last().expect("non-empty");
        let mut next = system.coefficients().mul_vec(prev)?;
        for (v, c) in next.iter_mut().zip(system.affine()) {
            *v += c;
        }
        values.push(next);
    }
    Ok(Trajectory {
        system: system.clone(),
        values,
    })
}

/// Does every variable satisfy `recurrence` at every step where its full
/// history is available?
pub fn check_regular(trajectory: &Trajectory, recurrence: &RegularRecurrence) -> Result<bool> {
    let rows = trajectory.values.len();
    let needed = recurrence.order + 1;
    if rows < needed {
        return Err(SolveError::TrajectoryTooShort { rows, needed });
    }
    let n = trajectory.system.order();
    for x in recurrence.order..rows {
        for var in 0..n {
            let history: Vec<Rational> = (1..=recurrence.order)
                .map(|j| trajectory.values[x - j][var].clone())
                .collect();
            if recurrence.apply(var, &history) != trajectory.values[x][var] {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// `b_x = w1·a_x + w2·c_x` at every step of a three-variable trajectory.
pub fn check_invariant(trajectory: &Trajectory, w: &WeightPair) -> Result<bool> {
    let order = trajectory.system.order();
    if order != 3 {
        return Err(SolveError::Structural(format!(
            "the weight invariant needs three variables, got {order}"
        )));
    }
    Ok(trajectory
        .values
        .iter()
        .all(|row| w.holds(&row[0], &row[1], &row[2])))
}
