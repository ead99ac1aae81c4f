use std::fmt::Write;

use crate::error::ParseError;

use super::{RecurrenceSystem, SystemDocument};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum RenderFormat {
    Text,
    Structured,
}

/// Renders a system. The text form re-parses to an identical system.
pub fn render_system(system: &RecurrenceSystem, format: RenderFormat) -> String {
    match format {
        RenderFormat::Text => render_text(system),
        RenderFormat::Structured => serde_json::to_string_pretty(&system.to_document())
            .expect("system documents always serialize"),
    }
}

fn render_text(system: &RecurrenceSystem) -> String {
    let mut out = String::new();
    let names = system.names();
    for (i, name) in names.iter().enumerate() {
        let mut rhs = String::new();
        let row = system.coefficients().row(i);
        let terms = row
            .iter()
            .zip(names)
            .filter(|(c, _)| !c.is_zero())
            .map(|(c, n)| (c.clone(), Some(n)))
            .chain(Some((system.affine()[i].clone(), None)).filter(|(c, _)| !c.is_zero()));
        for (coeff, var) in terms {
            let magnitude = coeff.abs();
            if rhs.is_empty() {
                if coeff.is_negative() {
                    rhs.push('-');
                }
            } else {
                rhs.push_str(if coeff.is_negative() { " - " } else { " + " });
            }
            match var {
                Some(v) if magnitude.is_one() => write!(rhs, "{v}[x-1]").unwrap(),
                Some(v) => write!(rhs, "{magnitude}*{v}[x-1]").unwrap(),
                None => write!(rhs, "{magnitude}").unwrap(),
            }
        }
        if rhs.is_empty() {
            rhs.push('0');
        }
        writeln!(out, "{name}[x] = {rhs}").unwrap();
    }
    let inits: Vec<String> = names
        .iter()
        .zip(system.initial())
        .map(|(n, v)| format!("{n} = {v}"))
        .collect();
    writeln!(out, "init: {}", inits.join(", ")).unwrap();
    out
}

/// Reads the structured (JSON) form back into a system.
pub fn parse_document(json: &str) -> Result<RecurrenceSystem, ParseError> {
    let doc: SystemDocument = serde_json::from_str(json).map_err(|e| ParseError::Syntax {
        line: e.line(),
        message: e.to_string(),
    })?;
    RecurrenceSystem::from_document(doc).map_err(|e| ParseError::Syntax {
        line: 1,
        message: e.to_string(),
    })
}
