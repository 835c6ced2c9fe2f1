//! Trajectory CSV output.
//!
//! Every number is written as `{:.16e}` (17 significant digits), which parses
//! back to the identical double.

use std::io::{self, Write};

use rotorsim_core::integrate::{Sample, Trajectory};
use rotorsim_core::{CasimirKind, Variant};

/// Invariant columns. `C_PiP` is kept for the non-coincident variants as a
/// diagnostic even though it is not a Casimir there.
pub fn invariant_columns(variant: Variant) -> &'static [CasimirKind] {
    if variant.has_gravity() {
        &CasimirKind::ALL
    } else {
        &[CasimirKind::PP, CasimirKind::PiP]
    }
}

pub fn header(variant: Variant) -> String {
    let mut cols: Vec<&str> = vec!["t", "Pi1", "Pi2", "Pi3", "P1", "P2", "P3"];
    if variant.has_gravity() {
        cols.extend(["Gamma1", "Gamma2", "Gamma3"]);
    }
    if variant.has_rotors() {
        cols.extend(["theta1", "theta2", "l1", "l2"]);
    }
    cols.push("energy");
    cols.extend(invariant_columns(variant).iter().map(|k| k.column()));
    cols.join(",")
}

fn row(sample: &Sample) -> String {
    let s = &sample.state;
    let variant = s.variant();
    let mut vals = vec![sample.t];
    vals.extend(s.pi().to_array());
    vals.extend(s.p().to_array());
    if variant.has_gravity() {
        vals.extend(s.gamma().to_array());
    }
    if variant.has_rotors() {
        vals.extend(s.theta().to_array());
        vals.extend(s.l().to_array());
    }
    vals.push(sample.energy);
    vals.extend(invariant_columns(variant).iter().map(|k| k.value(s)));
    vals.iter().map(|v| format!("{v:.16e}")).collect::<Vec<_>>().join(",")
}

pub fn write_trajectory<W: Write>(out: &mut W, variant: Variant, tr: &Trajectory) -> io::Result<()> {
    writeln!(out, "{}", header(variant))?;
    for s in &tr.samples {
        writeln!(out, "{}", row(s))?;
    }
    Ok(())
}
