//! The five report commands. Each returns the complete CSV document as a
//! string (printed by main only on success) so that validation failures
//! never leave partial output behind.

use std::path::Path;

use specrad::dynamics::periodic_orbits;
use specrad::radii;

use crate::error::CliError;
use crate::report::{fmt_float, Csv};
use crate::specfile::{BuiltSystem, CocycleSpecFile};

/// Desk-scale envelope; larger inputs enumerate exponentially many words
/// and are refused unless --force is given.
pub struct Envelope {
    pub max_alphabet: usize,
    pub max_dim: usize,
    pub max_window: usize,
    pub max_depth: usize,
    pub max_orbit_period: usize,
}

pub const ENVELOPE: Envelope = Envelope {
    max_alphabet: 4,
    max_dim: 8,
    max_window: 3,
    max_depth: 16,
    max_orbit_period: 10,
};

fn check_envelope(
    system: &BuiltSystem,
    depth: Option<usize>,
    orbit_period: Option<usize>,
    force: bool,
) -> Result<(), CliError> {
    if force {
        return Ok(());
    }
    let cocycle = &system.cocycle;
    let mut violations = Vec::new();
    if cocycle.subshift().alphabet() > ENVELOPE.max_alphabet {
        violations.push(format!(
            "alphabet {} > {}",
            cocycle.subshift().alphabet(),
            ENVELOPE.max_alphabet
        ));
    }
    if cocycle.dim() > ENVELOPE.max_dim {
        violations.push(format!("dim {} > {}", cocycle.dim(), ENVELOPE.max_dim));
    }
    if cocycle.window() > ENVELOPE.max_window {
        violations.push(format!(
            "window {} > {}",
            cocycle.window(),
            ENVELOPE.max_window
        ));
    }
    if let Some(n) = depth {
        if n > ENVELOPE.max_depth {
            violations.push(format!("depth {n} > {}", ENVELOPE.max_depth));
        }
    }
    if let Some(k) = orbit_period {
        if k > ENVELOPE.max_orbit_period {
            violations.push(format!("orbit period {k} > {}", ENVELOPE.max_orbit_period));
        }
    }
    if violations.is_empty() {
        Ok(())
    } else {
        Err(CliError::Envelope(format!(
            "desk-scale envelope exceeded ({}); pass --force to run anyway",
            violations.join(", ")
        )))
    }
}

fn check_s(s: f64) -> Result<(), CliError> {
    if !(s > 0.0) || !s.is_finite() {
        return Err(CliError::Validation(format!(
            "--s must be positive finite, got {s}"
        )));
    }
    Ok(())
}

fn check_positive_list(name: &str, values: &[usize]) -> Result<(), CliError> {
    if values.is_empty() {
        return Err(CliError::Validation(format!("--{name} must be non-empty")));
    }
    if values.iter().any(|&v| v == 0) {
        return Err(CliError::Validation(format!(
            "--{name} values must be >= 1"
        )));
    }
    Ok(())
}

/// `radii`: one row per s with the certified bracket and its witnesses.
pub fn cmd_radii(
    file: &Path,
    s_values: &[f64],
    depth: usize,
    orbits: usize,
    force: bool,
) -> Result<String, CliError> {
    if s_values.is_empty() {
        return Err(CliError::Validation(
            "--s must list at least one value".into(),
        ));
    }
    for &s in s_values {
        check_s(s)?;
    }
    check_positive_list("depth", &[depth])?;
    check_positive_list("orbits", &[orbits])?;
    let system = CocycleSpecFile::load(file)?.build()?;
    check_envelope(&system, Some(depth), Some(orbits), force)?;

    let mut csv = Csv::new(&[
        "s",
        "lower",
        "lower_witness_cycle",
        "upper",
        "upper_witness_word",
        "gap",
        "depth",
        "K",
    ]);
    for &s in s_values {
        let bracket = radii::bracket(&system.cocycle, s, depth, orbits)?;
        csv.push_row(vec![
            fmt_float(s),
            fmt_float(bracket.lower),
            bracket.lower_witness.to_string(),
            fmt_float(bracket.upper),
            bracket.upper_witness.to_string(),
            fmt_float(bracket.gap()),
            depth.to_string(),
            orbits.to_string(),
        ]);
    }
    Ok(csv.into_string())
}

/// `berger-wang`: the gap table along increasing (depth, orbit) pairs; a
/// non-monotone gap column is an invariant violation (exit 4).
pub fn cmd_berger_wang(
    file: &Path,
    s: f64,
    depths: &[usize],
    orbits: &[usize],
    force: bool,
) -> Result<String, CliError> {
    check_s(s)?;
    check_positive_list("depths", depths)?;
    check_positive_list("orbits", orbits)?;
    if depths.len() != orbits.len() {
        return Err(CliError::Validation(format!(
            "--depths and --orbits must pair up ({} vs {} values)",
            depths.len(),
            orbits.len()
        )));
    }
    if depths.windows(2).any(|w| w[1] <= w[0]) || orbits.windows(2).any(|w| w[1] <= w[0]) {
        return Err(CliError::Validation(
            "--depths and --orbits must be strictly increasing".into(),
        ));
    }
    let system = CocycleSpecFile::load(file)?.build()?;
    let max_depth = *depths.last().expect("non-empty");
    let max_orbits = *orbits.last().expect("non-empty");
    check_envelope(&system, Some(max_depth), Some(max_orbits), force)?;

    let table = radii::upper_estimate_table(&system.cocycle, s, max_depth)?;
    let mut rows = Vec::new();
    let mut previous_gap = f64::INFINITY;
    for (&n, &k) in depths.iter().zip(orbits) {
        let upper = radii::upper_from_depths(&table, n)?.value;
        let lower = radii::lower_estimate(&system.cocycle, s, k)?.value;
        if lower > upper * (1.0 + radii::BRACKET_RTOL) {
            return Err(CliError::Invariant(format!(
                "lower estimate {lower} exceeds upper estimate {upper} at (n = {n}, K = {k})"
            )));
        }
        let gap = upper - lower;
        if gap > previous_gap * (1.0 + 1e-12) {
            return Err(CliError::Invariant(format!(
                "gap increased from {previous_gap} to {gap} at (n = {n}, K = {k})"
            )));
        }
        previous_gap = gap;
        rows.push((n, k, lower, upper, gap));
    }
    let mut csv = Csv::new(&["n", "K", "lower", "upper", "gap"]);
    for (n, k, lower, upper, gap) in rows {
        csv.push_row(vec![
            n.to_string(),
            k.to_string(),
            fmt_float(lower),
            fmt_float(upper),
            fmt_float(gap),
        ]);
    }
    Ok(csv.into_string())
}

/// `continuity`: brackets of A + eps B for decreasing eps against the
/// reference bracket of A (emitted as the eps = 0 row).
pub fn cmd_continuity(
    file: &Path,
    direction_file: &Path,
    s: f64,
    epsilons: &[f64],
    depth: usize,
    orbits: usize,
    force: bool,
) -> Result<String, CliError> {
    check_s(s)?;
    if epsilons.is_empty() {
        return Err(CliError::Validation(
            "--eps must list at least one value".into(),
        ));
    }
    let system = CocycleSpecFile::load(file)?.build()?;
    let direction = CocycleSpecFile::load(direction_file)?.build()?;
    check_envelope(&system, Some(depth), Some(orbits), force)?;
    let a = &system.cocycle;
    let b = &direction.cocycle;
    if a.subshift() != b.subshift() || a.window() != b.window() || a.dim() != b.dim() {
        return Err(CliError::Validation(
            "direction file must share alphabet, transition, window and dim with the base file"
                .into(),
        ));
    }
    let report = radii::continuity_probe(a, b, a.alpha(), s, depth, orbits, epsilons).map_err(
        |e| match e {
            specrad::Error::Domain(msg) => CliError::Validation(format!("--eps: {msg}")),
            other => other.into(),
        },
    )?;

    let mut csv = Csv::new(&[
        "eps",
        "lower",
        "upper",
        "midpoint",
        "midpoint_drift",
        "holder_distance",
    ]);
    let reference = &report.reference;
    csv.push_row(vec![
        fmt_float(0.0),
        fmt_float(reference.lower),
        fmt_float(reference.upper),
        fmt_float(reference.midpoint()),
        fmt_float(0.0),
        fmt_float(0.0),
    ]);
    for row in &report.rows {
        csv.push_row(vec![
            fmt_float(row.epsilon),
            fmt_float(row.bracket.lower),
            fmt_float(row.bracket.upper),
            fmt_float(row.bracket.midpoint()),
            fmt_float(row.drift),
            fmt_float(row.holder_distance),
        ]);
    }
    Ok(csv.into_string())
}

/// `orbits`: every periodic orbit up to the requested period with its
/// radius and per-step lower-bound contribution for each s, sorted by the
/// contribution at the first s (descending; enumeration order breaks
/// ties).
pub fn cmd_orbits(
    file: &Path,
    max_period: usize,
    s_values: &[f64],
    primitive_only: bool,
    force: bool,
) -> Result<String, CliError> {
    check_positive_list("max-period", &[max_period])?;
    if s_values.is_empty() {
        return Err(CliError::Validation(
            "--s must list at least one value".into(),
        ));
    }
    for &s in s_values {
        check_s(s)?;
    }
    let system = CocycleSpecFile::load(file)?.build()?;
    check_envelope(&system, None, Some(max_period), force)?;
    let a = &system.cocycle;

    let mut rows: Vec<(usize, String, Vec<(f64, f64)>)> = Vec::new();
    for k in 1..=max_period {
        for orbit in periodic_orbits(a.subshift(), k)? {
            if primitive_only && !orbit.is_primitive() {
                continue;
            }
            let mut values = Vec::with_capacity(s_values.len());
            for &s in s_values {
                let product = a.cycle_product(&orbit)?;
                let rho = product.rho_s(s)?;
                let contribution = radii::orbit_contribution(a, s, &orbit)?;
                values.push((rho, contribution));
            }
            rows.push((k, orbit.to_string(), values));
        }
    }
    rows.sort_by(|left, right| {
        right.2[0]
            .1
            .partial_cmp(&left.2[0].1)
            .expect("contributions are not NaN")
    });

    let mut header: Vec<String> = vec!["k".into(), "cycle".into()];
    for &s in s_values {
        header.push(format!("rho_s_{s}"));
        header.push(format!("per_step_s_{s}"));
    }
    let header_refs: Vec<&str> = header.iter().map(String::as_str).collect();
    let mut csv = Csv::new(&header_refs);
    for (k, cycle, values) in rows {
        let mut fields = vec![k.to_string(), cycle];
        for (rho, contribution) in values {
            fields.push(fmt_float(rho));
            fields.push(fmt_float(contribution));
        }
        csv.push_row(fields);
    }
    Ok(csv.into_string())
}

/// `truncate`: rho_s of increasingly fine finite sections of the file's
/// compact model, with tail error bounds.
pub fn cmd_truncate(file: &Path, ranks: &[usize], s: f64) -> Result<String, CliError> {
    check_s(s)?;
    check_positive_list("ranks", ranks)?;
    let spec = CocycleSpecFile::load(file)?;
    let system = spec.build()?;
    let (model, _) = system.compact.ok_or_else(|| {
        CliError::Validation("compact_model: required by the truncate command".into())
    })?;
    let rows = model
        .spectral_convergence(s, ranks)
        .map_err(|e| CliError::Validation(format!("--ranks: {e}")))?;
    let mut csv = Csv::new(&["rank", "rho_s", "error_bound"]);
    for row in rows {
        csv.push_row(vec![
            row.rank.to_string(),
            fmt_float(row.rho_s),
            fmt_float(row.error_bound),
        ]);
    }
    Ok(csv.into_string())
}
