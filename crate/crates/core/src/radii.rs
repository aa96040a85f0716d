//! Two-sided brackets for the s-joint spectral radius of a window cocycle.
//!
//! The upper bound is certified by subadditivity: with
//! `a_m = log sup V_s(m-step products)`, any admissible word splits into
//! admissible subwords, so `a` is subadditive, the limit defining the
//! radius equals `inf_m a_m / m`, and every finite depth gives
//! `radius <= exp(a_m / m)`. The estimator takes the minimum over all
//! depths up to `n`.
//!
//! The lower bound is certified by periodic orbits: each cycle `p` of
//! period `k` contributes
//! `exp((theta/k) r_{floor(s)+1}(A^k(p)) + ((1-theta)/k) r_{floor(s)}(A^k(p)))`
//! (for integer s simply `rho_s(A^k(p))^{1/k}`), and the radius is the
//! supremum of these contributions over all periods, so exhausting periods
//! up to `K` certifies the maximum found. The two limits meet, so the gap
//! is pure finite-depth error.
//!
//! All max/min reductions here are sequential folds over lexicographically
//! ordered enumerations with strict-improvement updates, so witnesses are
//! deterministic: ties keep the lexicographically smallest witness.

use crate::dynamics::{
    admissible_words, periodic_orbits, PeriodicOrbit, Subshift, WindowCocycle, Word,
};
use crate::error::{Error, Result};
use crate::linalg::Operator;

/// Relative slack allowed between the two bracket sides before the
/// estimator reports an internal consistency violation.
pub const BRACKET_RTOL: f64 = 1e-9;

/// A certified two-sided estimate `[lower, upper]` for the s-joint
/// spectral radius, with witnesses and depth metadata.
///
/// `upper` is non-increasing in `depth` and `lower` is non-decreasing in
/// `orbit_horizon` by construction.
#[derive(Debug, Clone, PartialEq)]
pub struct RadiusBracket {
    pub s: f64,
    /// Maximal product depth n used by the upper estimate.
    pub depth: usize,
    /// Maximal orbit period K used by the lower estimate.
    pub orbit_horizon: usize,
    pub lower: f64,
    pub lower_witness: PeriodicOrbit,
    pub upper: f64,
    pub upper_witness: Word,
}

impl RadiusBracket {
    pub fn gap(&self) -> f64 {
        self.upper - self.lower
    }

    pub fn midpoint(&self) -> f64 {
        0.5 * (self.upper + self.lower)
    }
}

/// Supremum data at one product depth.
#[derive(Debug, Clone, PartialEq)]
pub struct DepthEntry {
    /// Number of cocycle steps m.
    pub steps: usize,
    /// sup over admissible words of V_s of the m-step product.
    pub sup_volume: f64,
    /// sup_volume^(1/m), an upper bound for the radius.
    pub root: f64,
    /// Lexicographically first word attaining the supremum.
    pub witness: Word,
}

#[derive(Debug, Clone, PartialEq)]
pub struct UpperEstimate {
    pub value: f64,
    pub witness: Word,
    /// The depth at which the minimum was attained.
    pub depth: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct LowerEstimate {
    pub value: f64,
    pub witness: PeriodicOrbit,
}

fn check_depth(n: usize) -> Result<()> {
    if n == 0 {
        return Err(Error::Domain("product depth n must be >= 1".into()));
    }
    Ok(())
}

fn check_horizon(k: usize) -> Result<()> {
    if k == 0 {
        return Err(Error::Domain("orbit horizon K must be >= 1".into()));
    }
    Ok(())
}

/// Per-depth suprema of V_s over all admissible m-step products for
/// 1 <= m <= n, computed in one lexicographic depth-first pass that reuses
/// partial products along shared prefixes.
pub fn upper_estimate_table(a: &WindowCocycle, s: f64, n: usize) -> Result<Vec<DepthEntry>> {
    check_depth(n)?;
    // Validate s once up front rather than deep in the recursion.
    Operator::identity(a.dim()).volume_growth(s)?;

    let w = a.window();
    let max_len = n + w - 1;
    let mut best: Vec<(f64, Vec<u8>)> = vec![(f64::NEG_INFINITY, Vec::new()); n];

    // Roots are the 0-step base words of length w - 1 (for w = 1, the
    // single empty word).
    let mut word: Vec<u8> = Vec::with_capacity(max_len);
    if w == 1 {
        descend(
            a,
            s,
            &mut word,
            &Operator::identity(a.dim()),
            max_len,
            &mut best,
        )?;
    } else {
        for base in admissible_words(a.subshift(), w - 1)? {
            word.clear();
            word.extend_from_slice(base.symbols());
            descend(
                a,
                s,
                &mut word,
                &Operator::identity(a.dim()),
                max_len,
                &mut best,
            )?;
        }
    }

    let mut table = Vec::with_capacity(n);
    for (i, (sup, witness)) in best.into_iter().enumerate() {
        let m = i + 1;
        table.push(DepthEntry {
            steps: m,
            sup_volume: sup,
            root: sup.powf(1.0 / m as f64),
            witness: Word::new(a.subshift(), witness)?,
        });
    }
    Ok(table)
}

fn descend(
    a: &WindowCocycle,
    s: f64,
    word: &mut Vec<u8>,
    product: &Operator,
    max_len: usize,
    best: &mut [(f64, Vec<u8>)],
) -> Result<()> {
    if word.len() == max_len {
        return Ok(());
    }
    let w = a.window();
    let alphabet = a.subshift().alphabet() as u8;
    for b in 0..alphabet {
        if let Some(&last) = word.last() {
            if !a.subshift().allows(last, b) {
                continue;
            }
        }
        word.push(b);
        let len = word.len();
        let factor = a.operator_for(&word[len - w..])?;
        let extended = factor.compose(product);
        let m = len + 1 - w;
        let volume = extended.volume_growth(s)?;
        if volume > best[m - 1].0 {
            best[m - 1] = (volume, word.clone());
        }
        descend(a, s, word, &extended, max_len, best)?;
        word.pop();
    }
    Ok(())
}

/// Reduces a depth table to the certified upper estimate using only the
/// first `n` depths: the minimum of the per-depth roots, with the witness
/// of the (smallest) minimizing depth.
pub fn upper_from_depths(table: &[DepthEntry], n: usize) -> Result<UpperEstimate> {
    check_depth(n)?;
    if table.len() < n {
        return Err(Error::Domain(format!(
            "depth table holds {} entries, need {n}",
            table.len()
        )));
    }
    let mut best = &table[0];
    for entry in &table[1..n] {
        if entry.root < best.root {
            best = entry;
        }
    }
    Ok(UpperEstimate {
        value: best.root,
        witness: best.witness.clone(),
        depth: best.steps,
    })
}

/// Certified upper bound for the s-joint spectral radius:
/// min over 1 <= m <= n of (sup over admissible words of
/// V_s(m-step product))^(1/m).
pub fn upper_estimate(a: &WindowCocycle, s: f64, n: usize) -> Result<UpperEstimate> {
    upper_from_depths(&upper_estimate_table(a, s, n)?, n)
}

/// The certified lower-bound contribution of a single periodic orbit:
/// rho_s(A^k(p))^(1/k) for integer s, and the weighted geometric
/// combination of the neighbouring integer log-radii for fractional s
/// (with r_0 := 0).
pub fn orbit_contribution(a: &WindowCocycle, s: f64, orbit: &PeriodicOrbit) -> Result<f64> {
    let k = orbit.period() as f64;
    let product = a.cycle_product(orbit)?;
    if s.fract() == 0.0 {
        Ok(product.rho_s(s)?.powf(1.0 / k))
    } else {
        let floor = s.floor();
        let theta = s - floor;
        let upper = product.r_s(floor + 1.0)?;
        let lower = if floor == 0.0 {
            0.0
        } else {
            product.r_s(floor)?
        };
        Ok((theta / k * upper + (1.0 - theta) / k * lower).exp())
    }
}

/// Certified lower bound for the s-joint spectral radius: the maximal
/// periodic-orbit contribution over all cyclically admissible words of
/// period at most K.
pub fn lower_estimate(a: &WindowCocycle, s: f64, max_period: usize) -> Result<LowerEstimate> {
    check_horizon(max_period)?;
    Operator::identity(a.dim()).volume_growth(s)?;
    let mut best: Option<LowerEstimate> = None;
    for k in 1..=max_period {
        for orbit in periodic_orbits(a.subshift(), k)? {
            let value = orbit_contribution(a, s, &orbit)?;
            let improves = match &best {
                Some(current) => value > current.value,
                None => true,
            };
            if improves {
                best = Some(LowerEstimate {
                    value,
                    witness: orbit,
                });
            }
        }
    }
    best.ok_or_else(|| {
        Error::Domain(format!(
            "the subshift has no periodic orbits of period <= {max_period}"
        ))
    })
}

/// Combines the two certified estimates into a bracket and checks the
/// sandwich; a violation beyond `BRACKET_RTOL` signals a numerical bug,
/// not a failure of the mathematics.
pub fn bracket(
    a: &WindowCocycle,
    s: f64,
    depth: usize,
    orbit_horizon: usize,
) -> Result<RadiusBracket> {
    let upper = upper_estimate(a, s, depth)?;
    let lower = lower_estimate(a, s, orbit_horizon)?;
    if lower.value > upper.value * (1.0 + BRACKET_RTOL) {
        return Err(Error::Inconsistency(format!(
            "lower estimate {} exceeds upper estimate {} at s = {s}",
            lower.value, upper.value
        )));
    }
    Ok(RadiusBracket {
        s,
        depth,
        orbit_horizon,
        lower: lower.value,
        lower_witness: lower.witness,
        upper: upper.value,
        upper_witness: upper.witness,
    })
}

/// The periodic-orbit supremum evaluated on n-fold repetitions:
/// sup over k <= K and cycles p of rho_s((A^k(p))^n)^(1/(nk)).
///
/// Independent of n by the spectral power identity; at n = 1 and integer s
/// it reproduces `lower_estimate` bit-for-bit, which the tests use as a
/// cross-check of the two code paths.
pub fn corollary_estimate(
    a: &WindowCocycle,
    s: f64,
    repetitions: usize,
    max_period: usize,
) -> Result<f64> {
    if repetitions == 0 {
        return Err(Error::Domain("repetition count n must be >= 1".into()));
    }
    check_horizon(max_period)?;
    Operator::identity(a.dim()).volume_growth(s)?;
    let mut best: Option<f64> = None;
    for k in 1..=max_period {
        for orbit in periodic_orbits(a.subshift(), k)? {
            let product = a.cycle_product(&orbit)?.power(repetitions);
            let value = product.rho_s(s)?.powf(1.0 / ((repetitions * k) as f64));
            if best.map_or(true, |current| value > current) {
                best = Some(value);
            }
        }
    }
    best.ok_or_else(|| {
        Error::Domain(format!(
            "the subshift has no periodic orbits of period <= {max_period}"
        ))
    })
}

/// Sum of the top s Lyapunov exponents of the invariant measure on a
/// periodic orbit: (1/k) r_s(A^k(p)). May be -inf.
pub fn lyapunov_sum_periodic(a: &WindowCocycle, orbit: &PeriodicOrbit, s: f64) -> Result<f64> {
    let product = a.cycle_product(orbit)?;
    Ok(product.r_s(s)? / orbit.period() as f64)
}

/// One finite-depth subadditive average along a trajectory.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct KingmanPoint {
    pub steps: usize,
    /// (1/n) log V_s of the n-step product.
    pub value: f64,
}

/// A compound (exterior-power) product accumulated with renormalization:
/// its top singular value tracks log V_k of the underlying product to
/// machine precision regardless of how rank-collapsed the plain product
/// would be.
struct CompoundAccumulator {
    order: usize,
    product: Operator,
    log_scale: f64,
}

impl CompoundAccumulator {
    fn new(dim: usize, order: usize) -> Result<Self> {
        Ok(Self {
            order,
            product: Operator::identity(dim).compound(order)?,
            log_scale: 0.0,
        })
    }

    fn push(&mut self, factor: &Operator) -> Result<()> {
        self.product = factor.compound(self.order)?.compose(&self.product);
        let magnitude = self
            .product
            .matrix()
            .iter()
            .fold(0.0f64, |acc, &x| acc.max(x.abs()));
        if magnitude > 1e100 || (magnitude < 1e-100 && magnitude > 0.0) {
            self.product = self.product.scaled(1.0 / magnitude)?;
            self.log_scale += magnitude.ln();
        }
        Ok(())
    }

    /// log V_order of the accumulated product; -inf when the volume is
    /// exactly 0.
    fn log_volume(&self) -> Result<f64> {
        let top = self.product.operator_norm()?;
        if top == 0.0 {
            Ok(f64::NEG_INFINITY)
        } else {
            Ok(self.log_scale + top.ln())
        }
    }
}

/// Finite-n subadditive averages (1/n) log V_s(A^n(x)) along a single
/// trajectory, evaluated at the given checkpoints.
///
/// Volumes of long products are read off compound products (V_k of the
/// product is the top singular value of the compound product), which stay
/// numerically faithful at depths where the plain product has collapsed to
/// numerical rank one. At s = d the compound is the running determinant
/// product, so looping a periodic orbit telescopes exactly.
pub fn kingman_estimate(
    a: &WindowCocycle,
    trajectory: &Word,
    s: f64,
    checkpoints: &[usize],
) -> Result<Vec<KingmanPoint>> {
    if checkpoints.is_empty() {
        return Err(Error::Domain("checkpoint list must be non-empty".into()));
    }
    if checkpoints.iter().any(|&n| n == 0) {
        return Err(Error::Domain("checkpoints must be >= 1".into()));
    }
    if checkpoints.windows(2).any(|w| w[1] <= w[0]) {
        return Err(Error::Domain(
            "checkpoints must be strictly increasing".into(),
        ));
    }
    let d = a.dim();
    Operator::identity(d).volume_growth(s)?;
    let max_steps = *checkpoints.last().expect("non-empty");
    let w = a.window();
    if trajectory.len() + 1 < max_steps + w {
        return Err(Error::Domain(format!(
            "trajectory of length {} is too short for {max_steps} steps with window {w}",
            trajectory.len()
        )));
    }
    if !a.subshift().is_word_admissible(trajectory.symbols()) {
        return Err(Error::Domain(
            "trajectory is not admissible for this cocycle's subshift".into(),
        ));
    }

    // Integer volume orders feeding log V_s.
    let df = d as f64;
    let orders: Vec<usize> = if s >= df {
        vec![d]
    } else if s.fract() == 0.0 {
        vec![s as usize]
    } else if s < 1.0 {
        vec![1]
    } else {
        vec![s.floor() as usize, s.floor() as usize + 1]
    };
    let mut accumulators: Vec<CompoundAccumulator> = orders
        .iter()
        .map(|&k| CompoundAccumulator::new(d, k))
        .collect::<Result<_>>()?;

    let log_volume_s = |logs: &[f64]| -> f64 {
        if s >= df {
            (s / df) * logs[0]
        } else if s.fract() == 0.0 {
            logs[0]
        } else if s < 1.0 {
            s * logs[0]
        } else {
            let theta = s - s.floor();
            theta * logs[1] + (1.0 - theta) * logs[0]
        }
    };

    let mut out = Vec::with_capacity(checkpoints.len());
    let mut next = 0usize;
    for step in 0..max_steps {
        let factor = a.operator_for(&trajectory.symbols()[step..step + w])?;
        for acc in &mut accumulators {
            acc.push(factor)?;
        }
        let n = step + 1;
        if n == checkpoints[next] {
            let logs: Vec<f64> = accumulators
                .iter()
                .map(|acc| acc.log_volume())
                .collect::<Result<_>>()?;
            out.push(KingmanPoint {
                steps: n,
                value: log_volume_s(&logs) / n as f64,
            });
            next += 1;
            if next == checkpoints.len() {
                break;
            }
        }
    }
    Ok(out)
}

#[derive(Debug, Clone, PartialEq)]
pub struct ContinuityRow {
    pub epsilon: f64,
    pub bracket: RadiusBracket,
    /// |midpoint(eps) - midpoint(0)|.
    pub drift: f64,
    /// eps times the Hölder norm of the direction: the distance moved in
    /// cocycle space.
    pub holder_distance: f64,
}

/// Brackets of A + eps B for a decreasing sequence of eps, against the
/// reference bracket of A.
#[derive(Debug, Clone, PartialEq)]
pub struct ContinuityReport {
    pub reference: RadiusBracket,
    pub rows: Vec<ContinuityRow>,
}

/// Probes continuity of the radius along the segment A + eps B.
pub fn continuity_probe(
    a: &WindowCocycle,
    direction: &WindowCocycle,
    alpha: f64,
    s: f64,
    depth: usize,
    orbit_horizon: usize,
    epsilons: &[f64],
) -> Result<ContinuityReport> {
    if epsilons.is_empty() {
        return Err(Error::Domain("epsilon list must be non-empty".into()));
    }
    if epsilons.iter().any(|&e| !(e > 0.0) || !e.is_finite()) {
        return Err(Error::Domain(
            "epsilons must be positive finite reals".into(),
        ));
    }
    if epsilons.windows(2).any(|w| w[1] >= w[0]) {
        return Err(Error::Domain("epsilons must be strictly decreasing".into()));
    }
    let direction_norm = direction.holder_norm(alpha)?;
    let reference = bracket(a, s, depth, orbit_horizon)?;
    let base_midpoint = reference.midpoint();
    let mut rows = Vec::with_capacity(epsilons.len());
    for &eps in epsilons {
        let perturbed = a.add_scaled(direction, eps)?;
        let bracket = bracket(&perturbed, s, depth, orbit_horizon)?;
        let drift = (bracket.midpoint() - base_midpoint).abs();
        rows.push(ContinuityRow {
            epsilon: eps,
            bracket,
            drift,
            holder_distance: eps * direction_norm,
        });
    }
    Ok(ContinuityReport { reference, rows })
}

/// Result of the level-set bisection in s.
#[derive(Debug, Clone, PartialEq)]
pub struct LevelSetResult {
    pub s_lower: f64,
    pub s_upper: f64,
    pub bracket_lower: RadiusBracket,
    pub bracket_upper: RadiusBracket,
}

/// Bisects on s for the level `target` of the bracket midpoint, assuming
/// the midpoint decreases in s on [s_min, s_max] (the caller certifies the
/// sign change). Stops when the s-interval is narrower than `tolerance`.
pub fn find_s_for_level(
    a: &WindowCocycle,
    target: f64,
    s_min: f64,
    s_max: f64,
    depth: usize,
    orbit_horizon: usize,
    tolerance: f64,
) -> Result<LevelSetResult> {
    if !(target > 0.0) || !target.is_finite() {
        return Err(Error::Domain(format!(
            "level must be a positive finite real, got {target}"
        )));
    }
    if !(s_min > 0.0) || !(s_max > s_min) {
        return Err(Error::Domain(format!(
            "need 0 < s_min < s_max, got s_min = {s_min}, s_max = {s_max}"
        )));
    }
    if !(tolerance > 0.0) {
        return Err(Error::Domain("tolerance must be positive".into()));
    }
    let mut lo_s = s_min;
    let mut hi_s = s_max;
    let mut lo_bracket = bracket(a, lo_s, depth, orbit_horizon)?;
    let mut hi_bracket = bracket(a, hi_s, depth, orbit_horizon)?;
    let mut lo_value = lo_bracket.midpoint();
    let mut hi_value = hi_bracket.midpoint();
    if !(lo_value > target) || !(hi_value < target) {
        return Err(Error::Domain(format!(
            "no sign change: midpoint({s_min}) = {lo_value}, midpoint({s_max}) = {hi_value}, level = {target}"
        )));
    }
    while hi_s - lo_s > tolerance {
        let mid_s = 0.5 * (lo_s + hi_s);
        let mid_bracket = bracket(a, mid_s, depth, orbit_horizon)?;
        let mid_value = mid_bracket.midpoint();
        let slack = 1e-9 * lo_value.abs().max(1.0);
        if mid_value > lo_value + slack || mid_value < hi_value - slack {
            return Err(Error::Inconsistency(format!(
                "midpoint({mid_s}) = {mid_value} is not between midpoint({hi_s}) = {hi_value} \
                 and midpoint({lo_s}) = {lo_value}: the radius is not monotone in s here"
            )));
        }
        if mid_value > target {
            lo_s = mid_s;
            lo_value = mid_value;
            lo_bracket = mid_bracket;
        } else {
            hi_s = mid_s;
            hi_value = mid_value;
            hi_bracket = mid_bracket;
        }
    }
    Ok(LevelSetResult {
        s_lower: lo_s,
        s_upper: hi_s,
        bracket_lower: lo_bracket,
        bracket_upper: hi_bracket,
    })
}

/// Convenience constructor used throughout the tests: the full 2-shift
/// cocycle sending 0 to [[1,1],[0,1]] and 1 to [[1,0],[1,1]], whose radius
/// at s = 1 is the golden ratio.
pub fn golden_pair() -> WindowCocycle {
    let shift = Subshift::full(2).expect("valid");
    let mut table = std::collections::BTreeMap::new();
    table.insert(
        vec![0],
        Operator::new(2, &[1.0, 1.0, 0.0, 1.0]).expect("valid"),
    );
    table.insert(
        vec![1],
        Operator::new(2, &[1.0, 0.0, 1.0, 1.0]).expect("valid"),
    );
    WindowCocycle::new(shift, 1, 2, 1.0, table).expect("valid")
}
