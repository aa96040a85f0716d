//! Base dynamics and cocycles: two-sided subshifts of finite type,
//! admissible-word and periodic-orbit enumeration, locally constant
//! (window) cocycles with their products, the Hölder norm, and Markov
//! trajectory sampling.
//!
//! Base dynamics are restricted to SFTs, which satisfy the closing
//! property needed by the bracket estimators by construction, so no
//! shadowing machinery appears here. Cocycles are restricted to locally
//! constant maps: the value at a point depends only on the window
//! `x_0 .. x_{w-1}`, which makes the map Hölder for every exponent.

use std::collections::BTreeMap;
use std::fmt;

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::linalg::Operator;

/// A two-sided subshift of finite type over the alphabet {0, .., q-1}:
/// symbol `b` may follow symbol `a` iff `transition[a][b]`.
///
/// Every symbol is required to have at least one allowed successor and one
/// allowed predecessor, so every finite admissible word extends to a
/// bi-infinite admissible sequence.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Subshift {
    alphabet: usize,
    transition: Vec<Vec<bool>>,
}

impl Subshift {
    /// The full shift: the all-ones transition matrix.
    pub fn full(alphabet: usize) -> Result<Self> {
        Self::new(alphabet, vec![vec![true; alphabet]; alphabet])
    }

    pub fn new(alphabet: usize, transition: Vec<Vec<bool>>) -> Result<Self> {
        if alphabet == 0 {
            return Err(Error::InvalidInput("alphabet size must be >= 1".into()));
        }
        if transition.len() != alphabet || transition.iter().any(|row| row.len() != alphabet) {
            return Err(Error::InvalidInput(format!(
                "transition matrix must be {alphabet}x{alphabet}"
            )));
        }
        for a in 0..alphabet {
            if !transition[a].iter().any(|&x| x) {
                return Err(Error::InvalidInput(format!(
                    "symbol {a} has no allowed successor"
                )));
            }
            if !(0..alphabet).any(|b| transition[b][a]) {
                return Err(Error::InvalidInput(format!(
                    "symbol {a} has no allowed predecessor"
                )));
            }
        }
        Ok(Self {
            alphabet,
            transition,
        })
    }

    /// Builds from a 0/1 matrix, rejecting any other entry value.
    pub fn from_zero_one(rows: &[Vec<u8>]) -> Result<Self> {
        let alphabet = rows.len();
        let mut transition = Vec::with_capacity(alphabet);
        for (i, row) in rows.iter().enumerate() {
            let mut out = Vec::with_capacity(row.len());
            for (j, &x) in row.iter().enumerate() {
                match x {
                    0 => out.push(false),
                    1 => out.push(true),
                    other => {
                        return Err(Error::InvalidInput(format!(
                            "transition entry ({i},{j}) must be 0 or 1, got {other}"
                        )))
                    }
                }
            }
            transition.push(out);
        }
        Self::new(alphabet, transition)
    }

    pub fn alphabet(&self) -> usize {
        self.alphabet
    }

    pub fn allows(&self, a: u8, b: u8) -> bool {
        self.transition[a as usize][b as usize]
    }

    pub fn is_full(&self) -> bool {
        self.transition.iter().all(|row| row.iter().all(|&x| x))
    }

    pub fn transition_rows(&self) -> Vec<Vec<u8>> {
        self.transition
            .iter()
            .map(|row| row.iter().map(|&x| u8::from(x)).collect())
            .collect()
    }

    pub fn is_word_admissible(&self, symbols: &[u8]) -> bool {
        symbols.iter().all(|&s| (s as usize) < self.alphabet)
            && symbols.windows(2).all(|w| self.allows(w[0], w[1]))
    }

    pub fn is_cycle_admissible(&self, symbols: &[u8]) -> bool {
        !symbols.is_empty()
            && self.is_word_admissible(symbols)
            && self.allows(symbols[symbols.len() - 1], symbols[0])
    }

    fn first_word(&self, len: usize) -> Vec<u8> {
        let mut word = Vec::with_capacity(len);
        for i in 0..len {
            let prev = if i == 0 { None } else { Some(word[i - 1]) };
            word.push(self.min_symbol_after(prev, 0).expect("no dead symbols"));
        }
        word
    }

    fn min_symbol_after(&self, prev: Option<u8>, from: u8) -> Option<u8> {
        (from..self.alphabet as u8).find(|&b| match prev {
            Some(a) => self.allows(a, b),
            None => true,
        })
    }
}

/// Formats a symbol sequence as a compact string ("0121"); symbols above 9
/// use lowercase letters, base-36 style.
pub fn format_symbols(symbols: &[u8]) -> String {
    symbols
        .iter()
        .map(|&s| char::from_digit(s as u32, 36).unwrap_or('?'))
        .collect()
}

/// Parses a compact symbol string back into symbols.
pub fn parse_symbols(text: &str) -> Result<Vec<u8>> {
    text.chars()
        .map(|c| {
            c.to_digit(36)
                .map(|d| d as u8)
                .ok_or_else(|| Error::InvalidInput(format!("invalid symbol character {c:?}")))
        })
        .collect()
}

/// A finite admissible word (cylinder coordinates of a point).
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct Word {
    symbols: Vec<u8>,
}

impl Word {
    pub fn new(shift: &Subshift, symbols: Vec<u8>) -> Result<Self> {
        if !shift.is_word_admissible(&symbols) {
            return Err(Error::Domain(format!(
                "word \"{}\" is not admissible for the subshift",
                format_symbols(&symbols)
            )));
        }
        Ok(Self { symbols })
    }

    fn unchecked(symbols: Vec<u8>) -> Self {
        Self { symbols }
    }

    pub fn symbols(&self) -> &[u8] {
        &self.symbols
    }

    pub fn len(&self) -> usize {
        self.symbols.len()
    }

    pub fn is_empty(&self) -> bool {
        self.symbols.is_empty()
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&format_symbols(&self.symbols))
    }
}

/// A cyclically admissible word of length k, i.e. a point of Fix(f^k).
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct PeriodicOrbit {
    cycle: Word,
}

impl PeriodicOrbit {
    pub fn new(shift: &Subshift, symbols: Vec<u8>) -> Result<Self> {
        if !shift.is_cycle_admissible(&symbols) {
            return Err(Error::Domain(format!(
                "cycle \"{}\" is not cyclically admissible for the subshift",
                format_symbols(&symbols)
            )));
        }
        Ok(Self {
            cycle: Word::unchecked(symbols),
        })
    }

    pub fn cycle(&self) -> &Word {
        &self.cycle
    }

    pub fn period(&self) -> usize {
        self.cycle.len()
    }

    /// True when the cycle is not the repetition of a strictly shorter
    /// cycle.
    pub fn is_primitive(&self) -> bool {
        let k = self.period();
        let s = self.cycle.symbols();
        for d in 1..k {
            if k % d == 0 && (d..k).all(|i| s[i] == s[i % d]) {
                return false;
            }
        }
        true
    }
}

impl fmt::Display for PeriodicOrbit {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.cycle.fmt(f)
    }
}

/// Iterator over all admissible words of a fixed length, in lexicographic
/// order.
pub struct AdmissibleWords<'a> {
    shift: &'a Subshift,
    next: Option<Vec<u8>>,
}

impl Iterator for AdmissibleWords<'_> {
    type Item = Word;

    fn next(&mut self) -> Option<Word> {
        let current = self.next.take()?;
        self.next = self.advance(&current);
        Some(Word::unchecked(current))
    }
}

impl AdmissibleWords<'_> {
    fn advance(&self, current: &[u8]) -> Option<Vec<u8>> {
        let mut word = current.to_vec();
        let len = word.len();
        let mut pos = len;
        loop {
            if pos == 0 {
                return None;
            }
            pos -= 1;
            let prev = if pos == 0 { None } else { Some(word[pos - 1]) };
            if let Some(b) = self.shift.min_symbol_after(prev, word[pos] + 1) {
                word[pos] = b;
                for i in (pos + 1)..len {
                    word[i] = self
                        .shift
                        .min_symbol_after(Some(word[i - 1]), 0)
                        .expect("no dead symbols");
                }
                return Some(word);
            }
        }
    }
}

/// Exactly the admissible words of length `n`, each once, lexicographic.
pub fn admissible_words(shift: &Subshift, n: usize) -> Result<AdmissibleWords<'_>> {
    if n == 0 {
        return Err(Error::Domain("word length must be >= 1".into()));
    }
    Ok(AdmissibleWords {
        shift,
        next: Some(shift.first_word(n)),
    })
}

/// All cyclically admissible words of length `k`, in bijection with
/// Fix(f^k); the count equals the trace of the k-th power of the
/// transition matrix. Non-primitive cycles are included; filter with
/// [`PeriodicOrbit::is_primitive`] to deduplicate by primitive root.
pub fn periodic_orbits(
    shift: &Subshift,
    k: usize,
) -> Result<impl Iterator<Item = PeriodicOrbit> + '_> {
    if k == 0 {
        return Err(Error::Domain("orbit period must be >= 1".into()));
    }
    Ok(admissible_words(shift, k)?.filter_map(move |w| {
        if shift.allows(w.symbols()[k - 1], w.symbols()[0]) {
            Some(PeriodicOrbit { cycle: w })
        } else {
            None
        }
    }))
}

/// A locally constant operator-valued map over a subshift: the value at a
/// point depends only on the coordinates `x_0 .. x_{w-1}`, tabulated per
/// admissible window word. The Hölder exponent `alpha` is metadata used by
/// the Hölder norm and the continuity probe.
#[derive(Debug, Clone, PartialEq)]
pub struct WindowCocycle {
    subshift: Subshift,
    window: usize,
    dim: usize,
    alpha: f64,
    table: BTreeMap<Vec<u8>, Operator>,
}

impl WindowCocycle {
    pub fn new(
        subshift: Subshift,
        window: usize,
        dim: usize,
        alpha: f64,
        table: BTreeMap<Vec<u8>, Operator>,
    ) -> Result<Self> {
        if window == 0 {
            return Err(Error::InvalidInput("window must be >= 1".into()));
        }
        if dim == 0 {
            return Err(Error::InvalidInput("cocycle dimension must be >= 1".into()));
        }
        if !(alpha > 0.0) || !alpha.is_finite() {
            return Err(Error::InvalidInput(format!(
                "Hölder exponent must be a positive finite real, got {alpha}"
            )));
        }
        for (key, op) in &table {
            if !subshift.is_word_admissible(key) {
                return Err(Error::InvalidInput(format!(
                    "operator table contains inadmissible window \"{}\"",
                    format_symbols(key)
                )));
            }
            if key.len() != window {
                return Err(Error::InvalidInput(format!(
                    "window \"{}\" has length {}, expected {window}",
                    format_symbols(key),
                    key.len()
                )));
            }
            if op.dim() != dim {
                return Err(Error::InvalidInput(format!(
                    "operator for window \"{}\" has dimension {}, expected {dim}",
                    format_symbols(key),
                    op.dim()
                )));
            }
        }
        for word in admissible_words(&subshift, window)? {
            if !table.contains_key(word.symbols()) {
                return Err(Error::InvalidInput(format!(
                    "operator table is missing admissible window \"{word}\""
                )));
            }
        }
        Ok(Self {
            subshift,
            window,
            dim,
            alpha,
            table,
        })
    }

    /// Window-1 cocycle taking the same value on every symbol.
    pub fn constant(subshift: Subshift, op: Operator, alpha: f64) -> Result<Self> {
        let table = (0..subshift.alphabet() as u8)
            .map(|s| (vec![s], op.clone()))
            .collect();
        let dim = op.dim();
        Self::new(subshift, 1, dim, alpha, table)
    }

    pub fn subshift(&self) -> &Subshift {
        &self.subshift
    }

    pub fn window(&self) -> usize {
        self.window
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn table(&self) -> &BTreeMap<Vec<u8>, Operator> {
        &self.table
    }

    pub fn operator_for(&self, window: &[u8]) -> Result<&Operator> {
        self.table.get(window).ok_or_else(|| {
            Error::Domain(format!(
                "window \"{}\" is not admissible for this cocycle",
                format_symbols(window)
            ))
        })
    }

    /// n-step cocycle product read from a word of length n + w - 1: the
    /// factor at position i is the operator of the window starting at i,
    /// multiplied rightmost-first, so the step-0 factor acts first. A word
    /// of length w - 1 yields the 0-step product, the identity.
    pub fn product(&self, word: &Word) -> Result<Operator> {
        if !self.subshift.is_word_admissible(word.symbols()) {
            return Err(Error::Domain(format!(
                "word \"{word}\" is not admissible for this cocycle's subshift"
            )));
        }
        if word.len() + 1 < self.window {
            return Err(Error::Domain(format!(
                "word of length {} is too short for window {} (need at least w - 1 symbols)",
                word.len(),
                self.window
            )));
        }
        let steps = word.len() + 1 - self.window;
        let mut acc = Operator::identity(self.dim);
        for pos in 0..steps {
            let factor = self.operator_for(&word.symbols()[pos..pos + self.window])?;
            acc = factor.compose(&acc);
        }
        Ok(acc)
    }

    /// A^k(p) for a periodic point p: the k-step product with windows read
    /// cyclically around the cycle word.
    pub fn cycle_product(&self, orbit: &PeriodicOrbit) -> Result<Operator> {
        let cycle = orbit.cycle().symbols();
        if !self.subshift.is_cycle_admissible(cycle) {
            return Err(Error::Domain(format!(
                "cycle \"{orbit}\" is not cyclically admissible for this cocycle's subshift"
            )));
        }
        let k = cycle.len();
        let mut acc = Operator::identity(self.dim);
        let mut window = vec![0u8; self.window];
        for pos in 0..k {
            for (j, slot) in window.iter_mut().enumerate() {
                *slot = cycle[(pos + j) % k];
            }
            acc = self.operator_for(&window)?.compose(&acc);
        }
        Ok(acc)
    }

    /// sup_x ||A(x)|| plus the Hölder seminorm
    /// sup_{x != y} ||A(x) - A(y)|| / d(x, y)^alpha for the shift metric
    /// d(x, y) = 2^(-first disagreeing coordinate). Both suprema are finite
    /// maxima over admissible window words.
    pub fn holder_norm(&self, alpha: f64) -> Result<f64> {
        if !(alpha > 0.0) || !alpha.is_finite() {
            return Err(Error::Domain(format!(
                "Hölder exponent must be a positive finite real, got {alpha}"
            )));
        }
        let mut sup_norm: f64 = 0.0;
        for op in self.table.values() {
            sup_norm = sup_norm.max(op.operator_norm()?);
        }
        let entries: Vec<(&Vec<u8>, &Operator)> = self.table.iter().collect();
        let mut seminorm: f64 = 0.0;
        for i in 0..entries.len() {
            for j in (i + 1)..entries.len() {
                let (u, a) = entries[i];
                let (v, b) = entries[j];
                let sep = u
                    .iter()
                    .zip(v.iter())
                    .position(|(x, y)| x != y)
                    .expect("distinct window words differ within the window");
                let diff = a.add_scaled(b, -1.0)?.operator_norm()?;
                // d(x, y)^alpha = 2^(-alpha sep): two points whose windows
                // first differ at coordinate sep can agree on every
                // coordinate of smaller absolute index.
                seminorm = seminorm.max(diff * 2f64.powf(alpha * sep as f64));
            }
        }
        Ok(sup_norm + seminorm)
    }

    /// Re-encodes with window w + 1, ignoring the extra coordinate. Every
    /// product is unchanged bit-for-bit.
    pub fn widened(&self) -> Result<WindowCocycle> {
        let mut table = BTreeMap::new();
        for word in admissible_words(&self.subshift, self.window + 1)? {
            let op = self.operator_for(&word.symbols()[..self.window])?.clone();
            table.insert(word.symbols().to_vec(), op);
        }
        WindowCocycle::new(
            self.subshift.clone(),
            self.window + 1,
            self.dim,
            self.alpha,
            table,
        )
    }

    /// Entrywise A + eps * B on each window table entry; B must live over
    /// the same subshift with the same window and dimension. Locally
    /// constant maps stay locally constant, so this is a line segment in
    /// the cocycle space.
    pub fn add_scaled(&self, direction: &WindowCocycle, eps: f64) -> Result<WindowCocycle> {
        if self.subshift != direction.subshift
            || self.window != direction.window
            || self.dim != direction.dim
        {
            return Err(Error::InvalidInput(
                "cocycles must share subshift, window and dimension to be combined".into(),
            ));
        }
        let mut table = BTreeMap::new();
        for (key, op) in &self.table {
            table.insert(key.clone(), op.add_scaled(&direction.table[key], eps)?);
        }
        WindowCocycle::new(
            self.subshift.clone(),
            self.window,
            self.dim,
            self.alpha,
            table,
        )
    }

    pub fn scaled(&self, c: f64) -> Result<WindowCocycle> {
        let mut table = BTreeMap::new();
        for (key, op) in &self.table {
            table.insert(key.clone(), op.scaled(c)?);
        }
        WindowCocycle::new(
            self.subshift.clone(),
            self.window,
            self.dim,
            self.alpha,
            table,
        )
    }
}

/// Samples a length-n admissible word from the stationary Markov measure of
/// the given row-stochastic weights. The weights must vanish exactly where
/// the transition matrix does. The start symbol is drawn from a stationary
/// distribution computed from the weights; identical seed, identical word.
pub fn sample_trajectory(
    shift: &Subshift,
    weights: &[Vec<f64>],
    n: usize,
    seed: u64,
) -> Result<Word> {
    if n == 0 {
        return Err(Error::Domain("trajectory length must be >= 1".into()));
    }
    let q = shift.alphabet();
    if weights.len() != q || weights.iter().any(|row| row.len() != q) {
        return Err(Error::InvalidInput(format!(
            "weight matrix must be {q}x{q}"
        )));
    }
    for (a, row) in weights.iter().enumerate() {
        let mut sum = 0.0;
        for (b, &w) in row.iter().enumerate() {
            if !w.is_finite() || w < 0.0 {
                return Err(Error::InvalidInput(format!(
                    "weight ({a},{b}) must be a finite non-negative real, got {w}"
                )));
            }
            let allowed = shift.allows(a as u8, b as u8);
            if (w == 0.0) == allowed {
                return Err(Error::InvalidInput(format!(
                    "weight ({a},{b}) must be zero exactly where the transition matrix is zero"
                )));
            }
            sum += w;
        }
        if (sum - 1.0).abs() > 1e-9 {
            return Err(Error::InvalidInput(format!(
                "weight row {a} must sum to 1, got {sum}"
            )));
        }
    }

    // Stationary start distribution by power iteration of v -> v W.
    let mut dist = vec![1.0 / q as f64; q];
    for _ in 0..1000 {
        let mut next = vec![0.0; q];
        for a in 0..q {
            for b in 0..q {
                next[b] += dist[a] * weights[a][b];
            }
        }
        let total: f64 = next.iter().sum();
        for x in &mut next {
            *x /= total;
        }
        dist = next;
    }

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut symbols = Vec::with_capacity(n);
    symbols.push(sample_index(&mut rng, &dist) as u8);
    for _ in 1..n {
        let prev = *symbols.last().expect("non-empty") as usize;
        symbols.push(sample_index(&mut rng, &weights[prev]) as u8);
    }
    Word::new(shift, symbols)
}

fn sample_index(rng: &mut ChaCha8Rng, weights: &[f64]) -> usize {
    let u: f64 = rng.random();
    let mut acc = 0.0;
    for (i, &w) in weights.iter().enumerate() {
        acc += w;
        if u < acc {
            return i;
        }
    }
    weights.len() - 1
}
