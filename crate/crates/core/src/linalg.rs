//! Spectral primitives on finite-dimensional operators.
//!
//! Everything here is evaluated in Euclidean (l2) coordinates, where the
//! Gelfand and Kolmogorov numbers both collapse to singular values and the
//! k-dimensional volume growth factor is an exact product of singular
//! values. All subspace suprema therefore reduce to SVD data, and the
//! per-operator radius `rho_s` reduces to eigenvalue moduli.

use nalgebra::{DMatrix, DVector};
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::error::{Error, Result};

/// Relative tolerance for grouping eigenvalue moduli into multiplicity
/// classes. Grouping affects how the spectrum is reported, never the flat
/// sorted list that `xi`, `rho_s` and `r_s` read.
pub const MODULUS_GROUP_RTOL: f64 = 1e-9;

/// Determinant threshold (on unit-normalized Gram matrices) below which a
/// basis is treated as linearly dependent.
const GRAM_DEPENDENCE_TOL: f64 = 1e-12;

const SCHUR_MAX_ITER: usize = 100_000;

fn check_exponent(s: f64) -> Result<()> {
    if !(s > 0.0) || !s.is_finite() {
        return Err(Error::Domain(format!(
            "singular-value exponent s must be a positive finite real, got {s}"
        )));
    }
    Ok(())
}

fn log_or_neg_inf(x: f64) -> f64 {
    if x == 0.0 {
        f64::NEG_INFINITY
    } else {
        x.ln()
    }
}

/// A dense real d x d operator, the finite-dimensional (or truncated)
/// representation of a cocycle value.
///
/// Entries are validated to be finite at construction; dimensions are
/// at least 1.
#[derive(Debug, Clone, PartialEq)]
pub struct Operator {
    mat: DMatrix<f64>,
}

impl Operator {
    /// Builds an operator from row-major entries.
    pub fn new(dim: usize, entries: &[f64]) -> Result<Self> {
        if dim == 0 {
            return Err(Error::InvalidInput(
                "operator dimension must be >= 1".into(),
            ));
        }
        if entries.len() != dim * dim {
            return Err(Error::InvalidInput(format!(
                "expected {} entries for a {dim}x{dim} operator, got {}",
                dim * dim,
                entries.len()
            )));
        }
        Self::from_matrix(DMatrix::from_row_slice(dim, dim, entries))
    }

    pub fn from_matrix(mat: DMatrix<f64>) -> Result<Self> {
        if mat.nrows() == 0 || mat.nrows() != mat.ncols() {
            return Err(Error::InvalidInput(format!(
                "operator must be square with dimension >= 1, got {}x{}",
                mat.nrows(),
                mat.ncols()
            )));
        }
        if mat.iter().any(|x| !x.is_finite()) {
            return Err(Error::InvalidInput(
                "operator entries must all be finite (no NaN or infinity)".into(),
            ));
        }
        Ok(Self { mat })
    }

    pub fn identity(dim: usize) -> Self {
        Self {
            mat: DMatrix::identity(dim, dim),
        }
    }

    pub fn zero(dim: usize) -> Self {
        Self {
            mat: DMatrix::zeros(dim, dim),
        }
    }

    pub fn diagonal(entries: &[f64]) -> Result<Self> {
        let d = entries.len();
        let mut mat = DMatrix::zeros(d, d);
        for (i, &x) in entries.iter().enumerate() {
            mat[(i, i)] = x;
        }
        Self::from_matrix(mat)
    }

    pub fn dim(&self) -> usize {
        self.mat.nrows()
    }

    pub fn matrix(&self) -> &DMatrix<f64> {
        &self.mat
    }

    pub fn entry(&self, row: usize, col: usize) -> f64 {
        self.mat[(row, col)]
    }

    /// Row-major copy of the entries (the wire order used by the cocycle
    /// file format).
    pub fn entries_row_major(&self) -> Vec<f64> {
        let d = self.dim();
        let mut out = Vec::with_capacity(d * d);
        for i in 0..d {
            for j in 0..d {
                out.push(self.mat[(i, j)]);
            }
        }
        out
    }

    /// Operator composition `self . rhs` (matrix product self * rhs).
    ///
    /// Panics on dimension mismatch; cocycle validation guarantees all
    /// operators of a system share one dimension.
    pub fn compose(&self, rhs: &Operator) -> Operator {
        assert_eq!(self.dim(), rhs.dim(), "operator dimension mismatch");
        Operator {
            mat: &self.mat * &rhs.mat,
        }
    }

    /// n-th power by left-to-right accumulation; `power(0)` is the identity
    /// and `power(1)` returns the operator unchanged (bit-for-bit).
    pub fn power(&self, n: usize) -> Operator {
        match n {
            0 => Operator::identity(self.dim()),
            1 => self.clone(),
            _ => {
                let mut acc = self.clone();
                for _ in 1..n {
                    acc = acc.compose(self);
                }
                acc
            }
        }
    }

    pub fn scaled(&self, c: f64) -> Result<Operator> {
        Operator::from_matrix(&self.mat * c)
    }

    pub fn add_scaled(&self, other: &Operator, c: f64) -> Result<Operator> {
        if self.dim() != other.dim() {
            return Err(Error::InvalidInput(format!(
                "cannot add operators of dimensions {} and {}",
                self.dim(),
                other.dim()
            )));
        }
        Operator::from_matrix(&self.mat + &other.mat * c)
    }

    pub fn determinant(&self) -> f64 {
        self.mat.determinant()
    }

    /// Euclidean operator norm, i.e. the top singular value.
    pub fn operator_norm(&self) -> Result<f64> {
        Ok(self.singular_values()?.value(1))
    }

    fn is_triangular(&self) -> bool {
        let d = self.dim();
        let mut lower = true;
        let mut upper = true;
        for i in 0..d {
            for j in (i + 1)..d {
                if self.mat[(i, j)] != 0.0 {
                    lower = false;
                }
                if self.mat[(j, i)] != 0.0 {
                    upper = false;
                }
            }
        }
        lower || upper
    }

    /// Singular values, sorted non-increasing. In Euclidean coordinates
    /// these are simultaneously the Gelfand numbers c_k and the Kolmogorov
    /// numbers F_k of the operator.
    pub fn singular_values(&self) -> Result<SingularSpectrum> {
        let svd =
            nalgebra::SVD::try_new(self.mat.clone(), false, false, f64::EPSILON, SCHUR_MAX_ITER)
                .ok_or_else(|| {
                    Error::Numeric("singular value iteration did not converge".into())
                })?;
        let mut values: Vec<f64> = svd.singular_values.iter().copied().collect();
        values.sort_by(|a, b| b.partial_cmp(a).expect("singular values are finite"));
        Ok(SingularSpectrum { values })
    }

    /// Eigenvalue moduli with algebraic multiplicities, sorted
    /// non-increasing.
    ///
    /// Triangular input short-circuits to the diagonal, which keeps exact
    /// zeros exact (nilpotent truncations of shift operators must report a
    /// modulus of exactly 0, not Schur noise).
    pub fn eigen_moduli(&self) -> Result<EigenModuli> {
        let flat: Vec<f64> = if self.is_triangular() {
            self.mat.diagonal().iter().map(|x| x.abs()).collect()
        } else {
            let schur = nalgebra::Schur::try_new(self.mat.clone(), f64::EPSILON, SCHUR_MAX_ITER)
                .ok_or_else(|| {
                    Error::Numeric(format!(
                        "Schur iteration did not converge within {SCHUR_MAX_ITER} steps for a {}x{} operator",
                        self.dim(),
                        self.dim()
                    ))
                })?;
            schur
                .complex_eigenvalues()
                .iter()
                .map(|z| z.norm())
                .collect()
        };
        Ok(EigenModuli::from_flat(flat))
    }

    /// Volume growth V_s: the maximal s-dimensional volume expansion
    /// factor.
    ///
    /// Integer s < d is the exact product of the top s singular values;
    /// fractional s < d geometrically interpolates the neighbouring integer
    /// values (with V_0 := 1); s >= d is |det|^(s/d). At s = d the two
    /// integer readings agree mathematically; the determinant form is used
    /// because it stays accurate for high matrix powers, where the smallest
    /// singular value drops below SVD resolution.
    pub fn volume_growth(&self, s: f64) -> Result<f64> {
        check_exponent(s)?;
        let d = self.dim() as f64;
        if s >= d {
            return Ok(self.determinant().abs().powf(s / d));
        }
        let spectrum = self.singular_values()?;
        if s.fract() == 0.0 {
            return Ok(spectrum.top_product(s as usize));
        }
        let k = s.floor() as usize;
        let theta = s - s.floor();
        // The upper interpolation factor is V_{k+1} as the integer branch
        // would compute it, so fractional values interpolate the integer
        // values bit-for-bit.
        let upper = if k + 1 == self.dim() {
            self.determinant().abs()
        } else {
            spectrum.top_product(k + 1)
        };
        Ok(upper.powf(theta) * spectrum.top_product(k).powf(1.0 - theta))
    }

    /// k-th multiplicative compound: the C(d,k) x C(d,k) matrix of k x k
    /// minors over lexicographically ordered row/column subsets.
    ///
    /// Compounds multiply (the compound of a product is the product of the
    /// compounds), and the singular values of the compound are the
    /// k-products of singular values, so V_k(T) is exactly the top
    /// singular value of the compound. This is how volumes of long
    /// products are evaluated without forming numerically rank-collapsed
    /// products: the top singular value of an accumulated compound product
    /// is always the dominant scale and never suffers cancellation.
    pub fn compound(&self, k: usize) -> Result<Operator> {
        let d = self.dim();
        if k == 0 || k > d {
            return Err(Error::Domain(format!(
                "compound order must satisfy 1 <= k <= {d}, got {k}"
            )));
        }
        let subsets = k_subsets(d, k);
        let n = subsets.len();
        let mut mat = DMatrix::zeros(n, n);
        let mut minor = DMatrix::zeros(k, k);
        for (i, rows) in subsets.iter().enumerate() {
            for (j, cols) in subsets.iter().enumerate() {
                for (a, &r) in rows.iter().enumerate() {
                    for (b, &c) in cols.iter().enumerate() {
                        minor[(a, b)] = self.mat[(r, c)];
                    }
                }
                mat[(i, j)] = minor.determinant();
            }
        }
        Operator::from_matrix(mat)
    }

    /// Singular value function built from Gelfand numbers. In Euclidean
    /// coordinates c_k = sigma_k, so this is the same code path as
    /// `volume_growth` and the equality phi_c = phi_F = V_s holds
    /// bit-for-bit.
    pub fn phi_c(&self, s: f64) -> Result<f64> {
        self.volume_growth(s)
    }

    /// Singular value function built from Kolmogorov numbers; see `phi_c`.
    pub fn phi_f(&self, s: f64) -> Result<f64> {
        self.volume_growth(s)
    }

    /// xi_j: the logarithm of the j-th largest eigenvalue modulus counted
    /// with algebraic multiplicity (1-indexed). Returns -inf when that
    /// modulus is 0.
    pub fn xi(&self, j: usize) -> Result<f64> {
        let em = self.eigen_moduli()?;
        em.xi(j)
    }

    /// Per-operator s-generalized radius: the limit of phi^s(T^n)^(1/n),
    /// evaluated in closed form.
    ///
    /// Integer s < d is the product of the top s eigenvalue moduli with
    /// algebraic multiplicity; fractional s < d geometrically interpolates
    /// the neighbouring integer values; s >= d is |det|^(s/d), which equals
    /// the full modulus product but stays well-conditioned when single
    /// moduli are tiny. The branch structure mirrors `volume_growth`, so
    /// the interpolation identities are bit-exact.
    pub fn rho_s(&self, s: f64) -> Result<f64> {
        check_exponent(s)?;
        let d = self.dim() as f64;
        if s >= d {
            return Ok(self.determinant().abs().powf(s / d));
        }
        let moduli = self.eigen_moduli()?;
        if s.fract() == 0.0 {
            return Ok(moduli.top_product(s as usize));
        }
        let k = s.floor() as usize;
        let theta = s - s.floor();
        let upper = if k + 1 == self.dim() {
            self.determinant().abs()
        } else {
            moduli.top_product(k + 1)
        };
        Ok(upper.powf(theta) * moduli.top_product(k).powf(1.0 - theta))
    }

    /// r_s = log rho_s, evaluated as a sum of xi values so that zero moduli
    /// propagate as an exact -inf; the s >= d contribution goes through the
    /// determinant like `rho_s`.
    pub fn r_s(&self, s: f64) -> Result<f64> {
        check_exponent(s)?;
        let d = self.dim() as f64;
        if s >= d {
            return Ok((s / d) * log_or_neg_inf(self.determinant().abs()));
        }
        let moduli = self.eigen_moduli()?;
        if s.fract() == 0.0 {
            return Ok(moduli.xi_sum(s as usize));
        }
        let k = s.floor() as usize;
        let theta = s - s.floor();
        let upper = if k + 1 == self.dim() {
            log_or_neg_inf(self.determinant().abs())
        } else {
            moduli.xi_sum(k + 1)
        };
        let lower = if k == 0 { 0.0 } else { moduli.xi_sum(k) };
        Ok(theta * upper + (1.0 - theta) * lower)
    }

    /// det(T|_V) for the subspace spanned by the given basis: the factor by
    /// which T scales k-dimensional volume on V, computed from Gram
    /// determinants. Returns 0 when T restricted to V is not injective.
    pub fn det_restricted(&self, basis: &[DVector<f64>]) -> Result<f64> {
        let d = self.dim();
        let k = basis.len();
        if k == 0 || k > d {
            return Err(Error::Domain(format!(
                "basis must contain between 1 and {d} vectors, got {k}"
            )));
        }
        let mut cols = DMatrix::zeros(d, k);
        for (j, v) in basis.iter().enumerate() {
            if v.len() != d {
                return Err(Error::InvalidInput(format!(
                    "basis vector {j} has length {}, expected {d}",
                    v.len()
                )));
            }
            if v.iter().any(|x| !x.is_finite()) {
                return Err(Error::InvalidInput(format!(
                    "basis vector {j} has non-finite entries"
                )));
            }
            let norm = v.norm();
            if norm == 0.0 {
                return Err(Error::Domain("basis contains the zero vector".into()));
            }
            // The volume ratio is invariant under column scaling, so work
            // with unit columns for conditioning.
            cols.set_column(j, &(v / norm));
        }
        let gram_in = cols.transpose() * &cols;
        let det_in = gram_in.determinant();
        if det_in < GRAM_DEPENDENCE_TOL {
            return Err(Error::Domain(
                "basis vectors are (numerically) linearly dependent".into(),
            ));
        }
        let image = &self.mat * &cols;
        let gram_out = image.transpose() * &image;
        let det_out = gram_out.determinant().max(0.0);
        Ok((det_out / det_in).sqrt())
    }
}

/// Singular values sigma_1 >= ... >= sigma_d >= 0 of an operator.
#[derive(Debug, Clone, PartialEq)]
pub struct SingularSpectrum {
    values: Vec<f64>,
}

impl SingularSpectrum {
    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    /// 1-indexed access: `value(k)` is sigma_k.
    pub fn value(&self, k: usize) -> f64 {
        self.values[k - 1]
    }

    /// Product of the top `k` singular values; the empty product is 1, so
    /// `top_product(0) == 1` (the V_0 convention).
    pub fn top_product(&self, k: usize) -> f64 {
        self.values[..k].iter().product()
    }
}

/// Eigenvalue moduli of an operator, sorted non-increasing and carried in
/// two forms: a flat list with algebraic multiplicity (length = dim) and a
/// grouped report where moduli equal up to `MODULUS_GROUP_RTOL` share one
/// multiplicity class.
#[derive(Debug, Clone, PartialEq)]
pub struct EigenModuli {
    flat: Vec<f64>,
    moduli: Vec<f64>,
    multiplicities: Vec<usize>,
}

impl EigenModuli {
    fn from_flat(mut flat: Vec<f64>) -> Self {
        flat.sort_by(|a, b| b.partial_cmp(a).expect("moduli are finite"));
        let mut moduli: Vec<f64> = Vec::new();
        let mut multiplicities: Vec<usize> = Vec::new();
        for &m in &flat {
            match (moduli.last(), multiplicities.last_mut()) {
                (Some(&rep), Some(count)) if rep - m <= MODULUS_GROUP_RTOL * rep => {
                    *count += 1;
                }
                _ => {
                    moduli.push(m);
                    multiplicities.push(1);
                }
            }
        }
        Self {
            flat,
            moduli,
            multiplicities,
        }
    }

    pub fn dim(&self) -> usize {
        self.flat.len()
    }

    /// Flat modulus list with algebraic multiplicity, non-increasing.
    pub fn flat(&self) -> &[f64] {
        &self.flat
    }

    /// Grouped moduli (each group represented by its largest member).
    pub fn moduli(&self) -> &[f64] {
        &self.moduli
    }

    pub fn multiplicities(&self) -> &[usize] {
        &self.multiplicities
    }

    /// log of the j-th largest modulus (1-indexed), -inf for modulus 0.
    pub fn xi(&self, j: usize) -> Result<f64> {
        if j == 0 || j > self.dim() {
            return Err(Error::Domain(format!(
                "xi index must satisfy 1 <= j <= {}, got {j}",
                self.dim()
            )));
        }
        Ok(log_or_neg_inf(self.flat[j - 1]))
    }

    /// Product of the top `k` moduli (empty product = 1).
    pub fn top_product(&self, k: usize) -> f64 {
        self.flat[..k].iter().product()
    }

    /// Sum of the top `j` xi values; -inf propagates exactly.
    pub fn xi_sum(&self, j: usize) -> f64 {
        self.flat[..j].iter().map(|&m| log_or_neg_inf(m)).sum()
    }
}

/// Monte-Carlo bounds for the Kolmogorov number F_k (from below) and the
/// Gelfand number c_k (from above), obtained by sampling random
/// k-dimensional (resp. (k-1)-codimensional) subspaces.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SubspaceEstimates {
    /// max over sampled k-dimensional V of m(T|_V); always <= F_k(T).
    pub f_k_lower: f64,
    /// min over sampled (k-1)-codimensional W of ||T|_W||; always >= c_k(T).
    pub c_k_upper: f64,
}

/// Samples `samples` random subspace pairs and returns guaranteed one-sided
/// estimates of F_k and c_k. Identical seed implies identical output.
pub fn subspace_oracle(
    op: &Operator,
    k: usize,
    samples: usize,
    seed: u64,
) -> Result<SubspaceEstimates> {
    let d = op.dim();
    if k == 0 || k > d {
        return Err(Error::Domain(format!(
            "subspace dimension must satisfy 1 <= k <= {d}, got {k}"
        )));
    }
    if samples == 0 {
        return Err(Error::Domain("sample count must be positive".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let codim_basis_size = d - k + 1;
    let mut f_k_lower = f64::NEG_INFINITY;
    let mut c_k_upper = f64::INFINITY;
    for _ in 0..samples {
        let v = random_orthonormal(&mut rng, d, k);
        let restricted = op.matrix() * &v;
        let (min_sv, _) = extreme_singular_values(&restricted)?;
        f_k_lower = f_k_lower.max(min_sv);

        let w = random_orthonormal(&mut rng, d, codim_basis_size);
        let restricted = op.matrix() * &w;
        let (_, max_sv) = extreme_singular_values(&restricted)?;
        c_k_upper = c_k_upper.min(max_sv);
    }
    Ok(SubspaceEstimates {
        f_k_lower,
        c_k_upper,
    })
}

fn extreme_singular_values(m: &DMatrix<f64>) -> Result<(f64, f64)> {
    let svd = nalgebra::SVD::try_new(m.clone(), false, false, f64::EPSILON, SCHUR_MAX_ITER)
        .ok_or_else(|| Error::Numeric("singular value iteration did not converge".into()))?;
    let mut min = f64::INFINITY;
    let mut max: f64 = 0.0;
    for &s in svd.singular_values.iter() {
        min = min.min(s);
        max = max.max(s);
    }
    Ok((min, max))
}

/// Lexicographically ordered k-element subsets of {0, .., d-1}.
fn k_subsets(d: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut current: Vec<usize> = (0..k).collect();
    loop {
        out.push(current.clone());
        // Advance the rightmost index that can still move.
        let mut i = k;
        loop {
            if i == 0 {
                return out;
            }
            i -= 1;
            if current[i] < d - (k - i) {
                current[i] += 1;
                for j in (i + 1)..k {
                    current[j] = current[j - 1] + 1;
                }
                break;
            }
        }
    }
}

/// Orthonormal basis of a uniformly random k-dimensional subspace of R^d
/// (QR of a Gaussian matrix; resampled in the measure-zero rank-deficient
/// case).
fn random_orthonormal(rng: &mut ChaCha8Rng, d: usize, k: usize) -> DMatrix<f64> {
    loop {
        let g = DMatrix::from_fn(d, k, |_, _| rng.sample::<f64, _>(StandardNormal));
        let qr = g.clone().qr();
        let r = qr.r();
        if (0..k).all(|i| r[(i, i)].abs() > 1e-10) {
            return qr.q();
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use rand::Rng;

    fn op(dim: usize, entries: &[f64]) -> Operator {
        Operator::new(dim, entries).unwrap()
    }

    fn random_op(rng: &mut ChaCha8Rng, d: usize) -> Operator {
        let entries: Vec<f64> = (0..d * d).map(|_| rng.random_range(-1.0..1.0)).collect();
        Operator::new(d, &entries).unwrap()
    }

    #[test]
    fn rejects_non_finite_entries() {
        assert!(Operator::new(2, &[1.0, f64::NAN, 0.0, 1.0]).is_err());
        assert!(Operator::new(2, &[1.0, f64::INFINITY, 0.0, 1.0]).is_err());
        assert!(Operator::new(0, &[]).is_err());
    }

    #[test]
    fn singular_values_of_isometry_and_diagonal() {
        let id = Operator::identity(2);
        assert_eq!(id.singular_values().unwrap().values(), &[1.0, 1.0]);

        let d = Operator::diagonal(&[3.0, 2.0]).unwrap();
        assert_eq!(d.singular_values().unwrap().values(), &[3.0, 2.0]);
    }

    #[test]
    fn singular_values_of_rank_one_nilpotent() {
        let n = op(2, &[0.0, 1.0, 0.0, 0.0]);
        let sv = n.singular_values().unwrap();
        assert_relative_eq!(sv.value(1), 1.0, max_relative = 1e-14);
        assert!(sv.value(2).abs() <= 1e-14);
    }

    #[test]
    fn volume_growth_diagonal() {
        let t = Operator::diagonal(&[3.0, 2.0]).unwrap();
        assert_relative_eq!(t.volume_growth(2.0).unwrap(), 6.0, max_relative = 1e-14);
        // V_1.5 = V_2^0.5 * V_1^0.5 = sqrt(18)
        assert_relative_eq!(
            t.volume_growth(1.5).unwrap(),
            18f64.sqrt(),
            max_relative = 1e-13
        );
    }

    #[test]
    fn volume_growth_rejects_nonpositive_s() {
        let t = Operator::identity(2);
        assert!(t.volume_growth(0.0).is_err());
        assert!(t.volume_growth(-1.0).is_err());
    }

    // Submultiplicativity of V_2, brute-forced over seeded random pairs.
    #[test]
    fn volume_growth_submultiplicative_on_random_pairs() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..1000 {
            let t = random_op(&mut rng, 3);
            let s = random_op(&mut rng, 3);
            let ts = t.compose(&s);
            let lhs = ts.volume_growth(2.0).unwrap();
            let rhs = t.volume_growth(2.0).unwrap() * s.volume_growth(2.0).unwrap();
            assert!(
                lhs <= rhs * (1.0 + 1e-12),
                "V_2(TS) = {lhs} exceeded V_2(T) V_2(S) = {rhs}"
            );
        }
    }

    #[test]
    fn phi_examples() {
        let id3 = Operator::identity(3);
        assert_eq!(id3.phi_c(2.0).unwrap(), 1.0);

        let t = Operator::diagonal(&[3.0, 2.0]).unwrap();
        assert_eq!(t.phi_c(1.0).unwrap(), 3.0);
        // s = 4 >= d = 2: |det|^(4/2) = 36
        assert_relative_eq!(t.phi_c(4.0).unwrap(), 36.0, max_relative = 1e-14);
    }

    #[test]
    fn phi_variants_collapse_bitwise() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..50 {
            let t = random_op(&mut rng, 4);
            for &s in &[0.5, 1.0, 1.7, 2.0, 3.0, 3.5, 4.0, 5.25] {
                let v = t.volume_growth(s).unwrap();
                assert_eq!(v, t.phi_c(s).unwrap());
                assert_eq!(v, t.phi_f(s).unwrap());
            }
        }
    }

    #[test]
    fn eigen_moduli_rotation_groups_multiplicity() {
        let rot = op(2, &[0.0, -1.0, 1.0, 0.0]);
        let em = rot.eigen_moduli().unwrap();
        assert_eq!(em.moduli().len(), 1);
        assert_relative_eq!(em.moduli()[0], 1.0, max_relative = 1e-12);
        assert_eq!(em.multiplicities(), &[2]);
    }

    #[test]
    fn eigen_moduli_diagonal() {
        let t = Operator::diagonal(&[3.0, 2.0]).unwrap();
        let em = t.eigen_moduli().unwrap();
        assert_eq!(em.moduli(), &[3.0, 2.0]);
        assert_eq!(em.multiplicities(), &[1, 1]);
        assert_eq!(em.flat(), &[3.0, 2.0]);
    }

    // Companion matrix of x^3 - 1: eigenvalues are the cube roots of unity,
    // all of modulus exactly 1 (oracle: direct root computation).
    #[test]
    fn eigen_moduli_companion_cube_roots_of_unity() {
        let c = op(3, &[0.0, 0.0, 1.0, 1.0, 0.0, 0.0, 0.0, 1.0, 0.0]);
        let em = c.eigen_moduli().unwrap();
        let roots: [f64; 3] = [
            1.0,
            ((-0.5f64).powi(2) + 0.75).sqrt(),
            ((-0.5f64).powi(2) + 0.75).sqrt(),
        ];
        for (computed, oracle) in em.flat().iter().zip(roots.iter()) {
            assert_relative_eq!(computed, oracle, max_relative = 1e-10);
        }
        assert_eq!(em.multiplicities(), &[3]);
    }

    #[test]
    fn xi_examples() {
        let t = Operator::diagonal(&[3.0, 2.0]).unwrap();
        assert_relative_eq!(t.xi(2).unwrap(), 2f64.ln(), max_relative = 1e-14);

        let n = op(2, &[0.0, 1.0, 0.0, 0.0]);
        assert_eq!(n.xi(1).unwrap(), f64::NEG_INFINITY);

        assert!(t.xi(0).is_err());
        assert!(t.xi(3).is_err());
    }

    // xi_j(T^3) = 3 xi_j(T); the oracle side recomputes the spectrum of the
    // explicitly cubed matrix.
    #[test]
    fn xi_power_law_random() {
        let mut rng = ChaCha8Rng::seed_from_u64(23);
        for _ in 0..50 {
            let t = random_op(&mut rng, 4);
            let cube = t.power(3);
            for j in 1..=4 {
                let lhs = cube.xi(j).unwrap();
                let rhs = 3.0 * t.xi(j).unwrap();
                assert_relative_eq!(lhs, rhs, max_relative = 1e-8, epsilon = 1e-10);
            }
        }
    }

    #[test]
    fn rho_s_diagonal_examples() {
        let t = Operator::diagonal(&[3.0, 2.0]).unwrap();
        assert_eq!(t.rho_s(1.0).unwrap(), 3.0);
        assert_relative_eq!(
            t.rho_s(1.5).unwrap(),
            3.0 * 2f64.sqrt(),
            max_relative = 1e-13
        );
    }

    // rho_s as the limit of V_s(T^n)^(1/n): the oracle is power iteration of
    // the volume growth, estimating the limit from the ratio of the last two
    // doubling steps (n = 32 and n = 64), which converges geometrically in
    // the spectral gap. Moduli are kept within a dynamic range that the SVD
    // of T^64 can still resolve.
    #[test]
    fn rho_s_matches_volume_growth_limit() {
        let mut rng = ChaCha8Rng::seed_from_u64(31);
        for _ in 0..10 {
            // Diagonalizable with controlled spectral gap: P D P^-1.
            let t = loop {
                let p = random_op(&mut rng, 3);
                let sv = p.singular_values().unwrap();
                if sv.value(3) > 0.05 * sv.value(1) {
                    let d = Operator::diagonal(&[1.0, 0.75, 0.3]).unwrap();
                    let p_inv =
                        Operator::from_matrix(p.matrix().clone().try_inverse().unwrap()).unwrap();
                    break p.compose(&d).compose(&p_inv);
                }
            };
            let t32 = t.power(32);
            let t64 = t32.compose(&t32);
            let ratio = (t64.volume_growth(2.0).unwrap() / t32.volume_growth(2.0).unwrap())
                .powf(1.0 / 32.0);
            assert_relative_eq!(t.rho_s(2.0).unwrap(), ratio, max_relative = 1e-6);
        }
    }

    // For orthogonally diagonalizable operators the n-th root sequence
    // itself is exact at every n.
    #[test]
    fn rho_s_nth_root_exact_for_symmetric() {
        let mut rng = ChaCha8Rng::seed_from_u64(37);
        let q = random_orthonormal(&mut rng, 3, 3);
        let d = DMatrix::from_diagonal(&DVector::from_vec(vec![1.0, 0.9, 0.5]));
        let sym = Operator::from_matrix(&q * d * q.transpose()).unwrap();
        let root = sym.power(64).volume_growth(2.0).unwrap().powf(1.0 / 64.0);
        assert_relative_eq!(sym.rho_s(2.0).unwrap(), root, max_relative = 1e-6);
    }

    #[test]
    fn r_s_examples() {
        let id = Operator::identity(2);
        assert_eq!(id.r_s(2.0).unwrap(), 0.0);

        let t = Operator::diagonal(&[3.0, 2.0]).unwrap();
        assert_relative_eq!(t.r_s(2.0).unwrap(), 6f64.ln(), max_relative = 1e-14);
    }

    // r_s(T^5) = 5 r_s(T), oracle = spectrum of the explicit fifth power.
    #[test]
    fn r_s_power_law_random() {
        let mut rng = ChaCha8Rng::seed_from_u64(41);
        for _ in 0..50 {
            let t = random_op(&mut rng, 4);
            let p5 = t.power(5);
            let lhs = p5.r_s(2.0).unwrap();
            let rhs = 5.0 * t.r_s(2.0).unwrap();
            assert_relative_eq!(lhs, rhs, max_relative = 1e-8);
        }
    }

    #[test]
    fn r_s_is_log_of_rho_s() {
        let mut rng = ChaCha8Rng::seed_from_u64(43);
        for _ in 0..50 {
            let t = random_op(&mut rng, 4);
            for &s in &[1.0, 1.5, 2.0, 3.0, 4.0, 5.5] {
                let r = t.r_s(s).unwrap();
                let rho = t.rho_s(s).unwrap();
                if rho == 0.0 {
                    assert_eq!(r, f64::NEG_INFINITY);
                } else {
                    assert_relative_eq!(r, rho.ln(), max_relative = 1e-10, epsilon = 1e-12);
                }
            }
        }
    }

    #[test]
    fn det_restricted_identity_and_diagonal() {
        let id = Operator::identity(3);
        let e1 = DVector::from_vec(vec![1.0, 0.0, 0.0]);
        let e2 = DVector::from_vec(vec![0.0, 1.0, 0.0]);
        assert_relative_eq!(
            id.det_restricted(&[e1.clone(), e2.clone()]).unwrap(),
            1.0,
            max_relative = 1e-13
        );

        let t = Operator::diagonal(&[3.0, 2.0, 1.0]).unwrap();
        assert_relative_eq!(
            t.det_restricted(&[e1, e2]).unwrap(),
            6.0,
            max_relative = 1e-13
        );
    }

    #[test]
    fn det_restricted_rejects_dependent_basis() {
        let id = Operator::identity(2);
        let v = DVector::from_vec(vec![1.0, 1.0]);
        let w = DVector::from_vec(vec![2.0, 2.0]);
        assert!(id.det_restricted(&[v, w]).is_err());
    }

    // Random-subspace search never beats V_2, and the span of the top two
    // right singular vectors attains it.
    #[test]
    fn det_restricted_bounded_by_volume_growth() {
        let mut rng = ChaCha8Rng::seed_from_u64(53);
        let t = random_op(&mut rng, 3);
        let v2 = t.volume_growth(2.0).unwrap();
        let mut best: f64 = 0.0;
        for _ in 0..10_000 {
            let basis = random_orthonormal(&mut rng, 3, 2);
            let b = [
                DVector::from_column_slice(basis.column(0).as_slice()),
                DVector::from_column_slice(basis.column(1).as_slice()),
            ];
            let val = t.det_restricted(&b).unwrap();
            assert!(val <= v2 * (1.0 + 1e-12));
            best = best.max(val);
        }
        // The optimum itself, from the SVD.
        let svd =
            nalgebra::SVD::try_new(t.matrix().clone(), false, true, f64::EPSILON, 10_000).unwrap();
        let vt = svd.v_t.unwrap();
        let top = [
            DVector::from_column_slice(vt.row(0).transpose().as_slice()),
            DVector::from_column_slice(vt.row(1).transpose().as_slice()),
        ];
        let at_optimum = t.det_restricted(&top).unwrap();
        assert!(at_optimum >= 0.98 * v2, "optimum {at_optimum} vs V_2 {v2}");
        assert!(best <= v2 * (1.0 + 1e-12));
    }

    #[test]
    fn subspace_oracle_identity_and_diagonal() {
        let id = Operator::identity(2);
        let est = subspace_oracle(&id, 1, 64, 1).unwrap();
        assert_relative_eq!(est.f_k_lower, 1.0, max_relative = 1e-12);
        assert_relative_eq!(est.c_k_upper, 1.0, max_relative = 1e-12);

        let t = Operator::diagonal(&[3.0, 2.0]).unwrap();
        let est = subspace_oracle(&t, 2, 10_000, 2).unwrap();
        assert!(est.f_k_lower >= 1.96 && est.f_k_lower <= 2.0 + 1e-12);
        assert!(est.c_k_upper >= 2.0 - 1e-12 && est.c_k_upper <= 2.04);
    }

    #[test]
    fn subspace_oracle_rank_deficient() {
        let n = op(2, &[0.0, 1.0, 0.0, 0.0]);
        let est = subspace_oracle(&n, 2, 100, 3).unwrap();
        assert!(est.f_k_lower.abs() <= 1e-14);
    }

    // The top singular value of the k-th compound is V_k, and compounds
    // multiply (Cauchy-Binet).
    #[test]
    fn compound_encodes_volume_growth() {
        let mut rng = ChaCha8Rng::seed_from_u64(79);
        for _ in 0..20 {
            let t = random_op(&mut rng, 4);
            for k in 1..=4usize {
                let top = t.compound(k).unwrap().operator_norm().unwrap();
                assert_relative_eq!(
                    top,
                    t.volume_growth(k as f64).unwrap(),
                    max_relative = 1e-10,
                    epsilon = 1e-13
                );
            }
            let s = random_op(&mut rng, 4);
            let product_compound = t.compose(&s).compound(2).unwrap();
            let compound_product = t.compound(2).unwrap().compose(&s.compound(2).unwrap());
            let diff = product_compound
                .add_scaled(&compound_product, -1.0)
                .unwrap();
            let scale = compound_product.operator_norm().unwrap();
            assert!(diff.operator_norm().unwrap() <= 1e-12 * scale.max(1.0));
        }
        assert!(Operator::identity(3).compound(0).is_err());
        assert!(Operator::identity(3).compound(4).is_err());
    }

    #[test]
    fn interpolation_is_continuous_at_integer_s() {
        let mut rng = ChaCha8Rng::seed_from_u64(59);
        for _ in 0..20 {
            // Entries kept moderate so |log V_k| stays small and the
            // one-sided limits resolve below the 1e-12 tolerance.
            let entries: Vec<f64> = (0..16).map(|_| rng.random_range(-1.5..1.5)).collect();
            let t = Operator::new(4, &entries).unwrap();
            for m in 1..=4 {
                let s = m as f64;
                let at = t.phi_c(s).unwrap();
                let left = t.phi_c(s - 1e-13).unwrap();
                let right = t.phi_c(s + 1e-13).unwrap();
                assert_relative_eq!(left, at, max_relative = 1e-12);
                assert_relative_eq!(right, at, max_relative = 1e-12);

                let at = t.rho_s(s).unwrap();
                let left = t.rho_s(s - 1e-13).unwrap();
                let right = t.rho_s(s + 1e-13).unwrap();
                if at > 0.0 {
                    assert_relative_eq!(left, at, max_relative = 1e-12);
                    assert_relative_eq!(right, at, max_relative = 1e-12);
                }
            }
        }
    }
}
