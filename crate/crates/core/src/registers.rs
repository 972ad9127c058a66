//! Clock-cycle labeled registers and the dense states that live on them.
//!
//! Every tensor factor is named by a [`SlotId`]: a site label plus an integer
//! clock-cycle index. Factors at different cycles are independent Hilbert
//! spaces, so a register may freely hold the same site at several cycles.
//!
//! Basis ordering is row-major over the register's slots with the first slot
//! most significant. Dimension-3 slots order their levels `(vac, 0, 1)`.

use std::collections::BTreeSet;
use std::fmt;

use nalgebra::{DMatrix, DVector};

use crate::error::{Error, Result};

pub type C64 = nalgebra::Complex<f64>;

/// Tolerance on state-vector norm and density-operator trace.
pub const NORM_TOL: f64 = 1e-12;
/// Tolerance on `max |M - M†|`.
pub const HERMITIAN_TOL: f64 = 1e-12;
/// Eigenvalues in `[-EIGEN_TOL, 0)` are rounding noise; below that the
/// operator is not positive.
pub const EIGEN_TOL: f64 = 1e-10;

pub(crate) const ZERO: C64 = C64 { re: 0.0, im: 0.0 };
pub(crate) const ONE: C64 = C64 { re: 1.0, im: 0.0 };

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SlotId {
    pub site: String,
    pub cycle: i64,
}

impl SlotId {
    pub fn new(site: impl Into<String>, cycle: i64) -> Self {
        SlotId {
            site: site.into(),
            cycle,
        }
    }
}

impl fmt::Display for SlotId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}@{}", self.site, self.cycle)
    }
}

/// A computational-basis level. `Vac` only exists on dimension-3 slots.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum BasisLevel {
    Vac,
    Zero,
    One,
}

impl BasisLevel {
    /// Index of this level inside a slot of dimension `dim`.
    pub fn index(self, dim: usize) -> Option<usize> {
        match (self, dim) {
            (BasisLevel::Vac, 3) => Some(0),
            (BasisLevel::Vac, _) => None,
            (BasisLevel::Zero, d) => Some(d - 2),
            (BasisLevel::One, d) => Some(d - 1),
        }
    }

    pub fn from_index(index: usize, dim: usize) -> Option<Self> {
        match (dim, index) {
            (2, 0) | (3, 1) => Some(BasisLevel::Zero),
            (2, 1) | (3, 2) => Some(BasisLevel::One),
            (3, 0) => Some(BasisLevel::Vac),
            _ => None,
        }
    }

    pub fn symbol(self) -> &'static str {
        match self {
            BasisLevel::Vac => "v",
            BasisLevel::Zero => "0",
            BasisLevel::One => "1",
        }
    }
}

/// Ordered list of distinct slots with their local dimensions.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Register {
    slots: Vec<SlotId>,
    dims: Vec<usize>,
}

impl Register {
    pub fn new(slots: Vec<SlotId>, dims: Vec<usize>) -> Result<Self> {
        if slots.len() != dims.len() {
            return Err(Error::DimensionMismatch {
                expected: slots.len(),
                found: dims.len(),
            });
        }
        let mut seen = BTreeSet::new();
        for (slot, &dim) in slots.iter().zip(&dims) {
            if dim != 2 && dim != 3 {
                return Err(Error::BadDimension(slot.clone(), dim));
            }
            if !seen.insert(slot) {
                return Err(Error::DuplicateSlot(slot.clone()));
            }
        }
        Ok(Register { slots, dims })
    }

    /// All-qubit register.
    pub fn qubits(slots: Vec<SlotId>) -> Result<Self> {
        let dims = vec![2; slots.len()];
        Register::new(slots, dims)
    }

    pub fn single(slot: SlotId, dim: usize) -> Result<Self> {
        Register::new(vec![slot], vec![dim])
    }

    pub fn empty() -> Self {
        Register::default()
    }

    pub fn slots(&self) -> &[SlotId] {
        &self.slots
    }

    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    pub fn len(&self) -> usize {
        self.slots.len()
    }

    pub fn is_empty(&self) -> bool {
        self.slots.is_empty()
    }

    /// Length of the state vector.
    pub fn size(&self) -> usize {
        self.dims.iter().product()
    }

    pub fn position(&self, slot: &SlotId) -> Option<usize> {
        self.slots.iter().position(|s| s == slot)
    }

    pub fn require(&self, slot: &SlotId) -> Result<usize> {
        self.position(slot)
            .ok_or_else(|| Error::UnknownSlot(slot.clone()))
    }

    pub fn dim_of(&self, slot: &SlotId) -> Option<usize> {
        self.position(slot).map(|p| self.dims[p])
    }

    /// Distinct cycles, ascending.
    pub fn cycles(&self) -> Vec<i64> {
        let set: BTreeSet<i64> = self.slots.iter().map(|s| s.cycle).collect();
        set.into_iter().collect()
    }

    pub fn slots_at_cycle(&self, cycle: i64) -> Vec<SlotId> {
        self.slots
            .iter()
            .filter(|s| s.cycle == cycle)
            .cloned()
            .collect()
    }

    pub fn slots_of_site(&self, site: &str) -> Vec<SlotId> {
        self.slots
            .iter()
            .filter(|s| s.site == site)
            .cloned()
            .collect()
    }

    pub fn has_site(&self, site: &str) -> bool {
        self.slots.iter().any(|s| s.site == site)
    }

    /// Encodes per-slot levels as a basis index (first slot most significant).
    pub fn basis_index(&self, levels: &[BasisLevel]) -> Result<usize> {
        if levels.len() != self.len() {
            return Err(Error::DimensionMismatch {
                expected: self.len(),
                found: levels.len(),
            });
        }
        let mut index = 0;
        for ((level, &dim), slot) in levels.iter().zip(&self.dims).zip(&self.slots) {
            let digit = level.index(dim).ok_or_else(|| {
                Error::InvalidParameter(format!("level {level:?} does not exist on slot {slot}"))
            })?;
            index = index * dim + digit;
        }
        Ok(index)
    }

    /// Per-slot digit decomposition of a basis index.
    pub fn digits(&self, mut index: usize) -> Vec<usize> {
        let mut out = vec![0; self.len()];
        for (k, &dim) in self.dims.iter().enumerate().rev() {
            out[k] = index % dim;
            index /= dim;
        }
        out
    }

    pub fn levels(&self, index: usize) -> Vec<BasisLevel> {
        self.digits(index)
            .into_iter()
            .zip(&self.dims)
            .map(|(d, &dim)| BasisLevel::from_index(d, dim).expect("digit within dimension"))
            .collect()
    }

    pub(crate) fn index_of_digits(&self, digits: &[usize]) -> usize {
        digits
            .iter()
            .zip(&self.dims)
            .fold(0, |acc, (&d, &dim)| acc * dim + d)
    }

    /// `self` followed by `other`; slots must be disjoint.
    pub fn concat(&self, other: &Register) -> Result<Register> {
        for slot in &other.slots {
            if self.position(slot).is_some() {
                return Err(Error::DuplicateSlot(slot.clone()));
            }
        }
        let mut slots = self.slots.clone();
        slots.extend(other.slots.iter().cloned());
        let mut dims = self.dims.clone();
        dims.extend(&other.dims);
        Ok(Register { slots, dims })
    }

    /// Shifts the cycle of every slot of `site` by `delta`.
    pub fn relabel_cycles(&self, site: &str, delta: i64) -> Result<Register> {
        let slots = self
            .slots
            .iter()
            .map(|s| {
                if s.site == site {
                    s.cycle
                        .checked_add(delta)
                        .map(|c| SlotId::new(site, c))
                        .ok_or_else(|| Error::CycleOverflow(site.to_string()))
                } else {
                    Ok(s.clone())
                }
            })
            .collect::<Result<Vec<_>>>()?;
        Register::new(slots, self.dims.clone())
    }

    /// Shifts every slot by `delta` cycles.
    pub fn shift_all(&self, delta: i64) -> Result<Register> {
        let slots = self
            .slots
            .iter()
            .map(|s| {
                s.cycle
                    .checked_add(delta)
                    .map(|c| SlotId::new(s.site.clone(), c))
                    .ok_or_else(|| Error::CycleOverflow(s.site.clone()))
            })
            .collect::<Result<Vec<_>>>()?;
        Register::new(slots, self.dims.clone())
    }

    fn check_permutation(&self, order: &[usize]) -> Result<()> {
        let mut seen = vec![false; self.len()];
        if order.len() != self.len() {
            return Err(Error::BadPermutation(order.to_vec()));
        }
        for &k in order {
            if k >= self.len() || seen[k] {
                return Err(Error::BadPermutation(order.to_vec()));
            }
            seen[k] = true;
        }
        Ok(())
    }

    /// Register whose slot `k` is `self`'s slot `order[k]`, together with the
    /// map from old basis index to new basis index.
    fn permuted(&self, order: &[usize]) -> Result<(Register, Vec<usize>)> {
        self.check_permutation(order)?;
        let reg = Register {
            slots: order.iter().map(|&k| self.slots[k].clone()).collect(),
            dims: order.iter().map(|&k| self.dims[k]).collect(),
        };
        let map = (0..self.size())
            .map(|i| {
                let old = self.digits(i);
                let new: Vec<usize> = order.iter().map(|&k| old[k]).collect();
                reg.index_of_digits(&new)
            })
            .collect();
        Ok((reg, map))
    }
}

impl fmt::Display for Register {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for (k, slot) in self.slots.iter().enumerate() {
            if k > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{slot}")?;
            if self.dims[k] != 2 {
                write!(f, "/{}", self.dims[k])?;
            }
        }
        write!(f, "]")
    }
}

/// Operations shared by pure and mixed states.
pub trait QuantumState: Sized + Clone {
    fn register(&self) -> &Register;

    /// Kronecker product; `other`'s slots are appended after `self`'s.
    fn tensor(&self, other: &Self) -> Result<Self>;

    /// Time translation of one site: cycles shift, amplitudes do not change.
    fn relabel_cycles(&self, site: &str, delta: i64) -> Result<Self>;

    /// Shifts every slot by `delta` cycles.
    fn shift_cycles(&self, delta: i64) -> Result<Self>;

    /// Reorders slots so that new slot `k` is old slot `order[k]`.
    fn permute_slots(&self, order: &[usize]) -> Result<Self>;

    /// Applies a unitary acting on the whole register.
    fn evolve(&self, unitary: &DMatrix<C64>) -> Self;

    fn to_density(&self) -> DensityOperator;
}

/// Unit-norm amplitude vector over a register.
#[derive(Debug, Clone, PartialEq)]
pub struct PureState {
    register: Register,
    amplitudes: DVector<C64>,
}

impl PureState {
    pub fn new(register: Register, amplitudes: DVector<C64>) -> Result<Self> {
        if amplitudes.len() != register.size() {
            return Err(Error::DimensionMismatch {
                expected: register.size(),
                found: amplitudes.len(),
            });
        }
        let norm = amplitudes.norm();
        if (norm - 1.0).abs() > NORM_TOL {
            return Err(Error::NotNormalized(norm));
        }
        Ok(PureState {
            register,
            amplitudes,
        })
    }

    /// Rescales `amplitudes` to unit norm before validating.
    pub fn normalized(register: Register, amplitudes: DVector<C64>) -> Result<Self> {
        let norm = amplitudes.norm();
        if norm == 0.0 || !norm.is_finite() {
            return Err(Error::NotNormalized(norm));
        }
        PureState::new(register, amplitudes.unscale(norm))
    }

    pub fn basis(register: Register, levels: &[BasisLevel]) -> Result<Self> {
        let index = register.basis_index(levels)?;
        let mut amplitudes = DVector::from_element(register.size(), ZERO);
        amplitudes[index] = ONE;
        Ok(PureState {
            register,
            amplitudes,
        })
    }

    /// `alpha|0> + beta|1>` on a single qubit slot.
    pub fn qubit(slot: SlotId, alpha: C64, beta: C64) -> Result<Self> {
        PureState::new(
            Register::single(slot, 2)?,
            DVector::from_vec(vec![alpha, beta]),
        )
    }

    /// Real superposition `sqrt(1 - beta_sq)|0> + sqrt(beta_sq)|1>`.
    pub fn real_superposition(slot: SlotId, beta_sq: f64) -> Result<Self> {
        if !(0.0..=1.0).contains(&beta_sq) {
            return Err(Error::InvalidParameter(format!(
                "beta^2 = {beta_sq} outside [0, 1]"
            )));
        }
        PureState::qubit(
            slot,
            C64::new((1.0 - beta_sq).sqrt(), 0.0),
            C64::new(beta_sq.sqrt(), 0.0),
        )
    }

    /// Normalized `(|00> + |11>)/sqrt(2)` over two qubit slots.
    pub fn bell_phi_plus(first: SlotId, second: SlotId) -> Result<Self> {
        let h = std::f64::consts::FRAC_1_SQRT_2;
        PureState::new(
            Register::qubits(vec![first, second])?,
            DVector::from_vec(vec![C64::new(h, 0.0), ZERO, ZERO, C64::new(h, 0.0)]),
        )
    }

    pub fn amplitudes(&self) -> &DVector<C64> {
        &self.amplitudes
    }

    pub fn amplitude(&self, levels: &[BasisLevel]) -> Result<C64> {
        Ok(self.amplitudes[self.register.basis_index(levels)?])
    }

    pub fn norm(&self) -> f64 {
        self.amplitudes.norm()
    }

    /// Same amplitudes on another register of identical shape.
    pub fn with_register(&self, register: Register) -> Result<Self> {
        if register.dims() != self.register.dims() {
            return Err(Error::DimensionMismatch {
                expected: self.register.size(),
                found: register.size(),
            });
        }
        Ok(PureState {
            register,
            amplitudes: self.amplitudes.clone(),
        })
    }

    /// `|<self|other>|^2` for states of the same shape.
    pub fn overlap_sq(&self, other: &PureState) -> Result<f64> {
        if self.register.dims() != other.register.dims() {
            return Err(Error::DimensionMismatch {
                expected: self.register.size(),
                found: other.register.size(),
            });
        }
        Ok(self.amplitudes.dotc(&other.amplitudes).norm_sqr())
    }
}

impl QuantumState for PureState {
    fn register(&self) -> &Register {
        &self.register
    }

    fn tensor(&self, other: &Self) -> Result<Self> {
        let register = self.register.concat(&other.register)?;
        Ok(PureState {
            register,
            amplitudes: self.amplitudes.kronecker(&other.amplitudes),
        })
    }

    fn relabel_cycles(&self, site: &str, delta: i64) -> Result<Self> {
        Ok(PureState {
            register: self.register.relabel_cycles(site, delta)?,
            amplitudes: self.amplitudes.clone(),
        })
    }

    fn shift_cycles(&self, delta: i64) -> Result<Self> {
        Ok(PureState {
            register: self.register.shift_all(delta)?,
            amplitudes: self.amplitudes.clone(),
        })
    }

    fn permute_slots(&self, order: &[usize]) -> Result<Self> {
        let (register, map) = self.register.permuted(order)?;
        let mut amplitudes = DVector::from_element(register.size(), ZERO);
        for (old, &new) in map.iter().enumerate() {
            amplitudes[new] = self.amplitudes[old];
        }
        Ok(PureState {
            register,
            amplitudes,
        })
    }

    fn evolve(&self, unitary: &DMatrix<C64>) -> Self {
        PureState {
            register: self.register.clone(),
            amplitudes: unitary * &self.amplitudes,
        }
    }

    fn to_density(&self) -> DensityOperator {
        DensityOperator {
            register: self.register.clone(),
            matrix: &self.amplitudes * self.amplitudes.adjoint(),
        }
    }
}

/// Hermitian, unit-trace, positive semidefinite matrix over a register.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityOperator {
    register: Register,
    matrix: DMatrix<C64>,
}

impl DensityOperator {
    pub fn new(register: Register, matrix: DMatrix<C64>) -> Result<Self> {
        let n = register.size();
        if matrix.nrows() != n || matrix.ncols() != n {
            return Err(Error::DimensionMismatch {
                expected: n,
                found: matrix.nrows(),
            });
        }
        let rho = DensityOperator { register, matrix };
        rho.check_invariants()?;
        Ok(rho)
    }

    pub(crate) fn from_raw(register: Register, matrix: DMatrix<C64>) -> Self {
        debug_assert_eq!(matrix.nrows(), register.size());
        DensityOperator { register, matrix }
    }

    /// `I/d` over the register.
    pub fn maximally_mixed(register: Register) -> Self {
        let n = register.size();
        let matrix = DMatrix::identity(n, n).map(|v: C64| v / n as f64);
        DensityOperator { register, matrix }
    }

    /// Real diagonal operator; entries must already sum to one.
    pub fn diagonal(register: Register, populations: &[f64]) -> Result<Self> {
        let n = register.size();
        if populations.len() != n {
            return Err(Error::DimensionMismatch {
                expected: n,
                found: populations.len(),
            });
        }
        let diag = DVector::from_iterator(n, populations.iter().map(|&p| C64::new(p, 0.0)));
        DensityOperator::new(register, DMatrix::from_diagonal(&diag))
    }

    /// Convex combination of operators on a common register.
    pub fn mixture(parts: &[(f64, DensityOperator)]) -> Result<Self> {
        let (_, first) = parts.first().ok_or(Error::EmptyEnsemble)?;
        let register = first.register.clone();
        let n = register.size();
        let mut matrix = DMatrix::from_element(n, n, ZERO);
        for (p, rho) in parts {
            if rho.register != register {
                return Err(Error::MixedRegisters);
            }
            matrix += rho.matrix.map(|v| v * *p);
        }
        DensityOperator::new(register, matrix)
    }

    pub fn matrix(&self) -> &DMatrix<C64> {
        &self.matrix
    }

    pub fn register(&self) -> &Register {
        &self.register
    }

    pub fn trace(&self) -> C64 {
        self.matrix.trace()
    }

    /// Diagonal of the matrix: computational-basis probabilities.
    pub fn populations(&self) -> Vec<f64> {
        self.matrix.diagonal().iter().map(|v| v.re).collect()
    }

    pub fn entry(&self, row: &[BasisLevel], col: &[BasisLevel]) -> Result<C64> {
        let r = self.register.basis_index(row)?;
        let c = self.register.basis_index(col)?;
        Ok(self.matrix[(r, c)])
    }

    /// Eigenvalues of the hermitian matrix, ascending.
    pub fn eigenvalues(&self) -> Vec<f64> {
        hermitian_eigenvalues(&self.matrix)
    }

    pub fn check_invariants(&self) -> Result<()> {
        let herm = max_abs(&(&self.matrix - self.matrix.adjoint()));
        if herm > HERMITIAN_TOL {
            return Err(Error::NotHermitian(herm));
        }
        let tr = self.matrix.trace();
        if (tr.re - 1.0).abs() > NORM_TOL || tr.im.abs() > NORM_TOL {
            return Err(Error::TraceNotOne(tr.re));
        }
        if let Some(&min) = self.eigenvalues().first() {
            if min < -EIGEN_TOL {
                return Err(Error::NegativeEigenvalue(min));
            }
        }
        Ok(())
    }

    /// Largest element-wise modulus of `self - other`; shapes must agree.
    pub fn max_deviation(&self, other: &DensityOperator) -> Result<f64> {
        if self.register.dims() != other.register.dims() {
            return Err(Error::DimensionMismatch {
                expected: self.register.size(),
                found: other.register.size(),
            });
        }
        Ok(max_abs(&(&self.matrix - &other.matrix)))
    }

    /// Same matrix on another register of identical shape.
    pub fn with_register(&self, register: Register) -> Result<Self> {
        if register.dims() != self.register.dims() {
            return Err(Error::DimensionMismatch {
                expected: self.register.size(),
                found: register.size(),
            });
        }
        Ok(DensityOperator {
            register,
            matrix: self.matrix.clone(),
        })
    }

    /// Reduced operator on `keep`, listed in the register's original order.
    pub fn partial_trace(&self, keep: &[SlotId]) -> Result<DensityOperator> {
        let mut kept: Vec<usize> = keep
            .iter()
            .map(|s| self.register.require(s))
            .collect::<Result<_>>()?;
        kept.sort_unstable();
        kept.dedup();
        let traced: Vec<usize> = (0..self.register.len())
            .filter(|k| !kept.contains(k))
            .collect();
        if traced.is_empty() {
            return Ok(self.clone());
        }

        let reduced = Register {
            slots: kept.iter().map(|&k| self.register.slots[k].clone()).collect(),
            dims: kept.iter().map(|&k| self.register.dims[k]).collect(),
        };
        let env = Register {
            slots: traced.iter().map(|&k| self.register.slots[k].clone()).collect(),
            dims: traced.iter().map(|&k| self.register.dims[k]).collect(),
        };

        // Group full basis indices by their environment index.
        let mut groups: Vec<Vec<(usize, usize)>> = vec![Vec::new(); env.size()];
        for i in 0..self.register.size() {
            let digits = self.register.digits(i);
            let k_digits: Vec<usize> = kept.iter().map(|&k| digits[k]).collect();
            let e_digits: Vec<usize> = traced.iter().map(|&k| digits[k]).collect();
            groups[env.index_of_digits(&e_digits)].push((i, reduced.index_of_digits(&k_digits)));
        }

        let n = reduced.size();
        let mut matrix = DMatrix::from_element(n, n, ZERO);
        for group in &groups {
            for &(i, ki) in group {
                for &(j, kj) in group {
                    matrix[(ki, kj)] += self.matrix[(i, j)];
                }
            }
        }
        Ok(DensityOperator {
            register: reduced,
            matrix,
        })
    }

    /// Traces out the listed slots, keeping everything else.
    pub fn trace_out(&self, remove: &[SlotId]) -> Result<DensityOperator> {
        for slot in remove {
            self.register.require(slot)?;
        }
        let keep: Vec<SlotId> = self
            .register
            .slots
            .iter()
            .filter(|s| !remove.contains(s))
            .cloned()
            .collect();
        self.partial_trace(&keep)
    }

    /// Traces out every slot of `site`.
    pub fn discard_site(&self, site: &str) -> Result<DensityOperator> {
        let remove = self.register.slots_of_site(site);
        if remove.is_empty() {
            return Err(Error::UnknownSite(site.to_string()));
        }
        self.trace_out(&remove)
    }
}

impl QuantumState for DensityOperator {
    fn register(&self) -> &Register {
        &self.register
    }

    fn tensor(&self, other: &Self) -> Result<Self> {
        let register = self.register.concat(&other.register)?;
        Ok(DensityOperator {
            register,
            matrix: self.matrix.kronecker(&other.matrix),
        })
    }

    fn relabel_cycles(&self, site: &str, delta: i64) -> Result<Self> {
        Ok(DensityOperator {
            register: self.register.relabel_cycles(site, delta)?,
            matrix: self.matrix.clone(),
        })
    }

    fn shift_cycles(&self, delta: i64) -> Result<Self> {
        Ok(DensityOperator {
            register: self.register.shift_all(delta)?,
            matrix: self.matrix.clone(),
        })
    }

    fn permute_slots(&self, order: &[usize]) -> Result<Self> {
        let (register, map) = self.register.permuted(order)?;
        let n = register.size();
        let mut matrix = DMatrix::from_element(n, n, ZERO);
        for (i, &ni) in map.iter().enumerate() {
            for (j, &nj) in map.iter().enumerate() {
                matrix[(ni, nj)] = self.matrix[(i, j)];
            }
        }
        Ok(DensityOperator { register, matrix })
    }

    fn evolve(&self, unitary: &DMatrix<C64>) -> Self {
        let m = unitary * &self.matrix * unitary.adjoint();
        DensityOperator {
            register: self.register.clone(),
            matrix: hermitize(m),
        }
    }

    fn to_density(&self) -> DensityOperator {
        self.clone()
    }
}

pub(crate) fn hermitize(m: DMatrix<C64>) -> DMatrix<C64> {
    let adj = m.adjoint();
    (m + adj).map(|v| v * 0.5)
}

pub(crate) fn max_abs(m: &DMatrix<C64>) -> f64 {
    m.iter().map(|v| v.norm()).fold(0.0, f64::max)
}

/// Eigenvalues of a hermitian matrix, ascending.
pub fn hermitian_eigenvalues(m: &DMatrix<C64>) -> Vec<f64> {
    if m.is_empty() {
        return Vec::new();
    }
    let mut values: Vec<f64> = hermitize(m.clone())
        .symmetric_eigenvalues()
        .iter()
        .copied()
        .collect();
    values.sort_by(f64::total_cmp);
    values
}
