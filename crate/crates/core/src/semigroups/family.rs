use std::collections::BTreeMap;
use std::fmt;
use std::sync::{Arc, Mutex};

use crate::error::{Error, Result};
use crate::numlin::Matrix;
use crate::report::{CheckEntry, Report};
use crate::spaces::{CellGrid1D, HardyCoeffSpace, LRegionIndex, QuadrantGrid2D};

use super::constructors::{
    circulant_unitary, halfline_shift, modified_bishift, phi_multiplier, Axis,
};
use super::windowed::{FiberSide, WindowedMap};

/// Closed-form rule producing the member of a one-parameter family at grid
/// time `steps / m`.
pub trait FamilyKernel: Send + Sync + fmt::Debug {
    fn label(&self) -> String;
    /// Dimension of the space the family acts on.
    fn dim(&self) -> usize;
    /// Grid resolution `m`: one step is time `1/m`.
    fn resolution(&self) -> usize;
    fn element(&self, steps: usize) -> Result<WindowedMap>;
}

/// A one-parameter family of windowed operators on a common space, with
/// memoised members.
#[derive(Clone)]
pub struct SemigroupFamily {
    kernel: Arc<dyn FamilyKernel>,
    cache: Arc<Mutex<BTreeMap<usize, WindowedMap>>>,
}

impl fmt::Debug for SemigroupFamily {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("SemigroupFamily")
            .field("label", &self.kernel.label())
            .field("dim", &self.kernel.dim())
            .finish()
    }
}

impl SemigroupFamily {
    pub fn new(kernel: impl FamilyKernel + 'static) -> Self {
        SemigroupFamily {
            kernel: Arc::new(kernel),
            cache: Arc::new(Mutex::new(BTreeMap::new())),
        }
    }

    pub fn label(&self) -> String {
        self.kernel.label()
    }

    pub fn dim(&self) -> usize {
        self.kernel.dim()
    }

    pub fn resolution(&self) -> usize {
        self.kernel.resolution()
    }

    /// The member at time `steps / m`.
    pub fn element(&self, steps: usize) -> Result<WindowedMap> {
        if let Some(hit) = self.cache.lock().expect("cache lock").get(&steps) {
            return Ok(hit.clone());
        }
        let value = self.kernel.element(steps)?;
        self.cache
            .lock()
            .expect("cache lock")
            .insert(steps, value.clone());
        Ok(value)
    }

    /// The member at time `1/m`.
    pub fn generator(&self) -> Result<WindowedMap> {
        self.element(1)
    }

    /// `k`-fold composition of the generator, built left to right.
    pub fn generator_power(&self, k: usize) -> Result<WindowedMap> {
        let g = self.generator()?;
        let mut acc = WindowedMap::identity(self.dim());
        for _ in 0..k {
            acc = g.compose(&acc)?;
        }
        Ok(acc)
    }
}

/// Two one-parameter families on the same space.
#[derive(Clone, Debug)]
pub struct PairOfSemigroups {
    pub first: SemigroupFamily,
    pub second: SemigroupFamily,
}

impl PairOfSemigroups {
    pub fn new(first: SemigroupFamily, second: SemigroupFamily) -> Result<Self> {
        if first.dim() != second.dim() {
            return Err(Error::DimensionMismatch(format!(
                "pair members act on dimensions {} and {}",
                first.dim(),
                second.dim()
            )));
        }
        Ok(PairOfSemigroups { first, second })
    }

    pub fn dim(&self) -> usize {
        self.first.dim()
    }

    pub fn resolution(&self) -> usize {
        self.first.resolution()
    }

    pub fn swapped(&self) -> PairOfSemigroups {
        PairOfSemigroups {
            first: self.second.clone(),
            second: self.first.clone(),
        }
    }
}

#[derive(Debug)]
pub struct HalflineShiftKernel(pub CellGrid1D);

impl FamilyKernel for HalflineShiftKernel {
    fn label(&self) -> String {
        "halfline_shift".into()
    }
    fn dim(&self) -> usize {
        self.0.dim()
    }
    fn resolution(&self) -> usize {
        self.0.m
    }
    fn element(&self, steps: usize) -> Result<WindowedMap> {
        halfline_shift(&self.0, steps)
    }
}

#[derive(Debug)]
pub struct PhiMultiplierKernel(pub HardyCoeffSpace);

impl FamilyKernel for PhiMultiplierKernel {
    fn label(&self) -> String {
        "phi_multiplier".into()
    }
    fn dim(&self) -> usize {
        self.0.dim()
    }
    fn resolution(&self) -> usize {
        self.0.m
    }
    fn element(&self, steps: usize) -> Result<WindowedMap> {
        phi_multiplier(&self.0, steps)
    }
}

#[derive(Debug)]
pub struct BishiftKernel {
    pub grid: QuadrantGrid2D,
    pub axis: Axis,
}

impl FamilyKernel for BishiftKernel {
    fn label(&self) -> String {
        format!("bishift_{:?}", self.axis).to_lowercase()
    }
    fn dim(&self) -> usize {
        self.grid.dim()
    }
    fn resolution(&self) -> usize {
        self.grid.m
    }
    fn element(&self, steps: usize) -> Result<WindowedMap> {
        let (a, b) = super::constructors::bishift_pair(&self.grid, steps)?;
        Ok(match self.axis {
            Axis::First => a,
            Axis::Second => b,
        })
    }
}

#[derive(Debug)]
pub struct ModifiedBishiftKernel {
    pub region: LRegionIndex,
    pub axis: Axis,
}

impl FamilyKernel for ModifiedBishiftKernel {
    fn label(&self) -> String {
        format!("modified_bishift_{:?}", self.axis).to_lowercase()
    }
    fn dim(&self) -> usize {
        self.region.dim()
    }
    fn resolution(&self) -> usize {
        self.region.m
    }
    fn element(&self, steps: usize) -> Result<WindowedMap> {
        modified_bishift(&self.region, steps, self.axis)
    }
}

/// `t ↦ circulant(n, step·t·m)`: a discrete unitary group.
#[derive(Debug)]
pub struct CirculantKernel {
    pub n: usize,
    pub step: usize,
    pub m: usize,
}

impl FamilyKernel for CirculantKernel {
    fn label(&self) -> String {
        format!("circulant_{}", self.n)
    }
    fn dim(&self) -> usize {
        self.n
    }
    fn resolution(&self) -> usize {
        self.m
    }
    fn element(&self, steps: usize) -> Result<WindowedMap> {
        Ok(WindowedMap::exact(circulant_unitary(self.n, (self.step * steps) % self.n)?))
    }
}

/// Powers of a fixed generator.
#[derive(Debug)]
pub struct PowerKernel {
    pub label: String,
    pub generator: WindowedMap,
    pub m: usize,
}

impl FamilyKernel for PowerKernel {
    fn label(&self) -> String {
        self.label.clone()
    }
    fn dim(&self) -> usize {
        self.generator.domain_dim()
    }
    fn resolution(&self) -> usize {
        self.m
    }
    fn element(&self, steps: usize) -> Result<WindowedMap> {
        let mut acc = WindowedMap::identity(self.dim());
        for _ in 0..steps {
            acc = self.generator.compose(&acc)?;
        }
        Ok(acc)
    }
}

/// `t ↦ B* Aᵗ B`: powers of an ambient step compressed onto the orthonormal
/// columns of `basis`.
#[derive(Debug)]
pub struct CompressionKernel {
    pub label: String,
    pub step: WindowedMap,
    pub basis: Matrix,
    pub m: usize,
}

impl FamilyKernel for CompressionKernel {
    fn label(&self) -> String {
        self.label.clone()
    }
    fn dim(&self) -> usize {
        self.basis.cols()
    }
    fn resolution(&self) -> usize {
        self.m
    }
    fn element(&self, steps: usize) -> Result<WindowedMap> {
        let mut acc = WindowedMap::identity(self.step.domain_dim());
        for _ in 0..steps {
            acc = self.step.compose(&acc)?;
        }
        acc.compress(&self.basis)
    }
}

/// Block-diagonal sum of families sharing one grid resolution.
#[derive(Debug)]
pub struct DirectSumKernel(pub Vec<SemigroupFamily>);

impl FamilyKernel for DirectSumKernel {
    fn label(&self) -> String {
        let names: Vec<String> = self.0.iter().map(|f| f.label()).collect();
        names.join(" + ")
    }
    fn dim(&self) -> usize {
        self.0.iter().map(|f| f.dim()).sum()
    }
    fn resolution(&self) -> usize {
        self.0.first().map_or(1, |f| f.resolution())
    }
    fn element(&self, steps: usize) -> Result<WindowedMap> {
        let parts = self
            .0
            .iter()
            .map(|f| f.element(steps))
            .collect::<Result<Vec<_>>>()?;
        let refs: Vec<&WindowedMap> = parts.iter().collect();
        Ok(WindowedMap::direct_sum(&refs))
    }
}

/// A family tensored with the identity on a fibre.
#[derive(Debug)]
pub struct TensorKernel {
    pub inner: SemigroupFamily,
    pub fiber: usize,
    pub side: FiberSide,
}

impl FamilyKernel for TensorKernel {
    fn label(&self) -> String {
        match self.side {
            FiberSide::Right => format!("{} ⊗ I{}", self.inner.label(), self.fiber),
            FiberSide::Left => format!("I{} ⊗ {}", self.fiber, self.inner.label()),
        }
    }
    fn dim(&self) -> usize {
        self.inner.dim() * self.fiber
    }
    fn resolution(&self) -> usize {
        self.inner.resolution()
    }
    fn element(&self, steps: usize) -> Result<WindowedMap> {
        Ok(self.inner.element(steps)?.tensor_identity(self.fiber, self.side))
    }
}

/// `t ↦ A(t)·B(t)` for two commuting families on the same space.
#[derive(Debug)]
pub struct ProductKernel(pub PairOfSemigroups);

impl FamilyKernel for ProductKernel {
    fn label(&self) -> String {
        format!("{} · {}", self.0.first.label(), self.0.second.label())
    }
    fn dim(&self) -> usize {
        self.0.dim()
    }
    fn resolution(&self) -> usize {
        self.0.resolution()
    }
    fn element(&self, steps: usize) -> Result<WindowedMap> {
        self.0.first.element(steps)?.compose(&self.0.second.element(steps)?)
    }
}

pub fn halfline_family(grid: CellGrid1D) -> SemigroupFamily {
    SemigroupFamily::new(HalflineShiftKernel(grid))
}

pub fn phi_family(space: HardyCoeffSpace) -> SemigroupFamily {
    SemigroupFamily::new(PhiMultiplierKernel(space))
}

pub fn circulant_family(n: usize, step: usize, m: usize) -> SemigroupFamily {
    SemigroupFamily::new(CirculantKernel { n, step, m })
}

pub fn bishift_families(grid: QuadrantGrid2D) -> PairOfSemigroups {
    PairOfSemigroups {
        first: SemigroupFamily::new(BishiftKernel { grid, axis: Axis::First }),
        second: SemigroupFamily::new(BishiftKernel { grid, axis: Axis::Second }),
    }
}

pub fn modified_bishift_families(region: LRegionIndex) -> PairOfSemigroups {
    PairOfSemigroups {
        first: SemigroupFamily::new(ModifiedBishiftKernel { region, axis: Axis::First }),
        second: SemigroupFamily::new(ModifiedBishiftKernel { region, axis: Axis::Second }),
    }
}

/// Compares `element(s + t)` with `element(s) ∘ element(t)` over every
/// ordered pair of samples (given in grid steps), on the composed faithful
/// set, and checks that `element(0)` is the identity.
pub fn check_semigroup_law(family: &SemigroupFamily, samples: &[usize], resid_abs: f64) -> Result<Report> {
    let mut worst = 0.0f64;
    let mut compared = usize::MAX;
    for &s in samples {
        for &t in samples {
            let direct = family.element(s + t)?;
            let composed = family.element(s)?.compose(&family.element(t)?)?;
            let (res, cols) = direct.faithful_residual(&composed)?;
            if cols == 0 {
                return Err(Error::WindowTooSmall(format!(
                    "no faithful columns left at {} steps",
                    s + t
                )));
            }
            worst = worst.max(res);
            compared = compared.min(cols);
        }
    }
    if samples.is_empty() {
        compared = 0;
    }
    let zero = family.element(0)?;
    let id_res = zero
        .faithful_residual(&WindowedMap::identity(family.dim()))?
        .0
        .max(if zero.faithful().len() == family.dim() { 0.0 } else { 1.0 });
    let mut report = Report::new();
    report.push(CheckEntry::bounded(
        "semigroup_law",
        worst,
        vec![family.dim(), compared],
        resid_abs,
    ));
    report.push(CheckEntry::bounded(
        "identity_at_zero",
        id_res,
        vec![family.dim()],
        resid_abs,
    ));
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cache_matches_recomputation() {
        let f = halfline_family(CellGrid1D::new(2, 3, 1).unwrap());
        let a = f.element(2).unwrap();
        let b = f.element(2).unwrap();
        assert_eq!(a, b);
        assert_eq!(a, halfline_shift(&CellGrid1D::new(2, 3, 1).unwrap(), 2).unwrap());
        assert_eq!(f.generator_power(2).unwrap(), a);
    }

    #[test]
    fn law_holds_for_basic_families() {
        let f = halfline_family(CellGrid1D::new(2, 3, 1).unwrap());
        let rep = check_semigroup_law(&f, &[1, 2], 1e-10).unwrap();
        assert!(rep.passed());
        assert_eq!(rep.max_residual(), 0.0);
        let c = circulant_family(5, 2, 1);
        assert!(check_semigroup_law(&c, &[0, 1, 3, 7], 1e-10).unwrap().passed());
        let phi = phi_family(HardyCoeffSpace::new(3, 2, 1).unwrap());
        let rep = check_semigroup_law(&phi, &[1, 1], 1e-10).unwrap();
        assert_eq!(rep.max_residual(), 0.0);
    }

    #[test]
    fn exhausted_window_is_reported() {
        let f = halfline_family(CellGrid1D::new(1, 2, 1).unwrap());
        assert!(matches!(
            check_semigroup_law(&f, &[1, 2], 1e-10),
            Err(Error::WindowTooSmall(_))
        ));
    }

    #[test]
    fn mismatched_pair_rejected() {
        let a = halfline_family(CellGrid1D::new(1, 2, 1).unwrap());
        let b = circulant_family(3, 1, 1);
        assert!(PairOfSemigroups::new(a, b).is_err());
    }
}
