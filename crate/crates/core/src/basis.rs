//! Basis-function families, design matrices and subset enumeration.

use std::collections::HashSet;
use std::fmt;

use nalgebra::DMatrix;

use crate::error::{Error, Result};

/// Polynomial family used for the factors of a basis function.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Family {
    Monomial,
    Legendre,
}

impl Family {
    fn eval(self, degree: u32, x: f64) -> f64 {
        match self {
            Family::Monomial => monomial(degree, x),
            Family::Legendre => legendre(degree, x),
        }
    }
}

fn monomial(degree: u32, x: f64) -> f64 {
    let mut v = 1.0;
    for _ in 0..degree {
        v *= x;
    }
    v
}

/// Legendre polynomial `P_n(x)` by the three-term recurrence
/// `(k+1) P_{k+1} = (2k+1) x P_k − k P_{k−1}`.
pub fn legendre(degree: u32, x: f64) -> f64 {
    if degree == 0 {
        return 1.0;
    }
    let (mut prev, mut cur) = (1.0, x);
    for k in 1..degree {
        let k = k as f64;
        let next = ((2.0 * k + 1.0) * x * cur - k * prev) / (k + 1.0);
        prev = cur;
        cur = next;
    }
    cur
}

/// A single basis function `w(x)` of one or two variables.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum BasisFunction {
    /// `x^r`
    Monomial(u32),
    /// `P_r(x)`
    Legendre(u32),
    /// `f_r(x) · f_s(y)` with both factors from `family`.
    Product { family: Family, r: u32, s: u32 },
}

impl BasisFunction {
    pub fn dim(&self) -> usize {
        match self {
            BasisFunction::Monomial(_) | BasisFunction::Legendre(_) => 1,
            BasisFunction::Product { .. } => 2,
        }
    }

    /// Degrees `(r, s)`; `s` is zero for one-dimensional functions.
    pub fn degrees(&self) -> (u32, u32) {
        match *self {
            BasisFunction::Monomial(r) | BasisFunction::Legendre(r) => (r, 0),
            BasisFunction::Product { r, s, .. } => (r, s),
        }
    }

    pub fn total_degree(&self) -> u32 {
        let (r, s) = self.degrees();
        r + s
    }

    pub fn eval(&self, point: &[f64]) -> Result<f64> {
        if point.len() != self.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.dim(),
                actual: point.len(),
            });
        }
        Ok(self.eval_unchecked(point))
    }

    #[inline]
    fn eval_unchecked(&self, point: &[f64]) -> f64 {
        match *self {
            BasisFunction::Monomial(r) => monomial(r, point[0]),
            BasisFunction::Legendre(r) => legendre(r, point[0]),
            BasisFunction::Product { family, r, s } => family.eval(r, point[0]) * family.eval(s, point[1]),
        }
    }
}

impl fmt::Display for BasisFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fn mono(f: &mut fmt::Formatter<'_>, var: &str, d: u32) -> fmt::Result {
            match d {
                0 => Ok(()),
                1 => write!(f, "{var}"),
                _ => write!(f, "{var}^{d}"),
            }
        }
        match *self {
            BasisFunction::Monomial(0) | BasisFunction::Legendre(0) => write!(f, "1"),
            BasisFunction::Monomial(r) => mono(f, "x", r),
            BasisFunction::Legendre(r) => write!(f, "P{r}(x)"),
            BasisFunction::Product { r: 0, s: 0, .. } => write!(f, "1"),
            BasisFunction::Product {
                family: Family::Monomial,
                r,
                s,
            } => {
                mono(f, "x", r)?;
                mono(f, "y", s)
            }
            BasisFunction::Product {
                family: Family::Legendre,
                r,
                s,
            } => {
                if r > 0 {
                    write!(f, "P{r}(x)")?;
                }
                if s > 0 {
                    write!(f, "P{s}(y)")?;
                }
                Ok(())
            }
        }
    }
}

/// Evaluates `f` at `point`.
pub fn eval_basis(f: &BasisFunction, point: &[f64]) -> Result<f64> {
    f.eval(point)
}

/// An ordered, duplicate-free list of basis functions of a common dimension.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct BasisSet {
    functions: Vec<BasisFunction>,
    dim: usize,
}

impl BasisSet {
    pub fn new(functions: Vec<BasisFunction>) -> Result<Self> {
        let first = functions
            .first()
            .ok_or_else(|| Error::InvalidBasis("a basis set needs at least one function".into()))?;
        let dim = first.dim();
        if let Some(bad) = functions.iter().find(|f| f.dim() != dim) {
            return Err(Error::InvalidBasis(format!(
                "{bad} has dimension {} but the set has dimension {dim}",
                bad.dim()
            )));
        }
        let mut seen = HashSet::with_capacity(functions.len());
        for f in &functions {
            if !seen.insert(*f) {
                return Err(Error::InvalidBasis(format!("duplicate basis function {f}")));
            }
        }
        Ok(Self { functions, dim })
    }

    pub fn len(&self) -> usize {
        self.functions.len()
    }

    pub fn is_empty(&self) -> bool {
        self.functions.is_empty()
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn functions(&self) -> &[BasisFunction] {
        &self.functions
    }

    pub fn iter(&self) -> std::slice::Iter<'_, BasisFunction> {
        self.functions.iter()
    }

    /// The sub-basis made of the members at `indices`, in the given order.
    pub fn select(&self, indices: &[usize]) -> Result<BasisSet> {
        let functions = indices
            .iter()
            .map(|&i| {
                self.functions.get(i).copied().ok_or_else(|| {
                    Error::InvalidBasis(format!("index {i} out of range for a set of {}", self.len()))
                })
            })
            .collect::<Result<Vec<_>>>()?;
        BasisSet::new(functions)
    }

    /// Value of `Σ_m coefficients[m] w_m(point)`.
    pub fn eval_combination(&self, coefficients: &[f64], point: &[f64]) -> Result<f64> {
        if coefficients.len() != self.len() {
            return Err(Error::LengthMismatch {
                what: "coefficients",
                expected: self.len(),
                actual: coefficients.len(),
            });
        }
        if point.len() != self.dim {
            return Err(Error::DimensionMismatch {
                expected: self.dim,
                actual: point.len(),
            });
        }
        Ok(self
            .functions
            .iter()
            .zip(coefficients)
            .map(|(f, c)| c * f.eval_unchecked(point))
            .sum())
    }
}

impl fmt::Display for BasisSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (i, func) in self.functions.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{func}")?;
        }
        write!(f, "}}")
    }
}

impl<'a> IntoIterator for &'a BasisSet {
    type Item = &'a BasisFunction;
    type IntoIter = std::slice::Iter<'a, BasisFunction>;

    fn into_iter(self) -> Self::IntoIter {
        self.functions.iter()
    }
}

/// All basis functions of total degree at most `q`.
///
/// One variable: degrees `0..=q`. Two variables: products with `r + s <= q`,
/// `(q+1)(q+2)/2` of them, grouped by total degree `t`. Within a group the
/// pure powers come first (`x^t`, then `y^t`), followed by the mixed terms
/// with increasing `r`: `1, x, y, x², y², xy, x³, y³, xy², x²y, …`.
pub fn total_degree_set(q: u32, dim: usize, family: Family) -> Result<BasisSet> {
    let functions = match dim {
        1 => (0..=q)
            .map(|r| match family {
                Family::Monomial => BasisFunction::Monomial(r),
                Family::Legendre => BasisFunction::Legendre(r),
            })
            .collect(),
        2 => {
            let mut out = vec![BasisFunction::Product { family, r: 0, s: 0 }];
            for t in 1..=q {
                out.push(BasisFunction::Product { family, r: t, s: 0 });
                out.push(BasisFunction::Product { family, r: 0, s: t });
                for r in 1..t {
                    out.push(BasisFunction::Product { family, r, s: t - r });
                }
            }
            out
        }
        d => return Err(Error::UnsupportedDimension(d)),
    };
    BasisSet::new(functions)
}

/// `N` sample points of dimension `d`, stored row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct Points {
    dim: usize,
    coords: Vec<f64>,
}

impl Points {
    pub fn from_flat(dim: usize, coords: Vec<f64>) -> Result<Self> {
        if dim == 0 || dim > 2 {
            return Err(Error::UnsupportedDimension(dim));
        }
        if !coords.len().is_multiple_of(dim) {
            return Err(Error::InvalidInput(format!(
                "{} coordinates cannot be split into points of dimension {dim}",
                coords.len()
            )));
        }
        Ok(Self { dim, coords })
    }

    pub fn one_d(xs: Vec<f64>) -> Self {
        Self { dim: 1, coords: xs }
    }

    pub fn two_d(xy: &[[f64; 2]]) -> Self {
        Self {
            dim: 2,
            coords: xy.iter().flatten().copied().collect(),
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn len(&self) -> usize {
        self.coords.len() / self.dim
    }

    pub fn is_empty(&self) -> bool {
        self.coords.is_empty()
    }

    pub fn get(&self, n: usize) -> &[f64] {
        &self.coords[n * self.dim..(n + 1) * self.dim]
    }

    pub fn iter(&self) -> std::slice::ChunksExact<'_, f64> {
        self.coords.chunks_exact(self.dim)
    }

    /// Coordinate `axis` of every point.
    pub fn axis(&self, axis: usize) -> Vec<f64> {
        self.iter().map(|p| p[axis]).collect()
    }

    pub fn as_flat(&self) -> &[f64] {
        &self.coords
    }

    pub(crate) fn as_flat_mut(&mut self) -> &mut [f64] {
        &mut self.coords
    }
}

/// `W_{nm} = w_m(x_n)` together with the functions that produced each column.
#[derive(Debug, Clone, PartialEq)]
pub struct DesignMatrix {
    values: DMatrix<f64>,
    columns: Vec<BasisFunction>,
}

impl DesignMatrix {
    pub fn values(&self) -> &DMatrix<f64> {
        &self.values
    }

    pub fn columns(&self) -> &[BasisFunction] {
        &self.columns
    }

    pub fn n_rows(&self) -> usize {
        self.values.nrows()
    }

    pub fn n_cols(&self) -> usize {
        self.values.ncols()
    }

    /// True when `N <= l`; the evidence is undefined for such a design.
    pub fn is_underdetermined(&self) -> bool {
        self.n_rows() <= self.n_cols()
    }

    /// The design of the sub-basis made of columns `indices`.
    pub fn select_columns(&self, indices: &[usize]) -> Result<DesignMatrix> {
        if let Some(&bad) = indices.iter().find(|&&i| i >= self.n_cols()) {
            return Err(Error::InvalidBasis(format!(
                "column {bad} out of range for a design with {} columns",
                self.n_cols()
            )));
        }
        Ok(DesignMatrix {
            values: self.values.select_columns(indices),
            columns: indices.iter().map(|&i| self.columns[i]).collect(),
        })
    }
}

/// Evaluates every member of `basis` at every point.
pub fn build_design_matrix(points: &Points, basis: &BasisSet) -> Result<DesignMatrix> {
    if points.is_empty() {
        return Err(Error::InvalidInput("no sample points".into()));
    }
    if points.dim() != basis.dim() {
        return Err(Error::DimensionMismatch {
            expected: basis.dim(),
            actual: points.dim(),
        });
    }
    let values = DMatrix::from_fn(points.len(), basis.len(), |n, m| {
        basis.functions[m].eval_unchecked(points.get(n))
    });
    Ok(DesignMatrix {
        values,
        columns: basis.functions.clone(),
    })
}

/// `C(n, k)`; saturates at `u64::MAX`.
pub fn binomial(n: usize, k: usize) -> u64 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = acc * (n - i) as u128 / (i + 1) as u128;
        if acc > u64::MAX as u128 {
            return u64::MAX;
        }
    }
    acc as u64
}

/// A subset of a basis: its position in the enumeration and the kept indices.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Subset {
    pub index: u64,
    pub kept: Vec<usize>,
}

impl Subset {
    pub fn basis(&self, full: &BasisSet) -> Result<BasisSet> {
        full.select(&self.kept)
    }
}

/// Lazily enumerates subsets of `0..n` of the requested sizes.
///
/// Smaller sizes come first. Within a size, kept-index tuples are in increasing
/// lexicographic order, which is the same as listing the omitted-index tuples in
/// decreasing lexicographic order: subsets that drop later list elements come first.
#[derive(Debug, Clone)]
pub struct SubsetEnumerator {
    n: usize,
    sizes: Vec<usize>,
    /// Cumulative subset counts at the start of each size block.
    offsets: Vec<u64>,
    total: u64,
    next_index: u64,
    end: u64,
    current: Option<(usize, Vec<usize>)>,
}

/// Subsets of `full` with sizes in `sizes`, in the order documented on [`SubsetEnumerator`].
pub fn enumerate_subsets(full: &BasisSet, sizes: &[usize]) -> Result<SubsetEnumerator> {
    SubsetEnumerator::new(full.len(), sizes)
}

impl SubsetEnumerator {
    pub fn new(n: usize, sizes: &[usize]) -> Result<Self> {
        let mut sizes = sizes.to_vec();
        sizes.sort_unstable();
        sizes.dedup();
        if let Some(&big) = sizes.iter().find(|&&k| k > n) {
            return Err(Error::SubsetTooLarge {
                size: big,
                available: n,
            });
        }
        if sizes.first() == Some(&0) {
            return Err(Error::InvalidInput("subset size 0 is not a model".into()));
        }
        let mut offsets = Vec::with_capacity(sizes.len());
        let mut total = 0u64;
        for &k in &sizes {
            offsets.push(total);
            total = total.saturating_add(binomial(n, k));
        }
        Ok(Self {
            n,
            sizes,
            offsets,
            total,
            next_index: 0,
            end: total,
            current: None,
        })
    }

    /// Total number of subsets over all requested sizes.
    pub fn total(&self) -> u64 {
        self.total
    }

    /// Restricts the enumeration to sequence indices `start..end`.
    pub fn range(mut self, start: u64, end: u64) -> Self {
        self.end = end.min(self.total);
        self.next_index = start.min(self.end);
        self.current = None;
        self
    }

    /// The subset with sequence number `index`.
    pub fn subset_at(&self, index: u64) -> Option<Subset> {
        if index >= self.total {
            return None;
        }
        let block = self.offsets.partition_point(|&o| o <= index) - 1;
        let k = self.sizes[block];
        let kept = unrank_lex(self.n, k, index - self.offsets[block]);
        Some(Subset { index, kept })
    }
}

/// The `rank`-th k-subset of `0..n` in lexicographic order.
fn unrank_lex(n: usize, k: usize, mut rank: u64) -> Vec<usize> {
    let mut kept = Vec::with_capacity(k);
    let mut next = 0;
    for slot in 0..k {
        loop {
            // Subsets whose `slot`-th element is `next`.
            let count = binomial(n - next - 1, k - slot - 1);
            if rank < count {
                break;
            }
            rank -= count;
            next += 1;
        }
        kept.push(next);
        next += 1;
    }
    kept
}

/// Advances `kept` to the next k-subset of `0..n` in lexicographic order.
fn advance_lex(n: usize, kept: &mut [usize]) -> bool {
    let k = kept.len();
    for i in (0..k).rev() {
        if kept[i] < n - k + i {
            kept[i] += 1;
            for j in i + 1..k {
                kept[j] = kept[j - 1] + 1;
            }
            return true;
        }
    }
    false
}

impl Iterator for SubsetEnumerator {
    type Item = Subset;

    fn next(&mut self) -> Option<Subset> {
        if self.next_index >= self.end {
            return None;
        }
        let index = self.next_index;
        let advanced = match &mut self.current {
            Some((block, kept)) => {
                if advance_lex(self.n, kept) {
                    true
                } else {
                    *block += 1;
                    let k = self.sizes[*block];
                    *kept = (0..k).collect();
                    true
                }
            }
            None => false,
        };
        if !advanced {
            let s = self.subset_at(index)?;
            let block = self.offsets.partition_point(|&o| o <= index) - 1;
            self.current = Some((block, s.kept));
        }
        self.next_index += 1;
        let kept = self.current.as_ref().map(|(_, k)| k.clone())?;
        Some(Subset { index, kept })
    }

    fn size_hint(&self) -> (usize, Option<usize>) {
        let left = (self.end - self.next_index) as usize;
        (left, Some(left))
    }
}

impl ExactSizeIterator for SubsetEnumerator {}
