//! Physical states of `V ⊗ V_{II_{1,1}}` with `V` modeled, one primary at a
//! time, by the free highest-weight module of a formal primary.
//!
//! A block fixes the lattice degree `(m,n)`, the primary weight `k` and the
//! total weight. Its basis is every product of a PBW monomial on the primary
//! with a Fock monomial on `e^(m,n)` of matching total weight. Physical
//! vectors are the joint kernel of `L~(1)` and `L~(2)`, where
//! `L~(j) = L(j) ⊗ 1 + 1 ⊗ L'(j)`; these two generate all positive modes.

use std::collections::{BTreeMap, HashMap};
use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Zero};
use rayon::prelude::*;

use crate::characters::{graded_dims, primary_decomposition, primary_mult};
use crate::error::CharacterError;
use crate::lattice::{fock_basis, lattice_gram, lattice_virasoro, FockMonomial, LatticeState, LatticeVector};
use crate::linalg::{nullspace, MatrixQ};
use crate::rational::{format_rational, Rational};
use crate::virasoro::{weight_basis, DescendantVector, FormalPrimary, PbwMonomial, VirasoroModule};

/// The degrees for which the no-ghost accounting is carried out.
pub const CHECKED_DEGREES: [(i64, i64); 7] = [(1, -1), (1, 1), (1, 2), (1, 3), (1, 4), (2, 2), (2, 3)];

pub type TensorKey = (PbwMonomial, FockMonomial);

/// A finite sum of `(PBW monomial)|k> ⊗ (Fock monomial)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TensorState {
    primary: FormalPrimary,
    terms: BTreeMap<TensorKey, Rational>,
}

fn add_into(acc: &mut BTreeMap<TensorKey, Rational>, key: TensorKey, coef: Rational) {
    if coef.is_zero() {
        return;
    }
    match acc.get_mut(&key) {
        Some(e) => {
            *e += coef;
            if e.is_zero() {
                acc.remove(&key);
            }
        }
        None => {
            acc.insert(key, coef);
        }
    }
}

impl TensorState {
    pub fn zero(primary: FormalPrimary) -> Self {
        Self {
            primary,
            terms: BTreeMap::new(),
        }
    }

    pub fn tensor(a: &DescendantVector, b: &LatticeState) -> Self {
        let mut terms = BTreeMap::new();
        for (va, ca) in a.terms() {
            for (fb, cb) in b.terms() {
                add_into(&mut terms, (va.clone(), fb.clone()), ca * cb);
            }
        }
        Self {
            primary: a.primary(),
            terms,
        }
    }

    pub fn primary(&self) -> FormalPrimary {
        self.primary
    }

    pub fn terms(&self) -> impl Iterator<Item = (&TensorKey, &Rational)> {
        self.terms.iter()
    }

    pub fn coefficient(&self, key: &TensorKey) -> Rational {
        self.terms.get(key).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut terms = self.terms.clone();
        for (k, c) in &other.terms {
            add_into(&mut terms, k.clone(), c.clone());
        }
        Self {
            primary: self.primary,
            terms,
        }
    }

    pub fn scale(&self, s: &Rational) -> Self {
        let mut terms = BTreeMap::new();
        for (k, c) in &self.terms {
            add_into(&mut terms, k.clone(), c * s);
        }
        Self {
            primary: self.primary,
            terms,
        }
    }
}

impl fmt::Display for TensorState {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        for (i, ((v, l), c)) in self.terms.iter().enumerate() {
            if i > 0 {
                f.write_str(" + ")?;
            }
            if !c.is_one() {
                write!(f, "({}) ", format_rational(c))?;
            }
            if v.is_identity() {
                write!(f, "Z ⊗ {l}")?;
            } else {
                write!(f, "{v}Z ⊗ {l}")?;
            }
        }
        Ok(())
    }
}

/// Total Virasoro action `L~(n)` on tensor states over one formal primary.
pub struct TensorAction {
    module: VirasoroModule,
    lattice: HashMap<(i64, FockMonomial), LatticeState>,
}

impl TensorAction {
    pub fn new(primary: FormalPrimary, c: &Rational) -> Self {
        Self {
            module: VirasoroModule::for_primary(primary, c),
            lattice: HashMap::new(),
        }
    }

    fn lattice_mode(&mut self, n: i64, f: &FockMonomial) -> LatticeState {
        self.lattice
            .entry((n, f.clone()))
            .or_insert_with(|| lattice_virasoro(n, &LatticeState::monomial(f.clone(), Rational::one())))
            .clone()
    }

    pub fn apply(&mut self, n: i64, s: &TensorState) -> TensorState {
        let mut out = BTreeMap::new();
        for ((v, f), c) in &s.terms {
            for (v2, c2) in self.module.act_monomial(n, v.parts()) {
                if s.primary.is_vacuum() && v2.has_level_one() {
                    continue;
                }
                add_into(&mut out, (v2, f.clone()), c * c2);
            }
            for (f2, c2) in self.lattice_mode(n, f).terms() {
                add_into(&mut out, (v.clone(), f2.clone()), c * c2);
            }
        }
        TensorState {
            primary: s.primary,
            terms: out,
        }
    }

    /// Contravariant form: Shapovalov form on the primary's module times the
    /// lattice form.
    pub fn form(&mut self, a: &TensorState, b: &TensorState) -> Rational {
        let mut acc = Rational::zero();
        for ((va, fa), ca) in &a.terms {
            for ((vb, fb), cb) in &b.terms {
                if va.degree() != vb.degree() || fa.level() != fb.level() || fa.degree() != fb.degree() {
                    continue;
                }
                let lf = lattice_gram(
                    &LatticeState::monomial(fa.clone(), Rational::one()),
                    &LatticeState::monomial(fb.clone(), Rational::one()),
                )
                .expect("same degree");
                if lf.is_zero() {
                    continue;
                }
                acc += ca * cb * lf * self.module.form(va, vb);
            }
        }
        acc
    }
}

/// A homogeneous weight space of `U(Vir)|k> ⊗ M(1)^{⊗2} e^(m,n)`.
#[derive(Clone, Debug)]
pub struct PhysicalBlock {
    pub degree: LatticeVector,
    pub k: u32,
    /// Total `L~(0)` eigenvalue.
    pub weight: i64,
    pub basis: Vec<TensorKey>,
    pub gram: MatrixQ,
}

impl PhysicalBlock {
    pub fn primary(&self) -> FormalPrimary {
        FormalPrimary::new(self.k)
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    /// Descendant plus Fock level available in this block.
    pub fn level(&self) -> i64 {
        self.weight - self.k as i64 - self.degree.weight()
    }

    pub fn vector(&self, coords: &[Rational]) -> TensorState {
        let mut terms = BTreeMap::new();
        for (key, c) in self.basis.iter().zip(coords) {
            add_into(&mut terms, key.clone(), c.clone());
        }
        TensorState {
            primary: self.primary(),
            terms,
        }
    }

    /// Coordinates of `s`, or `None` if it leaves the block.
    pub fn coords(&self, s: &TensorState) -> Option<Vec<Rational>> {
        let index: HashMap<&TensorKey, usize> = self.basis.iter().enumerate().map(|(i, k)| (k, i)).collect();
        let mut out = vec![Rational::zero(); self.basis.len()];
        for (key, c) in &s.terms {
            out[*index.get(key)?] = c.clone();
        }
        Some(out)
    }
}

/// Block of total weight `weight` at degree `(m,n)` over a weight-`k` primary.
pub fn build_weight_block(m: i64, n: i64, k: u32, weight: i64, c: &Rational) -> PhysicalBlock {
    let degree = LatticeVector::new(m, n);
    let level = weight - k as i64 - degree.weight();
    let mut basis = Vec::new();
    for a in 0..=level.max(-1) {
        let vir = weight_basis(k, a as u32);
        let fock = fock_basis(degree, (level - a) as u32);
        for v in &vir {
            for f in &fock {
                basis.push((v.clone(), f.clone()));
            }
        }
    }
    let mut module = VirasoroModule::new(k, c);
    let mut lattice_forms: HashMap<(FockMonomial, FockMonomial), Rational> = HashMap::new();
    let mut vir_forms: HashMap<(PbwMonomial, PbwMonomial), Rational> = HashMap::new();
    let dim = basis.len();
    let mut gram = MatrixQ::zeros(dim, dim);
    for i in 0..dim {
        for j in 0..dim {
            let ((va, fa), (vb, fb)) = (&basis[i], &basis[j]);
            if va.degree() != vb.degree() {
                continue;
            }
            let lf = lattice_forms
                .entry((fa.clone(), fb.clone()))
                .or_insert_with(|| {
                    lattice_gram(
                        &LatticeState::monomial(fa.clone(), Rational::one()),
                        &LatticeState::monomial(fb.clone(), Rational::one()),
                    )
                    .expect("same degree")
                })
                .clone();
            if lf.is_zero() {
                continue;
            }
            let vf = vir_forms
                .entry((va.clone(), vb.clone()))
                .or_insert_with(|| module.form(va, vb))
                .clone();
            gram.set(i, j, lf * vf);
        }
    }
    PhysicalBlock {
        degree,
        k,
        weight,
        basis,
        gram,
    }
}

/// The weight-1 block, empty when `k - mn > 1`.
pub fn build_block(m: i64, n: i64, k: u32, c: &Rational) -> PhysicalBlock {
    build_weight_block(m, n, k, 1, c)
}

/// Basis (in block coordinates) of the joint kernel of `L~(1)` and `L~(2)`.
pub fn solve_physical(block: &PhysicalBlock, c: &Rational) -> Vec<Vec<Rational>> {
    if block.dim() == 0 {
        return Vec::new();
    }
    let mut action = TensorAction::new(block.primary(), c);
    let mut row_index: BTreeMap<(i64, TensorKey), usize> = BTreeMap::new();
    let mut columns: Vec<Vec<((i64, TensorKey), Rational)>> = Vec::with_capacity(block.dim());
    for key in &block.basis {
        let v = block.vector_of_key(key);
        let mut col = Vec::new();
        for j in [1, 2] {
            for (k2, c2) in action.apply(j, &v).terms {
                let tag = (j, k2);
                let next = row_index.len();
                row_index.entry(tag.clone()).or_insert(next);
                col.push((tag, c2));
            }
        }
        columns.push(col);
    }
    let mut mat = MatrixQ::zeros(row_index.len(), block.dim());
    for (j, col) in columns.into_iter().enumerate() {
        for (tag, v) in col {
            mat.set(row_index[&tag], j, v);
        }
    }
    nullspace(&mat)
}

impl PhysicalBlock {
    fn vector_of_key(&self, key: &TensorKey) -> TensorState {
        TensorState {
            primary: self.primary(),
            terms: BTreeMap::from([(key.clone(), Rational::one())]),
        }
    }
}

fn columns_matrix(rows: usize, cols: &[Vec<Rational>]) -> MatrixQ {
    MatrixQ::from_columns(rows, cols).expect("uniform column length")
}

/// Physical subspace, its radical and the induced form of one block.
#[derive(Clone, Debug)]
pub struct BlockAnalysis {
    pub block: PhysicalBlock,
    pub physical: Vec<Vec<Rational>>,
    pub radical: Vec<Vec<Rational>>,
    /// `P^T G P` on the physical basis.
    pub restricted_gram: MatrixQ,
    pub summary: RadicalSummary,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RadicalSummary {
    pub degree: LatticeVector,
    pub k: u32,
    pub block_dim: usize,
    pub physical_dim: usize,
    pub radical_dim: usize,
    /// `dim P^1 - dim rad`.
    pub multiplicity: usize,
    pub gram_symmetric: bool,
    /// Dimension of the weight-0 physical block at the same degree.
    pub p0_dim: usize,
    /// Whether `L~(-1)` maps every weight-0 physical vector into the radical.
    pub p0_image_in_radical: bool,
}

pub fn analyze_block(m: i64, n: i64, k: u32, c: &Rational) -> BlockAnalysis {
    let block = build_block(m, n, k, c);
    let physical = solve_physical(&block, c);
    let dim = block.dim();
    let (restricted, radical) = if physical.is_empty() {
        (MatrixQ::zeros(0, 0), Vec::new())
    } else {
        let p = columns_matrix(dim, &physical);
        let gp = block.gram.mul(&p).expect("square gram");
        let restricted = p.transpose().mul(&gp).expect("conformable");
        let radical = nullspace(&restricted)
            .into_iter()
            .map(|x| p.mul_vec(&x).expect("conformable"))
            .collect();
        (restricted, radical)
    };
    let multiplicity = restricted.rank();
    let (p0_dim, p0_image_in_radical) = p0_check(&block, &physical, c);
    let summary = RadicalSummary {
        degree: block.degree,
        k,
        block_dim: dim,
        physical_dim: physical.len(),
        radical_dim: physical.len() - multiplicity,
        multiplicity,
        gram_symmetric: block.gram.is_symmetric() && restricted.is_symmetric(),
        p0_dim,
        p0_image_in_radical,
    };
    BlockAnalysis {
        block,
        physical,
        radical,
        restricted_gram: restricted,
        summary,
    }
}

/// `L~(-1) P^0 ⊆ rad(P^1)`: each image must be killed by `L~(1)`, `L~(2)`
/// and be orthogonal to every physical vector.
fn p0_check(block: &PhysicalBlock, physical: &[Vec<Rational>], c: &Rational) -> (usize, bool) {
    let b0 = build_weight_block(block.degree.m, block.degree.n, block.k, 0, c);
    let p0 = solve_physical(&b0, c);
    let mut action = TensorAction::new(block.primary(), c);
    let ok = p0.iter().all(|x| {
        let image = action.apply(-1, &b0.vector(x));
        if !action.apply(1, &image).is_zero() || !action.apply(2, &image).is_zero() {
            return false;
        }
        let Some(y) = block.coords(&image) else {
            return false;
        };
        let gy = block.gram.mul_vec(&y).expect("square gram");
        physical
            .iter()
            .all(|p| p.iter().zip(&gy).fold(Rational::zero(), |acc, (a, b)| acc + a * b).is_zero())
    });
    (p0.len(), ok)
}

pub fn radical_summary(m: i64, n: i64, k: u32, c: &Rational) -> RadicalSummary {
    analyze_block(m, n, k, c).summary
}

/// Primary weights that can contribute at degree `(m,n)`: 0 and `2..=mn+1`.
pub fn contributing_weights(m: i64, n: i64) -> Vec<u32> {
    let top = m * n + 1;
    if top < 0 {
        return Vec::new();
    }
    std::iter::once(0).chain(2..=top as u32).collect()
}

/// Radical summaries for every contributing primary weight, computed in
/// parallel and returned in increasing `k`.
pub fn block_summaries(m: i64, n: i64, c: &Rational) -> Vec<RadicalSummary> {
    contributing_weights(m, n)
        .into_par_iter()
        .map(|k| radical_summary(m, n, k, c))
        .collect()
}

/// `k ↦ μ_k`, the multiplicity of the weight-`k` primaries in `B(V)^(m,n)`,
/// omitting zeros.
pub fn b_decomposition(m: i64, n: i64, c: &Rational) -> BTreeMap<u32, u64> {
    block_summaries(m, n, c)
        .into_iter()
        .filter(|s| s.multiplicity > 0)
        .map(|s| (s.k, s.multiplicity as u64))
        .collect()
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NoGhostReport {
    pub degree: LatticeVector,
    pub computed: BTreeMap<u32, u64>,
    pub expected: BTreeMap<u32, u64>,
    /// `Σ μ_k dim V_k^p`.
    pub computed_dim: BigInt,
    /// `dim V_{mn+1}`.
    pub expected_dim: BigInt,
}

impl NoGhostReport {
    pub fn holds(&self) -> bool {
        self.computed == self.expected && self.computed_dim == self.expected_dim
    }
}

/// Compares the physical multiplicities at `(m,n)` with the primary
/// decomposition of `V_{mn+1}`.
pub fn noghost_check(m: i64, n: i64, c: &Rational) -> Result<NoGhostReport, CharacterError> {
    let target = m * n + 1;
    let computed = b_decomposition(m, n, c);
    let expected = primary_decomposition(target);
    let size = target.max(2) as usize;
    let prim = primary_mult(size)?;
    let dims = graded_dims(size)?;
    let computed_dim = computed
        .iter()
        .map(|(&k, &mu)| prim.get(k as usize).cloned().unwrap_or_default() * mu)
        .sum();
    let expected_dim = if target < 0 {
        BigInt::zero()
    } else {
        dims[target as usize].clone()
    };
    Ok(NoGhostReport {
        degree: LatticeVector::new(m, n),
        computed,
        expected,
        computed_dim,
        expected_dim,
    })
}
