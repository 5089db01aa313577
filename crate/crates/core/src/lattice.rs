//! The vertex algebra of the rank-2 even unimodular Lorentzian lattice.
//!
//! Lattice vectors are pairs `(m, n)` with `<(a,b),(c,d)> = -ad - bc`. A Fock
//! monomial is a product of Heisenberg creation modes `α(-l)`, with `α` one of
//! the basis vectors `(1,0)`, `(0,1)`, applied to a group element `e^μ`. Its
//! weight is `<μ,μ>/2 = -mn` plus the total level.
//!
//! Vertex operators use the standard lattice formula with trivial cocycle:
//! `Y(e^γ, z) = E^-(-γ,z) E^+(-γ,z) e^γ z^γ`. Modes are indexed by residue:
//! `x_n` is the coefficient of `z^{-n-1}` in `Y(x, z)` and shifts weight by
//! `wt(x) - n - 1`.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::error::LatticeError;
use crate::rational::{format_rational, int, Rational};

#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug, PartialOrd, Ord, Default)]
pub struct LatticeVector {
    pub m: i64,
    pub n: i64,
}

impl LatticeVector {
    pub const fn new(m: i64, n: i64) -> Self {
        Self { m, n }
    }

    pub const ZERO: Self = Self::new(0, 0);

    pub fn pairing(self, other: Self) -> i64 {
        -(self.m * other.n) - (self.n * other.m)
    }

    pub fn norm(self) -> i64 {
        self.pairing(self)
    }

    /// Conformal weight of `e^self`.
    pub fn weight(self) -> i64 {
        self.norm() / 2
    }

    pub fn components(self) -> [(HeisBasis, i64); 2] {
        [(HeisBasis::A, self.m), (HeisBasis::B, self.n)]
    }
}

impl std::ops::Add for LatticeVector {
    type Output = Self;
    fn add(self, o: Self) -> Self {
        Self::new(self.m + o.m, self.n + o.n)
    }
}

impl std::ops::Neg for LatticeVector {
    type Output = Self;
    fn neg(self) -> Self {
        Self::new(-self.m, -self.n)
    }
}

impl fmt::Display for LatticeVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{})", self.m, self.n)
    }
}

/// Heisenberg generators: `A = (1,0)`, `B = (0,1)`.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug, PartialOrd, Ord)]
pub enum HeisBasis {
    A,
    B,
}

impl HeisBasis {
    pub fn vector(self) -> LatticeVector {
        match self {
            HeisBasis::A => LatticeVector::new(1, 0),
            HeisBasis::B => LatticeVector::new(0, 1),
        }
    }
}

#[derive(Clone, PartialEq, Eq, Hash, Debug, PartialOrd, Ord)]
pub struct FockMonomial {
    ground: LatticeVector,
    /// Creation modes `(basis, level)`, sorted by descending level then basis.
    modes: Vec<(HeisBasis, u32)>,
}

impl FockMonomial {
    pub fn ground(mu: LatticeVector) -> Self {
        Self {
            ground: mu,
            modes: Vec::new(),
        }
    }

    pub fn new(mu: LatticeVector, mut modes: Vec<(HeisBasis, u32)>) -> Self {
        debug_assert!(modes.iter().all(|&(_, l)| l >= 1));
        modes.sort_unstable_by(|a, b| b.1.cmp(&a.1).then(a.0.cmp(&b.0)));
        Self { ground: mu, modes }
    }

    pub fn degree(&self) -> LatticeVector {
        self.ground
    }

    pub fn modes(&self) -> &[(HeisBasis, u32)] {
        &self.modes
    }

    pub fn level(&self) -> u32 {
        self.modes.iter().map(|&(_, l)| l).sum()
    }

    pub fn weight(&self) -> i64 {
        self.ground.weight() + self.level() as i64
    }

    fn with_mode(&self, b: HeisBasis, level: u32) -> Self {
        let mut modes = self.modes.clone();
        modes.push((b, level));
        Self::new(self.ground, modes)
    }

    fn without(&self, idx: usize) -> Self {
        let mut modes = self.modes.clone();
        modes.remove(idx);
        Self {
            ground: self.ground,
            modes,
        }
    }
}

impl fmt::Display for FockMonomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for &(b, l) in &self.modes {
            write!(f, "{}(-{l})", b.vector())?;
        }
        write!(f, "e^{}", self.ground)
    }
}

/// All Fock monomials of the given level over `e^mu`, in a fixed order.
pub fn fock_basis(mu: LatticeVector, level: u32) -> Vec<FockMonomial> {
    // a pair of partitions (A-levels, B-levels) with total `level`
    fn partitions(n: u32, max: u32, cur: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
        if n == 0 {
            out.push(cur.clone());
            return;
        }
        for p in (1..=max.min(n)).rev() {
            cur.push(p);
            partitions(n - p, p, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    for la in (0..=level).rev() {
        let (mut pa, mut pb) = (Vec::new(), Vec::new());
        partitions(la, la, &mut Vec::new(), &mut pa);
        partitions(level - la, level - la, &mut Vec::new(), &mut pb);
        for a in &pa {
            for b in &pb {
                let modes = a
                    .iter()
                    .map(|&l| (HeisBasis::A, l))
                    .chain(b.iter().map(|&l| (HeisBasis::B, l)))
                    .collect();
                out.push(FockMonomial::new(mu, modes));
            }
        }
    }
    out
}

type FockTerms = BTreeMap<FockMonomial, Rational>;

fn add_into(acc: &mut FockTerms, key: FockMonomial, coef: Rational) {
    if coef.is_zero() {
        return;
    }
    let e = acc.entry(key).or_insert_with(Rational::zero);
    *e += coef;
    if e.is_zero() {
        acc.retain(|_, v| !v.is_zero());
    }
}

#[derive(Clone, PartialEq, Eq, Debug, Default)]
pub struct LatticeState {
    terms: FockTerms,
}

impl LatticeState {
    pub fn zero() -> Self {
        Self::default()
    }

    /// `e^mu`.
    pub fn ground(mu: LatticeVector) -> Self {
        Self::monomial(FockMonomial::ground(mu), Rational::one())
    }

    pub fn monomial(m: FockMonomial, coef: Rational) -> Self {
        Self::from_terms([(m, coef)])
    }

    /// `γ(-1) e^mu`.
    pub fn delta(gamma: LatticeVector, mu: LatticeVector) -> Self {
        heis_mode(gamma, -1, &Self::ground(mu))
    }

    pub fn from_terms(iter: impl IntoIterator<Item = (FockMonomial, Rational)>) -> Self {
        let mut terms = FockTerms::new();
        for (m, c) in iter {
            add_into(&mut terms, m, c);
        }
        Self { terms }
    }

    pub fn terms(&self) -> impl Iterator<Item = (&FockMonomial, &Rational)> {
        self.terms.iter()
    }

    pub fn coefficient(&self, m: &FockMonomial) -> Rational {
        self.terms.get(m).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut terms = self.terms.clone();
        for (m, c) in &other.terms {
            add_into(&mut terms, m.clone(), c.clone());
        }
        Self { terms }
    }

    pub fn scale(&self, s: &Rational) -> Self {
        Self::from_terms(self.terms.iter().map(|(m, c)| (m.clone(), c * s)))
    }

    /// Common weight of all terms.
    pub fn weight(&self) -> Option<i64> {
        let mut it = self.terms.keys().map(FockMonomial::weight);
        let w = it.next()?;
        it.all(|x| x == w).then_some(w)
    }

    /// Common lattice degree of all terms.
    pub fn degree(&self) -> Option<LatticeVector> {
        let mut it = self.terms.keys().map(FockMonomial::degree);
        let d = it.next()?;
        it.all(|x| x == d).then_some(d)
    }

    fn max_level(&self) -> u32 {
        self.terms.keys().map(FockMonomial::level).max().unwrap_or(0)
    }
}

impl fmt::Display for LatticeState {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        for (i, (m, c)) in self.terms.iter().enumerate() {
            if i > 0 {
                f.write_str(" + ")?;
            }
            if c.is_one() {
                write!(f, "{m}")?;
            } else {
                write!(f, "({}) {m}", format_rational(c))?;
            }
        }
        Ok(())
    }
}

/// `α_b(n)` on a single monomial.
fn basis_mode(b: HeisBasis, n: i64, mono: &FockMonomial, coef: &Rational, out: &mut FockTerms) {
    match n {
        n if n < 0 => add_into(out, mono.with_mode(b, (-n) as u32), coef.clone()),
        0 => {
            let e = b.vector().pairing(mono.ground);
            add_into(out, mono.clone(), coef * int(e));
        }
        n => {
            for (i, &(b2, l)) in mono.modes.iter().enumerate() {
                if l as i64 == n {
                    let p = b.vector().pairing(b2.vector());
                    if p != 0 {
                        add_into(out, mono.without(i), coef * int(n * p));
                    }
                }
            }
        }
    }
}

fn basis_mode_state(b: HeisBasis, n: i64, s: &LatticeState) -> LatticeState {
    let mut out = FockTerms::new();
    for (m, c) in &s.terms {
        basis_mode(b, n, m, c, &mut out);
    }
    LatticeState { terms: out }
}

/// The Heisenberg mode `γ(n)`:
/// `[γ(m), γ'(n)] = m <γ,γ'> δ_{m+n,0}` and `γ(0) e^μ = <γ,μ> e^μ`.
pub fn heis_mode(gamma: LatticeVector, n: i64, s: &LatticeState) -> LatticeState {
    let mut out = FockTerms::new();
    for (b, k) in gamma.components() {
        if k == 0 {
            continue;
        }
        let kr = int(k);
        for (m, c) in &s.terms {
            basis_mode(b, n, m, &(c * &kr), &mut out);
        }
    }
    LatticeState { terms: out }
}

/// Virasoro mode `L'(n)` of the lattice vertex algebra (central charge 2).
///
/// With the dual basis of `(1,0), (0,1)` being `-(0,1), -(1,0)`, the
/// conformal vector gives `L'(n) = -Σ_k :α_A(k) α_B(n-k):`.
pub fn lattice_virasoro(n: i64, s: &LatticeState) -> LatticeState {
    let mut out = LatticeState::zero();
    let bound = s.max_level() as i64 + n.abs() + 2;
    for k in -bound..=bound {
        let (a, b) = (k, n - k);
        // normal order: larger mode index acts first
        let t = if a >= b {
            basis_mode_state(HeisBasis::B, b, &basis_mode_state(HeisBasis::A, a, s))
        } else {
            basis_mode_state(HeisBasis::A, a, &basis_mode_state(HeisBasis::B, b, s))
        };
        out = out.add(&t.scale(&int(-1)));
    }
    out
}

/// Contravariant form with `γ(n)† = γ(-n)` and `<e^μ, e^μ> = 1`.
pub fn lattice_gram(s: &LatticeState, t: &LatticeState) -> Result<Rational, LatticeError> {
    let mut degree = None;
    for m in s.terms.keys().chain(t.terms.keys()) {
        let d = m.ground;
        match degree {
            None => degree = Some(d),
            Some(e) if e != d => return Err(LatticeError::DegreeMismatch(e.m, e.n, d.m, d.n)),
            _ => {}
        }
    }
    let mut acc = Rational::zero();
    for (ma, ca) in &s.terms {
        for (mb, cb) in &t.terms {
            if ma.level() == mb.level() {
                acc += ca * cb * monomial_form(ma, mb);
            }
        }
    }
    Ok(acc)
}

pub(crate) fn monomial_form(a: &FockMonomial, b: &FockMonomial) -> Rational {
    if a.ground != b.ground || a.level() != b.level() {
        return Rational::zero();
    }
    let mut cur = LatticeState::monomial(b.clone(), Rational::one());
    for &(basis, l) in &a.modes {
        cur = basis_mode_state(basis, l as i64, &cur);
        if cur.is_zero() {
            return Rational::zero();
        }
    }
    cur.coefficient(&FockMonomial::ground(b.ground))
}

/// Generalized binomial coefficient `C(a, r)` for integer `a` and `r >= 0`.
fn binom(a: i64, r: u32) -> Rational {
    let mut num = BigInt::one();
    let mut den = BigInt::one();
    for i in 0..r as i64 {
        num *= a - i;
        den *= i + 1;
    }
    Rational::new(num, den)
}

/// A z-power series with state coefficients: exponent ↦ state.
type ZSeries = BTreeMap<i64, LatticeState>;

fn series_add(acc: &mut ZSeries, p: i64, s: LatticeState) {
    if s.is_zero() {
        return;
    }
    let e = acc.entry(p).or_default();
    *e = e.add(&s);
    if e.is_zero() {
        acc.remove(&p);
    }
}

/// Annihilation half `Σ_{k>=0} C(-k-1, r-1) α(k) z^{-k-r}` of the field of
/// `α(-r)·1`.
fn apply_annihilation_field(b: HeisBasis, r: u32, series: ZSeries) -> ZSeries {
    let mut out = ZSeries::new();
    for (p, st) in series {
        for k in 0..=st.max_level() as i64 {
            let c = binom(-k - 1, r - 1);
            if c.is_zero() {
                continue;
            }
            series_add(&mut out, p - k - r as i64, basis_mode_state(b, k, &st).scale(&c));
        }
    }
    out
}

/// Creation half `Σ_{k<=-1} C(-k-1, r-1) α(k) z^{-k-r}`, truncated so no
/// output exceeds `max_weight`.
fn apply_creation_field(b: HeisBasis, r: u32, series: ZSeries, max_weight: i64) -> ZSeries {
    let mut out = ZSeries::new();
    for (p, st) in series {
        let budget = st.weight().map_or(0, |w| max_weight - w);
        for k in (-budget.max(0)..=-(r as i64)).rev() {
            let c = binom(-k - 1, r - 1);
            if c.is_zero() {
                continue;
            }
            series_add(&mut out, p - k - r as i64, basis_mode_state(b, k, &st).scale(&c));
        }
    }
    out
}

/// `E^+(-γ, z) = exp(-Σ_{n>=1} γ(n) z^{-n} / n)` via `d G_d = -Σ_n γ(n) G_{d-n}`.
fn apply_e_plus(gamma: LatticeVector, series: ZSeries) -> ZSeries {
    let mut out = ZSeries::new();
    for (p, st) in series {
        let top = st.max_level() as usize;
        let mut g = vec![st];
        for d in 1..=top {
            let mut acc = LatticeState::zero();
            for n in 1..=d {
                acc = acc.add(&heis_mode(gamma, n as i64, &g[d - n]));
            }
            g.push(acc.scale(&Rational::new((-1).into(), (d as i64).into())));
        }
        for (d, s) in g.into_iter().enumerate() {
            series_add(&mut out, p - d as i64, s);
        }
    }
    out
}

/// `E^-(-γ, z) = exp(Σ_{n>=1} γ(-n) z^n / n)` via `d F_d = Σ_n γ(-n) F_{d-n}`.
fn apply_e_minus(gamma: LatticeVector, series: ZSeries, max_weight: i64) -> ZSeries {
    let mut out = ZSeries::new();
    for (p, st) in series {
        let budget = st.weight().map_or(0, |w| max_weight - w);
        if budget < 0 {
            continue;
        }
        let mut f = vec![st];
        for d in 1..=budget as usize {
            let mut acc = LatticeState::zero();
            for n in 1..=d {
                acc = acc.add(&heis_mode(gamma, -(n as i64), &f[d - n]));
            }
            f.push(acc.scale(&Rational::new(1.into(), (d as i64).into())));
        }
        for (d, s) in f.into_iter().enumerate() {
            series_add(&mut out, p + d as i64, s);
        }
    }
    out
}

/// `e^γ z^γ` with trivial cocycle.
fn apply_group_element(gamma: LatticeVector, series: ZSeries) -> ZSeries {
    let mut out = ZSeries::new();
    for (p, st) in series {
        for (m, c) in st.terms {
            let shift = gamma.pairing(m.ground);
            let moved = FockMonomial {
                ground: m.ground + gamma,
                modes: m.modes,
            };
            series_add(&mut out, p + shift, LatticeState::monomial(moved, c));
        }
    }
    out
}

/// `Y(x, z) y` as a map from z-exponent to coefficient, keeping every
/// coefficient of weight at most `max_weight`.
///
/// For `x = α1(-r1)…αs(-rs) e^γ` the field is the normal-ordered product of
/// the derivative fields of the `αi` with `Y(e^γ, z)`: creation halves to the
/// left, annihilation halves (including zero modes) to the right.
pub fn vertex_operator(x: &LatticeState, y: &LatticeState, max_weight: i64) -> ZSeriesOut {
    let mut total = ZSeries::new();
    for (xm, xc) in &x.terms {
        let factors = &xm.modes;
        let gamma = xm.ground;
        for (ym, yc) in &y.terms {
            let start = ZSeries::from([(0, LatticeState::monomial(ym.clone(), xc * yc))]);
            for mask in 0..(1u32 << factors.len()) {
                let mut series = start.clone();
                for (j, &(b, r)) in factors.iter().enumerate() {
                    if mask & (1 << j) == 0 {
                        series = apply_annihilation_field(b, r, series);
                    }
                }
                series = apply_e_plus(gamma, series);
                series = apply_group_element(gamma, series);
                series = apply_e_minus(gamma, series, max_weight);
                for (j, &(b, r)) in factors.iter().enumerate() {
                    if mask & (1 << j) != 0 {
                        series = apply_creation_field(b, r, series, max_weight);
                    }
                }
                for (p, s) in series {
                    let kept = LatticeState::from_terms(
                        s.terms.into_iter().filter(|(m, _)| m.weight() <= max_weight),
                    );
                    series_add(&mut total, p, kept);
                }
            }
        }
    }
    ZSeriesOut(total)
}

/// Coefficients of `Y(x, z) y`, keyed by the exponent of `z`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ZSeriesOut(BTreeMap<i64, LatticeState>);

impl ZSeriesOut {
    pub fn coefficient(&self, exponent: i64) -> LatticeState {
        self.0.get(&exponent).cloned().unwrap_or_default()
    }

    /// `x_n y`, the coefficient of `z^{-n-1}`.
    pub fn mode(&self, n: i64) -> LatticeState {
        self.coefficient(-n - 1)
    }

    pub fn iter(&self) -> impl Iterator<Item = (i64, &LatticeState)> {
        self.0.iter().map(|(p, s)| (*p, s))
    }
}

/// One coefficient of `Y(e^γ, z) s`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VertexComponent {
    /// Residue index `n`: the coefficient of `z^{-n-1}`.
    pub mode: i64,
    pub weight: i64,
    pub state: LatticeState,
}

/// Nonzero coefficients of `Y(e^γ, z) s` whose weight lies in `window`,
/// in increasing weight.
pub fn vertex_modes(
    gamma: LatticeVector,
    s: &LatticeState,
    window: std::ops::RangeInclusive<i64>,
) -> Vec<VertexComponent> {
    vertex_components(&LatticeState::ground(gamma), s, window)
}

/// As [`vertex_modes`] for an arbitrary homogeneous `x`.
pub fn vertex_components(
    x: &LatticeState,
    s: &LatticeState,
    window: std::ops::RangeInclusive<i64>,
) -> Vec<VertexComponent> {
    let series = vertex_operator(x, s, *window.end());
    series
        .0
        .into_iter()
        .filter_map(|(p, st)| {
            let w = st.weight()?;
            window.contains(&w).then_some(VertexComponent {
                mode: -p - 1,
                weight: w,
                state: st,
            })
        })
        .collect()
}

/// One term `(v_i u) ⊗ x_{-i-1} y` of a 0-product.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ZeroProductTerm {
    /// Mode index `i` of the V-side product `v_i u`.
    pub v_mode: i64,
    /// Weight of `v_i u`.
    pub v_weight: i64,
    pub lattice: LatticeState,
}

/// The 0-product `(v ⊗ x)_0 (u ⊗ y) = Σ_i v_i u ⊗ x_{-i-1} y` for primaries of
/// weights `h_v`, `h_u`, keeping the terms with `wt(v_i u) >= 0`, in
/// increasing `i`.
pub fn zero_product_expansion(
    h_v: u32,
    h_u: u32,
    x: &LatticeState,
    y: &LatticeState,
) -> Vec<ZeroProductTerm> {
    let top = h_v as i64 + h_u as i64 - 1;
    let (Some(wx), Some(wy)) = (x.weight(), y.weight()) else {
        return Vec::new();
    };
    let series = vertex_operator(x, y, wx + wy + top);
    series
        .0
        .into_iter()
        .filter(|(p, _)| *p <= top)
        .map(|(i, lattice)| ZeroProductTerm {
            v_mode: i,
            v_weight: top - i,
            lattice,
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    const V11: LatticeVector = LatticeVector::new(1, 1);

    fn g(m: i64, n: i64) -> LatticeVector {
        LatticeVector::new(m, n)
    }

    #[test]
    fn pairing_and_weights() {
        assert_eq!(g(2, 3).weight(), -6);
        assert_eq!(g(1, -1).weight(), 1);
        assert_eq!(g(2, -3).pairing(g(2, 3)), 0);
        assert_eq!(g(2, -2).norm(), 8);
        assert_eq!(g(1, 0).pairing(g(0, 1)), -1);
        for m in -4..5 {
            for n in -4..5 {
                assert_eq!(g(m, n).norm() % 2, 0);
            }
        }
    }

    #[test]
    fn heisenberg_examples() {
        let e = LatticeState::ground(g(2, 3));
        assert!(heis_mode(g(2, -3), 0, &e).is_zero());
        assert_eq!(heis_mode(g(1, 0), 0, &LatticeState::ground(g(4, 7))), LatticeState::ground(g(4, 7)).scale(&int(-7)));
        let gamma = g(2, 5);
        let mu = g(1, 3);
        let s = heis_mode(gamma, -1, &LatticeState::ground(mu));
        let r = heis_mode(gamma, 1, &s);
        assert_eq!(r, LatticeState::ground(mu).scale(&int(gamma.norm())));
        assert!(heis_mode(gamma, 1, &LatticeState::ground(mu)).is_zero());
    }

    #[test]
    fn heisenberg_commutator() {
        let mu = g(1, 2);
        let s = heis_mode(g(1, -2), -2, &heis_mode(g(0, 1), -1, &LatticeState::ground(mu)));
        for (a, b) in [(g(1, 1), g(2, -1)), (g(1, 0), g(0, 1)), (g(3, 1), g(3, 1))] {
            for m in -3..=3i64 {
                for n in -3..=3i64 {
                    let ab = heis_mode(a, m, &heis_mode(b, n, &s));
                    let ba = heis_mode(b, n, &heis_mode(a, m, &s));
                    let expect = if m + n == 0 { s.scale(&int(m * a.pairing(b))) } else { LatticeState::zero() };
                    assert_eq!(ab.add(&ba.scale(&int(-1))), expect, "a={a} b={b} m={m} n={n}");
                }
            }
        }
    }

    #[test]
    fn gram_examples() {
        let e = LatticeState::ground(g(2, 2));
        assert_eq!(lattice_gram(&e, &e).unwrap(), int(1));
        let d = LatticeState::delta(g(2, -2), g(2, 2));
        assert_eq!(lattice_gram(&d, &d).unwrap(), int(8));
        let mu = g(3, 1);
        let a = LatticeState::delta(g(1, 0), mu);
        let b = LatticeState::delta(g(0, 1), mu);
        assert_eq!(lattice_gram(&a, &b).unwrap(), int(-1));
        assert!(lattice_gram(&e, &LatticeState::ground(g(2, 3))).is_err());
        for m in 1..=5 {
            let d = LatticeState::delta(g(2, -m), g(2, m));
            assert_ne!(lattice_gram(&d, &d).unwrap(), int(0));
        }
    }

    #[test]
    fn fock_basis_counts() {
        let counts: Vec<usize> = (0..8).map(|l| fock_basis(g(1, 1), l).len()).collect();
        assert_eq!(counts, vec![1, 2, 5, 10, 20, 36, 65, 110]);
    }

    #[test]
    fn vertex_modes_on_e12() {
        let comps = vertex_modes(V11, &LatticeState::ground(g(1, 2)), -6..=-5);
        assert_eq!(comps.len(), 2);
        assert_eq!(comps[0].weight, -6);
        assert_eq!(comps[0].state, LatticeState::ground(g(2, 3)));
        assert_eq!(comps[0].mode, 2);
        assert_eq!(comps[1].state, LatticeState::delta(V11, g(2, 3)));
    }

    #[test]
    fn vertex_modes_on_vacuum_and_leading_weight() {
        let comps = vertex_modes(g(3, -1), &LatticeState::ground(LatticeVector::ZERO), 3..=3);
        assert_eq!(comps[0].state, LatticeState::ground(g(3, -1)));
        assert_eq!(comps[0].mode, -1);
        let comps = vertex_modes(V11, &LatticeState::ground(V11), -10..=-4);
        assert_eq!(comps.len(), 1);
        assert_eq!(comps[0].weight, -4);
        // z-exponent <(1,1),(1,1)> = -2 -> residue index 1
        assert_eq!(comps[0].mode, 1);
        assert_eq!(comps[0].state, LatticeState::ground(g(2, 2)));
    }

    #[test]
    fn heisenberg_field_modes() {
        // Y(γ(-1)1, z) = Σ γ(n) z^{-n-1}
        let gamma = g(2, -1);
        let x = LatticeState::delta(gamma, LatticeVector::ZERO);
        let y = heis_mode(g(1, 1), -2, &LatticeState::ground(g(1, 3)));
        let series = vertex_operator(&x, &y, 10);
        for n in -4..=3 {
            assert_eq!(series.mode(n), heis_mode(gamma, n, &y), "n={n}");
        }
    }

    #[test]
    fn creation_property() {
        let x = heis_mode(g(1, 0), -2, &LatticeState::delta(g(0, 1), g(1, -2)));
        let series = vertex_operator(&x, &LatticeState::ground(LatticeVector::ZERO), 6);
        assert_eq!(series.mode(-1), x);
        for n in 0..4 {
            assert!(series.mode(n).is_zero());
        }
    }

    #[test]
    fn zero_product_pattern_phi1() {
        let e = LatticeState::ground(V11);
        let terms = zero_product_expansion(2, 2, &e, &e);
        assert_eq!(terms.first().unwrap().v_mode, -2);
        assert_eq!(terms.first().unwrap().lattice, LatticeState::ground(g(2, 2)));
        for t in &terms {
            assert_eq!(t.v_weight, 3 - t.v_mode);
            assert_eq!(t.lattice.weight(), Some(-2 + t.v_mode));
            assert_eq!(t.v_weight + t.lattice.weight().unwrap(), 1);
        }
        assert_eq!(terms.last().unwrap().v_mode, 3);
    }

    #[test]
    fn zero_product_pattern_phi2() {
        let x = LatticeState::ground(V11);
        let y = LatticeState::delta(g(1, -2), g(1, 2));
        let terms = zero_product_expansion(2, 2, &x, &y);
        assert_eq!(terms[0].v_mode, -4);
        assert_eq!(terms[0].lattice, LatticeState::ground(g(2, 3)).scale(&int(-1)));
        assert_eq!(terms[1].v_mode, -3);
        let expect = LatticeState::delta(g(1, -2), g(2, 3)).add(&LatticeState::delta(V11, g(2, 3)).scale(&int(-1)));
        assert_eq!(terms[1].lattice, expect);
    }

    #[test]
    fn zero_product_vacuum() {
        let one = LatticeState::ground(LatticeVector::ZERO);
        let terms = zero_product_expansion(2, 3, &one, &one);
        assert_eq!(terms.len(), 1);
        assert_eq!(terms[0].v_mode, 0);
        assert_eq!(terms[0].lattice, one);
    }

    #[test]
    fn lattice_virasoro_basics() {
        for mu in [g(1, 1), g(2, 3), g(1, -1), g(0, 0)] {
            let e = LatticeState::ground(mu);
            assert_eq!(lattice_virasoro(0, &e), e.scale(&int(mu.weight())));
            assert_eq!(lattice_virasoro(-1, &e), LatticeState::delta(mu, mu));
            assert!(lattice_virasoro(1, &e).is_zero());
        }
        // L'(1) δ^{(m,-n)}(-1) e^{(m,n)} = <(m,-n),(m,n)> e = 0
        let d = LatticeState::delta(g(2, -3), g(2, 3));
        assert!(lattice_virasoro(1, &d).is_zero());
        assert!(lattice_virasoro(2, &d).is_zero());
    }

    #[test]
    fn lattice_virasoro_commutators() {
        let s = heis_mode(g(1, 0), -2, &LatticeState::delta(g(1, 1), g(1, 2)))
            .add(&heis_mode(g(0, 1), -3, &LatticeState::ground(g(1, 2))));
        for m in -3..=3i64 {
            for n in -3..=3i64 {
                let ab = lattice_virasoro(m, &lattice_virasoro(n, &s));
                let ba = lattice_virasoro(n, &lattice_virasoro(m, &s));
                let mut expect = lattice_virasoro(m + n, &s).scale(&int(m - n));
                if m + n == 0 {
                    // central charge 2
                    expect = expect.add(&s.scale(&Rational::new((2 * (m * m * m - m)).into(), 12.into())));
                }
                assert_eq!(ab.add(&ba.scale(&int(-1))), expect, "m={m} n={n}");
            }
        }
    }

    #[test]
    fn lattice_virasoro_adjoint() {
        let mu = g(2, 2);
        let lo = fock_basis(mu, 1);
        let hi = fock_basis(mu, 3);
        for a in &lo {
            for b in &hi {
                let a_s = LatticeState::monomial(a.clone(), int(1));
                let b_s = LatticeState::monomial(b.clone(), int(1));
                let lhs = lattice_gram(&lattice_virasoro(-2, &a_s), &b_s).unwrap();
                let rhs = lattice_gram(&a_s, &lattice_virasoro(2, &b_s)).unwrap();
                assert_eq!(lhs, rhs);
            }
        }
    }
}
