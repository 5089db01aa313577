//! Virasoro algebra acting on highest-weight modules in a PBW basis.
//!
//! A descendant of a formal primary `|h>` is stored as a combination of
//! ordered monomials `L(-n1)…L(-nk)|h>` with `n1 >= … >= nk >= 1`. Positive
//! and zero modes are commuted to the right with
//! `[L(m), L(n)] = (m-n) L(m+n) + c/12 (m^3-m) δ_{m+n,0}` until they hit the
//! primary. For `h = 0` the primary is the vacuum and `L(-1)|0> = 0`, so no
//! basis monomial of the vacuum module ends in `L(-1)` (equivalently, none
//! contains a part equal to 1).

use std::cmp::Ordering;
use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::str::FromStr;

use num_traits::{One, Zero};

use crate::error::ParseError;
use crate::linalg::MatrixQ;
use crate::rational::{format_rational, int, parse_rational, Rational};

/// `L(-n1)…L(-nk)` with weakly decreasing `ni >= 1`; the empty word is the identity.
#[derive(Clone, PartialEq, Eq, Hash, Debug, Default)]
pub struct PbwMonomial(Vec<u32>);

impl PbwMonomial {
    pub fn identity() -> Self {
        Self(Vec::new())
    }

    /// Accepts only weakly decreasing lists of positive levels.
    pub fn new(parts: Vec<u32>) -> Option<Self> {
        let ok = parts.iter().all(|&p| p >= 1) && parts.windows(2).all(|w| w[0] >= w[1]);
        ok.then_some(Self(parts))
    }

    pub fn parts(&self) -> &[u32] {
        &self.0
    }

    pub fn degree(&self) -> u32 {
        self.0.iter().sum()
    }

    pub fn is_identity(&self) -> bool {
        self.0.is_empty()
    }

    pub fn has_level_one(&self) -> bool {
        self.0.last() == Some(&1)
    }
}

/// Lower degree first; within a degree, lexicographically larger parts first,
/// so that `L(-6) < L(-4)L(-2) < L(-3)^2 < L(-2)^3`.
impl Ord for PbwMonomial {
    fn cmp(&self, other: &Self) -> Ordering {
        self.degree()
            .cmp(&other.degree())
            .then_with(|| other.0.cmp(&self.0))
    }
}

impl PartialOrd for PbwMonomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for PbwMonomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return f.write_str("1");
        }
        let mut i = 0;
        while i < self.0.len() {
            let p = self.0[i];
            let run = self.0[i..].iter().take_while(|&&q| q == p).count();
            write!(f, "L(-{p})")?;
            if run > 1 {
                write!(f, "^{run}")?;
            }
            i += run;
        }
        Ok(())
    }
}

/// Basis of the weight `h + level` space of the module generated by `|h>`,
/// in the order of [`PbwMonomial`]'s `Ord`. Parts equal to 1 are excluded for
/// the vacuum (`h = 0`).
pub fn weight_basis(h: u32, level: u32) -> Vec<PbwMonomial> {
    let min_part = if h == 0 { 2 } else { 1 };
    let mut out = Vec::new();
    let mut cur = Vec::new();
    fn rec(rem: u32, max: u32, min: u32, cur: &mut Vec<u32>, out: &mut Vec<PbwMonomial>) {
        if rem == 0 {
            out.push(PbwMonomial(cur.clone()));
            return;
        }
        for p in (min..=max.min(rem)).rev() {
            cur.push(p);
            rec(rem - p, p, min, cur, out);
            cur.pop();
        }
    }
    rec(level, level, min_part, &mut cur, &mut out);
    out
}

/// A highest-weight vector of weight `h` with an opaque label.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug, PartialOrd, Ord)]
pub struct FormalPrimary {
    pub weight: u32,
    pub label: u32,
}

impl FormalPrimary {
    pub fn new(weight: u32) -> Self {
        Self { weight, label: 0 }
    }

    pub fn labelled(weight: u32, label: u32) -> Self {
        Self { weight, label }
    }

    pub fn vacuum() -> Self {
        Self::new(0)
    }

    pub fn is_vacuum(&self) -> bool {
        self.weight == 0
    }
}

pub(crate) type Terms = BTreeMap<PbwMonomial, Rational>;

pub(crate) fn add_into(acc: &mut Terms, key: PbwMonomial, coef: Rational) {
    if coef.is_zero() {
        return;
    }
    match acc.entry(key) {
        std::collections::btree_map::Entry::Occupied(mut e) => {
            let v = e.get() + &coef;
            if v.is_zero() {
                e.remove();
            } else {
                *e.get_mut() = v;
            }
        }
        std::collections::btree_map::Entry::Vacant(e) => {
            e.insert(coef);
        }
    }
}

/// An element of the negative half of U(Vir), expanded in PBW monomials.
#[derive(Clone, PartialEq, Eq, Debug, Default)]
pub struct VirElement {
    terms: Terms,
}

impl VirElement {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn identity() -> Self {
        Self::monomial(PbwMonomial::identity(), Rational::one())
    }

    pub fn monomial(m: PbwMonomial, coef: Rational) -> Self {
        let mut terms = Terms::new();
        add_into(&mut terms, m, coef);
        Self { terms }
    }

    pub fn from_terms(iter: impl IntoIterator<Item = (PbwMonomial, Rational)>) -> Self {
        let mut terms = Terms::new();
        for (m, c) in iter {
            add_into(&mut terms, m, c);
        }
        Self { terms }
    }

    pub fn terms(&self) -> impl Iterator<Item = (&PbwMonomial, &Rational)> {
        self.terms.iter()
    }

    pub fn coefficient(&self, m: &PbwMonomial) -> Rational {
        self.terms.get(m).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// The common degree of all terms, if homogeneous and nonzero.
    pub fn degree(&self) -> Option<u32> {
        let mut it = self.terms.keys().map(PbwMonomial::degree);
        let d = it.next()?;
        it.all(|e| e == d).then_some(d)
    }

    pub fn scale(&self, s: &Rational) -> Self {
        Self::from_terms(self.terms.iter().map(|(m, c)| (m.clone(), c * s)))
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut terms = self.terms.clone();
        for (m, c) in &other.terms {
            add_into(&mut terms, m.clone(), c.clone());
        }
        Self { terms }
    }

    /// `self · |prim>`.
    pub fn apply_to(&self, prim: FormalPrimary) -> DescendantVector {
        DescendantVector::from_terms(prim, self.terms.iter().map(|(m, c)| (m.clone(), c.clone())))
    }
}

impl fmt::Display for VirElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_terms(f, &self.terms)
    }
}

fn write_terms(f: &mut fmt::Formatter<'_>, terms: &Terms) -> fmt::Result {
    if terms.is_empty() {
        return f.write_str("0");
    }
    for (i, (m, c)) in terms.iter().enumerate() {
        let neg = c < &Rational::zero();
        let abs = if neg { -c.clone() } else { c.clone() };
        match (i, neg) {
            (0, true) => f.write_str("-")?,
            (0, false) => {}
            (_, true) => f.write_str(" - ")?,
            (_, false) => f.write_str(" + ")?,
        }
        if m.is_identity() {
            f.write_str(&format_rational(&abs))?;
        } else if abs.is_one() {
            write!(f, "{m}")?;
        } else {
            write!(f, "{} {m}", format_rational(&abs))?;
        }
    }
    Ok(())
}

impl FromStr for VirElement {
    type Err = ParseError;

    /// Parses the [`Display`](fmt::Display) form, e.g. `1/6 L(-2) - 3 L(-1)^2`.
    /// Factors inside a monomial must already be in PBW order.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Parser { src: s, pos: 0 }.expr()
    }
}

struct Parser<'a> {
    src: &'a str,
    pos: usize,
}

impl<'a> Parser<'a> {
    fn err(&self, reason: &str) -> ParseError {
        ParseError::VirElement {
            input: self.src.to_string(),
            reason: format!("{reason} at byte {}", self.pos),
        }
    }

    fn rest(&self) -> &str {
        &self.src[self.pos..]
    }

    fn skip_ws(&mut self) {
        let t = self.rest().len() - self.rest().trim_start().len();
        self.pos += t;
    }

    fn eat(&mut self, tok: &str) -> bool {
        if self.rest().starts_with(tok) {
            self.pos += tok.len();
            true
        } else {
            false
        }
    }

    fn digits(&mut self) -> Option<&'a str> {
        let src: &'a str = self.src;
        let n = src[self.pos..].bytes().take_while(u8::is_ascii_digit).count();
        if n == 0 {
            return None;
        }
        let d = &src[self.pos..self.pos + n];
        self.pos += n;
        Some(d)
    }

    fn expr(&mut self) -> Result<VirElement, ParseError> {
        let mut terms = Terms::new();
        self.skip_ws();
        let mut negative = self.eat("-");
        loop {
            self.skip_ws();
            let (m, c) = self.term()?;
            add_into(&mut terms, m, if negative { -c } else { c });
            self.skip_ws();
            if self.rest().is_empty() {
                break;
            }
            negative = if self.eat("+") {
                false
            } else if self.eat("-") {
                true
            } else {
                return Err(self.err("expected '+' or '-'"));
            };
        }
        Ok(VirElement { terms })
    }

    fn term(&mut self) -> Result<(PbwMonomial, Rational), ParseError> {
        let mut coef = None;
        if let Some(num) = self.digits() {
            let mut lit = num.to_string();
            if self.eat("/") {
                let den = self.digits().ok_or_else(|| self.err("expected denominator"))?;
                lit.push('/');
                lit.push_str(den);
            }
            coef = Some(parse_rational(&lit).map_err(|_| self.err("bad coefficient"))?);
            self.skip_ws();
            if self.eat("*") {
                self.skip_ws();
            }
        }
        let mut parts = Vec::new();
        while self.eat("L(-") {
            let n: u32 = self
                .digits()
                .and_then(|d| d.parse().ok())
                .filter(|&n| n >= 1)
                .ok_or_else(|| self.err("expected a positive mode"))?;
            if !self.eat(")") {
                return Err(self.err("expected ')'"));
            }
            let mut times = 1usize;
            if self.eat("^") {
                times = self
                    .digits()
                    .and_then(|d| d.parse().ok())
                    .filter(|&t| (1..=64).contains(&t))
                    .ok_or_else(|| self.err("bad exponent"))?;
            }
            parts.extend(std::iter::repeat_n(n, times));
            self.skip_ws();
        }
        if coef.is_none() && parts.is_empty() {
            return Err(self.err("expected a term"));
        }
        let m = PbwMonomial::new(parts).ok_or_else(|| self.err("factors not in PBW order"))?;
        Ok((m, coef.unwrap_or_else(Rational::one)))
    }
}

/// An element of U(Vir)·|prim>, expanded in PBW monomials.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct DescendantVector {
    primary: FormalPrimary,
    terms: Terms,
}

impl DescendantVector {
    pub fn zero(primary: FormalPrimary) -> Self {
        Self {
            primary,
            terms: Terms::new(),
        }
    }

    pub fn primary_vector(primary: FormalPrimary) -> Self {
        VirElement::identity().apply_to(primary)
    }

    /// Monomials that vanish in the vacuum module are dropped.
    pub fn from_terms(
        primary: FormalPrimary,
        iter: impl IntoIterator<Item = (PbwMonomial, Rational)>,
    ) -> Self {
        let mut terms = Terms::new();
        for (m, c) in iter {
            if primary.is_vacuum() && m.has_level_one() {
                continue;
            }
            add_into(&mut terms, m, c);
        }
        Self { primary, terms }
    }

    pub fn primary(&self) -> FormalPrimary {
        self.primary
    }

    pub fn terms(&self) -> impl Iterator<Item = (&PbwMonomial, &Rational)> {
        self.terms.iter()
    }

    pub fn coefficient(&self, m: &PbwMonomial) -> Rational {
        self.terms.get(m).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// `Some(level)` when every term sits at the same level above the primary.
    pub fn level(&self) -> Option<u32> {
        let mut it = self.terms.keys().map(PbwMonomial::degree);
        let d = it.next()?;
        it.all(|e| e == d).then_some(d)
    }

    pub fn scale(&self, s: &Rational) -> Self {
        Self::from_terms(self.primary, self.terms.iter().map(|(m, c)| (m.clone(), c * s)))
    }

    pub fn add(&self, other: &Self) -> Self {
        assert_eq!(self.primary, other.primary, "adding descendants of different primaries");
        let mut terms = self.terms.clone();
        for (m, c) in &other.terms {
            add_into(&mut terms, m.clone(), c.clone());
        }
        Self {
            primary: self.primary,
            terms,
        }
    }

    /// The operator part, forgetting the primary.
    pub fn to_vir_element(&self) -> VirElement {
        VirElement {
            terms: self.terms.clone(),
        }
    }
}

impl fmt::Display for DescendantVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("(")?;
        write_terms(f, &self.terms)?;
        write!(f, ")|h={}>", self.primary.weight)
    }
}

/// Normal-ordering engine for one highest-weight module.
///
/// Holds a private memo table of `L(m)·monomial` results; it is never shared
/// between threads and does not affect results.
pub struct VirasoroModule {
    h: Rational,
    vacuum: bool,
    c: Rational,
    memo: HashMap<(i64, Vec<u32>), Terms>,
}

impl VirasoroModule {
    pub fn new(h: u32, c: &Rational) -> Self {
        Self {
            h: int(h as i64),
            vacuum: h == 0,
            c: c.clone(),
            memo: HashMap::new(),
        }
    }

    pub fn for_primary(p: FormalPrimary, c: &Rational) -> Self {
        Self::new(p.weight, c)
    }

    /// `L(m)` applied to a single monomial times the primary.
    pub fn act_monomial(&mut self, m: i64, parts: &[u32]) -> Terms {
        if let Some(r) = self.memo.get(&(m, parts.to_vec())) {
            return r.clone();
        }
        let out = self.act_uncached(m, parts);
        self.memo.insert((m, parts.to_vec()), out.clone());
        out
    }

    fn act_uncached(&mut self, m: i64, parts: &[u32]) -> Terms {
        let mut out = Terms::new();
        if m == 0 {
            let deg: u32 = parts.iter().sum();
            let e = &self.h + int(deg as i64);
            add_into(&mut out, PbwMonomial(parts.to_vec()), e);
            return out;
        }
        let Some((&n1, rest)) = parts.split_first() else {
            if m < 0 && !(self.vacuum && m == -1) {
                add_into(&mut out, PbwMonomial(vec![(-m) as u32]), Rational::one());
            }
            return out;
        };
        if m < 0 && (-m) as u32 >= n1 {
            let mut p = Vec::with_capacity(parts.len() + 1);
            p.push((-m) as u32);
            p.extend_from_slice(parts);
            add_into(&mut out, PbwMonomial(p), Rational::one());
            return out;
        }
        // L(m) L(-n1) R = L(-n1) L(m) R + (m+n1) L(m-n1) R + central
        let n1 = n1 as i64;
        for (mono, coef) in self.act_monomial(m, rest) {
            for (mono2, c2) in self.act_monomial(-n1, &mono.0) {
                add_into(&mut out, mono2, &coef * c2);
            }
        }
        let k = m + n1;
        if k != 0 {
            for (mono, coef) in self.act_monomial(m - n1, rest) {
                add_into(&mut out, mono, coef * int(k));
            }
        }
        if m == n1 {
            let central = &self.c * int(m * m * m - m) / int(12);
            add_into(&mut out, PbwMonomial(rest.to_vec()), central);
        }
        out
    }

    /// `L(m)` applied to a descendant of this module's primary.
    pub fn apply(&mut self, m: i64, v: &DescendantVector) -> DescendantVector {
        let mut out = Terms::new();
        for (mono, coef) in &v.terms {
            for (mono2, c2) in self.act_monomial(m, &mono.0) {
                add_into(&mut out, mono2, coef * c2);
            }
        }
        DescendantVector {
            primary: v.primary,
            terms: out,
        }
    }

    /// `<a|h>, b|h>>` with `L(n)† = L(-n)` and `<h|h> = 1`.
    pub fn form(&mut self, a: &PbwMonomial, b: &PbwMonomial) -> Rational {
        if a.degree() != b.degree() {
            return Rational::zero();
        }
        let mut cur = Terms::new();
        add_into(&mut cur, b.clone(), Rational::one());
        for &p in &a.0 {
            let mut next = Terms::new();
            for (mono, coef) in cur {
                for (mono2, c2) in self.act_monomial(p as i64, &mono.0) {
                    add_into(&mut next, mono2, &coef * c2);
                }
            }
            cur = next;
        }
        cur.get(&PbwMonomial::identity())
            .cloned()
            .unwrap_or_else(Rational::zero)
    }

    /// Bilinear extension of [`form`](Self::form).
    pub fn form_vectors(&mut self, a: &DescendantVector, b: &DescendantVector) -> Rational {
        let mut acc = Rational::zero();
        for (ma, ca) in &a.terms {
            for (mb, cb) in &b.terms {
                if ma.degree() == mb.degree() {
                    acc += ca * cb * self.form(ma, mb);
                }
            }
        }
        acc
    }
}

/// `L(m)·v` in PBW normal order at central charge `c`.
pub fn apply_l(m: i64, v: &DescendantVector, c: &Rational) -> DescendantVector {
    VirasoroModule::for_primary(v.primary, c).apply(m, v)
}

/// Gram matrix of the contravariant form on [`weight_basis`]`(h, level)`.
pub fn shapovalov_gram(h: u32, c: &Rational, level: u32) -> MatrixQ {
    let basis = weight_basis(h, level);
    let mut module = VirasoroModule::new(h, c);
    let n = basis.len();
    let mut g = MatrixQ::zeros(n, n);
    for i in 0..n {
        for j in 0..n {
            g.set(i, j, module.form(&basis[i], &basis[j]));
        }
    }
    g
}
