//! Mode calculus for products `v_n u` of two primaries and the solver for the
//! projection operators `Q^{hv,hu}_k(-m)`.
//!
//! Write `x_j = π_k(v_{n_top - j} u)` where `n_top = hv + hu - 1 - k`, so that
//! `x_0` is the top (weight `k`) component. Since `u` is primary,
//! `L(p) x_j = ((hv-1)(p+1) - (n_top - j)) x_{j-p}` for `p >= 1`. Writing
//! `x_j = Q(-j) x_0` with `Q(-j)` in the span of [`weight_basis`]`(k, j)`, the
//! `p = 1, 2` relations form a linear system whose unique solution is
//! `Q(-j)` whenever the contravariant form is nondegenerate at level `j`.

use std::collections::BTreeMap;
use std::sync::{Arc, Mutex, OnceLock};

use num_traits::Zero;

use crate::error::ModeError;
use crate::linalg::{solve_affine, MatrixQ};
use crate::rational::{int, Rational};
use crate::virasoro::{weight_basis, DescendantVector, FormalPrimary, VirElement, VirasoroModule};

/// The product `v_n u` of primaries of weights `h_v`, `h_u`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct ModeProduct {
    pub h_v: u32,
    pub h_u: u32,
    pub n: i64,
}

impl ModeProduct {
    pub fn weight(&self) -> i64 {
        self.h_v as i64 + self.h_u as i64 - self.n - 1
    }

    /// The mode index whose product lands in weight `k`.
    pub fn top_index(h_v: u32, h_u: u32, k: u32) -> i64 {
        h_v as i64 + h_u as i64 - 1 - k as i64
    }
}

/// Coefficient of `v_{m+n}` in `[L(m), v_n]` for a primary `v` of weight `h_v`.
pub fn mode_commutator(m: i64, n: i64, h_v: u32) -> Rational {
    int((h_v as i64 - 1) * (m + 1) - n)
}

/// `π_k` of a mode product, expressed over the formal primary of weight `k`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ProjectionComponent {
    pub k: u32,
    pub payload: DescendantVector,
}

/// `Q^{h_v,h_u}_k(-m)` for `m = 0..entries.len()`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QTable {
    pub h_v: u32,
    pub h_u: u32,
    pub k: u32,
    pub c: Rational,
    entries: Vec<VirElement>,
}

impl QTable {
    pub fn get(&self, m: u32) -> Option<&VirElement> {
        self.entries.get(m as usize)
    }

    pub fn max_level(&self) -> u32 {
        self.entries.len() as u32 - 1
    }

    pub fn iter(&self) -> impl Iterator<Item = (u32, &VirElement)> {
        self.entries.iter().enumerate().map(|(m, q)| (m as u32, q))
    }

    /// `π_k(v_{n_top - m} u)` as a descendant of `top`.
    pub fn component(&self, m: u32, top: FormalPrimary) -> Option<ProjectionComponent> {
        Some(ProjectionComponent {
            k: self.k,
            payload: self.get(m)?.apply_to(top),
        })
    }
}

/// Options for [`derive_q_table_with`].
#[derive(Clone, Debug)]
pub struct SolverOptions {
    pub c: Rational,
    /// Raising operators imposed as constraints. `[1, 2]` suffices; adding 3
    /// gives a redundant consistency check.
    pub raising: Vec<i64>,
}

impl Default for SolverOptions {
    fn default() -> Self {
        Self {
            c: int(24),
            raising: vec![1, 2],
        }
    }
}

/// Builds the constraint system for `Q(-level)` given the lower table entries.
fn constraint_system(
    module: &mut VirasoroModule,
    h_v: u32,
    n_top: i64,
    k: u32,
    level: u32,
    lower: &[VirElement],
    raising: &[i64],
) -> (MatrixQ, Vec<Rational>) {
    let prim = FormalPrimary::new(k);
    let unknowns = weight_basis(k, level);
    let images: Vec<DescendantVector> = unknowns
        .iter()
        .map(|b| DescendantVector::from_terms(prim, [(b.clone(), int(1))]))
        .collect();
    let mut rows = Vec::new();
    let mut rhs = Vec::new();
    for &p in raising {
        if p as u32 > level {
            continue;
        }
        let target_level = level - p as u32;
        let target = weight_basis(k, target_level);
        let coef = mode_commutator(p, n_top - level as i64, h_v);
        let expected = lower[target_level as usize].apply_to(prim).scale(&coef);
        let acted: Vec<DescendantVector> = images.iter().map(|v| module.apply(p, v)).collect();
        for t in &target {
            rows.push(acted.iter().map(|a| a.coefficient(t)).collect::<Vec<_>>());
            rhs.push(expected.coefficient(t));
        }
    }
    let a = if rows.is_empty() {
        MatrixQ::zeros(0, unknowns.len())
    } else {
        MatrixQ::from_rows(rows).expect("uniform row length")
    };
    (a, rhs)
}

pub fn derive_q_table_with(
    h_v: u32,
    h_u: u32,
    k: u32,
    max_m: u32,
    opts: &SolverOptions,
) -> Result<QTable, ModeError> {
    let n_top = ModeProduct::top_index(h_v, h_u, k);
    let mut module = VirasoroModule::new(k, &opts.c);
    let mut entries = vec![VirElement::identity()];
    for level in 1..=max_m {
        let unknowns = weight_basis(k, level);
        let (a, b) =
            constraint_system(&mut module, h_v, n_top, k, level, &entries, &opts.raising);
        let sol = solve_affine(&a, &b).expect("rows match rhs");
        let Some(x) = sol.particular.as_ref() else {
            return Err(ModeError::Inconsistent { k, level });
        };
        if !sol.kernel.is_empty() {
            return Err(ModeError::SingularGram {
                k,
                level,
                nullity: sol.kernel.len(),
            });
        }
        entries.push(VirElement::from_terms(unknowns.into_iter().zip(x.iter().cloned())));
    }
    Ok(QTable {
        h_v,
        h_u,
        k,
        c: opts.c.clone(),
        entries,
    })
}

type CacheKey = (u32, u32, u32, u32, Rational);

fn cache() -> &'static Mutex<BTreeMap<CacheKey, Arc<QTable>>> {
    static CACHE: OnceLock<Mutex<BTreeMap<CacheKey, Arc<QTable>>>> = OnceLock::new();
    CACHE.get_or_init(Default::default)
}

/// [`derive_q_table_with`] using the L(1), L(2) constraints, memoized.
pub fn derive_q_table(
    h_v: u32,
    h_u: u32,
    k: u32,
    max_m: u32,
    c: &Rational,
) -> Result<Arc<QTable>, ModeError> {
    let key = (h_v, h_u, k, max_m, c.clone());
    if let Some(t) = cache().lock().expect("cache poisoned").get(&key) {
        return Ok(Arc::clone(t));
    }
    let opts = SolverOptions {
        c: c.clone(),
        ..SolverOptions::default()
    };
    let t = Arc::new(derive_q_table_with(h_v, h_u, k, max_m, &opts)?);
    cache()
        .lock()
        .expect("cache poisoned")
        .insert(key, Arc::clone(&t));
    Ok(t)
}

/// The unique `Q^{h_v,h_u}_k(-m)` with `π_k(v_{n_top-m} u) = Q·π_k(v_{n_top} u)`.
pub fn derive_q(h_v: u32, h_u: u32, k: u32, m: u32, c: &Rational) -> Result<VirElement, ModeError> {
    Ok(derive_q_table(h_v, h_u, k, m, c)?
        .get(m)
        .cloned()
        .expect("table covers m"))
}

/// Residual of the raising-operator relations for a candidate `Q(-m)`:
/// `L(p)·Q(-m)|k> - coef·Q(-(m-p))|k>` for each `p`, using `table` for the
/// lower entries.
pub fn relation_residuals(
    table: &QTable,
    candidate: &VirElement,
    m: u32,
    raising: &[i64],
) -> Vec<(i64, DescendantVector)> {
    let prim = FormalPrimary::new(table.k);
    let n_top = ModeProduct::top_index(table.h_v, table.h_u, table.k);
    let mut module = VirasoroModule::new(table.k, &table.c);
    let v = candidate.apply_to(prim);
    raising
        .iter()
        .map(|&p| {
            let lhs = module.apply(p, &v);
            let rhs = if (p as u32) <= m {
                table
                    .get(m - p as u32)
                    .map(|q| q.apply_to(prim))
                    .unwrap_or_else(|| DescendantVector::zero(prim))
                    .scale(&mode_commutator(p, n_top - m as i64, table.h_v))
            } else {
                DescendantVector::zero(prim)
            };
            (p, lhs.add(&rhs.scale(&int(-1))))
        })
        .collect()
}

/// Distinct primes dividing the denominator of some coefficient of `q`.
pub fn denominator_primes(q: &VirElement) -> Vec<num_bigint::BigInt> {
    let mut primes = Vec::new();
    for (_, c) in q.terms() {
        if c.is_zero() {
            continue;
        }
        for p in crate::rational::prime_factors(c.denom()) {
            if !primes.contains(&p) {
                primes.push(p);
            }
        }
    }
    primes.sort();
    primes
}

/// Primes dividing the order of the Monster group.
pub const MONSTER_PRIMES: [u32; 15] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 41, 47, 59, 71];

/// Outcome of deriving one `Q` during the denominator scan.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DenominatorEntry {
    pub h_v: u32,
    pub h_u: u32,
    pub k: u32,
    pub m: u32,
    pub result: Result<Vec<num_bigint::BigInt>, ModeError>,
}

impl DenominatorEntry {
    /// True when every denominator prime divides the Monster order, or when
    /// there is no operator to inspect.
    pub fn within_monster_primes(&self) -> bool {
        match &self.result {
            Ok(primes) => primes
                .iter()
                .all(|p| MONSTER_PRIMES.iter().any(|&q| *p == num_bigint::BigInt::from(q))),
            Err(_) => true,
        }
    }
}

/// Denominator primes of every `Q^{h_v,h_u}_k(-m)` with `(h_v,h_u)` in
/// {(2,2),(2,3)}, `k` in {0, 2..=max_k} and `1 <= m <= max_m`.
pub fn denominator_scan(max_k: u32, max_m: u32, c: &Rational) -> Vec<DenominatorEntry> {
    let mut out = Vec::new();
    for (h_v, h_u) in [(2, 2), (2, 3)] {
        for k in std::iter::once(0).chain(2..=max_k) {
            match derive_q_table(h_v, h_u, k, max_m, c) {
                Ok(table) => {
                    for (m, q) in table.iter().skip(1) {
                        out.push(DenominatorEntry {
                            h_v,
                            h_u,
                            k,
                            m,
                            result: Ok(denominator_primes(q)),
                        });
                    }
                }
                Err(e) => out.push(DenominatorEntry {
                    h_v,
                    h_u,
                    k,
                    m: max_m,
                    result: Err(e),
                }),
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::rat;

    fn c24() -> Rational {
        int(24)
    }

    fn q(h_v: u32, h_u: u32, k: u32, m: u32) -> VirElement {
        derive_q(h_v, h_u, k, m, &c24()).unwrap()
    }

    fn parse(s: &str) -> VirElement {
        s.parse().unwrap()
    }

    #[test]
    fn commutator_coefficients() {
        for k in 0..8 {
            assert_eq!(mode_commutator(1, 2 - k, 2), int(k));
        }
        assert_eq!(mode_commutator(2, 1, 2), int(2));
        assert_eq!(mode_commutator(2, -2, 2), int(5));
        assert_eq!(mode_commutator(0, 0, 1), int(0));
        // weight-3 primary: L(1) π_k(v_{3-k} w) = (k-1) π_k(v_{4-k} w)
        assert_eq!(mode_commutator(1, 3 - 4, 2), int(3));
    }

    #[test]
    fn mode_product_weight() {
        assert_eq!(ModeProduct { h_v: 2, h_u: 2, n: -2 }.weight(), 5);
        assert_eq!(ModeProduct { h_v: 2, h_u: 3, n: 0 }.weight(), 4);
        assert_eq!(ModeProduct::top_index(2, 2, 0), 3);
    }

    #[test]
    fn level_zero_is_identity() {
        assert_eq!(q(2, 2, 3, 0), VirElement::identity());
        assert_eq!(q(2, 3, 6, 0), VirElement::identity());
    }

    #[test]
    fn level_one() {
        for k in 2..=7 {
            assert_eq!(q(2, 2, k, 1), parse("1/2 L(-1)"));
            let expect = VirElement::monomial(
                crate::virasoro::PbwMonomial::new(vec![1]).unwrap(),
                rat(k as i64 - 1, 2 * k as i64),
            );
            assert_eq!(q(2, 3, k, 1), expect);
        }
        assert!(q(2, 2, 0, 1).is_zero());
    }

    #[test]
    fn vacuum_low_levels() {
        assert_eq!(q(2, 2, 0, 2), parse("1/6 L(-2)"));
        assert_eq!(q(2, 2, 0, 3), parse("1/12 L(-3)"));
    }

    #[test]
    fn weight_three_top_from_weight_two_pair_vanishes_in_vacuum() {
        // π_0(v_4 w) is forced to vanish for w of weight 3
        assert_eq!(
            derive_q(2, 3, 0, 1, &c24()),
            Err(ModeError::Inconsistent { k: 0, level: 1 })
        );
    }

    #[test]
    fn redundant_l3_agrees() {
        for (h_v, h_u) in [(2, 2), (2, 3)] {
            for k in [0u32, 2, 3, 4, 5, 6] {
                let base = derive_q_table(h_v, h_u, k, 6, &c24());
                let Ok(base) = base else { continue };
                let opts = SolverOptions {
                    raising: vec![1, 2, 3],
                    ..SolverOptions::default()
                };
                let with3 = derive_q_table_with(h_v, h_u, k, 6, &opts).unwrap();
                assert_eq!(&*base, &with3);
            }
        }
    }

    #[test]
    fn residuals_vanish_and_detect_corruption() {
        let t = derive_q_table(2, 2, 0, 6, &c24()).unwrap();
        let q6 = t.get(6).unwrap();
        for (_, r) in relation_residuals(&t, q6, 6, &[1, 2, 3, 4]) {
            assert!(r.is_zero());
        }
        let bad = q6.add(&parse("1 L(-2)^3"));
        assert!(relation_residuals(&t, &bad, 6, &[1, 2]).iter().any(|(_, r)| !r.is_zero()));
    }

    #[test]
    fn q_does_not_depend_on_primary_label() {
        let t = derive_q_table(2, 2, 4, 3, &c24()).unwrap();
        let a = t.component(3, FormalPrimary::labelled(4, 1)).unwrap();
        let b = t.component(3, FormalPrimary::labelled(4, 9)).unwrap();
        assert_eq!(a.payload.to_vir_element(), b.payload.to_vir_element());
    }

    #[test]
    fn denominator_scan_covers_range() {
        let scan = denominator_scan(7, 7, &c24());
        // (2,2): 7 weights x 7 levels; (2,3): 6 weights x 7 levels + one inconsistent entry
        assert_eq!(scan.len(), 49 + 42 + 1);
        let inconsistent: Vec<_> = scan.iter().filter(|e| e.result.is_err()).collect();
        assert_eq!(inconsistent.len(), 1);
        assert_eq!((inconsistent[0].h_u, inconsistent[0].k), (3, 0));
        let tabulated = [(2, 2, 0, 6), (2, 3, 2, 2), (2, 2, 3, 2), (2, 3, 4, 3)];
        for (h_v, h_u, k, m) in tabulated {
            let e = scan.iter().find(|e| (e.h_v, e.h_u, e.k, e.m) == (h_v, h_u, k, m)).unwrap();
            assert!(e.within_monster_primes(), "{e:?}");
        }
        // the level-2 Gram determinant at weight 5 is 2^2 * 5 * 307
        let e = scan.iter().find(|e| (e.h_v, e.h_u, e.k, e.m) == (2, 2, 5, 2)).unwrap();
        assert_eq!(e.result.as_ref().unwrap().last(), Some(&num_bigint::BigInt::from(307)));
    }
}
