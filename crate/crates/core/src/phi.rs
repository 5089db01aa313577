//! The families `Φ^j_k(Z)` of physical vectors built from 0-products of
//! primaries tensored with lattice states, and the congruence between the
//! two families at degree `(2,3)`.
//!
//! For `(v ⊗ x)_0 (u ⊗ y) = Σ_i v_i u ⊗ x_{-i-1} y`, the `π_k` component of
//! `v_i u` is `Q_k(-t) Z` with `t = n_top - i`, where `Z` is the top component.
//! The three families are
//!
//! | j | v, u weights | x | y | degree |
//! |---|---|---|---|---|
//! | 1 | 2, 2 | `e^(1,1)` | `e^(1,1)` | (2,2) |
//! | 2 | 2, 2 | `e^(1,1)` | `(1,-2)(-1) e^(1,2)` | (2,3) |
//! | 3 | 2, 3 | `e^(1,1)` | `e^(1,2)` | (2,3) |

use num_traits::{One, Zero};

use crate::error::ModeError;
use crate::lattice::{zero_product_expansion, LatticeState, LatticeVector};
use crate::linalg::{solve_affine, MatrixQ};
use crate::modes::{derive_q_table, ModeProduct};
use crate::physical::{analyze_block, TensorAction, TensorState};
use crate::rational::Rational;
use crate::virasoro::{DescendantVector, FormalPrimary, VirElement};

/// One summand `Q_k(-t) Z ⊗ x_{-i-1} y`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PhiTerm {
    pub t: u32,
    /// Mode index `i` of the V-side product `v_i u`.
    pub v_mode: i64,
    pub operator: VirElement,
    pub lattice: LatticeState,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PhiExpansion {
    pub j: u8,
    pub k: u32,
    pub degree: LatticeVector,
    /// Empty when the projection of the product onto weight `k` is forced to
    /// vanish.
    pub terms: Vec<PhiTerm>,
}

struct Family {
    h_v: u32,
    h_u: u32,
    x: LatticeState,
    y: LatticeState,
    max_k: u32,
}

fn family(j: u8) -> Option<Family> {
    let e = |m, n| LatticeState::ground(LatticeVector::new(m, n));
    Some(match j {
        1 => Family {
            h_v: 2,
            h_u: 2,
            x: e(1, 1),
            y: e(1, 1),
            max_k: 5,
        },
        2 => Family {
            h_v: 2,
            h_u: 2,
            x: e(1, 1),
            y: LatticeState::delta(LatticeVector::new(1, -2), LatticeVector::new(1, 2)),
            max_k: 7,
        },
        3 => Family {
            h_v: 2,
            h_u: 3,
            x: e(1, 1),
            y: e(1, 2),
            max_k: 7,
        },
        _ => return None,
    })
}

/// `Φ^j_k` as a list of `(Q_k(-t), lattice slot)` pairs.
pub fn reconstruct_phi(j: u8, k: u32, c: &Rational) -> Result<PhiExpansion, ModeError> {
    let fam = family(j).ok_or_else(|| ModeError::OutOfRange(format!("family j={j} (expected 1, 2 or 3)")))?;
    if k == 1 || k > fam.max_k {
        return Err(ModeError::OutOfRange(format!(
            "k={k} for j={j} (expected 0 or 2..={})",
            fam.max_k
        )));
    }
    let degree = fam.x.degree().expect("homogeneous") + fam.y.degree().expect("homogeneous");
    let n_top = ModeProduct::top_index(fam.h_v, fam.h_u, k);
    let slots: Vec<_> = zero_product_expansion(fam.h_v, fam.h_u, &fam.x, &fam.y)
        .into_iter()
        .filter(|term| term.v_mode <= n_top)
        .collect();
    let max_t = slots.iter().map(|s| (n_top - s.v_mode) as u32).max().unwrap_or(0);
    let table = match derive_q_table(fam.h_v, fam.h_u, k, max_t, c) {
        Ok(t) => t,
        Err(ModeError::Inconsistent { .. }) => {
            return Ok(PhiExpansion {
                j,
                k,
                degree,
                terms: Vec::new(),
            })
        }
        Err(e) => return Err(e),
    };
    let mut terms: Vec<PhiTerm> = slots
        .into_iter()
        .map(|s| {
            let t = (n_top - s.v_mode) as u32;
            PhiTerm {
                t,
                v_mode: s.v_mode,
                operator: table.get(t).expect("table covers t").clone(),
                lattice: s.lattice,
            }
        })
        .collect();
    terms.sort_by_key(|t| t.t);
    Ok(PhiExpansion { j, k, degree, terms })
}

impl PhiExpansion {
    pub fn vanishes(&self) -> bool {
        self.terms.is_empty()
    }

    /// The tensor vector with `Z` the formal primary of weight `k`.
    pub fn to_tensor(&self) -> TensorState {
        let z = FormalPrimary::new(self.k);
        self.terms.iter().fold(TensorState::zero(z), |acc, term| {
            acc.add(&TensorState::tensor(&term.operator.apply_to(z), &term.lattice))
        })
    }
}

/// Whether `L~(1)` and `L~(2)` annihilate a tensor vector.
pub fn is_physical(v: &TensorState, c: &Rational) -> bool {
    let mut act = TensorAction::new(v.primary(), c);
    act.apply(1, v).is_zero() && act.apply(2, v).is_zero()
}

pub fn phi_is_physical(j: u8, k: u32, c: &Rational) -> Result<bool, ModeError> {
    Ok(is_physical(&reconstruct_phi(j, k, c)?.to_tensor(), c))
}

/// Dimension of the image of the given physical vectors in `P^1 / rad(P^1)`,
/// i.e. the rank of their Gram matrix.
pub fn image_rank(vectors: &[TensorState], c: &Rational) -> usize {
    let Some(first) = vectors.first() else {
        return 0;
    };
    let mut act = TensorAction::new(first.primary(), c);
    let n = vectors.len();
    let mut g = MatrixQ::zeros(n, n);
    for a in 0..n {
        for b in 0..n {
            g.set(a, b, act.form(&vectors[a], &vectors[b]));
        }
    }
    g.rank()
}

/// Image of one family `Φ^j_k(Z)` in `P^1 / rad(P^1)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OnceItem {
    pub j: u8,
    pub k: u32,
    pub degree: LatticeVector,
    /// 0 when the family lies in the radical, 1 otherwise.
    pub image_rank: usize,
}

fn admissible_weights(max_k: u32) -> impl Iterator<Item = u32> {
    std::iter::once(0).chain(2..=max_k)
}

/// Image ranks of every family and primary weight: a single formal primary
/// is covered at most once by each family.
pub fn once_check(c: &Rational) -> Result<Vec<OnceItem>, ModeError> {
    let mut out = Vec::new();
    for j in 1..=3u8 {
        let max_k = family(j).expect("known family").max_k;
        for k in admissible_weights(max_k) {
            let phi = reconstruct_phi(j, k, c)?;
            out.push(OnceItem {
                j,
                k,
                degree: phi.degree,
                image_rank: image_rank(&[phi.to_tensor()], c),
            });
        }
    }
    Ok(out)
}

/// Joint image rank of `Φ^2_k` and `Φ^3_k`, which share degree `(2,3)`.
pub fn joint_image_rank(k: u32, c: &Rational) -> Result<usize, ModeError> {
    let v = [reconstruct_phi(2, k, c)?.to_tensor(), reconstruct_phi(3, k, c)?.to_tensor()];
    Ok(image_rank(&v, c))
}

#[derive(Clone, Debug)]
pub struct Lemma13Options {
    pub c: Rational,
    /// Work modulo the computed radical; disabling this is a negative control.
    pub reduce: bool,
    /// Multiplier applied to the formal primary `Z`.
    pub z_scale: Rational,
}

impl Default for Lemma13Options {
    fn default() -> Self {
        Self {
            c: Rational::from_integer(24.into()),
            reduce: true,
            z_scale: Rational::one(),
        }
    }
}

#[derive(Clone, Debug)]
pub struct Lemma13Report {
    pub phi2: TensorState,
    pub phi3: TensorState,
    pub radical_dim: usize,
    /// `L(-1)Z ⊗ e^(2,3) + Z ⊗ (2,3)(-1) e^(2,3)` lies in the radical.
    pub radical_contains_expected: bool,
    /// Whether `Φ^2 ≡ λ Φ^3` for some `λ` (trivially true when both vanish).
    pub proportional: bool,
    /// The unique `λ`, when `Φ^3` is nonzero modulo the radical.
    pub factor: Option<Rational>,
    /// Coefficients of `Z ⊗ (2,-3)(-1) e^(2,3)` representing `Φ^2`, `Φ^3`
    /// modulo the radical.
    pub phi2_delta: Option<Rational>,
    pub phi3_delta: Option<Rational>,
}

/// Solves `target ≡ Σ λ_i basis_i` modulo `span(radical)`.
fn express(target: &[Rational], basis: &[Vec<Rational>], radical: &[Vec<Rational>]) -> Option<Vec<Rational>> {
    let rows = target.len();
    let cols: Vec<Vec<Rational>> = basis.iter().chain(radical).cloned().collect();
    let a = if cols.is_empty() {
        MatrixQ::zeros(rows, 0)
    } else {
        MatrixQ::from_columns(rows, &cols).expect("uniform columns")
    };
    let sol = solve_affine(&a, target).expect("rows match");
    let x = sol.particular?;
    // the basis part must be determined uniquely
    if sol.kernel.iter().any(|k| k[..basis.len()].iter().any(|v| !v.is_zero())) {
        return None;
    }
    Some(x[..basis.len()].to_vec())
}

/// Compares `Φ^2_6(Z)` and `Φ^3_6(Z)` in the block `(2,3)`, `k = 6`.
pub fn lemma13_check(opts: &Lemma13Options) -> Result<Lemma13Report, ModeError> {
    let c = &opts.c;
    let k = 6;
    let phi2 = reconstruct_phi(2, k, c)?.to_tensor().scale(&opts.z_scale);
    let phi3 = reconstruct_phi(3, k, c)?.to_tensor().scale(&opts.z_scale);
    let analysis = analyze_block(2, 3, k, c);
    let block = &analysis.block;
    let radical: Vec<Vec<Rational>> = if opts.reduce { analysis.radical.clone() } else { Vec::new() };
    let z = FormalPrimary::new(k);
    let top = DescendantVector::primary_vector(z);
    let deg = LatticeVector::new(2, 3);
    let expected = TensorState::tensor(
        &DescendantVector::from_terms(z, [(crate::virasoro::PbwMonomial::new(vec![1]).expect("valid"), Rational::one())]),
        &LatticeState::ground(deg),
    )
    .add(&TensorState::tensor(&top, &LatticeState::delta(deg, deg)));
    let delta = TensorState::tensor(&top, &LatticeState::delta(LatticeVector::new(2, -3), deg));
    let coords = |v: &TensorState| block.coords(v).expect("vector lies in the (2,3) k=6 block");
    let (p2, p3, e, d) = (coords(&phi2), coords(&phi3), coords(&expected), coords(&delta));
    let radical_contains_expected = express(&e, &[], &analysis.radical).is_some();
    let both_zero = express(&p2, &[], &radical).is_some() && express(&p3, &[], &radical).is_some();
    let factor = express(&p2, std::slice::from_ref(&p3), &radical).map(|x| x[0].clone());
    let delta_coef = |v: &[Rational]| {
        if opts.reduce {
            express(v, std::slice::from_ref(&d), &radical).map(|x| x[0].clone())
        } else {
            None
        }
    };
    Ok(Lemma13Report {
        radical_dim: analysis.radical.len(),
        radical_contains_expected,
        proportional: both_zero || factor.is_some(),
        phi2_delta: delta_coef(&p2),
        phi3_delta: delta_coef(&p3),
        factor: if both_zero { None } else { factor },
        phi2,
        phi3,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{int, rat};

    fn c24() -> Rational {
        int(24)
    }

    #[test]
    fn term_counts() {
        let p = reconstruct_phi(1, 5, &c24()).unwrap();
        assert_eq!(p.terms.len(), 1);
        assert_eq!(p.terms[0].t, 0);
        assert_eq!(p.terms[0].lattice, LatticeState::ground(LatticeVector::new(2, 2)));
        assert_eq!(reconstruct_phi(1, 0, &c24()).unwrap().terms.len(), 6);
        assert_eq!(reconstruct_phi(3, 7, &c24()).unwrap().terms.len(), 1);
        assert_eq!(reconstruct_phi(2, 0, &c24()).unwrap().terms.len(), 8);
    }

    #[test]
    fn range_errors() {
        for (j, k) in [(1, 6), (2, 8), (3, 1), (4, 2), (0, 0)] {
            assert!(matches!(reconstruct_phi(j, k, &c24()), Err(ModeError::OutOfRange(_))), "j={j} k={k}");
        }
    }

    #[test]
    fn vacuum_component_of_weight_three_family_vanishes() {
        assert!(reconstruct_phi(3, 0, &c24()).unwrap().vanishes());
    }

    #[test]
    fn families_are_physical() {
        assert!(phi_is_physical(1, 3, &c24()).unwrap());
        assert!(phi_is_physical(2, 6, &c24()).unwrap());
        assert!(phi_is_physical(3, 6, &c24()).unwrap());
        assert!(phi_is_physical(1, 0, &c24()).unwrap());
    }

    #[test]
    fn corrupted_family_is_not_physical() {
        let mut p = reconstruct_phi(1, 3, &c24()).unwrap();
        let last = p.terms.len() - 1;
        p.terms[last].operator = p.terms[last].operator.scale(&rat(3, 2));
        assert!(!is_physical(&p.to_tensor(), &c24()));
    }

    #[test]
    fn explicit_weight_six_vectors() {
        let z = FormalPrimary::new(6);
        let l1 = DescendantVector::from_terms(z, [(crate::virasoro::PbwMonomial::new(vec![1]).unwrap(), int(1))]);
        let top = DescendantVector::primary_vector(z);
        let deg = LatticeVector::new(2, 3);
        let e = LatticeState::ground(deg);
        let phi3 = TensorState::tensor(&top, &LatticeState::delta(LatticeVector::new(1, 1), deg))
            .add(&TensorState::tensor(&l1, &e).scale(&rat(5, 12)));
        assert_eq!(reconstruct_phi(3, 6, &c24()).unwrap().to_tensor(), phi3);
        let phi2 = TensorState::tensor(&top, &LatticeState::delta(LatticeVector::new(0, -3), deg))
            .add(&TensorState::tensor(&l1, &e).scale(&rat(-1, 2)));
        assert_eq!(reconstruct_phi(2, 6, &c24()).unwrap().to_tensor(), phi2);
    }

    #[test]
    fn congruence_factor_six() {
        let r = lemma13_check(&Lemma13Options::default()).unwrap();
        assert!(r.radical_contains_expected);
        assert_eq!(r.factor, Some(int(6)));
        assert_eq!(r.phi2_delta, Some(rat(1, 2)));
        assert_eq!(r.phi3_delta, Some(rat(1, 12)));
    }

    #[test]
    fn congruence_needs_the_radical() {
        let r = lemma13_check(&Lemma13Options {
            reduce: false,
            ..Lemma13Options::default()
        })
        .unwrap();
        assert!(!r.proportional);
        assert_eq!(r.factor, None);
    }

    #[test]
    fn zero_primary_is_trivially_congruent() {
        let r = lemma13_check(&Lemma13Options {
            z_scale: int(0),
            ..Lemma13Options::default()
        })
        .unwrap();
        assert!(r.phi2.is_zero() && r.phi3.is_zero());
        assert!(r.proportional);
        assert_eq!(r.factor, None);
    }

    #[test]
    fn families_cover_each_primary_at_most_once() {
        let items = once_check(&c24()).unwrap();
        assert_eq!(items.len(), 5 + 7 + 7);
        for item in &items {
            assert!(item.image_rank <= 1, "{item:?}");
        }
    }

    #[test]
    fn covering_at_degree_2_2() {
        // only the odd weights 3 and 5 survive modulo the radical
        let ranks: Vec<(u32, usize)> = once_check(&c24())
            .unwrap()
            .into_iter()
            .filter(|i| i.j == 1)
            .map(|i| (i.k, i.image_rank))
            .collect();
        assert_eq!(ranks, vec![(0, 0), (2, 0), (3, 1), (4, 0), (5, 1)]);
    }

    #[test]
    fn covering_at_degree_2_3() {
        // at least V_0 + 2 V_2 + 2 V_4 + V_6
        for (k, at_least) in [(0, 1), (2, 2), (4, 2), (6, 1)] {
            assert!(joint_image_rank(k, &c24()).unwrap() >= at_least, "k={k}");
        }
        // the two families coincide modulo the radical at weight 6
        assert_eq!(joint_image_rank(6, &c24()).unwrap(), 1);
    }
}
