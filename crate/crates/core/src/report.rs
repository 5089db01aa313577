//! Machine-readable verification reports.
//!
//! Every rational is carried as a `p/q` string. Reports are assembled in a
//! fixed order, so identical inputs give byte-identical output regardless of
//! how the underlying work was scheduled.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::characters::{
    c2_quotient_report, graded_dims, j_constructions, primary_decomposition, primary_mult, simple_root_table,
    C2_ASSUMPTION,
};
use crate::error::{CharacterError, ModeError};
use crate::modes::{denominator_primes, denominator_scan, derive_q, derive_q_table, relation_residuals};
use crate::phi::{lemma13_check, Lemma13Options};
use crate::physical::{analyze_block, noghost_check, CHECKED_DEGREES};
use crate::rational::{format_rational, int, rat, Rational};
use crate::virasoro::VirElement;

pub const VERSION: &str = env!("CARGO_PKG_VERSION");

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum Status {
    ExactMatch,
    Mismatch,
    Value,
}

impl Status {
    pub fn label(self) -> &'static str {
        match self {
            Status::ExactMatch => "EXACT_MATCH",
            Status::Mismatch => "MISMATCH",
            Status::Value => "VALUE",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ReportItem {
    pub name: String,
    pub status: Status,
    pub derived: String,
    /// The published value, when there is one to compare against.
    pub paper: Option<String>,
}

impl ReportItem {
    pub fn value(name: impl Into<String>, derived: impl Into<String>) -> Self {
        Self {
            name: name.into(),
            status: Status::Value,
            derived: derived.into(),
            paper: None,
        }
    }

    pub fn compare(name: impl Into<String>, matches: bool, derived: impl Into<String>, published: impl Into<String>) -> Self {
        Self {
            name: name.into(),
            status: if matches { Status::ExactMatch } else { Status::Mismatch },
            derived: derived.into(),
            paper: Some(published.into()),
        }
    }

    /// A reference value shown for context only.
    pub fn note(name: impl Into<String>, derived: impl Into<String>, published: impl Into<String>) -> Self {
        Self {
            name: name.into(),
            status: Status::Value,
            derived: derived.into(),
            paper: Some(published.into()),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ReportDocument {
    pub command: String,
    pub params: BTreeMap<String, String>,
    pub central_charge: String,
    pub results: Vec<ReportItem>,
    pub version: String,
}

impl ReportDocument {
    pub fn new(command: impl Into<String>, c: &Rational) -> Self {
        Self {
            command: command.into(),
            params: BTreeMap::new(),
            central_charge: format_rational(c),
            results: Vec::new(),
            version: VERSION.to_string(),
        }
    }

    pub fn param(mut self, key: &str, value: impl ToString) -> Self {
        self.params.insert(key.to_string(), value.to_string());
        self
    }

    pub fn extend(&mut self, items: impl IntoIterator<Item = ReportItem>) {
        self.results.extend(items);
    }

    pub fn has_mismatch(&self) -> bool {
        self.results.iter().any(|r| r.status == Status::Mismatch)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }

    pub fn from_json(s: &str) -> Result<Self, serde_json::Error> {
        serde_json::from_str(s)
    }
}

/// A published operator `prefactor · (body)`.
struct PublishedOperator {
    name: &'static str,
    h_v: u32,
    h_u: u32,
    k: u32,
    m: u32,
    prefactor: (i64, i64),
    body: &'static str,
}

impl PublishedOperator {
    fn value(&self) -> VirElement {
        let body: VirElement = self.body.parse().expect("well-formed published operator");
        body.scale(&rat(self.prefactor.0, self.prefactor.1))
    }

    fn display(&self) -> String {
        match self.prefactor {
            (1, 1) => self.body.to_string(),
            (p, q) => format!("{} ({})", format_rational(&rat(p, q)), self.body),
        }
    }

    fn item(&self, c: &Rational) -> ReportItem {
        match derive_q(self.h_v, self.h_u, self.k, self.m, c) {
            Ok(q) => ReportItem::compare(self.name, q == self.value(), q.to_string(), self.display()),
            Err(e) => ReportItem::compare(self.name, false, e.to_string(), self.display()),
        }
    }
}

const LEMMA7_TABLE: [PublishedOperator; 7] = [
    PublishedOperator {
        name: "lemma7.3 pi_0(v_1 u) over X = pi_0(v_3 u)",
        h_v: 2,
        h_u: 2,
        k: 0,
        m: 2,
        prefactor: (1, 1),
        body: "1/6 L(-2)",
    },
    PublishedOperator {
        name: "lemma7.4 pi_0(v_0 u) over X",
        h_v: 2,
        h_u: 2,
        k: 0,
        m: 3,
        prefactor: (1, 1),
        body: "1/12 L(-3)",
    },
    PublishedOperator {
        name: "lemma7.5 pi_0(v_-1 u) over X",
        h_v: 2,
        h_u: 2,
        k: 0,
        m: 4,
        prefactor: (1, 1),
        body: "3/71 L(-4) + 11/852 L(-2)^2",
    },
    PublishedOperator {
        name: "lemma7.6 pi_0(v_-2 u) over X",
        h_v: 2,
        h_u: 2,
        k: 0,
        m: 5,
        prefactor: (1, 1),
        body: "2/71 L(-5) + 11/852 L(-3)L(-2)",
    },
    PublishedOperator {
        name: "lemma7.7 pi_0(v_-3 u) over X",
        h_v: 2,
        h_u: 2,
        k: 0,
        m: 6,
        prefactor: (1, 196883),
        body: "3492 L(-6) + 15623/12 L(-4)L(-2) + 1271/2 L(-3)^2 + 124 L(-2)^3",
    },
    PublishedOperator {
        name: "lemma7.8 pi_2(v_0 w) over Y = pi_2(v_2 w)",
        h_v: 2,
        h_u: 3,
        k: 2,
        m: 2,
        prefactor: (1, 1),
        body: "6/41 L(-2) + 1/164 L(-1)^2",
    },
    PublishedOperator {
        name: "lemma7.9 pi_3(v_-2 u) over Z = pi_3(v_0 u)",
        h_v: 2,
        h_u: 2,
        k: 3,
        m: 2,
        prefactor: (1, 1),
        body: "17/141 L(-2) + 11/94 L(-1)^2",
    },
];

const REMARK9_TABLE: [PublishedOperator; 2] = [
    PublishedOperator {
        name: "remark9.1 pi_4(v_-2 w) over X = pi_4(v_0 w)",
        h_v: 2,
        h_u: 3,
        k: 4,
        m: 2,
        prefactor: (1, 1),
        body: "1/8 L(-2) + 1/16 L(-1)^2",
    },
    PublishedOperator {
        name: "remark9.2 pi_4(v_-3 w) over X",
        h_v: 2,
        h_u: 3,
        k: 4,
        m: 3,
        prefactor: (1, 2272),
        body: "145 L(-3) + 105 L(-2)L(-1) + 79/6 L(-1)^3",
    },
];

fn level_one_family(
    name: &str,
    h_u: u32,
    expected: impl Fn(u32) -> Rational,
    published: &str,
    c: &Rational,
) -> ReportItem {
    let l1 = |coef: Rational| {
        VirElement::monomial(crate::virasoro::PbwMonomial::new(vec![1]).expect("valid"), coef)
    };
    let mut ok = true;
    let mut parts = Vec::new();
    for k in 2..=7 {
        match derive_q(2, h_u, k, 1, c) {
            Ok(q) => {
                ok &= q == l1(expected(k));
                parts.push(format!("k={k}: {q}"));
            }
            Err(e) => {
                ok = false;
                parts.push(format!("k={k}: {e}"));
            }
        }
    }
    ReportItem::compare(name, ok, parts.join("; "), published)
}

fn derived_or_error(r: Result<VirElement, ModeError>) -> String {
    match r {
        Ok(q) => q.to_string(),
        Err(e) => e.to_string(),
    }
}

/// The nine operator identities of the weight-2/weight-3 mode table, plus
/// reference items for readings that differ from the tabulated one.
pub fn lemma7_items(c: &Rational) -> Vec<ReportItem> {
    let mut items = vec![
        level_one_family("lemma7.1 pi_k(v_{2-k} u), k=2..7", 2, |_| rat(1, 2), "1/2 L(-1)", c),
        level_one_family(
            "lemma7.2 pi_k(v_{3-k} w), k=2..7",
            3,
            |k| rat(k as i64 - 1, 2 * k as i64),
            "(k-1)/(2k) L(-1)",
            c,
        ),
    ];
    items.extend(LEMMA7_TABLE.iter().map(|op| op.item(c)));
    items.push(ReportItem::value(
        "lemma7.8 alternative base Y = pi_2(v_1 u): pi_2(v_-1 u) over Y",
        derived_or_error(derive_q(2, 2, 2, 2, c)),
    ));
    items.push(ReportItem::value(
        "lemma7.9 alternative base Z = pi_3(v_1 w): pi_3(v_-1 w) over Z",
        derived_or_error(derive_q(2, 3, 3, 2, c)),
    ));
    items.push(ReportItem::note(
        "later use of pi_2(v_0 w) over pi_2(v_2 w)",
        derived_or_error(derive_q(2, 3, 2, 2, c)),
        "3/41 L(-2) + 21/164 L(-1)^2",
    ));
    if let Ok(q) = derive_q(2, 2, 0, 6, c) {
        let cube = crate::virasoro::PbwMonomial::new(vec![2, 2, 2]).expect("valid");
        items.push(ReportItem::value(
            "lemma7.7 coefficient of L(-2)^3",
            format_rational(&q.coefficient(&cube)),
        ));
    }
    items.push(denominator_item(c));
    items
}

fn denominator_item(c: &Rational) -> ReportItem {
    let scan = denominator_scan(7, 7, c);
    let derived: Vec<_> = scan.iter().filter(|e| e.result.is_ok()).collect();
    let within = derived.iter().filter(|e| e.within_monster_primes()).count();
    let tabulated = LEMMA7_TABLE
        .iter()
        .chain(&REMARK9_TABLE)
        .filter_map(|op| derive_q(op.h_v, op.h_u, op.k, op.m, c).ok())
        .map(|q| denominator_primes(&q))
        .all(|ps| {
            ps.iter()
                .all(|p| crate::modes::MONSTER_PRIMES.iter().any(|&q| *p == BigInt::from(q)))
        });
    let outside: Vec<String> = derived
        .iter()
        .filter(|e| !e.within_monster_primes())
        .take(3)
        .map(|e| {
            let ps = e.result.as_ref().expect("filtered");
            format!(
                "Q^{{{},{}}}_{}(-{}) primes {}",
                e.h_v,
                e.h_u,
                e.k,
                e.m,
                ps.iter().map(|p| p.to_string()).collect::<Vec<_>>().join(",")
            )
        })
        .collect();
    ReportItem::value(
        "denominator primes, k<=7, m<=7",
        format!(
            "{within}/{} operators have Monster-prime denominators; tabulated operators: {}; first exceptions: {}",
            derived.len(),
            if tabulated { "all within" } else { "some outside" },
            if outside.is_empty() { "none".to_string() } else { outside.join("; ") },
        ),
    )
}

pub fn remark9_items(c: &Rational) -> Vec<ReportItem> {
    let mut items: Vec<ReportItem> = REMARK9_TABLE.iter().map(|op| op.item(c)).collect();
    items.push(ReportItem::note(
        "remark9.2 reading with the prefactor on the first two terms only",
        derived_or_error(derive_q(2, 3, 4, 3, c)),
        "1/2272 (145 L(-3) + 105 L(-2)L(-1)) + 79/6 L(-1)^3",
    ));
    for op in &REMARK9_TABLE {
        let residual = match derive_q_table(op.h_v, op.h_u, op.k, op.m, c) {
            Ok(table) => {
                let q = table.get(op.m).expect("table covers m").clone();
                relation_residuals(&table, &q, op.m, &[1, 2, 3])
                    .into_iter()
                    .map(|(p, r)| format!("L({p}): {}", r.to_vir_element()))
                    .collect::<Vec<_>>()
                    .join(", ")
            }
            Err(e) => e.to_string(),
        };
        let short = op.name.split(' ').next().expect("nonempty name");
        items.push(ReportItem::value(format!("{short} residuals"), residual));
    }
    items
}

pub fn lemma13_items(c: &Rational) -> Vec<ReportItem> {
    let opts = Lemma13Options {
        c: c.clone(),
        ..Lemma13Options::default()
    };
    let r = match lemma13_check(&opts) {
        Ok(r) => r,
        Err(e) => return vec![ReportItem::compare("lemma13 factor", false, e.to_string(), "6")],
    };
    let show = |x: &Option<Rational>| x.as_ref().map_or("none".to_string(), format_rational);
    let mut items = vec![
        ReportItem::compare("lemma13 factor Phi^2 / Phi^3 mod rad", r.factor == Some(int(6)), show(&r.factor), "6"),
        ReportItem::compare(
            "lemma13 Phi^2 mod rad, coefficient of Z (x) (2,-3)(-1)e^(2,3)",
            r.phi2_delta == Some(rat(1, 2)),
            show(&r.phi2_delta),
            "1/2",
        ),
        ReportItem::compare(
            "lemma13 Phi^3 mod rad, coefficient of Z (x) (2,-3)(-1)e^(2,3)",
            r.phi3_delta == Some(rat(1, 12)),
            show(&r.phi3_delta),
            "1/12",
        ),
        ReportItem::compare(
            "lemma13 radical contains L(-1)Z (x) e + Z (x) (2,3)(-1)e",
            r.radical_contains_expected,
            r.radical_contains_expected.to_string(),
            "true",
        ),
        ReportItem::value("lemma13 Phi^2_6(Z)", r.phi2.to_string()),
        ReportItem::value("lemma13 Phi^3_6(Z)", r.phi3.to_string()),
        ReportItem::value("lemma13 radical dimension", r.radical_dim.to_string()),
    ];
    let control = lemma13_check(&Lemma13Options {
        reduce: false,
        ..opts
    });
    items.push(ReportItem::value(
        "lemma13 control without radical reduction",
        match control {
            Ok(ctl) if ctl.proportional => format!("proportional, factor {}", show(&ctl.factor)),
            Ok(_) => "not proportional".to_string(),
            Err(e) => e.to_string(),
        },
    ));
    items
}

/// `V_4^p + V_3^p + 2V_2^p + 2V_0` style rendering, highest weight first.
pub fn format_decomposition(d: &BTreeMap<u32, u64>) -> String {
    if d.is_empty() {
        return "0".to_string();
    }
    d.iter()
        .rev()
        .map(|(&k, &mult)| {
            let space = if k == 0 { "V_0".to_string() } else { format!("V_{k}^p") };
            if mult == 1 {
                space
            } else {
                format!("{mult}{space}")
            }
        })
        .collect::<Vec<_>>()
        .join(" + ")
}

pub fn noghost_items(c: &Rational) -> Vec<ReportItem> {
    CHECKED_DEGREES
        .par_iter()
        .map(|&(m, n)| match noghost_check(m, n, c) {
            Ok(r) => ReportItem::compare(
                format!("noghost ({m},{n})"),
                r.holds(),
                format!("{} (dim {})", format_decomposition(&r.computed), r.computed_dim),
                format!("{} (dim {})", format_decomposition(&r.expected), r.expected_dim),
            ),
            Err(e) => ReportItem::compare(format!("noghost ({m},{n})"), false, e.to_string(), "V_{mn+1}"),
        })
        .collect()
}

pub fn suite_items(suite: Suite, c: &Rational) -> Vec<ReportItem> {
    match suite {
        Suite::Lemma7 => lemma7_items(c),
        Suite::Remark9 => remark9_items(c),
        Suite::Lemma13 => lemma13_items(c),
        Suite::Noghost => noghost_items(c),
        Suite::All => [Suite::Lemma7, Suite::Remark9, Suite::Lemma13, Suite::Noghost]
            .into_iter()
            .flat_map(|s| suite_items(s, c))
            .collect(),
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Suite {
    Lemma7,
    Remark9,
    Lemma13,
    Noghost,
    All,
}

impl Suite {
    pub fn name(self) -> &'static str {
        match self {
            Suite::Lemma7 => "lemma7",
            Suite::Remark9 => "remark9",
            Suite::Lemma13 => "lemma13",
            Suite::Noghost => "noghost",
            Suite::All => "all",
        }
    }
}

pub fn verify_document(suite: Suite, c: &Rational) -> ReportDocument {
    let mut doc = ReportDocument::new("verify", c).param("suite", suite.name());
    doc.extend(suite_items(suite, c));
    doc
}

pub fn derive_q_document(h_v: u32, h_u: u32, k: u32, m: u32, c: &Rational) -> Result<ReportDocument, ModeError> {
    let q = derive_q(h_v, h_u, k, m, c)?;
    let mut doc = ReportDocument::new("derive-q", c)
        .param("hv", h_v)
        .param("hu", h_u)
        .param("k", k)
        .param("m", m);
    let primes = denominator_primes(&q);
    doc.extend([
        ReportItem::value(format!("Q^{{{h_v},{h_u}}}_{k}(-{m})"), q.to_string()),
        ReportItem::value(
            "denominator primes",
            primes.iter().map(|p| p.to_string()).collect::<Vec<_>>().join(","),
        ),
    ]);
    Ok(doc)
}

/// One row of the character table: `dim V_n` and `dim V_n^p`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CharacterRow {
    pub n: usize,
    pub dim: BigInt,
    pub primary: BigInt,
}

pub fn character_rows(n_max: usize) -> Result<Vec<CharacterRow>, CharacterError> {
    let dims = graded_dims(n_max)?;
    let prim = primary_mult(n_max.max(2))?;
    Ok(dims
        .into_iter()
        .enumerate()
        .map(|(n, dim)| CharacterRow {
            n,
            dim,
            primary: prim.dims[n].clone(),
        })
        .collect())
}

pub fn characters_document(n_max: usize) -> Result<ReportDocument, CharacterError> {
    let mut doc = ReportDocument::new("characters", &int(24)).param("max", n_max);
    let rows = character_rows(n_max)?;
    let (a, b) = j_constructions(n_max.max(1));
    let first_diff = a.coeffs.iter().zip(&b.coeffs).position(|(x, y)| x != y);
    doc.extend([
        ReportItem::compare(
            "E4^3/Delta agrees with E6^2/Delta + 1728",
            first_diff.is_none(),
            first_diff.map_or("agree".to_string(), |i| format!("differ at q^{}", i as i64 - 1)),
            "agree",
        ),
        ReportItem::compare("dim V_2", rows.get(2).is_some_and(|r| r.dim == BigInt::from(196884)), rows.get(2).map_or("-".into(), |r| r.dim.to_string()), "196884"),
        ReportItem::compare("dim V_1", rows.get(1).is_some_and(|r| r.dim == BigInt::from(0)), rows.get(1).map_or("-".into(), |r| r.dim.to_string()), "0"),
        ReportItem::compare(
            "dim V_2^p",
            rows.get(2).is_some_and(|r| r.primary == BigInt::from(196883)),
            rows.get(2).map_or("-".into(), |r| r.primary.to_string()),
            "196883",
        ),
    ]);
    for r in &rows {
        doc.results.push(ReportItem::value(format!("dim V_{}", r.n), r.dim.to_string()));
        doc.results.push(ReportItem::value(format!("dim V_{}^p", r.n), r.primary.to_string()));
    }
    for r in &rows {
        doc.results.push(ReportItem::value(
            format!("V_{} decomposition", r.n),
            format_decomposition(&primary_decomposition(r.n as i64)),
        ));
    }
    for (root, mult) in simple_root_table(n_max.saturating_sub(1).max(1))? {
        doc.results.push(ReportItem::value(format!("simple root {root}"), mult.to_string()));
    }
    doc.results.push(ReportItem::value("C2 quotient assumption", C2_ASSUMPTION));
    for (n, d) in c2_quotient_report(n_max.max(5))? {
        doc.results.push(ReportItem::value(format!("dim (V/C2(V))_{n}"), d.to_string()));
    }
    Ok(doc)
}

pub fn physical_document(m: i64, n: i64, k: u32, c: &Rational, dump: bool) -> ReportDocument {
    let a = analyze_block(m, n, k, c);
    let s = &a.summary;
    let mut doc = ReportDocument::new("physical", c)
        .param("m", m)
        .param("n", n)
        .param("k", k);
    doc.extend([
        ReportItem::value("block dimension", s.block_dim.to_string()),
        ReportItem::value("dim P^1", s.physical_dim.to_string()),
        ReportItem::value("dim rad", s.radical_dim.to_string()),
        ReportItem::value("multiplicity", s.multiplicity.to_string()),
        ReportItem::value("gram symmetric", s.gram_symmetric.to_string()),
        ReportItem::value("dim P^0", s.p0_dim.to_string()),
        ReportItem::value("L~(-1) P^0 in rad", s.p0_image_in_radical.to_string()),
    ]);
    if dump {
        for (i, v) in a.physical.iter().enumerate() {
            doc.results.push(ReportItem::value(format!("P^1 basis {i}"), a.block.vector(v).to_string()));
        }
        for (i, v) in a.radical.iter().enumerate() {
            doc.results.push(ReportItem::value(format!("rad basis {i}"), a.block.vector(v).to_string()));
        }
    }
    doc
}
